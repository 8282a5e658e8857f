#include "soliton_lab/nls.hpp"
#include "soliton_lab/fft.hpp"

#include <cmath>
#include <numbers>

namespace sl {

double mass(const Field& psi, const SpatialGrid& g) { return psi.abs2().sum() * g.h; }

double energy(const Field& psi, const SpatialGrid& g)
{
    const Field dx = spectral_dx(psi, g);
    return (0.5 * dx.abs2() - 0.25 * psi.abs2().square()).sum() * g.h;
}

SplitStepper::SplitStepper(const SpatialGrid& g, double dt, Scheme scheme) : grid_(g), dt_(dt)
{
    std::vector<double> taus;
    if (scheme == Scheme::strang) {
        taus = {dt};
    } else {
        const double c = std::cbrt(2.0), w1 = 1.0 / (2.0 - c), w0 = -c / (2.0 - c);
        taus = {w1 * dt, w0 * dt, w1 * dt};
    }
    for (double tau : taus) {
        Eigen::ArrayXcd lin(g.n);
        for (int j = 0; j < g.n; ++j)
            lin[j] = std::polar(1.0, -tau * g.k[j] * g.k[j]);
        substeps_.push_back({tau, lin});
    }
}

void SplitStepper::strang(Field& psi, const Substep& s) const
{
    const double half = 0.5 * s.tau;
    psi *= (I * half * psi.abs2()).exp();
    Eigen::VectorXcd v = fft_forward(psi.matrix());
    v.array() *= s.linear;
    psi = fft_inverse(v).array();
    psi *= (I * half * psi.abs2()).exp();
}

void SplitStepper::step(Field& psi) const
{
    if (psi.size() != grid_.n)
        throw std::invalid_argument("step: field size does not match the grid");
    for (const auto& s : substeps_)
        strang(psi, s);
}

Field step(const Field& psi, double dt, const SpatialGrid& g, Scheme scheme)
{
    Field out = psi;
    SplitStepper(g, dt, scheme).step(out);
    return out;
}

long step_count(const EvolutionConfig& c, const Field& psi0)
{
    if (!(c.dt > 0.0))
        throw ConfigError("dt must be positive");
    if (!(c.t_end >= 0.0))
        throw ConfigError("t_end must be non-negative");
    if (c.snapshot_stride < 1)
        throw ConfigError("snapshot_stride must be at least 1");
    const double ratio = c.t_end / c.dt;
    const long steps = std::lround(ratio);
    if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio))
        throw ConfigError("t_end / dt must be an integer");
    const double peak = psi0.abs2().maxCoeff();
    if (c.dt * peak > std::numbers::pi / 2)
        throw ConfigError("dt * sup|psi0|^2 exceeds the phase bound pi/2");
    return steps;
}

Trajectory run(const EvolutionConfig& c, const Field& psi0, double odd_tolerance)
{
    const SpatialGrid& g = c.grid;
    if (psi0.size() != g.n)
        throw ConfigError("initial field size does not match grid.n");
    const double scale = std::sqrt(mass(psi0, g));
    if (odd_part_norm(psi0, g) > odd_tolerance * std::max(scale, 1.0))
        throw ConfigError("initial data has an odd component above tolerance");
    const long steps = step_count(c, psi0);
    const SplitStepper stepper(g, c.dt, c.scheme);
    const double guard = 10.0 * std::max(psi0.abs().maxCoeff(), 1e-300);

    Trajectory tr;
    Field psi = psi0;
    auto record = [&](long n) {
        tr.times.push_back(n * c.dt);
        tr.fields.push_back(psi);
        tr.mass.push_back(mass(psi, g));
        tr.energy.push_back(energy(psi, g));
    };
    record(0);
    for (long n = 1; n <= steps; ++n) {
        stepper.step(psi);
        if (c.symmetrize)
            psi = 0.5 * (psi + reflect(psi, g));
        const double peak = psi.abs().maxCoeff();
        if (!std::isfinite(peak) || peak > guard) {
            tr.aborted = true;
            tr.diagnostic = "blowup guard: sup|psi| = " + std::to_string(peak) + " at t = " + std::to_string(n * c.dt);
            record(n);
            return tr;
        }
        if (n % c.snapshot_stride == 0 || n == steps)
            record(n);
    }
    return tr;
}

}
