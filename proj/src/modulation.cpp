#include "soliton_lab/modulation.hpp"
#include "soliton_lab/transform.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace sl {

namespace {

double integrate(const RealField& f, const SpatialGrid& g) { return f.sum() * g.h; }

void check_grid(const Field& f, const SpatialGrid& g)
{
    if (f.size() != g.n)
        throw GridMismatch("field size does not match the grid");
}

}

std::array<cd, 2> orthogonality(const Field& psi, const SolitonFrame& f, const SpatialGrid& g)
{
    check_grid(psi, g);
    const Field u = std::polar(1.0, -f.gamma) * psi - soliton_profile(f.omega, g).cast<cd>();
    const VectorField U = VectorField::from_scalar(u);
    const GeneralizedKernel k = generalized_eigenfunctions(f.omega, g);
    return {inner(U, sigma2(k.Y1), g), inner(U, sigma2(k.Y2), g)};
}

Decomposition decompose(const Field& psi, const SolitonFrame& guess, const SpatialGrid& g, double parity_tolerance,
                        double tolerance, int max_iterations)
{
    check_grid(psi, g);
    const double scale = l2_norm(psi, g);
    if (odd_part_norm(psi, g) > parity_tolerance * std::max(1.0, scale))
        throw ParityError("decompose: input is not even");

    // R1 = -2 int phi Re(e^{-ig} psi) + 2 int phi^2, R2 = -2 int dw phi Im(e^{-ig} psi)
    auto residual = [&](double w, double gm) {
        const Field v = std::polar(1.0, -gm) * psi;
        const RealField phi = soliton_profile(w, g), dphi = soliton_domega(w, g.x);
        return Eigen::Vector2d(integrate(-2.0 * phi * v.real() + 2.0 * phi * phi, g),
                               integrate(-2.0 * dphi * v.imag(), g));
    };
    auto jacobian = [&](double w, double gm) {
        const Field v = std::polar(1.0, -gm) * psi;
        const RealField phi = soliton_profile(w, g), dphi = soliton_domega(w, g.x), d2phi = soliton_domega2(w, g.x);
        Eigen::Matrix2d j;
        j(0, 0) = integrate(-2.0 * dphi * v.real() + 4.0 * phi * dphi, g);
        j(0, 1) = integrate(-2.0 * phi * v.imag(), g);
        j(1, 0) = integrate(-2.0 * d2phi * v.imag(), g);
        j(1, 1) = integrate(2.0 * dphi * v.real(), g);
        return j;
    };

    double w = guess.omega, gm = guess.gamma;
    Eigen::Vector2d r = residual(w, gm);
    int it = 0;
    for (; it < max_iterations && r.cwiseAbs().maxCoeff() > tolerance; ++it) {
        const Eigen::Vector2d delta = jacobian(w, gm).partialPivLu().solve(r);
        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 30; ++halving, lambda *= 0.5) {
            const double wn = w - lambda * delta[0], gn = gm - lambda * delta[1];
            if (!(wn > 0.0))
                continue;
            const Eigen::Vector2d rn = residual(wn, gn);
            if (rn.norm() < r.norm() || halving == 29) {
                w = wn;
                gm = gn;
                r = rn;
                accepted = true;
                break;
            }
        }
        if (!accepted)
            break;
    }
    if (r.cwiseAbs().maxCoeff() > tolerance) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "decompose: no convergence after %d iterations, residuals %.3e %.3e", it, r[0],
                      r[1]);
        throw DecompositionError(buf, r[0], r[1]);
    }
    // one polishing step towards roundoff
    if (r.norm() > 0.0) {
        const Eigen::Vector2d delta = jacobian(w, gm).partialPivLu().solve(r);
        const Eigen::Vector2d rn = residual(w - delta[0], gm - delta[1]);
        if (rn.norm() < r.norm()) {
            w -= delta[0];
            gm -= delta[1];
            r = rn;
        }
    }
    gm = std::remainder(gm, 2.0 * std::numbers::pi);
    Decomposition d;
    d.frame = {w, gm};
    d.u = std::polar(1.0, -gm) * psi - soliton_profile(w, g).cast<cd>();
    d.residual = orthogonality(psi, d.frame, g);
    d.iterations = it;
    return d;
}

VectorField nonlinearity(double omega, const VectorField& U, const SpatialGrid& g)
{
    const Field phi = soliton_profile(omega, g).cast<cd>();
    const Field& u = U.upper;
    const Field& ub = U.lower;
    return {-phi * (u * u + 2.0 * u * ub) - u * ub * u, phi * (ub * ub + 2.0 * u * ub) + ub * u * ub, U.j_invariant};
}

Eigen::Matrix2d modulation_matrix(const VectorField& U, double omega, const SpatialGrid& g)
{
    const GeneralizedKernel k = generalized_eigenfunctions(omega, g);
    const auto dk = kernel_domega(omega, g);
    const double c = 2.0 / std::sqrt(omega);
    Eigen::Matrix2d m;
    m(0, 0) = inner(U, sigma1(k.Y1), g).real();
    m(0, 1) = c + inner(U, sigma2(dk[0]), g).real();
    m(1, 0) = c + inner(U, sigma1(k.Y2), g).real();
    m(1, 1) = inner(U, sigma2(dk[1]), g).real();
    return m;
}

ModulationRates modulation_rhs(const VectorField& U, const SolitonFrame& f, const SpatialGrid& g, double max_condition)
{
    if (U.size() != g.n)
        throw GridMismatch("modulation_rhs: field size does not match the grid");
    const double w = f.omega;
    const GeneralizedKernel k = generalized_eigenfunctions(w, g);
    const auto dk = kernel_domega(w, g);
    const double c = 2.0 / std::sqrt(w);
    const cd entries[4] = {inner(U, sigma1(k.Y1), g), inner(U, sigma2(dk[0]), g), inner(U, sigma1(k.Y2), g),
                           inner(U, sigma2(dk[1]), g)};
    const VectorField iN = I * nonlinearity(w, U, g);
    const cd b1 = inner(iN, sigma2(k.Y1), g), b2 = inner(iN, sigma2(k.Y2), g);

    ModulationRates out;
    out.matrix << entries[0].real(), c + entries[1].real(), c + entries[2].real(), entries[3].real();
    out.rhs << b1.real(), b2.real();
    for (const cd& e : entries)
        out.imag_defect = std::max(out.imag_defect, std::abs(e.imag()));
    out.imag_defect = std::max({out.imag_defect, std::abs(b1.imag()), std::abs(b2.imag())});

    const Eigen::JacobiSVD<Eigen::Matrix2d> svd(out.matrix);
    const double smin = svd.singularValues()[1];
    if (!(smin > 0.0) || svd.singularValues()[0] / smin > max_condition)
        throw IllConditioned("modulation matrix condition number exceeds the limit");
    const Eigen::Vector2d sol = out.matrix.partialPivLu().solve(out.rhs);
    out.gamma_dot_minus_omega = sol[0];
    out.omega_dot = sol[1];
    return out;
}

double mass_expansion_residual(double omega, const Field& u, const SpatialGrid& g)
{
    const Field phi = soliton_profile(omega, g).cast<cd>();
    const GeneralizedKernel k = generalized_eigenfunctions(omega, g);
    const VectorField U = VectorField::from_scalar(u);
    return mass(phi + u, g) - mass(phi, g) - mass(u, g) + inner(U, sigma2(k.Y1), g).real();
}

double energy_expansion_residual(double omega, const Field& u, const SpatialGrid& g)
{
    const RealField phi = soliton_profile(omega, g);
    const Field pc = phi.cast<cd>();
    const GeneralizedKernel k = generalized_eigenfunctions(omega, g);
    const VectorField U = VectorField::from_scalar(u);
    const Field ub = u.conjugate();
    const double quad = (phi.square().cast<cd>() * (u * u + 4.0 * u * ub + ub * ub)).real().sum() * g.h;
    const double cub = (pc * (u * u * ub + u * ub * ub)).real().sum() * g.h;
    return energy(pc + u, g) - energy(pc, g) - energy(u, g) - 0.5 * omega * inner(U, sigma2(k.Y1), g).real() +
           0.25 * quad + 0.5 * cub;
}

ModulationTrace track(const Trajectory& tr, const SpatialGrid& g, const SolitonFrame& guess)
{
    ModulationTrace trace;
    SolitonFrame frame = guess;
    for (std::size_t s = 0; s < tr.fields.size(); ++s) {
        TraceRow row;
        row.t = tr.times[s];
        try {
            const Decomposition d = decompose(tr.fields[s], frame, g);
            frame = d.frame;
            row.omega = d.frame.omega;
            row.gamma = d.frame.gamma;
            row.orth1 = d.residual[0];
            row.orth2 = d.residual[1];
            row.u_sup = d.u.abs().maxCoeff();
            const VectorField U = VectorField::from_scalar(d.u);
            const ModulationRates rates = modulation_rhs(U, d.frame, g);
            row.gamma_dot_minus_omega = rates.gamma_dot_minus_omega;
            row.omega_dot = rates.omega_dot;
            const auto proj = project_discrete(d.frame.omega, U, g);
            row.d1 = proj.first.d1;
            row.d2 = proj.first.d2;
            row.mass_residual = mass_expansion_residual(d.frame.omega, d.u, g);
            row.energy_residual = energy_expansion_residual(d.frame.omega, d.u, g);
        } catch (const std::exception& e) {
            row.ok = false;
            row.note = e.what();
        }
        trace.rows.push_back(row);
    }
    return trace;
}

void write_trace_csv(std::ostream& os, const ModulationTrace& trace)
{
    os << "t,omega,gamma,gamma_dot_minus_omega,omega_dot,d1_re,d1_im,d2_re,d2_im,orth1_re,orth1_im,orth2_re,orth2_im,"
          "u_sup,mass_residual,energy_residual,ok\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& r : trace.rows) {
        os << num(r.t) << ',' << num(r.omega) << ',' << num(r.gamma) << ',' << num(r.gamma_dot_minus_omega) << ','
           << num(r.omega_dot) << ',' << num(r.d1.real()) << ',' << num(r.d1.imag()) << ',' << num(r.d2.real()) << ','
           << num(r.d2.imag()) << ',' << num(r.orth1.real()) << ',' << num(r.orth1.imag()) << ','
           << num(r.orth2.real()) << ',' << num(r.orth2.imag()) << ',' << num(r.u_sup) << ','
           << num(r.mass_residual) << ',' << num(r.energy_residual) << ',' << (r.ok ? 1 : 0) << '\n';
    }
}

}
