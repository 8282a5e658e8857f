#include "doctest.h"
#include "soliton_lab/scattering.hpp"

#include <cmath>
#include <numbers>

using namespace sl;

namespace {

ModulationTrace flat_trace(const std::vector<double>& times, double omega, double drift = 0.0)
{
    ModulationTrace trace;
    for (double t : times) {
        TraceRow r;
        r.t = t;
        r.omega = omega;
        r.gamma_dot_minus_omega = drift;
        trace.rows.push_back(r);
    }
    return trace;
}

}

TEST_CASE("decay fit recovers exact power laws")
{
    std::vector<double> t, v;
    for (int i = 0; i < 40; ++i) {
        t.push_back(1.0 + 0.5 * i);
        v.push_back(3.0 / std::sqrt(t.back()));
    }
    const DecayReport r = decay_fit(t, v, 2.0, 20.0, "t^-1/2", -0.6, -0.4);
    CHECK(std::abs(r.exponent + 0.5) < 1e-12);
    CHECK(r.residual < 1e-12);
    CHECK(r.pass);
    CHECK(!r.skipped);
    const DecayReport s = decay_fit(t, v, 2.0, 4.5, "t^-1/2", -0.6, -0.4);
    CHECK(s.samples == 6);
    CHECK(s.skipped);
    CHECK(!s.pass);
    const DecayReport out = decay_fit(t, v, 2.0, 20.0, "t^-1", -1.1, -0.9);
    CHECK(!out.pass);
}

TEST_CASE("cutoff chi0")
{
    CHECK(chi0(0.0) == 1.0);
    CHECK(chi0(-1.0) == 1.0);
    CHECK(chi0(2.0) == 0.0);
    CHECK(chi0(-3.5) == 0.0);
    CHECK(chi0(1.5) == doctest::Approx(0.5).epsilon(1e-14));
    double prev = 1.0;
    for (double x = 1.0; x <= 2.0; x += 1e-3) {
        CHECK(chi0(x) <= prev + 1e-15);
        CHECK(chi0(x) == chi0(-x));
        prev = chi0(x);
    }
    const double h = 1e-4;
    for (double x : {1.0, 2.0}) {
        CHECK(std::abs(chi0(x + h) - chi0(x - h)) / (2.0 * h) < 1e-6);
        CHECK(std::abs(chi0(x + h) - 2.0 * chi0(x) + chi0(x - h)) / (h * h) < 1e-2);
    }
}

TEST_CASE("theta integrates gamma_dot minus omega_bar by the trapezoid rule")
{
    ModulationTrace trace;
    for (int k = 0; k <= 100; ++k) {
        TraceRow r;
        r.t = 0.05 * k;
        r.omega = 1.0 + 0.1 * std::sin(r.t);
        r.gamma_dot_minus_omega = 0.02 * r.t;
        trace.rows.push_back(r);
    }
    const std::vector<double> th = theta_series(trace, 1.0);
    const double T = 5.0, exact = 0.1 * (1.0 - std::cos(T)) + 0.01 * T * T;
    CHECK(th.front() == 0.0);
    CHECK(std::abs(th.back() - exact) < 1e-4);
}

TEST_CASE("zero perturbation gives a zero profile")
{
    const SpatialGrid g(512, 30.0);
    const FrequencyGrid fg(256, 4.0);
    Trajectory tr;
    std::vector<double> times;
    for (int k = 0; k < 10; ++k) {
        times.push_back(0.5 * k);
        tr.fields.push_back(soliton_profile(1.0, g).cast<cd>());
    }
    tr.times = times;
    const ProfileSeries p = extract_profile(flat_trace(times, 1.0), tr, 1.0, g, fg, {0, 3, 9});
    REQUIRE(p.spectra.size() == 3);
    for (const auto& s : p.spectra) {
        CHECK(s.f_plus.abs().maxCoeff() < 1e-12);
        CHECK(s.f_minus.abs().maxCoeff() < 1e-12);
    }
    for (cd d : p.d1)
        CHECK(std::abs(d) < 1e-12);
}

TEST_CASE("profile is constant along linearized evolution")
{
    const SpatialGrid g(2048, 60.0);
    const FrequencyGrid fg(2048, 14.0);
    const double w = 1.0;
    const Field bump = 0.01 * (-(g.x * g.x)).exp() * cd(1.0, 0.3);
    const VectorField F = project_discrete(w, VectorField::from_scalar(bump), g).second;
    TransformOptions opt;
    opt.boundary_tolerance = std::numeric_limits<double>::infinity();
    Trajectory tr;
    for (int k = 0; k <= 4; ++k) {
        const double t = 0.5 * k;
        tr.times.push_back(t);
        tr.fields.push_back(soliton_profile(w, g).cast<cd>() + evolve_field(w, F, -t, g, fg, g.x, opt).upper);
    }
    const ProfileSeries p = extract_profile(flat_trace(tr.times, w), tr, w, g, fg, {0, 1, 2, 3, 4});
    REQUIRE(p.spectra.size() == 5);
    for (std::size_t k = 1; k < p.spectra.size(); ++k) {
        CHECK((p.spectra[k].f_plus - p.spectra[0].f_plus).abs().maxCoeff() < 1e-7);
        CHECK((p.spectra[k].f_minus - p.spectra[0].f_minus).abs().maxCoeff() < 1e-7);
    }
    const ProfileSeries q = extract_profile(flat_trace(tr.times, w), tr, w, g, fg, {0, 4}, 0.8);
    CHECK((q.spectra[1].f_plus - q.spectra[0].f_plus).abs().maxCoeff() < 1e-7);
}

TEST_CASE("w_plus removes the logarithmic phase rotation")
{
    const FrequencyGrid fg(64, 3.0);
    ProfileSeries p;
    const Field f0 = (-fg.xi * fg.xi).exp().cast<cd>() * cd(0.6, 0.8);
    const Eigen::ArrayXd rate = 0.5 * f0.abs2();
    for (int k = 0; k <= 400; ++k) {
        const double t = 0.05 * k;
        const Eigen::ArrayXd rot = t >= 1.0 ? Eigen::ArrayXd(-rate * std::log(t)) : Eigen::ArrayXd::Zero(fg.m);
        p.times.push_back(t);
        p.theta.push_back(0.01 * k);
        p.spectra.push_back({f0 * (I * rot).exp() * std::polar(1.0, -0.01 * k), Field::Zero(fg.m), 1.0});
    }
    const std::vector<Field> w = w_plus(p);
    REQUIRE(w.size() == p.times.size());
    for (std::size_t k = 0; k < w.size(); ++k)
        CHECK((w[k].abs() - f0.abs()).abs().maxCoeff() < 1e-14);
    const double trapezoid = 0.05 * 0.05 / 12.0 * rate.maxCoeff();
    CHECK((w.back() - f0).abs().maxCoeff() < 1.1 * trapezoid);
    const ScatteringReport r = modified_scattering_check(p);
    CHECK(!r.skipped);
    REQUIRE(r.differences.size() == 4);
    CHECK(r.t_hi.back() == 20.0);
    CHECK(r.t_lo.back() == 10.0);
    CHECK(r.t_lo.front() == doctest::Approx(1.25));
    CHECK(r.modulus_defect < 1e-14);
    for (double d : r.differences)
        CHECK(d < 1e-4);
}

TEST_CASE("scattering check is skipped on short series")
{
    ProfileSeries p;
    for (int k = 0; k < 5; ++k) {
        p.times.push_back(k);
        p.theta.push_back(0.0);
        p.spectra.push_back({Field::Zero(4), Field::Zero(4), 1.0});
    }
    CHECK(modified_scattering_check(p).skipped);
}

TEST_CASE("asymptotic formula")
{
    const SpectralFunction zero = [](double) { return cd(0.0); };
    const SpectralFunction bump = [](double xi) { return cd(0.3, 0.1) * std::exp(-xi * xi / 8.0); };
    CHECK(asymptotic_formula(3.0, 1.0, 1.0, zero, zero, 0.2) == cd(0.0));
    for (double t : {10.0, 40.0}) {
        const double x = 80.0;
        const double a = std::abs(asymptotic_formula(t, x, 1.0, bump, zero, 0.0));
        const double b = std::abs(asymptotic_formula(4.0 * t, 4.0 * x, 1.0, bump, zero, 0.0));
        CHECK(std::abs(2.0 * b - a) < 1e-12);
    }
    const FrequencyGrid fg(100, 5.0);
    const Field samples = fg.xi.cast<cd>() * cd(0.0, 1.0);
    const SpectralFunction s = interpolate_spectrum(samples, fg);
    CHECK(std::abs(s(fg.xi[10]) - samples[10]) < 1e-14);
    CHECK(std::abs(s(0.5 * (fg.xi[20] + fg.xi[21])) - 0.5 * (samples[20] + samples[21])) < 1e-14);
    CHECK(s(6.0) == cd(0.0));
}

TEST_CASE("local decay split reconstructs the field")
{
    const SpatialGrid g(2048, 60.0);
    const FrequencyGrid fg(2048, 14.0);
    const double w = 1.0;
    const VectorField F = project_discrete(w, VectorField::from_scalar(0.01 * (-(g.x * g.x)).exp().cast<cd>()), g).second;
    const DistortedSpectrum S = forward(w, F, g, fg);
    const RealField x = RealField::LinSpaced(81, -10.0, 10.0);
    for (double t : {2.0, 8.0}) {
        const LocalDecaySplit sp = local_decay_split(S, t, fg, x);
        const VectorField V = inverse(propagate(S, fg, -t), fg, x);
        const Field p1 = (x.tanh().square() / std::sqrt(2.0 * std::numbers::pi)).cast<cd>();
        const Field p2 = (-x.cosh().square().inverse() / std::sqrt(2.0 * std::numbers::pi)).cast<cd>();
        CHECK((V.upper - (sp.h1 * p1 - sp.h2 * p2 + sp.R_u)).abs().maxCoeff() < 1e-12);
        CHECK((V.lower - (sp.h1 * p2 - sp.h2 * p1 + sp.R_ubar)).abs().maxCoeff() < 1e-12);
    }
}
