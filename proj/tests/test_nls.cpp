#include "doctest.h"
#include "oracles.hpp"
#include "soliton_lab/nls.hpp"
#include "soliton_lab/operator.hpp"

#include <cmath>

using namespace sl;

namespace {

Field soliton(double w, const SpatialGrid& g) { return soliton_profile(w, g).cast<cd>(); }

Field perturbed(const SpatialGrid& g, double eps)
{
    return (soliton_profile(1.0, g) + eps * (2.0 * g.x).cos() / g.x.cosh()).cast<cd>();
}

Field evolve(Field psi, const SpatialGrid& g, double dt, double t, Scheme s)
{
    const SplitStepper st(g, dt, s);
    const long n = std::lround(t / dt);
    for (long i = 0; i < n; ++i)
        st.step(psi);
    return psi;
}

}

TEST_CASE("mass and energy of the soliton")
{
    const SpatialGrid g(2048, 40.0);
    for (double w : {0.5, 1.0, 2.0})
        CHECK(mass(soliton(w, g), g) == doctest::Approx(4.0 * std::sqrt(w)).epsilon(1e-12));
    CHECK(energy(Field::Zero(g.n), g) == 0.0);
    const double quad = oracle::simpson(
                            [](double x) {
                                const double p = std::sqrt(2.0) * oracle::sech(x), dp = -p * std::tanh(x);
                                return oracle::cd(0.5 * dp * dp - 0.25 * p * p * p * p);
                            },
                            -40.0, 40.0, 200000)
                            .real();
    CHECK(std::abs(energy(soliton(1.0, g), g) - quad) < 1e-8);
    CHECK(quad == doctest::Approx(-2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("exact soliton is reproduced")
{
    const SpatialGrid g(4096, 40.0);
    for (double w : {1.0, 1.5}) {
        const Field psi = evolve(soliton(w, g), g, 1e-3, 2.0, Scheme::yoshida4);
        CHECK(l2_norm(psi - std::polar(1.0, 2.0 * w) * soliton(w, g), g) < 1e-8);
    }
    const Field psi = evolve(soliton(1.0, g), g, 1e-3, 1.0, Scheme::strang);
    CHECK(l2_norm(psi - std::polar(1.0, 1.0) * soliton(1.0, g), g) < 1e-5);
}

TEST_CASE("plane wave dispersion sign")
{
    const SpatialGrid g(256, 10.0 * M_PI);
    const double k = 1.2, t = 0.37;
    const Field e = (I * k * g.x).exp() * 1e-6;
    const Field psi = evolve(e, g, 1e-3, t, Scheme::strang);
    CHECK((psi - e * std::polar(1.0, -t * k * k)).abs().maxCoeff() < 1e-15);
}

TEST_CASE("zero stays zero")
{
    const SpatialGrid g(256, 20.0);
    CHECK(evolve(Field::Zero(g.n), g, 1e-2, 1.0, Scheme::strang).abs().maxCoeff() == 0.0);
}

TEST_CASE("time reversal")
{
    const SpatialGrid g(2048, 40.0);
    const Field psi0 = perturbed(g, 0.01);
    for (Scheme s : {Scheme::strang, Scheme::yoshida4}) {
        Field psi = psi0;
        const SplitStepper fwd(g, 1e-3, s), bwd(g, -1e-3, s);
        for (int i = 0; i < 100; ++i)
            fwd.step(psi);
        for (int i = 0; i < 100; ++i)
            bwd.step(psi);
        CHECK(l2_norm(psi - psi0, g) < 1e-12);
    }
}

TEST_CASE("Strang order is two")
{
    const SpatialGrid g(1024, 40.0);
    const Field psi0 = perturbed(g, 0.1);
    const double t = 1.0;
    const Field ref = evolve(psi0, g, 1.25e-4, t, Scheme::strang);
    std::vector<double> lx, ly;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
        lx.push_back(std::log(dt));
        ly.push_back(std::log(l2_norm(evolve(psi0, g, dt, t, Scheme::strang) - ref, g)));
    }
    const double slope = (3 * (lx[0] * ly[0] + lx[1] * ly[1] + lx[2] * ly[2]) - (lx[0] + lx[1] + lx[2]) * (ly[0] + ly[1] + ly[2])) /
                         (3 * (lx[0] * lx[0] + lx[1] * lx[1] + lx[2] * lx[2]) - std::pow(lx[0] + lx[1] + lx[2], 2));
    CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("perturbed run: evenness and mass conservation")
{
    const SpatialGrid g(1024, 40.0);
    EvolutionConfig c{g, 1e-3, 50.0, 1000, false, Scheme::strang};
    const Trajectory tr = run(c, perturbed(g, 0.01));
    REQUIRE(!tr.aborted);
    CHECK(tr.times.size() == 51);
    CHECK(tr.times.back() == doctest::Approx(50.0));
    double odd = 0.0, drift = 0.0;
    for (std::size_t s = 0; s < tr.fields.size(); ++s) {
        odd = std::max(odd, odd_part_norm(tr.fields[s], g));
        drift = std::max(drift, std::abs(tr.mass[s] - tr.mass[0]));
    }
    CHECK(odd <= 1e-10);
    CHECK(drift <= 1e-9);
}

TEST_CASE("configuration errors")
{
    const SpatialGrid g(256, 20.0);
    const Field psi = soliton(1.0, g);
    CHECK_THROWS_AS(step_count({g, -1e-3, 1.0, 1, true, Scheme::strang}, psi), ConfigError);
    CHECK_THROWS_AS(step_count({g, 1e-3, -1.0, 1, true, Scheme::strang}, psi), ConfigError);
    CHECK_THROWS_AS(step_count({g, 3e-3, 1.0, 1, true, Scheme::strang}, psi), ConfigError);
    CHECK_THROWS_AS(step_count({g, 1e-3, 1.0, 0, true, Scheme::strang}, psi), ConfigError);
    CHECK_THROWS_AS(step_count({g, 0.5, 1.0, 1, true, Scheme::strang}, Field(psi * 3.0)), ConfigError);
    CHECK(step_count({g, 1e-3, 1.0, 1, true, Scheme::strang}, psi) == 1000);
    const Field boosted = psi * (I * 0.5 * g.x).exp();
    CHECK_THROWS_AS(run({g, 1e-3, 0.01, 1, true, Scheme::strang}, boosted), ConfigError);
}

TEST_CASE("growth guard aborts a focusing chirp")
{
    // linear focus at t = 0.1 with amplitude gain sqrt(0.1 / 0.0008) > 10
    const SpatialGrid g(4096, 40.0);
    const double a = 0.0008, tf = 0.1;
    const cd c = cd(a, tf) / (4.0 * (a * a + tf * tf));
    const Field psi0 = 1e-3 * (-c * (g.x * g.x).cast<cd>()).exp();
    const Trajectory tr = run({g, 1e-4, 0.2, 10, true, Scheme::strang}, psi0);
    CHECK(tr.aborted);
    CHECK(!tr.diagnostic.empty());
    CHECK(tr.times.back() < 0.11);
}
