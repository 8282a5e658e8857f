#include "doctest.h"
#include "soliton_lab/transform.hpp"

#include <limits>

using namespace sl;

namespace {

VectorField gaussian_pair(const SpatialGrid& g, cd a, cd b)
{
    const RealField e = (-(g.x * g.x) / 2.0).exp() * (1.0 + 0.4 * g.x * g.x);
    const RealField f = (-0.8 * g.x * g.x).exp();
    return {e.cast<cd>() * a + f.cast<cd>() * b, e.cast<cd>() * std::conj(a) + f.cast<cd>() * std::conj(b), true};
}

struct Fixture {
    SpatialGrid g{2048, 30.0};
    FrequencyGrid fg{1024, 10.0};
    double w = 1.2;
};

}

TEST_CASE("forward matches direct pairing with the distorted basis")
{
    Fixture f;
    const VectorField F{gaussian_pair(f.g, cd(1.0, 0.3), 0.2).upper, gaussian_pair(f.g, 0.4, cd(0.0, 1.0)).upper, false};
    const DistortedSpectrum S = forward(f.w, F, f.g, f.fg);
    for (Eigen::Index k : {0, 100, 511, 512, 800, 1023}) {
        const double xi = f.fg.xi[k];
        cd p = 0.0, m = 0.0;
        for (int j = 0; j < f.g.n; ++j) {
            const PsiPair b = psi_basis(f.w, f.g.x[j], xi);
            p += F.upper[j] * std::conj(b.plus[0]) - F.lower[j] * std::conj(b.plus[1]);
            m += F.upper[j] * std::conj(b.minus[0]) - F.lower[j] * std::conj(b.minus[1]);
        }
        CHECK(std::abs(S.f_plus[k] - p * f.g.h) < 1e-12);
        CHECK(std::abs(S.f_minus[k] - m * f.g.h) < 1e-12);
    }
}

TEST_CASE("nonuniform dft against a direct sum")
{
    const RealField out = RealField::LinSpaced(16, -3.0, 3.0);
    const RealField in = RealField::Random(7) * 2.0;
    const Eigen::MatrixXcd cols = Eigen::MatrixXcd::Random(7, 2);
    const Eigen::MatrixXcd r = nonuniform_dft(out, in, -1.0, cols);
    for (int i = 0; i < 16; ++i)
        for (int c = 0; c < 2; ++c) {
            cd s = 0.0;
            for (int j = 0; j < 7; ++j)
                s += std::exp(cd(0.0, -out[i] * in[j])) * cols(j, c);
            CHECK(std::abs(r(i, c) - s) < 1e-12);
        }
}

TEST_CASE("discrete projection recovers injected coefficients")
{
    Fixture f;
    const GeneralizedKernel k = generalized_eigenfunctions(f.w, f.g);
    const VectorField G = gaussian_pair(f.g, cd(0.5, -0.2), 0.3);
    const VectorField pe = project_discrete(f.w, G, f.g).second;
    const cd a(0.3, 0.1), b(-0.7, 0.05);
    const auto [c, rest] = project_discrete(f.w, a * k.Y1 + b * k.Y2 + pe, f.g);
    CHECK(std::abs(c.d1 - a) < 1e-12);
    CHECK(std::abs(c.d2 - b) < 1e-12);
    CHECK(l2_norm(rest - pe, f.g) < 1e-12);
    const auto again = project_discrete(f.w, pe, f.g);
    CHECK(std::abs(again.first.d1) + std::abs(again.first.d2) < 1e-13);
}

TEST_CASE("inverse of forward reproduces P_e F")
{
    const SpatialGrid g(4096, 40.0);
    const FrequencyGrid fg(2048, 12.0);
    for (double w : {0.9, 1.3}) {
        const VectorField F = gaussian_pair(g, cd(1.0, 0.5), cd(0.0, -0.3));
        const VectorField pe = project_discrete(w, F, g).second;
        CHECK(l2_norm(inverse(forward(w, F, g, fg), fg, g) - pe, g) < 1e-6);
        const GeneralizedKernel k = generalized_eigenfunctions(w, g);
        const DistortedSpectrum S = forward(w, k.Y2, g, fg);
        CHECK(S.f_plus.abs().maxCoeff() < 1e-7);
        CHECK(conjugation_residual(forward(w, F, g, fg), fg) < 1e-12);
    }
}

TEST_CASE("evolve_field solves dV/dt = i H V and leaves the profile fixed")
{
    const SpatialGrid g(2048, 60.0);
    const FrequencyGrid fg(2048, 14.0);
    const double w = 1.1, t = 1.5, e = 1e-3;
    const VectorField F = project_discrete(w, gaussian_pair(g, cd(0.8, 0.1), 0.5), g).second;
    TransformOptions opt;
    opt.boundary_tolerance = std::numeric_limits<double>::infinity();
    const VectorField V = evolve_field(w, F, t, g, fg, g.x, opt);
    const VectorField dV = (evolve_field(w, F, t + e, g, fg, g.x, opt) - evolve_field(w, F, t - e, g, fg, g.x, opt)) *
                           (1.0 / (2.0 * e));
    CHECK(sup_norm(dV * cd(0.0, -1.0) - apply_H(w, V, g)) < 1e-5);
    const DistortedSpectrum S0 = forward(w, F, g, fg, opt);
    const DistortedSpectrum St = propagate(forward(w, V, g, fg, opt), fg, -t);
    CHECK((St.f_plus - S0.f_plus).abs().maxCoeff() < 1e-7);
    CHECK((St.f_minus - S0.f_minus).abs().maxCoeff() < 1e-7);
    CHECK(sup_norm(evolve_field(w, F, 0.0, g, fg, g.x, opt) - inverse(S0, fg, g)) < 1e-14);
}

TEST_CASE("pairing formula")
{
    Fixture f;
    const VectorField F = gaussian_pair(f.g, cd(1.0, 0.2), 0.0), G = gaussian_pair(f.g, 0.3, cd(0.0, 0.6));
    const FrequencyGrid fg(2048, 12.0);
    const cd lhs = inner(project_discrete(f.w, F, f.g).second, sigma3(project_discrete(f.w, G, f.g).second), f.g);
    const cd rhs = spectral_pairing(forward(f.w, F, f.g, fg), forward(f.w, G, f.g, fg), fg);
    CHECK(std::abs(lhs - rhs) < 1e-6);
}

TEST_CASE("action identities")
{
    Fixture f;
    const VectorField F{gaussian_pair(f.g, cd(1.0, 0.5), 0.0).upper, gaussian_pair(f.g, 0.2, 0.7).upper, false};
    CHECK(sigma3_transform(f.w, F, f.g, f.fg).residual < 1e-10);
    CHECK(dx_transform(f.w, F, f.g, f.fg).residual < 1e-10);
}

TEST_CASE("boundary and tail guards")
{
    Fixture f;
    const VectorField one{Field::Ones(f.g.n), Field::Ones(f.g.n), true};
    CHECK_THROWS_AS(forward(f.w, one, f.g, f.fg), BoundaryMassError);
    DistortedSpectrum S{Field::Ones(f.fg.m), Field::Zero(f.fg.m), f.w};
    CHECK_THROWS_AS(inverse(S, f.fg, f.g), FrequencyTailError);
    CHECK(boundary_magnitude(one) == 1.0);
}

TEST_CASE("x-norm diagnostics on a Gaussian spectrum")
{
    const FrequencyGrid fg(4096, 10.0);
    const Field f = (-(fg.xi * fg.xi)).exp().cast<cd>();
    const XNorm n = x_norm_diagnostics({f, f, 1.0}, fg);
    CHECK(n.sup_plus == doctest::Approx(1.0).epsilon(1e-5));
    // ||d/dxi e^{-xi^2}||^2 = sqrt(pi / 2)
    CHECK(n.dxi_plus == doctest::Approx(std::sqrt(std::sqrt(M_PI / 2.0))).epsilon(1e-8));
}
