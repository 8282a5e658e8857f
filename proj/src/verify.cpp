#include "soliton_lab/verify.hpp"
#include "soliton_lab/distributions.hpp"
#include "soliton_lab/hyperbolic.hpp"
#include "soliton_lab/operator.hpp"
#include "soliton_lab/parallel.hpp"
#include "soliton_lab/transform.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace sl {

namespace {

using std::numbers::pi;
using CheckFn = std::function<Check()>;

Check make(std::string name, std::string citation, double value, double tolerance)
{
    return {std::move(name), std::move(citation), value, tolerance, std::isfinite(value) && value <= tolerance};
}

std::vector<Check> run_all(const std::vector<CheckFn>& fns)
{
    std::vector<Check> out(fns.size());
    parallel_for(static_cast<std::ptrdiff_t>(fns.size()), [&](std::ptrdiff_t i) { out[i] = fns[i](); });
    return out;
}

// sup over |x| <= half of |H(w) v - lambda v| with eighth order central differences
double interior_residual(double w, const VectorField& v, cd lambda, const SpatialGrid& g, double half)
{
    static constexpr double c[5] = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
    const RealField phi2 = soliton_profile(w, g).square();
    auto dxx = [&](const Field& f, int j) {
        cd s = c[0] * f[j];
        for (int k = 1; k <= 4; ++k)
            s += c[k] * (f[j - k] + f[j + k]);
        return s / (g.h * g.h);
    };
    double m = 0.0;
    for (int j = 4; j < g.n - 4; ++j) {
        if (std::abs(g.x[j]) > half)
            continue;
        const cd a = -dxx(v.upper, j) + (w - 2.0 * phi2[j]) * v.upper[j] - phi2[j] * v.lower[j] - lambda * v.upper[j];
        const cd b = phi2[j] * v.upper[j] + dxx(v.lower, j) - (w - 2.0 * phi2[j]) * v.lower[j] - lambda * v.lower[j];
        m = std::max({m, std::abs(a), std::abs(b)});
    }
    return m;
}

VectorField dressed_gaussian(const SpatialGrid& g, double width, double dress, cd phase)
{
    const RealField base = (-(g.x * g.x) / (2.0 * width * width)).exp() * (1.0 + dress * g.x * g.x);
    const Field u = base.cast<cd>() * phase;
    return {u, u.conjugate(), true};
}

std::vector<CheckFn> appendix_ft()
{
    std::vector<CheckFn> fns;
    for (int l = 1; l <= 8; ++l)
        for (bool tanh : {false, true})
            fns.push_back([l, tanh] {
                const SechKernelSpec spec{l, tanh};
                double err = 0.0;
                for (int k = 0; k <= 80; ++k) {
                    const double xi = -10.0 + 0.25 * k;
                    err = std::max(err, std::abs(ft_sech_power(spec, xi) - ft_sech_oracle(spec, xi)));
                }
                return make("ft sech^" + std::to_string(l) + (tanh ? " tanh" : "") + " vs quadrature, |xi| <= 10",
                            "Appendix A, Fourier transforms of sech^l and sech^l tanh", err, 1e-8);
            });
    return fns;
}

std::vector<CheckFn> operator_suite()
{
    std::vector<CheckFn> fns;
    for (double w : {1.0, 1.7}) {
        fns.push_back([w] {
            const SpatialGrid g(4096, 40.0);
            const GeneralizedKernel k = generalized_eigenfunctions(w, g);
            return make("H Y1 = 0, omega = " + std::to_string(w), "calH(w) Y_{1,w} = 0",
                        sup_norm(apply_H(w, k.Y1, g)), 1e-6);
        });
        fns.push_back([w] {
            const SpatialGrid g(4096, 40.0);
            const GeneralizedKernel k = generalized_eigenfunctions(w, g);
            return make("H Y2 = i Y1, omega = " + std::to_string(w), "calH(w) Y_{2,w} = i Y_{1,w}",
                        sup_norm(apply_H(w, k.Y2, g) - I * k.Y1), 1e-6);
        });
        fns.push_back([w] {
            const SpatialGrid g(4096, 40.0);
            const ThresholdResonances r = threshold_resonances(w, g);
            const double a = interior_residual(w, r.plus, w, g, 20.0);
            const double b = interior_residual(w, r.minus, -w, g, 20.0);
            return make("H Phi_+- = +-w Phi_+-, |x| <= L/2, omega = " + std::to_string(w),
                        "Prop. (4), threshold resonances", std::max(a, b), 1e-6);
        });
        for (double xi : {0.5, 1.7})
            fns.push_back([w, xi] {
                const SpatialGrid g(4096, 40.0);
                const double lam = xi * xi + w;
                const VectorField p = psi_plus(w, xi, g), m = psi_minus(w, xi, g);
                const double a = interior_residual(w, p, lam, g, 20.0);
                const double b = interior_residual(w, m, -lam, g, 20.0);
                return make("H Psi_+- = +-(xi^2 + w) Psi_+-, xi = " + std::to_string(xi) + ", omega = " +
                                std::to_string(w),
                            "calH(w) Psi_{+-,w} = +-(xi^2 + w) Psi_{+-,w}", std::max(a, b), 1e-6);
            });
    }
    const cd zs[2] = {cd(2.25, 0.1), cd(-1.7, 0.4)};
    for (const cd& z : zs) {
        // sqrt on C \ [0, inf) with sqrt(-1) = i
        auto root = [](cd v) { return I * std::sqrt(-v); };
        const cd closed[4] = {2.0 * z * z * root(1.0 - z), -2.0 * z * z * root(1.0 + z), 0.0, 0.0};
        const JostPair pairs[4] = {JostPair::f1_g2, JostPair::f3_g4, JostPair::f1_g4, JostPair::f3_g2};
        const char* names[4] = {"W[f1, g2] = 2 z^2 sqrt(1 - z)", "W[f3, g4] = -2 z^2 sqrt(1 + z)", "W[f1, g4] = 0",
                                "W[f3, g2] = 0"};
        for (int p = 0; p < 4; ++p) {
            const std::string label = std::string(names[p]) + ", z = (" + std::to_string(z.real()) + ", " +
                                      std::to_string(z.imag()) + ")";
            fns.push_back([=] {
                const SpatialGrid g(4096, 40.0);
                const WronskianSamples s = wronskian_samples(pairs[p], z, g.x);
                double dev = 0.0;
                for (const cd& v : s.w)
                    dev = std::max(dev, std::abs(v - s.w.front()));
                return make(label + ": constant in x", "Lemma, Jost solutions form a fundamental set", dev, 1e-9);
            });
            fns.push_back([=] {
                const SpatialGrid g(4096, 40.0);
                const WronskianSamples s = wronskian_samples(pairs[p], z, g.x);
                double dev = 0.0;
                for (const cd& v : s.w)
                    dev = std::max(dev, std::abs(v - closed[p]));
                return make(label + ": closed form", "(eqn:wronskian1)-(eqn:wronskian3)", dev, 1e-10);
            });
        }
    }
    for (double xi : {0.5, 1.0, 2.0})
        fns.push_back([xi] {
            const double eps = 1e-6;
            const cd zp(xi * xi + 1.0, eps), zm(xi * xi + 1.0, -eps);
            double dev = 0.0;
            for (double x : {-2.0, -0.4, 0.3, 1.7})
                for (double y : {-1.0, 0.5, 2.5})
                    dev = std::max(dev, (resolvent_kernel(zp, x, y) - resolvent_kernel(zm, x, y) - jump_kernel(xi, x, y))
                                            .cwiseAbs()
                                            .maxCoeff());
            return make("resolvent jump at eps = 1e-6, xi = " + std::to_string(xi),
                        "Cor., jump of the resolvent across the essential spectrum", dev, 1e-4);
        });
    return fns;
}

std::vector<CheckFn> transform_suite()
{
    std::vector<CheckFn> fns;
    const double w = 1.3;
    auto setup = [] { return std::pair{SpatialGrid(4096, 40.0), FrequencyGrid(2048, 12.0)}; };
    fns.push_back([=] {
        const auto [g, fg] = setup();
        double err = 0.0;
        for (const VectorField& F : {dressed_gaussian(g, 1.0, 0.3, cd(1.0, 0.5)), dressed_gaussian(g, 0.7, 1.0, cd(0.2, -1.0))}) {
            const auto [c, pe] = project_discrete(w, F, g);
            const VectorField back = inverse(forward(w, F, g, fg), fg, g);
            err = std::max(err, l2_norm(back - pe, g));
        }
        return make("inverse(forward(F)) = P_e F on dressed Gaussians", "P_e = F^{-1} F, Section 3.3", err, 1e-6);
    });
    fns.push_back([=] {
        const auto [g, fg] = setup();
        const GeneralizedKernel k = generalized_eigenfunctions(w, g);
        double err = 0.0;
        for (const VectorField& Y : {k.Y1, k.Y2}) {
            const DistortedSpectrum S = forward(w, Y, g, fg);
            err = std::max({err, S.f_plus.abs().maxCoeff(), S.f_minus.abs().maxCoeff()});
        }
        return make("F_+-[Y_j] = 0, j = 1, 2", "Cor., F_{+-,w} P_d = 0", err, 1e-7);
    });
    fns.push_back([=] {
        const auto [g, fg] = setup();
        const DistortedSpectrum S = forward(w, dressed_gaussian(g, 1.0, 0.3, cd(1.0, 0.5)), g, fg);
        return make("conjugation relation f_- = -(d/conj d) conj f_+(-xi)", "(equ:distFT_components_relation)",
                    conjugation_residual(S, fg), 1e-8);
    });
    fns.push_back([=] {
        const auto [g, fg] = setup();
        const VectorField F{dressed_gaussian(g, 1.0, 0.3, cd(1.0, 0.5)).upper,
                            dressed_gaussian(g, 0.8, 0.5, cd(0.3, 0.9)).upper * 0.7, false};
        return make("sigma3 action identity", "Lemma, F_+[sigma3 F] = F_+[F] + 2<f2, Psi_2>",
                    sigma3_transform(w, F, g, fg).residual, 1e-8);
    });
    fns.push_back([=] {
        const auto [g, fg] = setup();
        const VectorField F{dressed_gaussian(g, 1.0, 0.3, cd(1.0, 0.5)).upper,
                            dressed_gaussian(g, 0.8, 0.5, cd(0.3, 0.9)).upper * 0.7, false};
        return make("dx action identity", "Lemma, F_+[dx F] = i xi F_+[F] + K_+[F]", dx_transform(w, F, g, fg).residual,
                    1e-8);
    });
    fns.push_back([=] {
        const auto [g, fg] = setup();
        const VectorField F = dressed_gaussian(g, 1.0, 0.3, cd(1.0, 0.5));
        const VectorField G = dressed_gaussian(g, 0.8, 0.6, cd(-0.4, 1.1)) + VectorField{(g.x * g.x * (-(g.x * g.x)).exp()).cast<cd>() * cd(0.0, 0.5), (g.x * g.x * (-(g.x * g.x)).exp()).cast<cd>() * cd(0.0, -0.5), true};
        const VectorField pf = project_discrete(w, F, g).second, pg = project_discrete(w, G, g).second;
        const cd lhs = inner(pf, sigma3(pg), g);
        const cd rhs = spectral_pairing(forward(w, F, g, fg), forward(w, G, g, fg), fg);
        return make("pairing <P_e F, s3 P_e G> = int f_+ conj g_+ - f_- conj g_-", "Prop., (eqn: Pe pairing formula)",
                    std::abs(lhs - rhs), 1e-6);
    });
    return fns;
}

std::vector<CheckFn> null_structures()
{
    std::vector<CheckFn> fns;
    const double w = 1.3;
    fns.push_back([=] {
        const SpatialGrid g(4096, 40.0);
        const FrequencyGrid fg(512, 8.0);
        TransformOptions opt;
        opt.tail_tolerance = std::numeric_limits<double>::infinity();
        const DistortedSpectrum S = forward(w, quadratic_coefficients(w, g).Q1, g, fg, opt);
        double err = 0.0;
        for (Eigen::Index k = 0; k < fg.m; ++k)
            err = std::max(err, std::abs(S.f_plus[k] - q1_tilde(w, fg.xi[k])));
        return make("Q1 tilde closed form vs F_+[Q_1], |xi| <= 8", "Lemma null structure, closed form of Q1 tilde", err,
                    1e-8);
    });
    fns.push_back([=] {
        const double s = std::sqrt(w);
        return make("Q1 tilde(+-sqrt w) = 0", "Q1 tilde(+-sqrt(w)) = 0, (equ:null_structure_radiation_bad_freq_vanishing)",
                    std::max(std::abs(q1_tilde(w, s)), std::abs(q1_tilde(w, -s))), 0.0);
    });
    fns.push_back([=] {
        const SpatialGrid g(4096, 40.0);
        const Field phi2 = soliton_profile(w, g).square().cast<cd>();
        double err = 0.0;
        const double pts[3][2] = {{0.7, -0.3}, {1.5, 2.0}, {-0.4, 0.4}};
        for (const auto& p : pts) {
            const VectorField a = psi_plus(w, p[0], g), b = psi_plus(w, p[1], g);
            const cd pp = ((a.upper * b.upper - a.lower * b.lower) * phi2).sum() * g.h;
            const cd pm = ((a.upper * b.lower - a.lower * b.upper) * phi2).sum() * g.h;
            const NuKernels n = nu_kernels(w, p[0], p[1]);
            err = std::max({err, std::abs(pp - n.pp), std::abs(pm - n.pm)});
        }
        return make("nu_++ and nu_+- closed forms vs quadrature", "(eqn: nu++), (eqn: nu+-)", err, 1e-8);
    });
    fns.push_back([=] {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        double err = 0.0;
        for (int i = 0; i < 100; ++i) {
            const NuKernels n = nu_kernels(w, u(rng), u(rng));
            err = std::max(err, std::abs(n.mm + n.pp));
        }
        return make("nu_-- = -nu_++", "Lemma, nu_{--,w} = -nu_{++,w}", err, 1e-15);
    });
    fns.push_back([=] {
        double err = 0.0;
        for (double xi : {-3.0, -0.5, 0.0, 0.8, 2.5})
            err = std::max(err, std::abs(nu_kernels(w, xi, xi).pm));
        return make("nu_+-(xi, xi) = 0", "(eqn: nu+-), factor (xi1^2 - xi2^2)", err, 0.0);
    });
    fns.push_back([] {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-10.0, 10.0);
        double err = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double x = u(rng);
            const SymbolRatios r = cubic_symbol_ratios(x, x, x, x);
            err = std::max({err, std::abs(r.p1_over_p - 1.0), std::abs(r.p2_over_p)});
        }
        return make("cubic diagonal property (p1/p, p2/p) = (1, 0)", "(eqn:cubic-diagonal-property)", err, 1e-13);
    });
    fns.push_back([] {
        const TestFunction gauss = [](double x) { return cd(std::exp(-0.5 * x * x), 0.0); };
        const PairingResult r = mu_1111_pairing(1.0, gauss, gauss, gauss, gauss);
        return make("mu_1111 pairing: direct vs delta + pv + reg, Gaussians, omega = 1",
                    "Lemma cubic NSD, mu = mu_delta + mu_pv + mu_reg", std::abs(r.direct - r.decomposed()) / std::abs(r.direct),
                    1e-4);
    });
    return fns;
}

}

bool SuiteReport::pass() const
{
    for (const auto& c : checks)
        if (!c.pass)
            return false;
    return true;
}

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"appendix-ft", "operator", "transform", "null-structures"};
    return names;
}

bool is_suite(const std::string& name)
{
    if (name == "all")
        return true;
    for (const auto& n : suite_names())
        if (n == name)
            return true;
    return false;
}

std::vector<SuiteReport> run_suite(const std::string& name)
{
    if (!is_suite(name))
        throw std::invalid_argument("unknown suite: " + name);
    std::vector<SuiteReport> out;
    for (const auto& n : suite_names()) {
        if (name != "all" && name != n)
            continue;
        std::vector<CheckFn> fns;
        if (n == "appendix-ft")
            fns = appendix_ft();
        else if (n == "operator")
            fns = operator_suite();
        else if (n == "transform")
            fns = transform_suite();
        else
            fns = null_structures();
        out.push_back({n, run_all(fns)});
    }
    return out;
}

nlohmann::json to_json(const std::vector<SuiteReport>& reports)
{
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json checks = nlohmann::json::array();
        for (const auto& c : r.checks)
            checks.push_back({{"name", c.name},
                              {"citation", c.citation},
                              {"value", c.value},
                              {"tolerance", c.tolerance},
                              {"pass", c.pass}});
        j.push_back({{"suite", r.suite}, {"pass", r.pass()}, {"checks", checks}});
    }
    return j;
}

}
