#pragma once

#include "soliton_lab/grid.hpp"

#include <array>
#include <functional>
#include <vector>

namespace sl {

// nodes and weights on [-1, 1]
struct GaussRule {
    std::vector<double> x, w;
};
GaussRule gauss_legendre(int n);
// composite rule on [a, b] split at the given interior breakpoints, panels no wider than max_width
GaussRule composite_rule(double a, double b, std::vector<double> breaks, double max_width, int order);

// (w - xi^2) / (24 sqrt(pi)) xi^2 (w + xi^2) / (w^2 (|xi| + i sqrt w)^2) sech(pi xi / (2 sqrt w))
cd q1_tilde(double omega, double xi);

struct QuadraticCoefficients {
    VectorField Q1, Q2, Q3;
};
QuadraticCoefficients quadratic_coefficients(double omega, const SpatialGrid& g);

struct NuKernels {
    cd pp, pm, mm;
};
NuKernels nu_kernels(double omega, double xi1, double xi2);

// cubic symbols in rescaled variables
using Quad = std::array<double, 4>;
cd cubic_p(const Quad& k);
cd cubic_p1(const Quad& k);
cd cubic_p2(const Quad& k);
struct SymbolRatios {
    cd p1_over_p, p2_over_p;
};
SymbolRatios cubic_symbol_ratios(double xi, double xi1, double xi2, double xi3);

// polynomial in four variables with each exponent in {0, 1, 2}; index e0 + 3 e1 + 9 e2 + 27 e3
using Poly4 = std::array<cd, 81>;
cd eval_poly(const Poly4& p, const Quad& k);

// (xi - iT)^2 (xi1 + iT)^2 (xi2 - iT)^2 (xi3 + iT)^2 = sum_l sech^{2l} (P_l + i Q_l tanh)
struct CubicExpansion {
    std::array<Poly4, 5> P, Q;
};
const CubicExpansion& cubic_expansion();

// coeff conj(b_p0)(xi) b_p1(xi1) conj(b_p2)(xi2) b_p3(xi3), b_p(xi) = xi^p / (|xi| - i)^2
struct SeparableTerm {
    cd coeff;
    std::array<int, 4> power;
};
std::vector<SeparableTerm> separable_terms(int which);
cd b_multiplier(int p, double xi);
cd eval_separable(const std::vector<SeparableTerm>& terms, const Quad& k);

using TestFunction = std::function<cd(double)>;

struct PairingConfig {
    double xi_max = 8.0;
    double panel_width = 2.0;
    int order = 16;
    double x_max = 60.0;
    double dx = 0.05;
    double eta_max = 16.0;
};

struct PairingResult {
    cd direct;
    cd delta_part, pv_part, reg_part;
    cd decomposed() const { return delta_part + pv_part + reg_part; }
};

// int mu_1111 conj(g0)(xi) g1(xi1) conj(g2)(xi2) g3(xi3)
PairingResult mu_1111_pairing(double omega, const TestFunction& g0, const TestFunction& g1, const TestFunction& g2,
                              const TestFunction& g3, const PairingConfig& cfg = {});
cd mu_1111_direct(double omega, const TestFunction& g0, const TestFunction& g1, const TestFunction& g2,
                  const TestFunction& g3, const PairingConfig& cfg = {});

}
