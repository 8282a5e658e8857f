#pragma once

#include "soliton_lab/grid.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace sl {

struct SolitonFrame {
    double omega = 1.0;
    double gamma = 0.0;
};

struct GridMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct BranchCutError : std::domain_error {
    using std::domain_error::domain_error;
};

// phi_w = sqrt(2w) sech(sqrt(w) x) and its first two omega derivatives
RealField soliton_profile(double omega, const RealField& x);
RealField soliton_domega(double omega, const RealField& x);
RealField soliton_domega2(double omega, const RealField& x);
inline RealField soliton_profile(double omega, const SpatialGrid& g) { return soliton_profile(omega, g.x); }

enum class Stencil { spectral, finite_difference };

// H(w) = [[-dxx + w - 2 phi^2, -phi^2], [phi^2, dxx - w + 2 phi^2]]
VectorField apply_H(double omega, const VectorField& v, const SpatialGrid& g, Stencil stencil = Stencil::spectral);

struct GeneralizedKernel {
    VectorField Y1, Y2, Y3, Y4;
};

// Y1 = (i phi, -i phi), Y2 = (dw phi, dw phi), Y3 = (phi', phi'), Y4 = (i x phi, -i x phi)
GeneralizedKernel generalized_eigenfunctions(double omega, const SpatialGrid& g);
// dw Y1 and dw Y2
std::array<VectorField, 2> kernel_domega(double omega, const SpatialGrid& g);

struct ThresholdResonances {
    VectorField plus, minus;
};

// Phi_+ = (tanh^2, -sech^2)(sqrt(w) x), Phi_- = sigma1 Phi_+
ThresholdResonances threshold_resonances(double omega, const SpatialGrid& g);

// square roots with the cut on [0, inf) and sqrt(-1) = i, at w = 1
cd kappa_minus(cd z); // sqrt(1 - z)
cd kappa_plus(cd z);  // sqrt(1 + z)

enum class BranchMode { strict, boundary_value };

// one Jost solution amp(x) e^{rate x} at a point x, with d/dx = damp(x) e^{rate x}
struct JostSample {
    Eigen::Vector2cd amp;
    Eigen::Vector2cd damp;
    cd rate;
    double x = 0.0;
    Eigen::Vector2cd value() const { return amp * std::exp(rate * x); }
    Eigen::Vector2cd derivative() const { return damp * std::exp(rate * x); }
};

struct JostQuadruple {
    cd z;
    cd a, b; // sqrt(1 - z), sqrt(1 + z)
    JostSample f1, f3, g2, g4;
};

JostQuadruple jost_at(cd z, double x, BranchMode mode = BranchMode::strict);

// f1, f3, g2, g4 sampled on a grid (H(1) - z) v = 0
struct JostSolutions {
    cd z;
    VectorField f1, f3, g2, g4;
};
JostSolutions jost_solutions(cd z, const SpatialGrid& g, BranchMode mode = BranchMode::strict);

// W[f, g] = f' . g - f . g' with the real (bilinear) dot product
cd wronskian(const JostSample& f, const JostSample& g);

enum class JostPair { f1_g2, f3_g4, f1_g4, f3_g2 };
// W evaluated at each x; the vanishing pairs are sampled on the half line where
// their exponential factor is at most one
struct WronskianSamples {
    std::vector<double> x;
    std::vector<cd> w;
};
WronskianSamples wronskian_samples(JostPair pair, cd z, const RealField& x, BranchMode mode = BranchMode::strict);
cd wronskian_closed_form(JostPair pair, cd z, BranchMode mode = BranchMode::strict);

using Mat2 = Eigen::Matrix2cd;

// (H(1) - z)^{-1}(x, y); Im z < 0 handled through R(conj z) = conj R(z)
Mat2 resolvent_kernel(cd z, double x, double y, BranchMode mode = BranchMode::strict);
// -(1 / 2i xi) E(x, xi) E(y, xi)^* sigma3 with E = [F G], xi > 0
Mat2 jump_kernel(double xi, double x, double y);

// distorted basis at a single point
struct PsiPair {
    Eigen::Vector2cd plus, minus;
};
PsiPair psi_basis(double omega, double x, double xi);
cd m1_symbol(double omega, double x, double xi);
cd m2_symbol(double omega, double x, double xi);
// Psi_+(., xi) on the grid
VectorField psi_plus(double omega, double xi, const SpatialGrid& g);
VectorField psi_minus(double omega, double xi, const SpatialGrid& g);

// m_j(x, xi) = sum a(sqrt(w) x) b(xi) with b(xi) = coeff xi^p / (|xi| - i sqrt(w))^2
enum class XFactor { one, tanh, tanh2, sech2 };
struct SymbolTerm {
    int component; // 1 or 2
    XFactor a;
    cd coeff;
    int xi_power;
};
std::vector<SymbolTerm> symbol_terms(double omega);
double x_factor(XFactor a, double y);
cd eval_symbol_terms(const std::vector<SymbolTerm>& terms, int component, double omega, double x, double xi);

}
