#pragma once

#include "soliton_lab/grid.hpp"
#include "soliton_lab/operator.hpp"

#include <stdexcept>
#include <utility>

namespace sl {

struct DistortedSpectrum {
    Field f_plus;
    Field f_minus;
    double omega_ref = 1.0;
};

struct DiscreteCoefficients {
    cd d1, d2, d3, d4;
};

struct TransformOptions {
    double boundary_tolerance = 1e-8; // max |F(+-L)|; infinity disables the check
    double tail_tolerance = 1e-6;     // max |f(+-Xi)|; infinity disables the check
};

struct BoundaryMassError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FrequencyTailError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// out_r = sum_c exp(sign i out_r in_c) w_c(c, :); out nodes must be uniform
Eigen::MatrixXcd nonuniform_dft(const RealField& out_nodes, const RealField& in_nodes, double sign,
                                const Eigen::MatrixXcd& columns);

double boundary_magnitude(const VectorField& F);

// f_+(xi) = <F, sigma3 Psi_+(., xi)>, f_-(xi) = <F, sigma3 Psi_-(., xi)>
DistortedSpectrum forward(double omega, const VectorField& F, const SpatialGrid& g, const FrequencyGrid& fg,
                          const TransformOptions& opt = {});

// int f_+ Psi_+ dxi - int f_- Psi_- dxi at the nodes x (uniform)
VectorField inverse(const DistortedSpectrum& S, const FrequencyGrid& fg, const RealField& x,
                    const TransformOptions& opt = {});
inline VectorField inverse(const DistortedSpectrum& S, const FrequencyGrid& fg, const SpatialGrid& g,
                           const TransformOptions& opt = {})
{
    return inverse(S, fg, g.x, opt);
}

// U = d1 Y1 + d2 Y2 + P_e U for even U; d3, d4 are the odd-sector coefficients
std::pair<DiscreteCoefficients, VectorField> project_discrete(double omega, const VectorField& U, const SpatialGrid& g);

// f_+- -> e^{+-it(xi^2 + w)} f_+-
DistortedSpectrum propagate(const DistortedSpectrum& S, const FrequencyGrid& fg, double t);

// e^{itH} P_e F
VectorField evolve_field(double omega, const VectorField& F, double t, const SpatialGrid& g, const FrequencyGrid& fg,
                         const RealField& x_out, const TransformOptions& opt = {});

struct ActionIdentity {
    DistortedSpectrum direct; // transform of sigma3 F or dx F
    DistortedSpectrum base;   // transform of F
    Field extra_plus, extra_minus;
    double residual = 0.0;
};

// F+[s3 F] = F+[F] + 2<f2, Psi_2>,  F-[s3 F] = -F-[F] + 2<f1, Psi_2>
ActionIdentity sigma3_transform(double omega, const VectorField& F, const SpatialGrid& g, const FrequencyGrid& fg);
// F+-[dx F] = i xi F+-[F] + K+-[F]
ActionIdentity dx_transform(double omega, const VectorField& F, const SpatialGrid& g, const FrequencyGrid& fg);

struct XNorm {
    double sup_plus = 0.0, sup_minus = 0.0;
    double dxi_plus = 0.0, dxi_minus = 0.0;
};
XNorm x_norm_diagnostics(const DistortedSpectrum& S, const FrequencyGrid& fg);

// max |f_-(xi) + (|xi| - i sqrt w)^2 / (|xi| + i sqrt w)^2 conj f_+(-xi)|
double conjugation_residual(const DistortedSpectrum& S, const FrequencyGrid& fg);

// int f_+ conj g_+ - f_- conj g_- dxi
cd spectral_pairing(const DistortedSpectrum& a, const DistortedSpectrum& b, const FrequencyGrid& fg);

}
