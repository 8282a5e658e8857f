#pragma once

#include "soliton_lab/grid.hpp"
#include "soliton_lab/nls.hpp"
#include "soliton_lab/operator.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace sl {

struct DecompositionError : std::runtime_error {
    cd residual1, residual2;
    DecompositionError(const std::string& what, cd r1, cd r2) : std::runtime_error(what), residual1(r1), residual2(r2) {}
};

struct ParityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct IllConditioned : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// <U, sigma2 Y1>, <U, sigma2 Y2> with U = (u, conj u), u = e^{-i gamma} psi - phi_w
std::array<cd, 2> orthogonality(const Field& psi, const SolitonFrame& f, const SpatialGrid& g);

struct Decomposition {
    SolitonFrame frame;
    Field u;
    std::array<cd, 2> residual;
    int iterations = 0;
};

Decomposition decompose(const Field& psi, const SolitonFrame& guess, const SpatialGrid& g, double parity_tolerance = 1e-8,
                        double tolerance = 1e-12, int max_iterations = 50);

// nonlinearity N(U) = Q_w(U) + C(U)
VectorField nonlinearity(double omega, const VectorField& U, const SpatialGrid& g);

Eigen::Matrix2d modulation_matrix(const VectorField& U, double omega, const SpatialGrid& g);

struct ModulationRates {
    double gamma_dot_minus_omega = 0.0;
    double omega_dot = 0.0;
    Eigen::Matrix2d matrix;
    Eigen::Vector2d rhs;
    double imag_defect = 0.0; // largest imaginary part among the assembled scalars
};

ModulationRates modulation_rhs(const VectorField& U, const SolitonFrame& f, const SpatialGrid& g,
                               double max_condition = 1e6);

// M[phi + u] - M[phi] - M[u] + <U, sigma2 Y1>
double mass_expansion_residual(double omega, const Field& u, const SpatialGrid& g);
// E[phi + u] - E[phi] - E[u] - (w/2)<U, s2 Y1> + 1/4 int phi^2 (u^2 + 4|u|^2 + ubar^2) + 1/2 int phi (u^2 ubar + u ubar^2)
double energy_expansion_residual(double omega, const Field& u, const SpatialGrid& g);

struct TraceRow {
    double t = 0.0;
    double omega = 0.0, gamma = 0.0;
    double gamma_dot_minus_omega = 0.0, omega_dot = 0.0;
    cd d1, d2;
    cd orth1, orth2;
    double u_sup = 0.0;
    double mass_residual = 0.0, energy_residual = 0.0;
    bool ok = true;
    std::string note;
};

struct ModulationTrace {
    std::vector<TraceRow> rows;
};

ModulationTrace track(const Trajectory& tr, const SpatialGrid& g, const SolitonFrame& guess);

void write_trace_csv(std::ostream& os, const ModulationTrace& trace);

}
