#pragma once

#include <Eigen/Dense>
#include <complex>

namespace sl {

using cd = std::complex<double>;
using Field = Eigen::ArrayXcd;
using RealField = Eigen::ArrayXd;

inline constexpr cd I{0.0, 1.0};

// Uniform periodic grid x_j = -L + j h, j = 0..N-1, h = 2L/N.
struct SpatialGrid {
    int n = 0;
    double half_length = 0.0;
    double h = 0.0;
    RealField x;
    RealField k; // FFT wavenumbers in storage order

    SpatialGrid() = default;
    SpatialGrid(int points, double half_length);

    // index of -x_j (the grid is closed under reflection modulo the period)
    int mirror(int j) const { return (n - j) % n; }
};

// Midpoint nodes xi_k = -Xi + (k + 1/2) dxi, no node at 0.
struct FrequencyGrid {
    int m = 0;
    double max_freq = 0.0;
    double dxi = 0.0;
    RealField xi;

    FrequencyGrid() = default;
    FrequencyGrid(int points, double max_freq);

    bool nyquist_safe(const SpatialGrid& g, double margin = 0.05) const;
};

struct VectorField {
    Field upper;
    Field lower;
    bool j_invariant = false;

    VectorField() = default;
    VectorField(Field u, Field l, bool j = false) : upper(std::move(u)), lower(std::move(l)), j_invariant(j) {}

    static VectorField zero(Eigen::Index n) { return {Field::Zero(n), Field::Zero(n), true}; }
    static VectorField from_scalar(const Field& u) { return {u, u.conjugate(), true}; }

    Eigen::Index size() const { return upper.size(); }

    VectorField operator+(const VectorField& o) const { return {upper + o.upper, lower + o.lower, j_invariant && o.j_invariant}; }
    VectorField operator-(const VectorField& o) const { return {upper - o.upper, lower - o.lower, j_invariant && o.j_invariant}; }
    VectorField operator*(cd s) const { return {upper * s, lower * s, j_invariant && s.imag() == 0.0}; }
    VectorField operator*(double s) const { return {upper * s, lower * s, j_invariant}; }
    VectorField& operator+=(const VectorField& o)
    {
        upper += o.upper;
        lower += o.lower;
        j_invariant = j_invariant && o.j_invariant;
        return *this;
    }
    VectorField& operator-=(const VectorField& o)
    {
        upper -= o.upper;
        lower -= o.lower;
        j_invariant = j_invariant && o.j_invariant;
        return *this;
    }
};

inline VectorField operator*(cd s, const VectorField& v) { return v * s; }
inline VectorField operator*(double s, const VectorField& v) { return v * s; }

VectorField sigma1(const VectorField& v);
VectorField sigma2(const VectorField& v);
VectorField sigma3(const VectorField& v);
VectorField conj(const VectorField& v);

// <U, V> = int (u1 conj(v1) + u2 conj(v2)) dx, trapezoid on the periodic grid
cd inner(const VectorField& u, const VectorField& v, const SpatialGrid& g);
cd inner(const Field& u, const Field& v, const SpatialGrid& g);
double l2_norm(const VectorField& v, const SpatialGrid& g);
double l2_norm(const Field& v, const SpatialGrid& g);
double sup_norm(const VectorField& v);

Field reflect(const Field& f, const SpatialGrid& g);
double odd_part_norm(const Field& f, const SpatialGrid& g);
double j_defect(const VectorField& v);

Field spectral_dx(const Field& f, const SpatialGrid& g);
Field spectral_dxx(const Field& f, const SpatialGrid& g);
// fourth order central differences, one-sided fourth order stencils at the two
// outermost points on each side
Field fd_dxx(const Field& f, double h);
Field fd_dx(const Field& f, double h);
inline constexpr int fd_stencil_order = 4;

}
