#include "soliton_lab/grid.hpp"
#include "soliton_lab/fft.hpp"

#include <numbers>
#include <stdexcept>

namespace sl {

SpatialGrid::SpatialGrid(int points, double L) : n(points), half_length(L), h(2.0 * L / points)
{
    if (points < 8 || (points & (points - 1)) != 0)
        throw std::invalid_argument("SpatialGrid: point count must be a power of two >= 8");
    if (!(L > 0.0))
        throw std::invalid_argument("SpatialGrid: half_length must be positive");
    x.resize(n);
    k.resize(n);
    const double dk = std::numbers::pi / L;
    for (int j = 0; j < n; ++j) {
        x[j] = -L + j * h;
        k[j] = (j < n / 2 ? j : j - n) * dk;
    }
}

FrequencyGrid::FrequencyGrid(int points, double Xi) : m(points), max_freq(Xi), dxi(2.0 * Xi / points)
{
    if (points < 2 || points % 2 != 0)
        throw std::invalid_argument("FrequencyGrid: point count must be even");
    if (!(Xi > 0.0))
        throw std::invalid_argument("FrequencyGrid: max_freq must be positive");
    xi.resize(m);
    for (int j = 0; j < m; ++j)
        xi[j] = -Xi + (j + 0.5) * dxi;
}

bool FrequencyGrid::nyquist_safe(const SpatialGrid& g, double margin) const
{
    return max_freq * g.h <= std::numbers::pi * (1.0 - margin);
}

VectorField sigma1(const VectorField& v) { return {v.lower, v.upper, v.j_invariant}; }
VectorField sigma2(const VectorField& v) { return {-I * v.lower, I * v.upper, false}; }
VectorField sigma3(const VectorField& v) { return {v.upper, -v.lower, false}; }
VectorField conj(const VectorField& v) { return {v.upper.conjugate(), v.lower.conjugate(), v.j_invariant}; }

cd inner(const Field& u, const Field& v, const SpatialGrid& g)
{
    return (u * v.conjugate()).sum() * g.h;
}

cd inner(const VectorField& u, const VectorField& v, const SpatialGrid& g)
{
    return ((u.upper * v.upper.conjugate()).sum() + (u.lower * v.lower.conjugate()).sum()) * g.h;
}

double l2_norm(const Field& v, const SpatialGrid& g) { return std::sqrt(v.abs2().sum() * g.h); }

double l2_norm(const VectorField& v, const SpatialGrid& g)
{
    return std::sqrt((v.upper.abs2().sum() + v.lower.abs2().sum()) * g.h);
}

double sup_norm(const VectorField& v)
{
    return std::max(v.upper.abs().maxCoeff(), v.lower.abs().maxCoeff());
}

Field reflect(const Field& f, const SpatialGrid& g)
{
    Field r(f.size());
    for (int j = 0; j < g.n; ++j)
        r[j] = f[g.mirror(j)];
    return r;
}

double odd_part_norm(const Field& f, const SpatialGrid& g)
{
    return l2_norm(Field(0.5 * (f - reflect(f, g))), g);
}

double j_defect(const VectorField& v) { return (v.lower - v.upper.conjugate()).abs().maxCoeff(); }

Field spectral_dx(const Field& f, const SpatialGrid& g)
{
    Eigen::VectorXcd hat = fft_forward(f.matrix());
    for (int j = 0; j < g.n; ++j)
        hat[j] *= (j == g.n / 2) ? cd(0.0) : I * g.k[j];
    return fft_inverse(hat).array();
}

Field spectral_dxx(const Field& f, const SpatialGrid& g)
{
    Eigen::VectorXcd hat = fft_forward(f.matrix());
    hat.array() *= -g.k.square();
    return fft_inverse(hat).array();
}

Field fd_dxx(const Field& f, double h)
{
    const Eigen::Index n = f.size();
    Field d(n);
    const double c = 1.0 / (12.0 * h * h);
    for (Eigen::Index j = 2; j < n - 2; ++j)
        d[j] = (-f[j - 2] + 16.0 * f[j - 1] - 30.0 * f[j] + 16.0 * f[j + 1] - f[j + 2]) * c;
    auto edge0 = [&](auto at) {
        return (45.0 * at(0) - 154.0 * at(1) + 214.0 * at(2) - 156.0 * at(3) + 61.0 * at(4) - 10.0 * at(5)) * c;
    };
    auto edge1 = [&](auto at) {
        return (10.0 * at(0) - 15.0 * at(1) - 4.0 * at(2) + 14.0 * at(3) - 6.0 * at(4) + at(5)) * c;
    };
    d[0] = edge0([&](int i) { return f[i]; });
    d[1] = edge1([&](int i) { return f[i]; });
    d[n - 1] = edge0([&](int i) { return f[n - 1 - i]; });
    d[n - 2] = edge1([&](int i) { return f[n - 1 - i]; });
    return d;
}

Field fd_dx(const Field& f, double h)
{
    const Eigen::Index n = f.size();
    Field d(n);
    const double c = 1.0 / (12.0 * h);
    for (Eigen::Index j = 2; j < n - 2; ++j)
        d[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) * c;
    auto edge0 = [&](auto at) { return (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) * c; };
    auto edge1 = [&](auto at) { return (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) * c; };
    d[0] = edge0([&](int i) { return f[i]; });
    d[1] = edge1([&](int i) { return f[i]; });
    d[n - 1] = -edge0([&](int i) { return f[n - 1 - i]; });
    d[n - 2] = -edge1([&](int i) { return f[n - 1 - i]; });
    return d;
}

}
