#include "soliton_lab/transform.hpp"
#include "soliton_lab/hyperbolic.hpp"
#include "soliton_lab/parallel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace sl {

namespace {

constexpr Eigen::Index chunk_rows = 64;
const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

struct Potentials {
    RealField T, S;
};

Potentials potentials(double omega, const RealField& x)
{
    const RealField y = std::sqrt(omega) * x;
    RealField sh = y.unaryExpr([](double v) { return sech(v); });
    return {y.tanh(), sh * sh};
}

// (|xi| - i sqrt w)^2
Field d_symbol(double omega, const RealField& xi)
{
    const double s = std::sqrt(omega);
    Field d(xi.size());
    for (Eigen::Index k = 0; k < xi.size(); ++k) {
        const cd a(std::abs(xi[k]), -s);
        d[k] = a * a;
    }
    return d;
}

// (h / sqrt(2 pi)) sum_j g_j e^{-i x_j xi} for each column
Eigen::MatrixXcd hat(const SpatialGrid& g, const FrequencyGrid& fg, const std::vector<Field>& cols)
{
    Eigen::MatrixXcd in(g.n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
        in.col(static_cast<Eigen::Index>(c)) = cols[c].matrix();
    return nonuniform_dft(fg.xi, g.x, -1.0, in) * (g.h * inv_sqrt_2pi);
}

void check_boundary(const VectorField& F, const TransformOptions& opt)
{
    const double b = boundary_magnitude(F);
    if (b > opt.boundary_tolerance)
        throw BoundaryMassError("forward: |F(+-L)| = " + std::to_string(b) + " exceeds boundary tolerance " +
                                std::to_string(opt.boundary_tolerance));
}

void check_tail(const DistortedSpectrum& S, const TransformOptions& opt)
{
    const Eigen::Index m = S.f_plus.size();
    const double t = std::max({std::abs(S.f_plus[0]), std::abs(S.f_plus[m - 1]), std::abs(S.f_minus[0]),
                               std::abs(S.f_minus[m - 1])});
    if (t > opt.tail_tolerance)
        throw FrequencyTailError("inverse: |f(+-Xi)| = " + std::to_string(t) + " exceeds tail tolerance " +
                                 std::to_string(opt.tail_tolerance));
}

}

Eigen::MatrixXcd nonuniform_dft(const RealField& out_nodes, const RealField& in_nodes, double sign,
                                const Eigen::MatrixXcd& columns)
{
    const Eigen::Index rows = out_nodes.size(), n = in_nodes.size();
    Eigen::MatrixXcd out(rows, columns.cols());
    if (rows == 0)
        return out;
    const double step = rows > 1 ? out_nodes[1] - out_nodes[0] : 0.0;
    Eigen::RowVectorXcd advance(n);
    for (Eigen::Index c = 0; c < n; ++c)
        advance[c] = std::polar(1.0, sign * step * in_nodes[c]);
    const Eigen::Index chunks = (rows + chunk_rows - 1) / chunk_rows;
    parallel_for(chunks, [&](std::ptrdiff_t k) {
        const Eigen::Index r0 = k * chunk_rows;
        const Eigen::Index nr = std::min(chunk_rows, rows - r0);
        Eigen::MatrixXcd phase(nr, n);
        for (Eigen::Index c = 0; c < n; ++c)
            phase(0, c) = std::polar(1.0, sign * out_nodes[r0] * in_nodes[c]);
        for (Eigen::Index r = 1; r < nr; ++r)
            phase.row(r) = phase.row(r - 1).cwiseProduct(advance);
        out.middleRows(r0, nr).noalias() = phase * columns;
    });
    return out;
}

double boundary_magnitude(const VectorField& F)
{
    const Eigen::Index n = F.upper.size();
    return std::max({std::abs(F.upper[0]), std::abs(F.upper[n - 1]), std::abs(F.lower[0]), std::abs(F.lower[n - 1])});
}

DistortedSpectrum forward(double omega, const VectorField& F, const SpatialGrid& g, const FrequencyGrid& fg,
                          const TransformOptions& opt)
{
    if (F.upper.size() != g.n)
        throw GridMismatch("forward: field size does not match grid");
    check_boundary(F, opt);
    const auto [T, S] = potentials(omega, g.x);
    const Field& F1 = F.upper;
    const Field& F2 = F.lower;
    const Eigen::MatrixXcd A = hat(g, fg, {F1, T * F1, S * F1, F2, T * F2, S * F2});
    const double s = std::sqrt(omega);
    const Field dc = d_symbol(omega, fg.xi).conjugate();
    const Field xi = fg.xi.cast<cd>();
    const Field a1 = A.col(0), at1 = A.col(1), as1 = A.col(2), a2 = A.col(3), at2 = A.col(4), as2 = A.col(5);
    DistortedSpectrum out;
    out.omega_ref = omega;
    out.f_plus = (xi * xi * a1 - 2.0 * I * s * xi * at1 - omega * (a1 - as1) - omega * as2) / dc;
    out.f_minus = (omega * as1 - xi * xi * a2 + 2.0 * I * s * xi * at2 + omega * (a2 - as2)) / dc;
    return out;
}

VectorField inverse(const DistortedSpectrum& S, const FrequencyGrid& fg, const RealField& x,
                    const TransformOptions& opt)
{
    if (S.f_plus.size() != fg.m)
        throw GridMismatch("inverse: spectrum size does not match frequency grid");
    check_tail(S, opt);
    const double omega = S.omega_ref, s = std::sqrt(omega);
    const Field d = d_symbol(omega, fg.xi);
    const Field xi = fg.xi.cast<cd>();
    const Field p = S.f_plus / d, q = S.f_minus / d;
    Eigen::MatrixXcd in(fg.m, 6);
    in.col(0) = (xi * xi * p).matrix();
    in.col(1) = (xi * p).matrix();
    in.col(2) = p.matrix();
    in.col(3) = q.matrix();
    in.col(4) = (xi * xi * q).matrix();
    in.col(5) = (xi * q).matrix();
    const Eigen::MatrixXcd B = nonuniform_dft(x, fg.xi, 1.0, in) * (fg.dxi * inv_sqrt_2pi);
    const auto [T, Sx] = potentials(omega, x);
    const Field b0 = B.col(0), b1 = B.col(1), b2 = B.col(2), b3 = B.col(3), b4 = B.col(4), b5 = B.col(5);
    const Field T2 = T * T;
    VectorField v;
    v.upper = b0 + T * (2.0 * I * s) * b1 - omega * T2 * b2 - omega * Sx * b3;
    v.lower = omega * Sx * b2 - b4 - T * (2.0 * I * s) * b5 + omega * T2 * b3;
    v.j_invariant = false;
    return v;
}

std::pair<DiscreteCoefficients, VectorField> project_discrete(double omega, const VectorField& U, const SpatialGrid& g)
{
    const GeneralizedKernel k = generalized_eigenfunctions(omega, g);
    const VectorField s1 = sigma2(k.Y1), s2 = sigma2(k.Y2), s3 = sigma2(k.Y3), s4 = sigma2(k.Y4);
    DiscreteCoefficients c;
    c.d1 = inner(U, s2, g) / inner(k.Y1, s2, g);
    c.d2 = inner(U, s1, g) / inner(k.Y2, s1, g);
    c.d3 = inner(U, s4, g) / inner(k.Y3, s4, g);
    c.d4 = inner(U, s3, g) / inner(k.Y4, s3, g);
    VectorField pe = U - k.Y1 * c.d1 - k.Y2 * c.d2;
    pe.j_invariant = U.j_invariant;
    return {c, pe};
}

DistortedSpectrum propagate(const DistortedSpectrum& S, const FrequencyGrid& fg, double t)
{
    DistortedSpectrum out = S;
    for (Eigen::Index k = 0; k < fg.m; ++k) {
        const double ph = t * (fg.xi[k] * fg.xi[k] + S.omega_ref);
        out.f_plus[k] *= std::polar(1.0, ph);
        out.f_minus[k] *= std::polar(1.0, -ph);
    }
    return out;
}

VectorField evolve_field(double omega, const VectorField& F, double t, const SpatialGrid& g, const FrequencyGrid& fg,
                         const RealField& x_out, const TransformOptions& opt)
{
    return inverse(propagate(forward(omega, F, g, fg, opt), fg, t), fg, x_out, opt);
}

ActionIdentity sigma3_transform(double omega, const VectorField& F, const SpatialGrid& g, const FrequencyGrid& fg)
{
    TransformOptions opt;
    opt.boundary_tolerance = std::numeric_limits<double>::infinity();
    ActionIdentity id;
    id.base = forward(omega, F, g, fg, opt);
    id.direct = forward(omega, sigma3(F), g, fg, opt);
    const auto [T, S] = potentials(omega, g.x);
    const Eigen::MatrixXcd A = hat(g, fg, {S * F.lower, S * F.upper});
    const Field dc = d_symbol(omega, fg.xi).conjugate();
    id.extra_plus = 2.0 * omega * Field(A.col(0)) / dc;
    id.extra_minus = 2.0 * omega * Field(A.col(1)) / dc;
    id.residual = std::max((id.direct.f_plus - id.base.f_plus - id.extra_plus).abs().maxCoeff(),
                           (id.direct.f_minus + id.base.f_minus - id.extra_minus).abs().maxCoeff());
    return id;
}

ActionIdentity dx_transform(double omega, const VectorField& F, const SpatialGrid& g, const FrequencyGrid& fg)
{
    TransformOptions opt;
    opt.boundary_tolerance = std::numeric_limits<double>::infinity();
    ActionIdentity id;
    id.base = forward(omega, F, g, fg, opt);
    id.direct = forward(omega, VectorField{spectral_dx(F.upper, g), spectral_dx(F.lower, g)}, g, fg, opt);
    const auto [T, S] = potentials(omega, g.x);
    const Field& f1 = F.upper;
    const Field& f2 = F.lower;
    const Eigen::MatrixXcd A = hat(g, fg, {S * f1, T * S * f1, S * f2, T * S * f2});
    const Field as1 = A.col(0), ats1 = A.col(1), as2 = A.col(2), ats2 = A.col(3);
    const Field dc = d_symbol(omega, fg.xi).conjugate();
    const Field xi = fg.xi.cast<cd>();
    const double w32 = omega * std::sqrt(omega);
    id.extra_plus = -(-2.0 * I * omega * xi * as1 - 2.0 * w32 * ats1 + 2.0 * w32 * ats2) / dc;
    id.extra_minus = -(-2.0 * w32 * ats1 + 2.0 * I * omega * xi * as2 + 2.0 * w32 * ats2) / dc;
    id.residual = std::max((id.direct.f_plus - I * xi * id.base.f_plus - id.extra_plus).abs().maxCoeff(),
                           (id.direct.f_minus - I * xi * id.base.f_minus - id.extra_minus).abs().maxCoeff());
    return id;
}

XNorm x_norm_diagnostics(const DistortedSpectrum& S, const FrequencyGrid& fg)
{
    XNorm n;
    if (S.f_plus.size() == 0)
        return n;
    n.sup_plus = S.f_plus.abs().maxCoeff();
    n.sup_minus = S.f_minus.abs().maxCoeff();
    n.dxi_plus = std::sqrt(fd_dx(S.f_plus, fg.dxi).abs2().sum() * fg.dxi);
    n.dxi_minus = std::sqrt(fd_dx(S.f_minus, fg.dxi).abs2().sum() * fg.dxi);
    return n;
}

double conjugation_residual(const DistortedSpectrum& S, const FrequencyGrid& fg)
{
    const Field d = d_symbol(S.omega_ref, fg.xi);
    double r = 0.0;
    for (Eigen::Index k = 0; k < fg.m; ++k) {
        const Eigen::Index mk = fg.m - 1 - k;
        r = std::max(r, std::abs(S.f_minus[k] + d[k] / std::conj(d[k]) * std::conj(S.f_plus[mk])));
    }
    return r;
}

cd spectral_pairing(const DistortedSpectrum& a, const DistortedSpectrum& b, const FrequencyGrid& fg)
{
    return ((a.f_plus * b.f_plus.conjugate()).sum() - (a.f_minus * b.f_minus.conjugate()).sum()) * fg.dxi;
}

}
