#include "soliton_lab/operator.hpp"
#include "soliton_lab/hyperbolic.hpp"

#include <cmath>
#include <numbers>

namespace sl {

namespace {

const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

RealField sech_of(const RealField& y) { return y.unaryExpr([](double v) { return sech(v); }); }

void check_grid(const VectorField& v, const SpatialGrid& g)
{
    if (v.upper.size() != g.n || v.lower.size() != g.n)
        throw GridMismatch("apply_H: field has " + std::to_string(v.upper.size()) + " samples, grid has " +
                           std::to_string(g.n));
}

// amplitude (p + s T)^2 in the slot `slot`, -S in the other slot, e^{rate x}
JostSample jost_sample(cd p, double s, int slot, cd rate, double x)
{
    const double T = std::tanh(x), S = sech(x) * sech(x);
    const cd P = p + s * T;
    const cd dP = s * S;
    Eigen::Vector2cd amp, damp;
    amp[slot] = P * P;
    amp[1 - slot] = -S;
    damp[slot] = rate * P * P + 2.0 * P * dP;
    damp[1 - slot] = -rate * S + 2.0 * S * T;
    return {amp, damp, rate, x};
}

cd regularize(cd z, BranchMode mode)
{
    if (z.imag() == 0.0) {
        if (mode == BranchMode::strict && std::abs(z.real()) >= 1.0)
            throw BranchCutError("jost: z = " + std::to_string(z.real()) +
                                 " lies on the branch cut; request boundary-value mode");
        return {z.real(), +0.0};
    }
    return z;
}

}

RealField soliton_profile(double omega, const RealField& x)
{
    const double s = std::sqrt(omega);
    return std::sqrt(2.0 * omega) * sech_of(s * x);
}

RealField soliton_domega(double omega, const RealField& x)
{
    const double s = std::sqrt(omega);
    const RealField u = s * x;
    return std::sqrt(2.0) / (2.0 * s) * sech_of(u) * (1.0 - u * u.tanh());
}

RealField soliton_domega2(double omega, const RealField& x)
{
    const double s = std::sqrt(omega);
    const RealField u = s * x;
    const RealField T = u.tanh();
    const RealField sh = sech_of(u);
    const RealField S = sh * sh;
    return std::sqrt(2.0) / (4.0 * s * s * s) * sh * (-1.0 - u * T + u * u * (T * T - S));
}

VectorField apply_H(double omega, const VectorField& v, const SpatialGrid& g, Stencil stencil)
{
    check_grid(v, g);
    const RealField phi = soliton_profile(omega, g);
    const RealField p2 = phi * phi;
    Field d1, d2;
    if (stencil == Stencil::spectral) {
        d1 = spectral_dxx(v.upper, g);
        d2 = spectral_dxx(v.lower, g);
    } else {
        d1 = fd_dxx(v.upper, g.h);
        d2 = fd_dxx(v.lower, g.h);
    }
    Field up = -d1 + (omega - 2.0 * p2) * v.upper - p2 * v.lower;
    Field lo = d2 - (omega - 2.0 * p2) * v.lower + p2 * v.upper;
    return {up, lo, false};
}

GeneralizedKernel generalized_eigenfunctions(double omega, const SpatialGrid& g)
{
    const RealField phi = soliton_profile(omega, g);
    const RealField dphi = soliton_domega(omega, g.x);
    const double s = std::sqrt(omega);
    const RealField u = s * g.x;
    const RealField dx_phi = -std::sqrt(2.0 * omega) * s * sech_of(u) * u.tanh();
    GeneralizedKernel k;
    k.Y1 = {I * phi.cast<cd>(), -I * phi.cast<cd>(), true};
    k.Y2 = {dphi.cast<cd>(), dphi.cast<cd>(), true};
    k.Y3 = {dx_phi.cast<cd>(), dx_phi.cast<cd>(), true};
    const RealField xphi = g.x * phi;
    k.Y4 = {I * xphi.cast<cd>(), -I * xphi.cast<cd>(), true};
    return k;
}

std::array<VectorField, 2> kernel_domega(double omega, const SpatialGrid& g)
{
    const RealField d1 = soliton_domega(omega, g.x);
    const RealField d2 = soliton_domega2(omega, g.x);
    return {VectorField{I * d1.cast<cd>(), -I * d1.cast<cd>(), true}, VectorField{d2.cast<cd>(), d2.cast<cd>(), true}};
}

ThresholdResonances threshold_resonances(double omega, const SpatialGrid& g)
{
    const RealField y = std::sqrt(omega) * g.x;
    const RealField T = y.tanh();
    const RealField sh = sech_of(y);
    Field a = (T * T).cast<cd>();
    Field b = (-sh * sh).cast<cd>();
    return {VectorField{a, b, false}, VectorField{b, a, false}};
}

cd kappa_minus(cd z) { return I * std::sqrt(cd(z.real() - 1.0, z.imag())); }
cd kappa_plus(cd z) { return I * std::sqrt(cd(-1.0 - z.real(), -z.imag())); }

JostQuadruple jost_at(cd z, double x, BranchMode mode)
{
    z = regularize(z, mode);
    const cd a = kappa_minus(z), b = kappa_plus(z);
    JostQuadruple q;
    q.z = z;
    q.a = a;
    q.b = b;
    q.f1 = jost_sample(a, -1.0, 0, a, x);
    q.g2 = jost_sample(a, +1.0, 0, -a, x);
    q.f3 = jost_sample(b, +1.0, 1, -b, x);
    q.g4 = jost_sample(b, -1.0, 1, b, x);
    return q;
}

JostSolutions jost_solutions(cd z, const SpatialGrid& g, BranchMode mode)
{
    JostSolutions out;
    out.z = regularize(z, mode);
    auto alloc = [&] { return VectorField{Field(g.n), Field(g.n), false}; };
    out.f1 = alloc();
    out.f3 = alloc();
    out.g2 = alloc();
    out.g4 = alloc();
    for (int j = 0; j < g.n; ++j) {
        const JostQuadruple q = jost_at(out.z, g.x[j], mode);
        auto put = [j](VectorField& v, const JostSample& s) {
            const Eigen::Vector2cd val = s.value();
            v.upper[j] = val[0];
            v.lower[j] = val[1];
        };
        put(out.f1, q.f1);
        put(out.f3, q.f3);
        put(out.g2, q.g2);
        put(out.g4, q.g4);
    }
    return out;
}

cd wronskian(const JostSample& f, const JostSample& g)
{
    const cd e = std::exp((f.rate + g.rate) * f.x);
    return (f.damp.cwiseProduct(g.amp).sum() - f.amp.cwiseProduct(g.damp).sum()) * e;
}

WronskianSamples wronskian_samples(JostPair pair, cd z, const RealField& x, BranchMode mode)
{
    WronskianSamples out;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const JostQuadruple q = jost_at(z, x[j], mode);
        const JostSample *f = nullptr, *g = nullptr;
        switch (pair) {
        case JostPair::f1_g2: f = &q.f1; g = &q.g2; break;
        case JostPair::f3_g4: f = &q.f3; g = &q.g4; break;
        case JostPair::f1_g4: f = &q.f1; g = &q.g4; break;
        case JostPair::f3_g2: f = &q.f3; g = &q.g2; break;
        }
        if (std::exp((f->rate + g->rate).real() * x[j]) > 1.0)
            continue;
        out.x.push_back(x[j]);
        out.w.push_back(wronskian(*f, *g));
    }
    return out;
}

cd wronskian_closed_form(JostPair pair, cd z, BranchMode mode)
{
    z = regularize(z, mode);
    switch (pair) {
    case JostPair::f1_g2: return 2.0 * z * z * kappa_minus(z);
    case JostPair::f3_g4: return -2.0 * z * z * kappa_plus(z);
    default: return 0.0;
    }
}

Mat2 resolvent_kernel(cd z, double x, double y, BranchMode mode)
{
    if (std::abs(z) < 1e-12)
        throw std::domain_error("resolvent_kernel: z = 0 is an eigenvalue of H(1)");
    if (z.imag() < 0.0)
        return resolvent_kernel(std::conj(z), x, y, mode).conjugate();
    const JostQuadruple qx = jost_at(z, x, mode);
    const JostQuadruple qy = jost_at(z, y, mode);
    const cd zz = qx.z * qx.z;
    const cd wa = 2.0 * zz * qx.a, wb = -2.0 * zz * qx.b;
    Mat2 r;
    if (x >= y) {
        r = qx.f1.amp * qy.g2.amp.transpose() * (std::exp(qx.a * (x - y)) / wa) +
            qx.f3.amp * qy.g4.amp.transpose() * (std::exp(-qx.b * (x - y)) / wb);
    } else {
        r = qx.g2.amp * qy.f1.amp.transpose() * (std::exp(qx.a * (y - x)) / wa) +
            qx.g4.amp * qy.f3.amp.transpose() * (std::exp(-qx.b * (y - x)) / wb);
    }
    r = -r;
    r.col(1) = -r.col(1);
    return r;
}

Mat2 jump_kernel(double xi, double x, double y)
{
    auto E = [xi](double s) {
        const double T = std::tanh(s), S = sech(s) * sech(s);
        const cd den = (xi - I) * (xi - I);
        Mat2 e;
        const cd ep = std::exp(I * s * xi) / den, em = std::exp(-I * s * xi) / den;
        e(0, 0) = ep * (xi + I * T) * (xi + I * T);
        e(1, 0) = ep * S;
        e(0, 1) = em * (xi - I * T) * (xi - I * T);
        e(1, 1) = em * S;
        return e;
    };
    Mat2 k = E(x) * E(y).adjoint() * (-1.0 / (2.0 * I * xi));
    k.col(1) = -k.col(1);
    return k;
}

cd m1_symbol(double omega, double x, double xi)
{
    const double s = std::sqrt(omega);
    const cd d = (std::abs(xi) - I * s) * (std::abs(xi) - I * s);
    const cd n = xi + I * s * std::tanh(s * x);
    return n * n / d;
}

cd m2_symbol(double omega, double x, double xi)
{
    const double s = std::sqrt(omega);
    const cd d = (std::abs(xi) - I * s) * (std::abs(xi) - I * s);
    const double sh = sech(s * x);
    return omega * sh * sh / d;
}

PsiPair psi_basis(double omega, double x, double xi)
{
    const cd e = std::exp(I * x * xi) * inv_sqrt_2pi;
    const cd p1 = m1_symbol(omega, x, xi) * e, p2 = m2_symbol(omega, x, xi) * e;
    return {Eigen::Vector2cd(p1, p2), Eigen::Vector2cd(p2, p1)};
}

VectorField psi_plus(double omega, double xi, const SpatialGrid& g)
{
    VectorField v{Field(g.n), Field(g.n), false};
    for (int j = 0; j < g.n; ++j) {
        const cd e = std::exp(I * g.x[j] * xi) * inv_sqrt_2pi;
        v.upper[j] = m1_symbol(omega, g.x[j], xi) * e;
        v.lower[j] = m2_symbol(omega, g.x[j], xi) * e;
    }
    return v;
}

VectorField psi_minus(double omega, double xi, const SpatialGrid& g) { return sigma1(psi_plus(omega, xi, g)); }

std::vector<SymbolTerm> symbol_terms(double omega)
{
    const double s = std::sqrt(omega);
    return {{1, XFactor::one, 1.0, 2},
            {1, XFactor::tanh, 2.0 * I * s, 1},
            {1, XFactor::tanh2, -omega, 0},
            {2, XFactor::sech2, omega, 0}};
}

double x_factor(XFactor a, double y)
{
    switch (a) {
    case XFactor::one: return 1.0;
    case XFactor::tanh: return std::tanh(y);
    case XFactor::tanh2: return std::tanh(y) * std::tanh(y);
    case XFactor::sech2: return sech(y) * sech(y);
    }
    return 0.0;
}

cd eval_symbol_terms(const std::vector<SymbolTerm>& terms, int component, double omega, double x, double xi)
{
    const double s = std::sqrt(omega);
    const cd d = (std::abs(xi) - I * s) * (std::abs(xi) - I * s);
    cd acc = 0.0;
    for (const auto& t : terms)
        if (t.component == component)
            acc += x_factor(t.a, s * x) * t.coeff * std::pow(xi, t.xi_power) / d;
    return acc;
}

}
