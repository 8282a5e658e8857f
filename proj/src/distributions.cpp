#include "soliton_lab/distributions.hpp"
#include "soliton_lab/hyperbolic.hpp"
#include "soliton_lab/operator.hpp"
#include "soliton_lab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sl {

namespace {

using std::numbers::pi;

int poly_index(int e0, int e1, int e2, int e3) { return e0 + 3 * e1 + 9 * e2 + 27 * e3; }

// (p + T q) in the ring with T^2 = 1 - S; slot [t][l] holds the coefficient of T^t S^l
using SeriesTS = std::array<std::array<Poly4, 5>, 2>;

SeriesTS zero_series()
{
    SeriesTS s;
    for (auto& row : s)
        for (auto& p : row)
            p.fill(0.0);
    return s;
}

Poly4 poly_mul(const Poly4& a, const Poly4& b)
{
    Poly4 c;
    c.fill(0.0);
    for (int i = 0; i < 81; ++i) {
        if (a[i] == 0.0)
            continue;
        const int ai[4] = {i % 3, i / 3 % 3, i / 9 % 3, i / 27};
        for (int j = 0; j < 81; ++j) {
            if (b[j] == 0.0)
                continue;
            const int bj[4] = {j % 3, j / 3 % 3, j / 9 % 3, j / 27};
            int e[4];
            bool ok = true;
            for (int v = 0; v < 4; ++v) {
                e[v] = ai[v] + bj[v];
                ok = ok && e[v] <= 2;
            }
            if (!ok)
                throw std::logic_error("poly_mul: exponent overflow");
            c[poly_index(e[0], e[1], e[2], e[3])] += a[i] * b[j];
        }
    }
    return c;
}

void poly_add(Poly4& acc, const Poly4& p, cd s)
{
    for (int i = 0; i < 81; ++i)
        acc[i] += s * p[i];
}

SeriesTS series_mul(const SeriesTS& a, const SeriesTS& b)
{
    SeriesTS c = zero_series();
    for (int ta = 0; ta < 2; ++ta)
        for (int la = 0; la < 5; ++la)
            for (int tb = 0; tb < 2; ++tb)
                for (int lb = 0; lb + la < 5; ++lb) {
                    const Poly4 prod = poly_mul(a[ta][la], b[tb][lb]);
                    const int l = la + lb;
                    if (ta + tb < 2) {
                        poly_add(c[ta + tb][l], prod, 1.0);
                    } else {
                        poly_add(c[0][l], prod, 1.0);
                        if (l + 1 < 5)
                            poly_add(c[0][l + 1], prod, -1.0);
                    }
                }
    return c;
}

// (a_v + i sign T)^2 = (a_v^2 - 1) + S + 2 i sign a_v T
SeriesTS factor(int v, double sign)
{
    SeriesTS f = zero_series();
    int e2[4] = {0, 0, 0, 0}, e1[4] = {0, 0, 0, 0};
    e2[v] = 2;
    e1[v] = 1;
    f[0][0][poly_index(e2[0], e2[1], e2[2], e2[3])] = 1.0;
    f[0][0][0] += -1.0;
    f[0][1][0] = 1.0;
    f[1][0][poly_index(e1[0], e1[1], e1[2], e1[3])] = 2.0 * I * sign;
    return f;
}

CubicExpansion build_expansion()
{
    SeriesTS h = factor(0, -1.0);
    h = series_mul(h, factor(1, +1.0));
    h = series_mul(h, factor(2, -1.0));
    h = series_mul(h, factor(3, +1.0));
    CubicExpansion e;
    for (int l = 0; l < 5; ++l) {
        e.P[l] = h[0][l];
        for (int i = 0; i < 81; ++i)
            e.Q[l][i] = h[1][l][i] / I;
    }
    return e;
}

// monomial coefficients by tensor interpolation on {-1, 0, 1}^4
Poly4 interpolate(const std::function<cd(const Quad&)>& f)
{
    Poly4 vals;
    const double nodes[3] = {-1.0, 0.0, 1.0};
    for (int i = 0; i < 81; ++i)
        vals[i] = f({nodes[i % 3], nodes[i / 3 % 3], nodes[i / 9 % 3], nodes[i / 27]});
    int stride = 1;
    for (int v = 0; v < 4; ++v, stride *= 3) {
        Poly4 next = vals;
        for (int i = 0; i < 81; ++i) {
            if ((i / stride) % 3 != 0)
                continue;
            const cd pm = vals[i], p0 = vals[i + stride], pp = vals[i + 2 * stride];
            next[i] = p0;
            next[i + stride] = (pp - pm) / 2.0;
            next[i + 2 * stride] = (pp + pm) / 2.0 - p0;
        }
        vals = next;
    }
    return vals;
}

cd abs_minus_i_sq(double k)
{
    const cd a(std::abs(k), -1.0);
    return a * a;
}

struct Sampled {
    std::vector<double> x, w;
    std::vector<cd> g;
};

Sampled sample(const GaussRule& r, const TestFunction& f, bool conjugate)
{
    Sampled s{r.x, r.w, {}};
    s.g.resize(r.x.size());
    for (std::size_t i = 0; i < r.x.size(); ++i)
        s.g[i] = conjugate ? std::conj(f(r.x[i])) : f(r.x[i]);
    return s;
}

// int int int W(xi, xi1, xi2, xi3) conj g0(xi) g1(xi1) conj g2(xi2) g3(xi3), xi = eta + xi1 - xi2 + xi3
cd triple_integral(double omega, double eta, const std::function<cd(const Quad&)>& weight, const TestFunction& g0,
                   const Sampled& s1, const Sampled& s2, const TestFunction& g3, const PairingConfig& cfg)
{
    const double r = cfg.xi_max, rs = 1.0 / std::sqrt(omega);
    const std::size_t n1 = s1.x.size(), n2 = s2.x.size();
    std::vector<cd> partial(n1 * n2);
    parallel_for(static_cast<std::ptrdiff_t>(n1), [&](std::ptrdiff_t i) {
        for (std::size_t j = 0; j < n2; ++j) {
            const double k1 = s1.x[i], k2 = s2.x[j];
            const GaussRule inner = composite_rule(-r, r, {0.0, k2 - k1 - eta}, cfg.panel_width, cfg.order);
            cd acc = 0.0;
            for (std::size_t k = 0; k < inner.x.size(); ++k) {
                const double k3 = inner.x[k];
                const double k0 = eta + k1 - k2 + k3;
                acc += inner.w[k] * weight({k0 * rs, k1 * rs, k2 * rs, k3 * rs}) * std::conj(g0(k0)) * g3(k3);
            }
            partial[i * n2 + j] = acc * s1.w[i] * s2.w[j] * s1.g[i] * s2.g[j];
        }
    });
    cd total = 0.0;
    for (const cd& p : partial)
        total += p;
    return total;
}

}

GaussRule gauss_legendre(int n)
{
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.x[i] = -x;
        r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

GaussRule composite_rule(double a, double b, std::vector<double> breaks, double max_width, int order)
{
    thread_local std::vector<GaussRule> cache(65);
    if (order < 1 || order > 64)
        throw std::invalid_argument("composite_rule: order must be in 1..64");
    if (cache[order].x.empty())
        cache[order] = gauss_legendre(order);
    const GaussRule& base = cache[order];
    std::vector<double> pts{a};
    std::sort(breaks.begin(), breaks.end());
    for (double c : breaks)
        if (c > a && c < b && c > pts.back())
            pts.push_back(c);
    pts.push_back(b);
    GaussRule out;
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        const double len = pts[s + 1] - pts[s];
        const int panels = std::max(1, static_cast<int>(std::ceil(len / max_width - 1e-12)));
        const double w = len / panels;
        for (int p = 0; p < panels; ++p) {
            const double lo = pts[s] + p * w;
            for (int k = 0; k < order; ++k) {
                out.x.push_back(lo + 0.5 * w * (base.x[k] + 1.0));
                out.w.push_back(0.5 * w * base.w[k]);
            }
        }
    }
    return out;
}

cd q1_tilde(double omega, double xi)
{
    const double s = std::sqrt(omega);
    const cd d = (std::abs(xi) + I * s) * (std::abs(xi) + I * s);
    return (s - std::abs(xi)) * (s + std::abs(xi)) / (24.0 * std::sqrt(pi)) * xi * xi * (omega + xi * xi) / (omega * omega * d) *
           sech(pi * xi / (2.0 * s));
}

QuadraticCoefficients quadratic_coefficients(double omega, const SpatialGrid& g)
{
    const RealField phi = soliton_profile(omega, g);
    const RealField y = std::sqrt(omega) * g.x;
    const RealField sh = y.unaryExpr([](double v) { return sech(v); });
    const double c = 1.0 / std::sqrt(2.0 * pi);
    const RealField P1 = c * y.tanh().square();
    const RealField P2 = -c * sh * sh;
    QuadraticCoefficients q;
    const RealField a1 = -phi * (P1 * P1 + 2.0 * P1 * P2), b1 = phi * (P2 * P2 + 2.0 * P1 * P2);
    const RealField a2 = 2.0 * phi * (P1 * P1 + P2 * P2 + P1 * P2);
    const RealField a3 = -phi * (P2 * P2 + 2.0 * P1 * P2), b3 = phi * (P1 * P1 + 2.0 * P1 * P2);
    q.Q1 = {a1.cast<cd>(), b1.cast<cd>(), false};
    q.Q2 = {a2.cast<cd>(), (-a2).cast<cd>(), false};
    q.Q3 = {a3.cast<cd>(), b3.cast<cd>(), false};
    return q;
}

NuKernels nu_kernels(double omega, double xi1, double xi2)
{
    const double s = std::sqrt(omega);
    const cd d1 = (std::abs(xi1) - I * s) * (std::abs(xi1) - I * s);
    const cd d2 = (std::abs(xi2) - I * s) * (std::abs(xi2) - I * s);
    const double zc = z_cosech((xi1 + xi2) / s, pi / 2.0);
    const cd common = s / 12.0 / (d1 * d2) * zc;
    NuKernels n;
    n.pp = (xi1 * xi1 + xi2 * xi2 + 2.0 * omega) * (xi1 * xi1 - 4.0 * xi1 * xi2 + xi2 * xi2 - 2.0 * omega) * common;
    n.pm = (xi1 * xi1 - xi2 * xi2) * (xi1 * xi1 + 2.0 * xi1 * xi2 + xi2 * xi2 + 4.0 * omega) * common;
    n.mm = -n.pp;
    return n;
}

cd cubic_p(const Quad& k)
{
    auto plus = [](double v) { return (std::abs(v) + I) * (std::abs(v) + I); };
    auto minus = [](double v) { return (std::abs(v) - I) * (std::abs(v) - I); };
    return plus(k[0]) * minus(k[1]) * plus(k[2]) * minus(k[3]);
}

cd cubic_p1(const Quad& k)
{
    const double a = k[0], b = k[1], c = k[2], d = k[3];
    const double A = a * a - 1, B = b * b - 1, C = c * c - 1, D = d * d - 1;
    return A * B * C * D + 16.0 * a * b * c * d +
           4.0 * (a * b * C * D - a * B * c * D + a * B * C * d + A * b * c * D - A * b * C * d + A * B * c * d);
}

cd cubic_p2(const Quad& k)
{
    const double a = k[0], b = k[1], c = k[2], d = k[3];
    const double A = a * a - 1, B = b * b - 1, C = c * c - 1, D = d * d - 1;
    return 2.0 * (A * b * C * D - A * B * c * D + A * B * C * d - a * B * C * D) +
           8.0 * (A * b * c * d - a * B * c * d + a * b * C * d - a * b * c * D);
}

SymbolRatios cubic_symbol_ratios(double xi, double xi1, double xi2, double xi3)
{
    const Quad k{xi, xi1, xi2, xi3};
    const cd p = cubic_p(k);
    return {cubic_p1(k) / p, cubic_p2(k) / p};
}

cd eval_poly(const Poly4& p, const Quad& k)
{
    double pw[4][3];
    for (int v = 0; v < 4; ++v) {
        pw[v][0] = 1.0;
        pw[v][1] = k[v];
        pw[v][2] = k[v] * k[v];
    }
    cd acc = 0.0;
    for (int i = 0; i < 81; ++i)
        if (p[i] != 0.0)
            acc += p[i] * (pw[0][i % 3] * pw[1][i / 3 % 3] * pw[2][i / 9 % 3] * pw[3][i / 27]);
    return acc;
}

const CubicExpansion& cubic_expansion()
{
    static const CubicExpansion e = build_expansion();
    return e;
}

std::vector<SeparableTerm> separable_terms(int which)
{
    if (which != 1 && which != 2)
        throw std::invalid_argument("separable_terms: which must be 1 or 2");
    const Poly4 c = interpolate(which == 1 ? cubic_p1 : cubic_p2);
    std::vector<SeparableTerm> out;
    for (int i = 0; i < 81; ++i)
        if (std::abs(c[i]) > 0.5)
            out.push_back({c[i], {i % 3, i / 3 % 3, i / 9 % 3, i / 27}});
    return out;
}

cd b_multiplier(int p, double xi) { return std::pow(xi, p) / abs_minus_i_sq(xi); }

cd eval_separable(const std::vector<SeparableTerm>& terms, const Quad& k)
{
    cd acc = 0.0;
    for (const auto& t : terms)
        acc += t.coeff * std::conj(b_multiplier(t.power[0], k[0])) * b_multiplier(t.power[1], k[1]) *
               std::conj(b_multiplier(t.power[2], k[2])) * b_multiplier(t.power[3], k[3]);
    return acc;
}

cd mu_1111_direct(double omega, const TestFunction& g0, const TestFunction& g1, const TestFunction& g2,
                  const TestFunction& g3, const PairingConfig& cfg)
{
    const double width = std::min(cfg.panel_width, 12.0 / cfg.x_max);
    const GaussRule r = composite_rule(-cfg.xi_max, cfg.xi_max, {0.0}, width, cfg.order);
    const int nx = static_cast<int>(std::lround(2.0 * cfg.x_max / cfg.dx)) + 1;
    const double s = std::sqrt(omega), c = 1.0 / std::sqrt(2.0 * pi);
    const std::size_t nk = r.x.size();
    std::vector<std::array<cd, 3>> coef[4];
    const TestFunction* g[4] = {&g0, &g1, &g2, &g3};
    for (int j = 0; j < 4; ++j) {
        coef[j].resize(nk);
        for (std::size_t k = 0; k < nk; ++k) {
            const double xi = r.x[k];
            const cd d = cd(std::abs(xi), -s) * cd(std::abs(xi), -s);
            const cd base = r.w[k] * (*g[j])(xi) / d * c;
            coef[j][k] = {base * xi * xi, base * 2.0 * I * s * xi, -base * omega};
        }
    }
    std::vector<cd> vals(nx);
    parallel_for(nx, [&](std::ptrdiff_t ix) {
        const double x = -cfg.x_max + ix * cfg.dx;
        const double T = std::tanh(s * x);
        cd a[4];
        for (int j = 0; j < 4; ++j) {
            cd b0 = 0.0, b1 = 0.0, b2 = 0.0;
            for (std::size_t k = 0; k < nk; ++k) {
                const cd e = std::polar(1.0, x * r.x[k]);
                b0 += coef[j][k][0] * e;
                b1 += coef[j][k][1] * e;
                b2 += coef[j][k][2] * e;
            }
            a[j] = b0 + T * b1 + T * T * b2;
        }
        const double w = (ix == 0 || ix == nx - 1) ? 0.5 : 1.0;
        vals[ix] = w * cfg.dx * std::conj(a[0]) * a[1] * std::conj(a[2]) * a[3];
    });
    cd total = 0.0;
    for (const cd& v : vals)
        total += v;
    return total;
}

PairingResult mu_1111_pairing(double omega, const TestFunction& g0, const TestFunction& g1, const TestFunction& g2,
                              const TestFunction& g3, const PairingConfig& cfg)
{
    PairingResult out;
    out.direct = mu_1111_direct(omega, g0, g1, g2, g3, cfg);

    const double r = cfg.xi_max, s = std::sqrt(omega);
    const GaussRule outer = composite_rule(-r, r, {0.0}, cfg.panel_width, cfg.order);
    const Sampled s1 = sample(outer, g1, false), s2 = sample(outer, g2, true);

    auto ratio1 = [](const Quad& k) { return cubic_p1(k) / cubic_p(k); };
    auto ratio2 = [](const Quad& k) { return cubic_p2(k) / cubic_p(k); };
    out.delta_part = triple_integral(omega, 0.0, ratio1, g0, s1, s2, g3, cfg) / (2.0 * pi);

    const double a = pi / (2.0 * s);
    const GaussRule eta = composite_rule(0.0, cfg.eta_max, {}, 2.0 * cfg.panel_width, cfg.order);
    cd pv = 0.0;
    for (std::size_t k = 0; k < eta.x.size(); ++k) {
        const double e = eta.x[k];
        const cd gp = triple_integral(omega, e, ratio2, g0, s1, s2, g3, cfg);
        const cd gm = triple_integral(omega, -e, ratio2, g0, s1, s2, g3, cfg);
        pv += eta.w[k] * z_cosech(e, a) * (gp - gm) / e;
    }
    out.pv_part = pv * std::pow(2.0 * pi, -1.5) * std::sqrt(pi / (2.0 * omega));

    // regular part on a tensor grid, contracted pairwise
    const CubicExpansion& ex = cubic_expansion();
    const GaussRule rr = composite_rule(-r, r, {0.0}, 2.0 * cfg.panel_width, cfg.order);
    const std::size_t n = rr.x.size();
    auto side = [&](const TestFunction& ga, bool conj_a, const TestFunction& gb, bool conj_b) {
        std::vector<std::array<cd, 9>> v(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double ka = rr.x[i] / s, kb = rr.x[j] / s;
                const cd da = conj_a ? std::conj(abs_minus_i_sq(ka)) : abs_minus_i_sq(ka);
                const cd db = conj_b ? std::conj(abs_minus_i_sq(kb)) : abs_minus_i_sq(kb);
                const cd va = conj_a ? std::conj(ga(rr.x[i])) : ga(rr.x[i]);
                const cd vb = conj_b ? std::conj(gb(rr.x[j])) : gb(rr.x[j]);
                const cd base = rr.w[i] * rr.w[j] * va * vb / (da * db);
                const double pa[3] = {1.0, ka, ka * ka}, pb[3] = {1.0, kb, kb * kb};
                for (int ea = 0; ea < 3; ++ea)
                    for (int eb = 0; eb < 3; ++eb)
                        v[i * n + j][ea + 3 * eb] = base * pa[ea] * pb[eb];
            }
        return v;
    };
    const auto left = side(g0, true, g1, false);
    const auto right = side(g2, true, g3, false);
    // Z[l][kind][cd] = sum_ab coef[ab + 9 cd] left[ab]
    std::vector<cd> reg_rows(n * n);
    parallel_for(static_cast<std::ptrdiff_t>(n * n), [&](std::ptrdiff_t ij) {
        const std::size_t i = ij / n, j = ij % n;
        std::array<std::array<std::array<cd, 9>, 2>, 4> z{};
        for (int l = 1; l <= 4; ++l)
            for (int kind = 0; kind < 2; ++kind) {
                const Poly4& p = kind == 0 ? ex.P[l] : ex.Q[l];
                for (int cdx = 0; cdx < 9; ++cdx) {
                    cd acc = 0.0;
                    for (int ab = 0; ab < 9; ++ab)
                        acc += p[ab + 9 * cdx] * left[ij][ab];
                    z[l - 1][kind][cdx] = acc;
                }
            }
        cd acc = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t m = 0; m < n; ++m) {
                const auto& y = right[k * n + m];
                const double eta_s = (rr.x[i] - rr.x[j] + rr.x[k] - rr.x[m]) / s;
                const double base = std::sqrt(pi / 2.0) * z_cosech(eta_s, pi / 2.0);
                const double e2 = eta_s * eta_s;
                const double ft[4] = {base, (4 + e2) / 6 * base, (4 + e2) * (16 + e2) / 120 * base,
                                      (4 + e2) * (16 + e2) * (36 + e2) / 5040 * base};
                for (int l = 0; l < 4; ++l) {
                    cd sp = 0.0, sq = 0.0;
                    for (int cdx = 0; cdx < 9; ++cdx) {
                        sp += z[l][0][cdx] * y[cdx];
                        sq += z[l][1][cdx] * y[cdx];
                    }
                    // P_l ft(2l) + i Q_l ft_tanh(2l), ft_tanh(2l) = -i eta ft(2l) / (2l)
                    acc += ft[l] * (sp + sq * eta_s / (2.0 * (l + 1)));
                }
            }
        reg_rows[ij] = acc;
    });
    cd reg = 0.0;
    for (const cd& v : reg_rows)
        reg += v;
    out.reg_part = reg / (std::pow(2.0 * pi, 1.5) * s);
    return out;
}

}
