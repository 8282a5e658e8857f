#include "soliton_lab/scattering.hpp"
#include "soliton_lab/hyperbolic.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace sl {

namespace {

using std::numbers::pi;

TransformOptions relaxed()
{
    TransformOptions o;
    o.boundary_tolerance = std::numeric_limits<double>::infinity();
    o.tail_tolerance = std::numeric_limits<double>::infinity();
    return o;
}

std::size_t nearest(const std::vector<double>& t, double target)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::abs(t[i] - target) < std::abs(t[best] - target))
            best = i;
    return best;
}

}

DecayReport decay_fit(const std::vector<double>& t, const std::vector<double>& v, double t_min, double t_max,
                      const std::string& law, double band_lo, double band_hi)
{
    DecayReport r;
    r.law = law;
    r.t_min = t_min;
    r.t_max = t_max;
    r.band_lo = band_lo;
    r.band_hi = band_hi;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < t.size() && i < v.size(); ++i)
        if (t[i] >= t_min && t[i] <= t_max && t[i] > 0.0 && v[i] > 0.0) {
            lx.push_back(std::log(t[i]));
            ly.push_back(std::log(v[i]));
        }
    r.samples = static_cast<int>(lx.size());
    if (r.samples < 8) {
        r.skipped = true;
        return r;
    }
    const Eigen::Map<const Eigen::ArrayXd> X(lx.data(), r.samples), Y(ly.data(), r.samples);
    const double mx = X.mean(), my = Y.mean();
    const double sxx = (X - mx).square().sum();
    r.exponent = ((X - mx) * (Y - my)).sum() / sxx;
    const double intercept = my - r.exponent * mx;
    r.residual = std::sqrt((Y - intercept - r.exponent * X).square().mean());
    r.pass = r.exponent >= band_lo && r.exponent <= band_hi;
    return r;
}

std::vector<double> theta_series(const ModulationTrace& trace, double omega_bar)
{
    std::vector<double> theta(trace.rows.size(), 0.0);
    for (std::size_t k = 1; k < trace.rows.size(); ++k) {
        const auto& a = trace.rows[k - 1];
        const auto& b = trace.rows[k];
        const double fa = a.gamma_dot_minus_omega + a.omega - omega_bar;
        const double fb = b.gamma_dot_minus_omega + b.omega - omega_bar;
        theta[k] = theta[k - 1] + 0.5 * (b.t - a.t) * (fa + fb);
    }
    return theta;
}

ProfileSeries extract_profile(const ModulationTrace& trace, const Trajectory& tr, double omega_bar, const SpatialGrid& g,
                              const FrequencyGrid& fg, const std::vector<std::size_t>& snapshots, double taper)
{
    ProfileSeries p;
    p.omega_bar = omega_bar;
    const std::vector<double> theta = theta_series(trace, omega_bar);
    const TransformOptions opt = relaxed();
    const double a = taper * g.half_length, b = g.half_length;
    const Field window = g.x.unaryExpr([&](double x) { return taper >= 1.0 ? 1.0 : chi0(std::max(1.0, 1.0 + (std::abs(x) - a) / (b - a))); }).cast<cd>();
    for (std::size_t s : snapshots) {
        const TraceRow& row = trace.rows.at(s);
        if (!row.ok)
            continue;
        const Field u = std::polar(1.0, -row.gamma) * tr.fields.at(s) - soliton_profile(row.omega, g).cast<cd>();
        const VectorField U = VectorField::from_scalar(u);
        auto [c, pe] = project_discrete(omega_bar, U, g);
        p.times.push_back(row.t);
        p.theta.push_back(theta[s]);
        p.d1.push_back(c.d1);
        p.d2.push_back(c.d2);
        p.boundary_mass.push_back(boundary_magnitude(pe));
        pe.upper *= window;
        pe.lower *= window;
        p.spectra.push_back(propagate(forward(omega_bar, pe, g, fg, opt), fg, row.t));
    }
    return p;
}

double chi0(double xi)
{
    const double a = std::abs(xi);
    if (a <= 1.0)
        return 1.0;
    if (a >= 2.0)
        return 0.0;
    const double s = a - 1.0;
    return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

LocalDecaySplit local_decay_split(const DistortedSpectrum& profile, double t, const FrequencyGrid& fg,
                                  const RealField& x)
{
    const double w = profile.omega_ref, s = std::sqrt(w);
    LocalDecaySplit out{0.0, 0.0, {}, {}};
    for (Eigen::Index k = 0; k < fg.m; ++k) {
        const double xi = fg.xi[k], c = chi0(xi) * fg.dxi;
        if (c == 0.0)
            continue;
        out.h1 += c * std::polar(1.0, -t * xi * xi) * profile.f_plus[k];
        out.h2 += c * std::polar(1.0, t * xi * xi) * profile.f_minus[k];
    }
    out.h1 *= std::polar(1.0, -t * w);
    out.h2 *= std::polar(1.0, t * w);
    const VectorField ue = inverse(propagate(profile, fg, -t), fg, x, relaxed());
    const RealField y = s * x;
    const RealField T = y.tanh();
    const RealField sh = y.unaryExpr([](double v) { return sech(v); });
    const Field phi1 = (T * T / std::sqrt(2.0 * pi)).cast<cd>();
    const Field phi2 = (-sh * sh / std::sqrt(2.0 * pi)).cast<cd>();
    out.R_u = ue.upper - out.h1 * phi1 + out.h2 * phi2;
    out.R_ubar = ue.lower - out.h1 * phi2 + out.h2 * phi1;
    return out;
}

std::vector<Field> w_plus(const ProfileSeries& p)
{
    std::vector<Field> w;
    if (p.spectra.empty())
        return w;
    Eigen::ArrayXd Theta = Eigen::ArrayXd::Zero(p.spectra.front().f_plus.size());
    bool started = false;
    for (std::size_t k = 0; k < p.spectra.size(); ++k) {
        const Field& f = p.spectra[k].f_plus;
        if (p.times[k] >= 1.0) {
            if (started) {
                const Field& fp = p.spectra[k - 1].f_plus;
                const double a = p.times[k - 1], b = p.times[k];
                Theta += 0.25 * (b - a) * (fp.abs2() / a + f.abs2() / b);
            }
            started = true;
        }
        w.push_back(f * std::polar(1.0, p.theta[k]) * (I * Theta).exp());
    }
    return w;
}

ScatteringReport modified_scattering_check(const ProfileSeries& p, int pairs, double slack)
{
    ScatteringReport r;
    r.slack = slack;
    if (p.times.size() < 8) {
        r.skipped = true;
        return r;
    }
    const std::vector<Field> w = w_plus(p);
    for (std::size_t k = 0; k < w.size(); ++k)
        r.modulus_defect = std::max(r.modulus_defect, (w[k].abs() - p.spectra[k].f_plus.abs()).abs().maxCoeff());
    const double T = p.times.back();
    for (int k = pairs - 1; k >= 0; --k) {
        const double hi = T / std::pow(2.0, k), lo = hi / 2.0;
        const std::size_t ih = nearest(p.times, hi), il = nearest(p.times, lo);
        r.t_lo.push_back(p.times[il]);
        r.t_hi.push_back(p.times[ih]);
        r.differences.push_back((w[ih] - w[il]).abs().maxCoeff());
    }
    r.monotone = true;
    for (std::size_t k = 1; k < r.differences.size(); ++k)
        if (r.differences[k] > (1.0 + slack) * r.differences[k - 1])
            r.monotone = false;
    return r;
}

cd asymptotic_formula(double t, double x, double omega_inf, const SpectralFunction& W_plus,
                      const SpectralFunction& W_minus, double theta_inf)
{
    const double xi = x / (2.0 * t), pre = 1.0 / std::sqrt(2.0 * t), lt = std::log(t);
    const cd wp = W_plus(xi), wm = W_minus(-xi);
    const cd a = pre * std::polar(1.0, -t * omega_inf + x * x / (4.0 * t) - pi / 4.0) * m1_symbol(omega_inf, x, xi) * wp *
                 std::polar(1.0, -theta_inf - 0.5 * lt * std::norm(wp));
    const cd b = pre * std::polar(1.0, t * omega_inf - x * x / (4.0 * t) + pi / 4.0) * m2_symbol(omega_inf, x, -xi) * wm *
                 std::polar(1.0, theta_inf + 0.5 * lt * std::norm(wm));
    return a - b;
}

SpectralFunction interpolate_spectrum(const Field& f, const FrequencyGrid& fg)
{
    return [f, fg](double xi) -> cd {
        const double pos = (xi + fg.max_freq) / fg.dxi - 0.5;
        if (pos < 0.0 || pos > fg.m - 1)
            return 0.0;
        const Eigen::Index i = std::min<Eigen::Index>(static_cast<Eigen::Index>(pos), fg.m - 2);
        const double a = pos - i;
        return (1.0 - a) * f[i] + a * f[i + 1];
    };
}

LinearDecayStudy linear_decay(double omega, const VectorField& F, const SpatialGrid& g, const FrequencyGrid& fg,
                              const std::vector<double>& times, const RealField& x_far, const RealField& x_near)
{
    LinearDecayStudy st;
    st.times = times;
    const auto proj = project_discrete(omega, F, g);
    const VectorField& pe = proj.second;
    const ThresholdResonances res = threshold_resonances(omega, g);
    st.c_plus = std::polar(1.0, pi / 4.0) * inner(pe, sigma3(res.plus), g) / std::sqrt(4.0 * pi);
    st.c_minus = -std::polar(1.0, -pi / 4.0) * inner(pe, sigma3(res.minus), g) / std::sqrt(4.0 * pi);
    const DistortedSpectrum S = forward(omega, pe, g, fg);

    const double s = std::sqrt(omega);
    const RealField y = s * x_near;
    const Field T2 = y.tanh().square().cast<cd>();
    const Field S2 = (-y.unaryExpr([](double v) { return sech(v); }).square()).cast<cd>();
    const RealField weight = 1.0 / (1.0 + x_near.square());
    const TransformOptions opt = relaxed();
    for (double t : times) {
        const DistortedSpectrum St = propagate(S, fg, t);
        const VectorField far = inverse(St, fg, x_far, opt);
        st.sup_norm.push_back(far.upper.abs().maxCoeff());
        const VectorField near = inverse(St, fg, x_near, opt);
        const cd a = st.c_plus * std::polar(1.0, t * omega) / std::sqrt(t);
        const cd b = st.c_minus * std::polar(1.0, -t * omega) / std::sqrt(t);
        const Field r1 = near.upper - a * T2 - b * S2;
        const Field r2 = near.lower - a * S2 - b * T2;
        st.local_norm.push_back(std::max((weight * r1.abs()).maxCoeff(), (weight * r2.abs()).maxCoeff()));
    }
    const double lo = times.empty() ? 0.0 : times.front(), hi = times.empty() ? 0.0 : times.back();
    st.dispersive = decay_fit(times, st.sup_norm, lo, hi, "dispersive sup_x |e^{itH} P_e F|", -0.60, -0.40);
    st.local = decay_fit(times, st.local_norm, lo, hi, "resonance-subtracted local decay",
                         -std::numeric_limits<double>::infinity(), -1.2);
    return st;
}

}
