#include "soliton_lab/pipeline.hpp"
#include "soliton_lab/operator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace sl {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double bracket(double t) { return std::sqrt(1.0 + t * t); }

nlohmann::json to_json(const DecayReport& r)
{
    return {{"law", r.law},         {"exponent", r.exponent}, {"t_min", r.t_min},     {"t_max", r.t_max},
            {"residual", r.residual}, {"samples", r.samples}, {"band_lo", r.band_lo > -inf ? nlohmann::json(r.band_lo) : nlohmann::json(nullptr)},
            {"band_hi", r.band_hi},   {"pass", r.pass},         {"skipped", r.skipped}};
}

std::vector<std::size_t> profile_indices(const Trajectory& tr, const ModulationTrace& trace, int stride)
{
    std::vector<std::size_t> idx;
    const std::size_t n = tr.fields.size();
    for (std::size_t s = 0; s < n; s += static_cast<std::size_t>(stride))
        if (trace.rows[s].ok)
            idx.push_back(s);
    if (n && (idx.empty() || idx.back() != n - 1) && trace.rows[n - 1].ok)
        idx.push_back(n - 1);
    return idx;
}

std::ofstream open_out(const std::filesystem::path& p)
{
    std::ofstream os(p, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot write " + p.string());
    return os;
}

}

bool PipelineResult::pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

PipelineResult run_pipeline(const RunConfig& c)
{
    PipelineResult r;
    r.config = c;
    const SpatialGrid& g = c.evolution.grid;
    const double eps = c.perturbation.amplitude, bound = 5.0 * eps;

    r.trajectory = run(c.evolution, initial_data(c));
    r.trace = track(r.trajectory, g, {c.omega0, c.gamma0});

    const auto last_ok = std::find_if(r.trace.rows.rbegin(), r.trace.rows.rend(), [](const TraceRow& row) { return row.ok; });
    r.omega_bar = c.omega_ref ? *c.omega_ref : (last_ok != r.trace.rows.rend() ? last_ok->omega : c.omega0);
    const double T = last_ok != r.trace.rows.rend() ? last_ok->t : 0.0;

    for (std::size_t s = 0; s < r.trace.rows.size(); ++s) {
        TraceRow& row = r.trace.rows[s];
        if (!row.ok)
            continue;
        const Field u = std::polar(1.0, -row.gamma) * r.trajectory.fields[s] - soliton_profile(row.omega, g).cast<cd>();
        const auto proj = project_discrete(r.omega_bar, VectorField::from_scalar(u), g);
        row.d1 = proj.first.d1;
        row.d2 = proj.first.d2;
    }

    r.fg = FrequencyGrid(c.freq_points, c.freq_max);
    r.profile = extract_profile(r.trace, r.trajectory, r.omega_bar, g, r.fg,
                                profile_indices(r.trajectory, r.trace, c.profile_stride), c.profile_taper);
    r.scattering = modified_scattering_check(r.profile);

    std::vector<double> t, usup, dsum, omega_gap;
    double a_max = 0.0, b_max = 0.0, orth_max = 0.0, mass_max = 0.0, energy_max = 0.0;
    bool all_ok = !r.trajectory.aborted;
    for (const TraceRow& row : r.trace.rows) {
        if (!row.ok) {
            all_ok = false;
            continue;
        }
        t.push_back(row.t);
        usup.push_back(row.u_sup);
        dsum.push_back(std::abs(row.d1) + std::abs(row.d2));
        omega_gap.push_back(std::abs(row.omega - r.omega_bar));
        a_max = std::max(a_max, row.u_sup * std::sqrt(bracket(row.t)));
        b_max = std::max(b_max, std::abs(row.omega - r.omega_bar) * std::pow(bracket(row.t), 0.8));
        orth_max = std::max({orth_max, std::abs(row.orth1), std::abs(row.orth2)});
        mass_max = std::max(mass_max, std::abs(row.mass_residual));
        energy_max = std::max(energy_max, std::abs(row.energy_residual));
    }

    const RealField x_near = RealField::LinSpaced(161, -20.0, 20.0);
    std::vector<double> h1, Ru;
    double x_max = 0.0;
    for (std::size_t k = 0; k < r.profile.times.size(); ++k) {
        const double tk = r.profile.times[k];
        const XNorm xn = x_norm_diagnostics(r.profile.spectra[k], r.fg);
        r.x_norm.push_back(xn.sup_plus + std::pow(bracket(tk), -0.1) * xn.dxi_plus);
        x_max = std::max(x_max, r.x_norm.back());
        const LocalDecaySplit split = local_decay_split(r.profile.spectra[k], tk, r.fg, x_near);
        h1.push_back(std::abs(split.h1));
        Ru.push_back((split.R_u.abs() / (1.0 + x_near.square())).maxCoeff());
    }

    const double t_fit = 5.0;
    r.decay.push_back(decay_fit(t, usup, t_fit, T, "radiation sup_x |u|", -0.6, -0.4));
    r.decay.push_back(decay_fit(t, dsum, t_fit, T, "discrete |d1| + |d2|", -inf, -1.2));
    r.decay.push_back(decay_fit(r.profile.times, h1, t_fit, T, "|h1|", -0.65, -0.35));
    r.decay.push_back(decay_fit(r.profile.times, Ru, t_fit, T, "sup_x <x>^-2 |R_u|", -inf, -0.8));

    double theta_max = 0.0;
    for (std::size_t k = 0; k < r.profile.times.size(); ++k)
        theta_max = std::max(theta_max, std::abs(r.profile.theta[k]) * std::pow(bracket(r.profile.times[k]), -0.2));

    auto check = [&](std::string name, std::string citation, double value, double tol) {
        r.checks.push_back({std::move(name), std::move(citation), value, tol, all_ok && std::isfinite(value) && value <= tol});
    };
    check("(a) sup_t sup_x |u| <t>^{1/2} <= 5 eps", "Theorem 1.1, radiation decay <t>^{-1/2}", a_max, bound);
    check("(b) sup_t |omega(t) - omega(T)| <t>^{0.8} <= 5 eps", "Prop. 5.2, modulation convergence", b_max, bound);
    const DecayReport& dr = r.decay[1];
    check("(c) |d1| + |d2| decay exponent <= -1.2", "discrete components decay <t>^{-3/2+delta}",
          dr.skipped ? inf : dr.exponent, -1.2);
    check("(d) orthogonality residuals <= 1e-10", "Prop. 5.2, orthogonality conditions", orth_max, 1e-10);
    check("(e) mass and energy expansion residuals <= 1e-8", "Lemma 5.3, expansion of mass and energy",
          std::max(mass_max, energy_max), 1e-8);
    double growth = 0.0;
    for (std::size_t k = 1; k < r.scattering.differences.size(); ++k)
        growth = std::max(growth, r.scattering.differences[k] / std::max(r.scattering.differences[k - 1], 1e-300) - 1.0);
    check("(f) dyadic w_+ differences non-increasing within 20% slack",
          "Prop. 10.3, Cauchy-in-time estimate", r.scattering.skipped ? inf : growth, r.scattering.slack);
    check("(g) X-norm diagnostic <= 5 eps", "bootstrap norm X(T)", x_max, bound);

    nlohmann::json decay = nlohmann::json::array();
    for (const auto& d : r.decay)
        decay.push_back(to_json(d));
    nlohmann::json xs = nlohmann::json::array();
    for (std::size_t k = 0; k < r.profile.times.size(); ++k)
        xs.push_back({{"t", r.profile.times[k]}, {"value", r.x_norm[k]}, {"boundary_mass", r.profile.boundary_mass[k]}});
    nlohmann::json omega = nlohmann::json::array();
    for (const auto& row : r.trace.rows)
        omega.push_back({{"t", row.t}, {"omega", row.omega}, {"gamma", row.gamma}, {"ok", row.ok}});
    nlohmann::json pairs = nlohmann::json::array();
    for (std::size_t k = 0; k < r.scattering.differences.size(); ++k)
        pairs.push_back({{"t_lo", r.scattering.t_lo[k]}, {"t_hi", r.scattering.t_hi[k]}, {"sup_difference", r.scattering.differences[k]}});
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& ch : r.checks)
        checks.push_back({{"name", ch.name}, {"citation", ch.citation}, {"value", ch.value}, {"tolerance", ch.tolerance}, {"pass", ch.pass}});
    r.diagnostics = {{"run_id", c.run_id},
                     {"epsilon", eps},
                     {"omega_bar", r.omega_bar},
                     {"aborted", r.trajectory.aborted},
                     {"abort_diagnostic", r.trajectory.diagnostic},
                     {"decay_reports", decay},
                     {"x_norm_series", xs},
                     {"scattering_verdict",
                      {{"pairs", pairs},
                       {"slack", r.scattering.slack},
                       {"monotone", r.scattering.monotone},
                       {"skipped", r.scattering.skipped},
                       {"modulus_defect", r.scattering.modulus_defect}}},
                     {"theta_growth", theta_max},
                     {"omega_series", omega},
                     {"checks", checks},
                     {"pass", r.pass()}};
    return r;
}

void write_run(const PipelineResult& r, const std::filesystem::path& dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        auto os = open_out(dir / "config.ini");
        write_config(os, r.config);
    }
    {
        auto os = open_out(dir / "trace.csv");
        write_trace_csv(os, r.trace);
    }
    {
        auto os = open_out(dir / "diagnostics.json");
        os << r.diagnostics.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
    }
    {
        auto os = open_out(dir / "invariants.csv");
        os << "t,mass,energy\n";
        for (std::size_t s = 0; s < r.trajectory.times.size(); ++s)
            os << format_double(r.trajectory.times[s]) << ',' << format_double(r.trajectory.mass[s]) << ','
               << format_double(r.trajectory.energy[s]) << '\n';
    }
    {
        auto os = open_out(dir / "profile.csv");
        os << "t,xi,re_f_plus,im_f_plus,re_f_minus,im_f_minus\n";
        for (std::size_t k = 0; k < r.profile.times.size(); ++k)
            for (Eigen::Index j = 0; j < r.fg.m; ++j) {
                const auto& S = r.profile.spectra[k];
                os << format_double(r.profile.times[k]) << ',' << format_double(r.fg.xi[j]) << ','
                   << format_double(S.f_plus[j].real()) << ',' << format_double(S.f_plus[j].imag()) << ','
                   << format_double(S.f_minus[j].real()) << ',' << format_double(S.f_minus[j].imag()) << '\n';
            }
    }
    {
        auto os = open_out(dir / "w_plus.csv");
        os << "t,xi,re_w_plus,im_w_plus\n";
        const std::vector<Field> w = w_plus(r.profile);
        for (std::size_t k = 0; k < w.size(); ++k)
            for (Eigen::Index j = 0; j < r.fg.m; ++j)
                os << format_double(r.profile.times[k]) << ',' << format_double(r.fg.xi[j]) << ','
                   << format_double(w[k][j].real()) << ',' << format_double(w[k][j].imag()) << '\n';
    }
    if (r.config.write_snapshots) {
        fs::create_directories(dir / "snapshots");
        for (std::size_t s = 0; s < r.trajectory.fields.size(); ++s) {
            char name[32];
            std::snprintf(name, sizeof name, "psi_%05zu.bin", s);
            auto os = open_out(dir / "snapshots" / name);
            write_snapshot_binary(os, {r.trajectory.times[s], r.config.evolution.grid.x, r.trajectory.fields[s]});
        }
    }
}

ReportOutcome report(const std::filesystem::path& dir)
{
    namespace fs = std::filesystem;
    ReportOutcome out;
    for (const char* f : {"diagnostics.json", "trace.csv", "profile.csv", "w_plus.csv"})
        if (!fs::exists(dir / f))
            out.missing.push_back(f);
    if (!out.missing.empty()) {
        out.exit_code = 1;
        out.text = "missing artifacts in " + dir.string() + ":";
        for (const auto& m : out.missing)
            out.text += " " + m;
        out.text += "\n";
        return out;
    }
    nlohmann::json d;
    {
        std::ifstream in(dir / "diagnostics.json");
        d = nlohmann::json::parse(in);
    }
    std::ostringstream txt;
    txt << "run " << d.value("run_id", std::string()) << ", omega_bar " << format_double(d.value("omega_bar", 0.0)) << "\n";
    bool pass = true;
    for (const auto& ch : d.at("checks")) {
        const bool p = ch.at("pass").get<bool>();
        pass = pass && p;
        txt << (p ? "PASS " : "FAIL ") << ch.at("name").get<std::string>() << "  value "
            << format_double(ch.at("value").is_number() ? ch.at("value").get<double>() : inf) << "  tolerance "
            << format_double(ch.at("tolerance").get<double>()) << "\n";
    }
    for (const auto& dr : d.at("decay_reports"))
        txt << "fit " << dr.at("law").get<std::string>() << ": exponent " << format_double(dr.at("exponent").get<double>())
            << (dr.at("skipped").get<bool>() ? " (skipped)" : dr.at("pass").get<bool>() ? " (in band)" : " (out of band)")
            << "\n";

    std::vector<double> t, omega, usup;
    {
        std::ifstream in(dir / "trace.csv");
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            std::vector<double> v;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ','))
                v.push_back(std::stod(cell));
            if (v.size() < 17 || v[16] == 0.0)
                continue;
            t.push_back(v[0]);
            omega.push_back(v[1]);
            usup.push_back(v[13]);
        }
    }
    const double omega_bar = d.value("omega_bar", omega.empty() ? 0.0 : omega.back());
    {
        auto os = open_out(dir / "report_radiation.csv");
        os << "t,sup_u_sqrt_bracket_t\n";
        for (std::size_t k = 0; k < t.size(); ++k)
            os << format_double(t[k]) << ',' << format_double(usup[k] * std::sqrt(bracket(t[k]))) << '\n';
    }
    {
        auto os = open_out(dir / "report_modulation.csv");
        os << "t,omega_gap_bracket_t_0.8\n";
        for (std::size_t k = 0; k < t.size(); ++k)
            os << format_double(t[k]) << ',' << format_double(std::abs(omega[k] - omega_bar) * std::pow(bracket(t[k]), 0.8))
               << '\n';
    }
    auto select = [](const std::filesystem::path& src, const std::filesystem::path& dst, const std::string& header,
                     auto&& emit) {
        std::ifstream in(src);
        std::string line;
        std::getline(in, line);
        std::vector<std::vector<double>> rows;
        while (std::getline(in, line)) {
            std::vector<double> v;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ','))
                v.push_back(std::stod(cell));
            rows.push_back(std::move(v));
        }
        std::vector<double> times;
        for (const auto& v : rows)
            if (times.empty() || times.back() != v[0])
                times.push_back(v[0]);
        std::vector<double> chosen;
        for (double frac : {0.0, 0.25, 0.5, 1.0})
            if (!times.empty()) {
                const double target = times.back() * frac;
                chosen.push_back(*std::min_element(times.begin(), times.end(), [&](double a, double b) {
                    return std::abs(a - target) < std::abs(b - target);
                }));
            }
        auto os = open_out(dst);
        os << header << '\n';
        for (const auto& v : rows)
            if (std::find(chosen.begin(), chosen.end(), v[0]) != chosen.end())
                os << format_double(v[0]) << ',' << format_double(v[1]) << ',' << format_double(emit(v)) << '\n';
    };
    select(dir / "profile.csv", dir / "report_profile_modulus.csv", "t,xi,abs_f_plus",
           [](const std::vector<double>& v) { return std::hypot(v[2], v[3]); });
    select(dir / "w_plus.csv", dir / "report_w_plus_phase.csv", "t,xi,arg_w_plus",
           [](const std::vector<double>& v) { return std::atan2(v[3], v[2]); });
    txt << (pass ? "all checks passed" : "some checks failed") << "\n";
    out.text = txt.str();
    out.exit_code = pass ? 0 : 1;
    return out;
}

}
