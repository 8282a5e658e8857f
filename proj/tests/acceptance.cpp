#include "soliton_lab/hyperbolic.hpp"
#include "soliton_lab/nls.hpp"
#include "soliton_lab/parallel.hpp"
#include "soliton_lab/pipeline.hpp"
#include "soliton_lab/scattering.hpp"
#include "soliton_lab/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef SOLITON_LAB_SOURCE_DIR
#define SOLITON_LAB_SOURCE_DIR "."
#endif

using namespace sl;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double time_limit;
    std::function<Outcome()> body;
};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Outcome suite(const std::string& name)
{
    const SuiteReport r = run_suite(name).front();
    Outcome o{r.pass(), ""};
    double worst = 0.0;
    std::string worst_name;
    int failed = 0;
    for (const Check& c : r.checks) {
        const double ratio = c.tolerance > 0.0 ? c.value / c.tolerance : (c.value == 0.0 ? 0.0 : INFINITY);
        if (!c.pass)
            ++failed;
        if (ratio >= worst) {
            worst = ratio;
            worst_name = c.name;
        }
    }
    o.detail = std::to_string(r.checks.size()) + " checks, " + std::to_string(failed) + " failed, tightest " + worst_name +
               " at " + fmt(worst) + " of tolerance";
    return o;
}

Outcome appendix()
{
    Outcome o = suite("appendix-ft");
    double rec = 0.0, tanh_rel = 0.0;
    for (int l = 1; l <= 6; ++l)
        for (double xi = -10.0; xi <= 10.0; xi += 0.25) {
            const cd a = ft_sech_power<double>({l, false}, xi), b = ft_sech_power<double>({l + 2, false}, xi);
            rec = std::max(rec, std::abs(b - (l * l + xi * xi) / (l * (l + 1.0)) * a) / std::max(1.0, std::abs(a)));
            const cd t = ft_sech_power<double>({l, true}, xi);
            tanh_rel = std::max(tanh_rel, std::abs(t - cd(0.0, -xi / l) * a));
        }
    for (double xi = -10.0; xi <= 10.0; xi += 0.25) {
        const cd t = ft_sech_power<double>({8, true}, xi), a = ft_sech_power<double>({8, false}, xi);
        tanh_rel = std::max(tanh_rel, std::abs(t - cd(0.0, -xi / 8.0) * a));
    }
    o.pass = o.pass && rec <= 1e-13 && tanh_rel <= 1e-13;
    o.detail += "; recursion " + fmt(rec) + ", tanh relation " + fmt(tanh_rel) + " (tol 1e-13)";
    return o;
}

Outcome linear()
{
    const SpatialGrid g(4096, 40.0);
    const FrequencyGrid fg(8192, 6.0);
    const VectorField F = VectorField::from_scalar((-(g.x * g.x)).exp().cast<cd>() * cd(1.0, 0.5));
    std::vector<double> times;
    for (int i = 0; i < 10; ++i)
        times.push_back(5.0 * std::pow(16.0, i / 9.0));
    const LinearDecayStudy st = linear_decay(1.0, F, g, fg, times, RealField::LinSpaced(6401, -800.0, 800.0),
                                             RealField::LinSpaced(161, -20.0, 20.0));
    return {st.dispersive.pass && st.local.pass,
            "dispersive exponent " + fmt(st.dispersive.exponent) + " in [-0.60, -0.40], local exponent " +
                fmt(st.local.exponent) + " <= -1.2"};
}

Field evolve(Field psi, const SpatialGrid& g, double dt, double t, Scheme s)
{
    const SplitStepper st(g, dt, s);
    const long n = std::lround(t / std::abs(dt));
    for (long i = 0; i < n; ++i)
        st.step(psi);
    return psi;
}

Field perturbed(const SpatialGrid& g, double eps)
{
    return (soliton_profile(1.0, g) + eps * (2.0 * g.x).cos() / g.x.cosh()).cast<cd>();
}

Outcome solver()
{
    const SpatialGrid g(2048, 40.0);
    const Field sol = soliton_profile(1.0, g).cast<cd>();
    const double exact = l2_norm(evolve(sol, g, 1e-3, 10.0, Scheme::yoshida4) - std::polar(1.0, 10.0) * sol, g);

    const SpatialGrid gm(1024, 40.0);
    const Trajectory tr = run({gm, 1e-3, 50.0, 1000, true, Scheme::strang}, perturbed(gm, 0.01));
    double drift = tr.aborted ? INFINITY : 0.0;
    for (double m : tr.mass)
        drift = std::max(drift, std::abs(m - tr.mass.front()));

    const Field p0 = perturbed(gm, 0.1);
    const Field ref = evolve(p0, gm, 1.25e-4, 1.0, Scheme::strang);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
        const double x = std::log(dt), y = std::log(l2_norm(evolve(p0, gm, dt, 1.0, Scheme::strang) - ref, gm));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);

    const Field q0 = perturbed(g, 0.01);
    double reversal = 0.0;
    for (Scheme s : {Scheme::strang, Scheme::yoshida4})
        reversal = std::max(reversal, l2_norm(evolve(evolve(q0, g, 1e-3, 0.1, s), g, -1e-3, 0.1, s) - q0, g));

    return {exact <= 1e-6 && drift <= 1e-9 && std::abs(slope - 2.0) <= 0.1 && reversal <= 1e-12,
            "soliton L2 error " + fmt(exact) + ", mass drift " + fmt(drift) + ", Strang slope " + fmt(slope) +
                ", time reversal " + fmt(reversal)};
}

std::optional<PipelineResult> first_run;

RunConfig default_config() { return load_config(std::string(SOLITON_LAB_SOURCE_DIR) + "/configs/default.ini"); }

Outcome pipeline()
{
    first_run = run_pipeline(default_config());
    const PipelineResult& r = *first_run;
    std::ostringstream os;
    for (const Check& c : r.checks)
        os << (c.pass ? "" : "FAILED ") << c.name << " " << fmt(c.value) << " / " << fmt(c.tolerance) << "; ";
    std::string d = os.str();
    if (!d.empty())
        d.resize(d.size() - 2);
    return {r.pass(), d};
}

Outcome reproducible()
{
    if (!first_run)
        first_run = run_pipeline(default_config());
    const std::string a = first_run->diagnostics.dump(2);
    const std::string b = run_pipeline(default_config()).diagnostics.dump(2);
    return {a == b, "diagnostics JSON " + std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "differs")};
}

}

int main(int argc, char** argv)
{
    set_thread_limit(1);
    std::vector<int> only;
    for (int i = 1; i < argc; ++i)
        only.push_back(std::atoi(argv[i]));
    const std::vector<Criterion> criteria{
        {1, "closed-form sech transforms", 5.0, appendix},
        {2, "operator suite", 30.0, [] { return suite("operator"); }},
        {3, "transform suite", 60.0, [] { return suite("transform"); }},
        {4, "null-structure suite", 120.0, [] { return suite("null-structures"); }},
        {5, "linear decay", 120.0, linear},
        {6, "solver", 180.0, solver},
        {7, "full pipeline", 900.0, pipeline},
        {8, "reproducibility", INFINITY, reproducible},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end())
            continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.time_limit;
        const bool pass = o.pass && in_time;
        failures += !pass;
        std::printf("criterion %d %s: %s (%.1f s%s) %s\n", c.id, c.title.c_str(), pass ? "PASS" : "FAIL", secs,
                    std::isfinite(c.time_limit) ? (in_time ? " within limit" : " over limit") : "", o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
