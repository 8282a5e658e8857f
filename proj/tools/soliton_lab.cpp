#include "soliton_lab/io.hpp"
#include "soliton_lab/modulation.hpp"
#include "soliton_lab/parallel.hpp"
#include "soliton_lab/pipeline.hpp"
#include "soliton_lab/transform.hpp"
#include "soliton_lab/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace {

int write_json(const nlohmann::json& j, const std::string& out)
{
    const std::string text = j.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
        return 0;
    }
    const std::filesystem::path path(out);
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        std::cerr << "cannot write " << out << "\n";
        return 2;
    }
    os << text;
    return 0;
}

int cmd_verify(const std::string& suite, const std::string& out)
{
    if (!sl::is_suite(suite)) {
        std::cerr << "unknown suite '" << suite << "'; expected one of:";
        for (const auto& n : sl::suite_names())
            std::cerr << ' ' << n;
        std::cerr << " all\n";
        return 2;
    }
    const auto reports = sl::run_suite(suite);
    bool pass = true;
    for (const auto& r : reports) {
        for (const auto& c : r.checks)
            std::fprintf(stderr, "%s [%s] %s: %.3e <= %.1e  (%s)\n", c.pass ? "PASS" : "FAIL", r.suite.c_str(),
                         c.name.c_str(), c.value, c.tolerance, c.citation.c_str());
        pass = pass && r.pass();
    }
    if (const int rc = write_json(sl::to_json(reports), out))
        return rc;
    return pass ? 0 : 1;
}

int cmd_simulate(const std::string& config, const std::string& out, std::optional<double> omega_ref)
{
    sl::RunConfig c;
    try {
        c = sl::load_config(config);
    } catch (const sl::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    if (omega_ref)
        c.omega_ref = omega_ref;
    const std::string dir = out.empty() ? c.output : out;
    sl::PipelineResult r;
    try {
        r = sl::run_pipeline(c);
    } catch (const sl::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    sl::write_run(r, dir);
    for (const auto& ch : r.checks)
        std::fprintf(stderr, "%s %s: %.6g (bound %.6g)\n", ch.pass ? "PASS" : "FAIL", ch.name.c_str(), ch.value,
                     ch.tolerance);
    std::cerr << "wrote " << dir << "\n";
    if (r.trajectory.aborted) {
        std::cerr << "aborted: " << r.trajectory.diagnostic << "\n";
        return 1;
    }
    return 0;
}

int cmd_decompose(const std::string& input, double omega0, double gamma0, const std::string& out)
{
    sl::Snapshot s;
    try {
        s = sl::read_snapshot(input);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    const auto n = static_cast<int>(s.psi.size());
    if (n < 2) {
        std::cerr << "snapshot " << input << " is empty\n";
        return 2;
    }
    const double h = s.x[1] - s.x[0];
    const sl::SpatialGrid g(n, 0.5 * n * h);
    if ((g.x - s.x).abs().maxCoeff() > 1e-9 * g.half_length) {
        std::cerr << "snapshot nodes are not a symmetric periodic grid x_j = -L + j h\n";
        return 2;
    }
    try {
        const sl::Decomposition d = sl::decompose(s.psi, {omega0, gamma0}, g);
        const sl::VectorField U = sl::VectorField::from_scalar(d.u);
        const sl::ModulationRates rates = sl::modulation_rhs(U, d.frame, g);
        const auto proj = sl::project_discrete(d.frame.omega, U, g);
        nlohmann::json j = {{"t", s.t},
                            {"omega", d.frame.omega},
                            {"gamma", d.frame.gamma},
                            {"iterations", d.iterations},
                            {"orthogonality", {std::abs(d.residual[0]), std::abs(d.residual[1])}},
                            {"u_sup", d.u.abs().maxCoeff()},
                            {"gamma_dot_minus_omega", rates.gamma_dot_minus_omega},
                            {"omega_dot", rates.omega_dot},
                            {"d1", {proj.first.d1.real(), proj.first.d1.imag()}},
                            {"d2", {proj.first.d2.real(), proj.first.d2.imag()}},
                            {"mass_expansion_residual", sl::mass_expansion_residual(d.frame.omega, d.u, g)}};
        return write_json(j, out);
    } catch (const std::exception& e) {
        std::cerr << "decomposition failed: " << e.what() << "\n";
        return 1;
    }
}

}

int main(int argc, char** argv)
{
    CLI::App app{"soliton_lab: stability diagnostics for cubic NLS solitary waves"};
    app.require_subcommand(1);
    int jobs = 0;
    app.add_option("--jobs", jobs, "worker threads (0: SOLITON_LAB_THREADS or all cores)")->check(CLI::NonNegativeNumber);

    std::string suite, verify_out;
    auto* verify = app.add_subcommand("verify", "run closed-form verification suites");
    verify->add_option("--suite,suite", suite, "appendix-ft, operator, transform, null-structures or all")->required();
    verify->add_option("--out", verify_out, "JSON report path (default stdout)");

    std::string config, sim_out;
    std::optional<double> omega_ref;
    auto* simulate = app.add_subcommand("simulate", "evolve, decompose and analyse one configuration");
    simulate->add_option("--config,config", config, "key-value config file")->required();
    simulate->add_option("--out", sim_out, "run directory (default: output key)");
    simulate->add_option("--omega-ref", omega_ref, "fixed reference frequency instead of omega(T)");

    std::string input, dec_out;
    double omega0 = 1.0, gamma0 = 0.0;
    auto* decompose = app.add_subcommand("decompose", "modulation decomposition of one snapshot file");
    decompose->add_option("--input,input", input, "snapshot file (CSV or NLS1)")->required();
    decompose->add_option("--omega0", omega0, "initial guess for omega");
    decompose->add_option("--gamma0", gamma0, "initial guess for gamma");
    decompose->add_option("--out", dec_out, "JSON output path (default stdout)");

    std::string run_dir;
    auto* report = app.add_subcommand("report", "summarize a run directory and write plot CSVs");
    report->add_option("--out,dir", run_dir, "run directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    sl::set_thread_limit(jobs);

    try {
        if (*verify)
            return cmd_verify(suite, verify_out);
        if (*simulate)
            return cmd_simulate(config, sim_out, omega_ref);
        if (*decompose)
            return cmd_decompose(input, omega0, gamma0, dec_out);
        const sl::ReportOutcome r = sl::report(run_dir);
        (r.missing.empty() ? std::cout : std::cerr) << r.text;
        return r.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
