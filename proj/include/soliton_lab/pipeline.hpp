#pragma once

#include "soliton_lab/io.hpp"
#include "soliton_lab/modulation.hpp"
#include "soliton_lab/scattering.hpp"
#include "soliton_lab/verify.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sl {

struct PipelineResult {
    RunConfig config;
    Trajectory trajectory;
    ModulationTrace trace;
    double omega_bar = 1.0;
    FrequencyGrid fg;
    ProfileSeries profile;
    std::vector<double> x_norm; // ||f_+||_inf + <t>^{-0.1} ||d_xi f_+||_2 per profile time
    std::vector<DecayReport> decay;
    ScatteringReport scattering;
    std::vector<Check> checks; // pipeline criteria (a)-(g)
    nlohmann::json diagnostics;
    bool pass() const;
};

// epsilon = perturbation amplitude; bounds use 5 epsilon
PipelineResult run_pipeline(const RunConfig& c);

// config echo, snapshots, trace, diagnostics and plot CSVs under dir
void write_run(const PipelineResult& r, const std::filesystem::path& dir);

struct ReportOutcome {
    int exit_code = 0;
    std::string text;
    std::vector<std::string> missing;
};

// reads a run directory, prints the checks and writes the plot-ready CSVs into it
ReportOutcome report(const std::filesystem::path& dir);

}
