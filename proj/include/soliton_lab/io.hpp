#pragma once

#include "soliton_lab/grid.hpp"
#include "soliton_lab/nls.hpp"
#include "soliton_lab/transform.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace sl {

struct Perturbation {
    std::string kind = "sech_cos"; // sech_cos, gaussian, file
    double amplitude = 0.01;
    double frequency = 2.0; // sech_cos: a sech(x) cos(k x)
    double width = 1.0;     // gaussian: a exp(-x^2 / (2 w^2))
    std::string file;       // snapshot file on the run grid
};

struct RunConfig {
    EvolutionConfig evolution;
    double omega0 = 1.0, gamma0 = 0.0;
    Perturbation perturbation;
    std::uint64_t seed = 0;
    int freq_points = 4096;
    double freq_max = 8.0;
    int profile_stride = 5;
    double profile_taper = 1.0;
    std::optional<double> omega_ref;
    std::string output = "run";
    std::string run_id = "run";
    bool write_snapshots = true;
    std::map<std::string, std::string> echo; // key -> value as read
};

// flat key = value file with optional [section] headers; keys are section.name
RunConfig parse_config(std::istream& in, const std::filesystem::path& base = {});
RunConfig load_config(const std::filesystem::path& path);
void write_config(std::ostream& os, const RunConfig& c);

// e^{i gamma0}(phi_{omega0} + u0)
Field initial_data(const RunConfig& c);

struct Snapshot {
    double t = 0.0;
    RealField x;
    Field psi;
};

// CSV: header then x, re, im; binary: "NLS1", uint64 n, float64 t, then x, re, im columns, little endian
void write_snapshot_csv(std::ostream& os, const Snapshot& s);
void write_snapshot_binary(std::ostream& os, const Snapshot& s);
Snapshot read_snapshot(const std::filesystem::path& path);

// xi, re f_+, im f_+, re f_-, im f_-
void write_spectrum_csv(std::ostream& os, const DistortedSpectrum& S, const FrequencyGrid& fg);

std::string format_double(double v);

}
