#include "doctest.h"
#include "soliton_lab/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sl;

namespace {

RunConfig parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_config(in);
}

std::string error_of(const std::string& text)
{
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "soliton_lab_test_io";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}

TEST_CASE("config with sections")
{
    const RunConfig c = parse("run_id = a1\n"
                              "dt = 0.002\n"
                              "t_end = 4\n"
                              "snapshot_stride = 10\n"
                              "scheme = yoshida4\n"
                              "omega0 = 1.5\n"
                              "[grid]\n"
                              "n = 256\n"
                              "half_length = 25\n"
                              "[perturbation]\n"
                              "kind = gaussian\n"
                              "amplitude = 0.05\n"
                              "width = 2\n"
                              "[frequency]\n"
                              "points = 128\n"
                              "max = 3\n");
    CHECK(c.run_id == "a1");
    CHECK(c.evolution.dt == 0.002);
    CHECK(c.evolution.t_end == 4.0);
    CHECK(c.evolution.snapshot_stride == 10);
    CHECK(c.evolution.scheme == Scheme::yoshida4);
    CHECK(c.evolution.grid.n == 256);
    CHECK(c.evolution.grid.half_length == 25.0);
    CHECK(c.omega0 == 1.5);
    CHECK(c.perturbation.kind == "gaussian");
    CHECK(c.perturbation.amplitude == 0.05);
    CHECK(c.perturbation.width == 2.0);
    CHECK(c.freq_points == 128);
    CHECK(c.freq_max == 3.0);
    CHECK(!c.omega_ref);
}

TEST_CASE("config errors name the key")
{
    CHECK(error_of("dt = -0.1\n").find("'dt'") != std::string::npos);
    CHECK(error_of("bogus = 1\n").find("'bogus'") != std::string::npos);
    CHECK(error_of("[grid]\nn = 100\n").find("'grid.n'") != std::string::npos);
    CHECK(error_of("t_end = abc\n").find("'t_end'") != std::string::npos);
    CHECK(error_of("scheme = rk4\n").find("'scheme'") != std::string::npos);
    CHECK(error_of("profile_taper = 1.5\n").find("'profile_taper'") != std::string::npos);
    CHECK(error_of("dt = 0.001\n").empty());
    CHECK_THROWS_AS(load_config(scratch("does_not_exist.ini")), ConfigError);
}

TEST_CASE("write_config round trip")
{
    RunConfig c = parse("run_id = rt\ndt = 0.0005\nt_end = 2\nsnapshot_stride = 4\nscheme = strang\nomega0 = 1.25\n"
                        "gamma0 = 0.3\nomega_ref = 1.2\nprofile_taper = 0.8\n[grid]\nn = 512\nhalf_length = 33.5\n"
                        "[perturbation]\namplitude = 0.003\nfrequency = 1.5\n");
    std::ostringstream os;
    write_config(os, c);
    const RunConfig d = parse(os.str());
    CHECK(d.run_id == c.run_id);
    CHECK(d.evolution.dt == c.evolution.dt);
    CHECK(d.evolution.t_end == c.evolution.t_end);
    CHECK(d.evolution.snapshot_stride == c.evolution.snapshot_stride);
    CHECK(d.evolution.scheme == c.evolution.scheme);
    CHECK(d.evolution.grid.n == c.evolution.grid.n);
    CHECK(d.evolution.grid.half_length == c.evolution.grid.half_length);
    CHECK(d.omega0 == c.omega0);
    CHECK(d.gamma0 == c.gamma0);
    CHECK(d.omega_ref == c.omega_ref);
    CHECK(d.profile_taper == c.profile_taper);
    CHECK(d.perturbation.amplitude == c.perturbation.amplitude);
    CHECK(d.perturbation.frequency == c.perturbation.frequency);
    std::ostringstream again;
    write_config(again, d);
    CHECK(again.str() == os.str());
}

TEST_CASE("initial data")
{
    const RunConfig c = parse("omega0 = 1\ngamma0 = 0.5\n[grid]\nn = 256\nhalf_length = 20\n[perturbation]\namplitude = 0.01\n");
    const Field psi = initial_data(c);
    const SpatialGrid& g = c.evolution.grid;
    const Field u = std::polar(1.0, -0.5) * psi - soliton_profile(1.0, g).cast<cd>();
    const RealField expected = 0.01 * (2.0 * g.x).cos() / g.x.cosh();
    CHECK((u - expected.cast<cd>()).abs().maxCoeff() < 1e-15);
}

TEST_CASE("snapshot round trips")
{
    const SpatialGrid g(64, 10.0);
    Snapshot s{1.0 / 3.0, g.x, (g.x.sin() * 1e-7 + 1.0 / 7.0).cast<cd>() * cd(1.0, -std::sqrt(2.0))};
    const auto bin = scratch("s.bin"), csv = scratch("s.csv");
    {
        std::ofstream out(bin, std::ios::binary);
        write_snapshot_binary(out, s);
    }
    {
        std::ofstream out(csv);
        write_snapshot_csv(out, s);
    }
    const Snapshot b = read_snapshot(bin), c = read_snapshot(csv);
    CHECK(b.t == s.t);
    CHECK((b.x == s.x).all());
    CHECK((b.psi == s.psi).all());
    CHECK(c.t == s.t);
    CHECK((c.x == s.x).all());
    CHECK((c.psi == s.psi).all());
    char magic[4];
    std::ifstream in(bin, std::ios::binary);
    in.read(magic, 4);
    CHECK(std::string(magic, 4) == "NLS1");
    CHECK(std::filesystem::file_size(bin) == 4 + 8 + 8 + 3 * 64 * 8);
}

TEST_CASE("format_double round trips")
{
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0})
        CHECK(std::stod(format_double(v)) == v);
}
