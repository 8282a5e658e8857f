#include "soliton_lab/io.hpp"
#include "soliton_lab/hyperbolic.hpp"
#include "soliton_lab/operator.hpp"

#include "CLI11.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace sl {

namespace {

static_assert(std::endian::native == std::endian::little);

std::string line_of(const std::string& text, const std::string& key)
{
    const std::string name = key.substr(key.rfind('.') + 1);
    std::istringstream in(text);
    std::string line;
    for (int n = 1; std::getline(in, line); ++n)
        if (line.find(name) != std::string::npos)
            return " (line " + std::to_string(n) + ")";
    return {};
}

struct Reader {
    std::map<std::string, std::string> values;
    std::string text;

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const
    {
        throw ConfigError("config key '" + key + "'" + line_of(text, key) + ": " + msg);
    }

    template <typename T>
    void get(const std::string& key, T& out)
    {
        auto it = values.find(key);
        if (it == values.end())
            return;
        std::istringstream in(it->second);
        T v{};
        if (!(in >> v) || !(in >> std::ws).eof())
            fail(key, "cannot parse '" + it->second + "'");
        out = v;
        values.erase(it);
    }

    void get(const std::string& key, std::string& out)
    {
        auto it = values.find(key);
        if (it == values.end())
            return;
        out = it->second;
        values.erase(it);
    }

    void get(const std::string& key, bool& out)
    {
        auto it = values.find(key);
        if (it == values.end())
            return;
        const std::string& v = it->second;
        if (v == "true" || v == "1" || v == "on")
            out = true;
        else if (v == "false" || v == "0" || v == "off")
            out = false;
        else
            fail(key, "expected a boolean, got '" + v + "'");
        values.erase(it);
    }
};

void write_le(std::ostream& os, const void* p, std::size_t n) { os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }

}

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base)
{
    Reader r;
    r.text.assign(std::istreambuf_iterator<char>(in), {});
    std::istringstream src(r.text);
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_config(src);
    } catch (const CLI::Error& e) {
        throw ConfigError(std::string("config syntax: ") + e.what());
    }
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--")
            continue;
        std::string value;
        for (std::size_t i = 0; i < item.inputs.size(); ++i)
            value += (i ? " " : "") + item.inputs[i];
        r.values[item.fullname()] = value;
    }

    RunConfig c;
    c.echo = r.values;
    int n = 4096;
    double half = 40.0;
    r.get("grid.n", n);
    r.get("grid.half_length", half);
    r.get("dt", c.evolution.dt);
    r.get("t_end", c.evolution.t_end);
    r.get("snapshot_stride", c.evolution.snapshot_stride);
    r.get("symmetrize", c.evolution.symmetrize);
    std::string scheme = "strang";
    r.get("scheme", scheme);
    r.get("omega0", c.omega0);
    r.get("gamma0", c.gamma0);
    r.get("perturbation.kind", c.perturbation.kind);
    r.get("perturbation.amplitude", c.perturbation.amplitude);
    r.get("perturbation.frequency", c.perturbation.frequency);
    r.get("perturbation.width", c.perturbation.width);
    r.get("perturbation.file", c.perturbation.file);
    r.get("seed", c.seed);
    r.get("frequency.points", c.freq_points);
    r.get("frequency.max", c.freq_max);
    r.get("profile_stride", c.profile_stride);
    r.get("profile_taper", c.profile_taper);
    double omega_ref = 0.0;
    if (r.values.count("omega_ref")) {
        r.get("omega_ref", omega_ref);
        c.omega_ref = omega_ref;
    }
    r.get("output", c.output);
    r.get("run_id", c.run_id);
    r.get("write_snapshots", c.write_snapshots);
    if (!r.values.empty())
        r.fail(r.values.begin()->first, "unknown key");

    if (n < 16 || (n & (n - 1)) != 0)
        r.fail("grid.n", "must be a power of two >= 16");
    if (!(half > 0.0))
        r.fail("grid.half_length", "must be positive");
    if (!(c.evolution.dt > 0.0))
        r.fail("dt", "must be positive");
    if (!(c.evolution.t_end >= 0.0))
        r.fail("t_end", "must be non-negative");
    if (c.evolution.snapshot_stride < 1)
        r.fail("snapshot_stride", "must be >= 1");
    if (scheme == "strang")
        c.evolution.scheme = Scheme::strang;
    else if (scheme == "yoshida4")
        c.evolution.scheme = Scheme::yoshida4;
    else
        r.fail("scheme", "expected strang or yoshida4");
    if (!(c.omega0 > 0.0))
        r.fail("omega0", "must be positive");
    if (!(c.perturbation.amplitude >= 0.0))
        r.fail("perturbation.amplitude", "must be non-negative");
    if (c.perturbation.kind != "sech_cos" && c.perturbation.kind != "gaussian" && c.perturbation.kind != "file")
        r.fail("perturbation.kind", "expected sech_cos, gaussian or file");
    if (c.perturbation.kind == "file") {
        std::filesystem::path p = c.perturbation.file;
        if (p.is_relative())
            p = base / p;
        if (c.perturbation.file.empty() || !std::filesystem::exists(p))
            r.fail("perturbation.file", "file not found: " + p.string());
        c.perturbation.file = p.string();
    }
    if (!(c.perturbation.width > 0.0))
        r.fail("perturbation.width", "must be positive");
    if (c.freq_points < 16)
        r.fail("frequency.points", "must be >= 16");
    if (!(c.freq_max > 0.0))
        r.fail("frequency.max", "must be positive");
    if (c.profile_stride < 1)
        r.fail("profile_stride", "must be >= 1");
    if (!(c.profile_taper > 0.0 && c.profile_taper <= 1.0))
        r.fail("profile_taper", "must be in (0, 1]");
    if (c.omega_ref && !(*c.omega_ref > 0.0))
        r.fail("omega_ref", "must be positive");
    c.evolution.grid = SpatialGrid(n, half);
    return c;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config " + path.string());
    return parse_config(in, path.parent_path());
}

void write_config(std::ostream& os, const RunConfig& c)
{
    const auto& e = c.evolution;
    os << "run_id = " << c.run_id << "\n"
       << "output = " << c.output << "\n"
       << "dt = " << format_double(e.dt) << "\n"
       << "t_end = " << format_double(e.t_end) << "\n"
       << "snapshot_stride = " << e.snapshot_stride << "\n"
       << "symmetrize = " << (e.symmetrize ? "true" : "false") << "\n"
       << "scheme = " << (e.scheme == Scheme::strang ? "strang" : "yoshida4") << "\n"
       << "omega0 = " << format_double(c.omega0) << "\n"
       << "gamma0 = " << format_double(c.gamma0) << "\n"
       << "seed = " << c.seed << "\n"
       << "profile_stride = " << c.profile_stride << "\n"
       << "profile_taper = " << format_double(c.profile_taper) << "\n"
       << "write_snapshots = " << (c.write_snapshots ? "true" : "false") << "\n";
    if (c.omega_ref)
        os << "omega_ref = " << format_double(*c.omega_ref) << "\n";
    os << "\n[grid]\nn = " << e.grid.n << "\nhalf_length = " << format_double(e.grid.half_length) << "\n"
       << "\n[frequency]\npoints = " << c.freq_points << "\nmax = " << format_double(c.freq_max) << "\n"
       << "\n[perturbation]\nkind = " << c.perturbation.kind << "\namplitude = " << format_double(c.perturbation.amplitude)
       << "\nfrequency = " << format_double(c.perturbation.frequency)
       << "\nwidth = " << format_double(c.perturbation.width) << "\n";
    if (!c.perturbation.file.empty())
        os << "file = " << c.perturbation.file << "\n";
}

Field initial_data(const RunConfig& c)
{
    const SpatialGrid& g = c.evolution.grid;
    const auto& p = c.perturbation;
    Field u;
    if (p.kind == "sech_cos")
        u = (p.amplitude * g.x.unaryExpr([](double v) { return sech(v); }) * (p.frequency * g.x).cos()).cast<cd>();
    else if (p.kind == "gaussian")
        u = (p.amplitude * (-(g.x * g.x) / (2.0 * p.width * p.width)).exp()).cast<cd>();
    else {
        const Snapshot s = read_snapshot(p.file);
        if (s.psi.size() != g.n)
            throw ConfigError("config key 'perturbation.file': snapshot has " + std::to_string(s.psi.size()) +
                              " points, grid has " + std::to_string(g.n));
        u = p.amplitude * s.psi;
    }
    return std::polar(1.0, c.gamma0) * (soliton_profile(c.omega0, g).cast<cd>() + u);
}

void write_snapshot_csv(std::ostream& os, const Snapshot& s)
{
    os << "# t = " << format_double(s.t) << "\nx,re_psi,im_psi\n";
    for (Eigen::Index j = 0; j < s.psi.size(); ++j)
        os << format_double(s.x[j]) << ',' << format_double(s.psi[j].real()) << ',' << format_double(s.psi[j].imag())
           << '\n';
}

void write_snapshot_binary(std::ostream& os, const Snapshot& s)
{
    const std::uint64_t n = static_cast<std::uint64_t>(s.psi.size());
    os.write("NLS1", 4);
    write_le(os, &n, sizeof n);
    write_le(os, &s.t, sizeof s.t);
    write_le(os, s.x.data(), n * sizeof(double));
    const RealField re = s.psi.real(), im = s.psi.imag();
    write_le(os, re.data(), n * sizeof(double));
    write_le(os, im.data(), n * sizeof(double));
}

Snapshot read_snapshot(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open snapshot " + path.string());
    char magic[4] = {};
    in.read(magic, 4);
    Snapshot s;
    if (in && std::memcmp(magic, "NLS1", 4) == 0) {
        std::uint64_t n = 0;
        in.read(reinterpret_cast<char*>(&n), sizeof n);
        in.read(reinterpret_cast<char*>(&s.t), sizeof s.t);
        if (!in || n > (std::uint64_t{1} << 32))
            throw std::runtime_error("corrupt snapshot header in " + path.string());
        s.x.resize(static_cast<Eigen::Index>(n));
        RealField re(s.x.size()), im(s.x.size());
        in.read(reinterpret_cast<char*>(s.x.data()), static_cast<std::streamsize>(n * sizeof(double)));
        in.read(reinterpret_cast<char*>(re.data()), static_cast<std::streamsize>(n * sizeof(double)));
        in.read(reinterpret_cast<char*>(im.data()), static_cast<std::streamsize>(n * sizeof(double)));
        if (!in)
            throw std::runtime_error("truncated snapshot " + path.string());
        s.psi = re.cast<cd>() + I * im.cast<cd>();
        return s;
    }
    in.clear();
    in.seekg(0);
    std::vector<double> x, re, im;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos)
                s.t = std::stod(line.substr(eq + 1));
            continue;
        }
        if (line[0] == 'x')
            continue;
        double a, b, c;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3)
            throw std::runtime_error("malformed snapshot line in " + path.string() + ": " + line);
        x.push_back(a);
        re.push_back(b);
        im.push_back(c);
    }
    const auto n = static_cast<Eigen::Index>(x.size());
    s.x = Eigen::Map<RealField>(x.data(), n);
    s.psi = Eigen::Map<RealField>(re.data(), n).cast<cd>() + I * Eigen::Map<RealField>(im.data(), n).cast<cd>();
    return s;
}

void write_spectrum_csv(std::ostream& os, const DistortedSpectrum& S, const FrequencyGrid& fg)
{
    os << "xi,re_f_plus,im_f_plus,re_f_minus,im_f_minus\n";
    for (Eigen::Index k = 0; k < fg.m; ++k)
        os << format_double(fg.xi[k]) << ',' << format_double(S.f_plus[k].real()) << ','
           << format_double(S.f_plus[k].imag()) << ',' << format_double(S.f_minus[k].real()) << ','
           << format_double(S.f_minus[k].imag()) << '\n';
}

}
