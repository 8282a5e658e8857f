#pragma once

#include "soliton_lab/grid.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace sl {

enum class Scheme { strang, yoshida4 };

struct EvolutionConfig {
    SpatialGrid grid;
    double dt = 1e-3;
    double t_end = 1.0;
    int snapshot_stride = 100;
    bool symmetrize = true;
    Scheme scheme = Scheme::strang;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Field> fields;
    std::vector<double> mass, energy;
    bool aborted = false;
    std::string diagnostic;
};

// M = int |psi|^2, E = int (|psi_x|^2 / 2 - |psi|^4 / 4)
double mass(const Field& psi, const SpatialGrid& g);
double energy(const Field& psi, const SpatialGrid& g);

// i psi_t + psi_xx + |psi|^2 psi = 0 by operator splitting; propagators cached per dt
class SplitStepper {
public:
    SplitStepper(const SpatialGrid& g, double dt, Scheme scheme);
    void step(Field& psi) const;
    double dt() const { return dt_; }

private:
    struct Substep {
        double tau;
        Eigen::ArrayXcd linear;
    };
    void strang(Field& psi, const Substep& s) const;

    SpatialGrid grid_;
    double dt_;
    std::vector<Substep> substeps_;
};

Field step(const Field& psi, double dt, const SpatialGrid& g, Scheme scheme = Scheme::strang);

// number of steps, or ConfigError when t_end / dt is not integral or the phase bound fails
long step_count(const EvolutionConfig& c, const Field& psi0);

Trajectory run(const EvolutionConfig& c, const Field& psi0, double odd_tolerance = 1e-8);

}
