#pragma once

#include "soliton_lab/grid.hpp"
#include "soliton_lab/modulation.hpp"
#include "soliton_lab/nls.hpp"
#include "soliton_lab/transform.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sl {

struct DecayReport {
    std::string law;
    double exponent = 0.0;
    double t_min = 0.0, t_max = 0.0;
    double residual = 0.0; // rms of the log-log fit
    int samples = 0;
    double band_lo = 0.0, band_hi = 0.0;
    bool pass = false;
    bool skipped = false;
};

// least-squares slope of log v against log t over t in [t_min, t_max]; at least 8 samples
DecayReport decay_fit(const std::vector<double>& t, const std::vector<double>& v, double t_min, double t_max,
                      const std::string& law, double band_lo, double band_hi);

struct ProfileSeries {
    double omega_bar = 1.0;
    std::vector<double> times;
    std::vector<DistortedSpectrum> spectra;
    std::vector<double> theta;
    std::vector<cd> d1, d2;
    std::vector<double> boundary_mass;
};

// theta(t) = int_0^t (gamma_dot - omega_bar) ds on the trace times
std::vector<double> theta_series(const ModulationTrace& trace, double omega_bar);

// f_+-(t) = e^{+-it(xi^2 + w)} F_+-[chi P_e U(t)] at the selected snapshots; chi = 1 on |x| <= taper L,
// blending to 0 at |x| = L (taper >= 1 disables)
ProfileSeries extract_profile(const ModulationTrace& trace, const Trajectory& tr, double omega_bar, const SpatialGrid& g,
                              const FrequencyGrid& fg, const std::vector<std::size_t>& snapshots, double taper = 1.0);

// C^2 bump: 1 on |xi| <= 1, 0 on |xi| >= 2
double chi0(double xi);

struct LocalDecaySplit {
    cd h1, h2;
    Field R_u, R_ubar;
};

// u_e = h1 Phi1 - h2 Phi2 + R_u, conj(u)_e = h1 Phi2 - h2 Phi1 + R_ubar on the nodes x
LocalDecaySplit local_decay_split(const DistortedSpectrum& profile, double t, const FrequencyGrid& fg,
                                  const RealField& x);

// w_+(t, xi) = f_+ e^{i theta} e^{i Theta_+}, Theta_+ = 1/2 int_1^t |f_+|^2 / s ds
std::vector<Field> w_plus(const ProfileSeries& p);

struct ScatteringReport {
    std::vector<double> t_lo, t_hi;
    std::vector<double> differences; // sup_xi |w_+(t_hi) - w_+(t_lo)|
    double slack = 0.2;
    bool monotone = false;
    bool skipped = false;
    double modulus_defect = 0.0; // max ||w_+| - |f_+||
};

// dyadic pairs (T/2^{k+1}, T/2^k), k = 0..pairs-1
ScatteringReport modified_scattering_check(const ProfileSeries& p, int pairs = 4, double slack = 0.2);

using SpectralFunction = std::function<cd(double)>;

cd asymptotic_formula(double t, double x, double omega_inf, const SpectralFunction& W_plus,
                      const SpectralFunction& W_minus, double theta_inf);

// linear interpolation of samples on the frequency grid, zero outside
SpectralFunction interpolate_spectrum(const Field& f, const FrequencyGrid& fg);

struct LinearDecayStudy {
    std::vector<double> times;
    std::vector<double> sup_norm;   // sup_x |(e^{itH} P_e F)_1|
    std::vector<double> local_norm; // sup_x <x>^{-2} |... - resonant part|
    DecayReport dispersive, local;
    cd c_plus, c_minus;
};

// c_+ = e^{i pi/4} <F, s3 Phi_+> / sqrt(4 pi), c_- = -e^{-i pi/4} <F, s3 Phi_-> / sqrt(4 pi)
LinearDecayStudy linear_decay(double omega, const VectorField& F, const SpatialGrid& g, const FrequencyGrid& fg,
                              const std::vector<double>& times, const RealField& x_far, const RealField& x_near);

}
