#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sl {

struct SechKernelSpec {
    int power = 1;
    bool with_tanh = false;
};

struct UnsupportedKernel : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename T>
T sech(T x)
{
    T e = std::exp(-std::abs(x));
    return 2 * e / (1 + e * e);
}

// z / sinh(a z); even in z, equal to 1/a at z = 0.
template <typename T>
T z_cosech(T z, T a)
{
    T u = a * z;
    if (std::abs(u) < T(1.5707963267948966e-4)) {
        T u2 = u * u;
        return (1 - u2 / 6 + 7 * u2 * u2 / 360 - 31 * u2 * u2 * u2 / 15120) / a;
    }
    T au = std::abs(u);
    T e = std::exp(-au);
    // sinh|u| = -expm1(-2|u|) e^{|u|} / 2
    return std::abs(z) * 2 * e / -std::expm1(-2 * au);
}

template <typename T>
std::complex<T> ft_sech_power(SechKernelSpec spec, T xi)
{
    using std::numbers::pi_v;
    const T root = std::sqrt(pi_v<T> / 2);
    const T x2 = xi * xi;
    const int l = spec.power;
    if (l < 1 || l > 8)
        throw UnsupportedKernel("ft_sech_power: power " + std::to_string(l) + " outside 1..8");

    T value;
    if (l % 2 == 1) {
        const T base = root * sech(pi_v<T> * xi / 2);
        switch (l) {
        case 1: value = base; break;
        case 3: value = (1 + x2) / 2 * base; break;
        case 5: value = (1 + x2) * (9 + x2) / 24 * base; break;
        default: value = (1 + x2) * (9 + x2) * (25 + x2) / 720 * base; break;
        }
    } else {
        const T base = root * z_cosech(xi, pi_v<T> / 2);
        switch (l) {
        case 2: value = base; break;
        case 4: value = (4 + x2) / 6 * base; break;
        case 6: value = (4 + x2) * (16 + x2) / 120 * base; break;
        default: value = (4 + x2) * (16 + x2) * (36 + x2) / 5040 * base; break;
        }
    }
    if (!spec.with_tanh)
        return {value, T(0)};
    // xi / (l i) = -i xi / l
    return {T(0), -xi * value / T(l)};
}

struct QuadratureConfig {
    double half_length = 40.0;
    int points = 16384;
    double tail_tolerance = 1e-15;
};

std::complex<double> ft_sech_oracle(SechKernelSpec spec, double xi, const QuadratureConfig& q = {});

}
