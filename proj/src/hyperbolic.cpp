#include "soliton_lab/hyperbolic.hpp"

namespace sl {

std::complex<double> ft_sech_oracle(SechKernelSpec spec, double xi, const QuadratureConfig& q)
{
    if (spec.power < 1)
        throw UnsupportedKernel("ft_sech_oracle: power must be >= 1");
    const double L = q.half_length;
    const double tail = std::pow(sech(L), spec.power);
    if (tail > q.tail_tolerance)
        throw DomainTooSmall("ft_sech_oracle: sech^" + std::to_string(spec.power) + "(" + std::to_string(L) +
                             ") = " + std::to_string(tail) + " exceeds tail tolerance");
    const int n = q.points;
    const double h = 2.0 * L / n;
    double re = 0.0, im = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double x = -L + j * h;
        double k = std::pow(sech(x), spec.power);
        if (spec.with_tanh)
            k *= std::tanh(x);
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        re += w * k * std::cos(x * xi);
        im -= w * k * std::sin(x * xi);
    }
    const double s = h / std::sqrt(2.0 * std::numbers::pi);
    return {re * s, im * s};
}

}
