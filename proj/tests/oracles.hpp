#pragma once

#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

using cd = std::complex<double>;

// composite Simpson on [a, b] with n (even) panels
inline cd simpson(const std::function<cd(double)>& f, double a, double b, int n)
{
    const double h = (b - a) / n;
    cd s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

inline double sech(double x) { return 1.0 / std::cosh(x); }

// (2 pi)^{-1/2} int e^{-i x xi} sech^l(x) tanh^k(x) dx
inline cd ft(int l, int k, double xi)
{
    const double L = 60.0;
    return simpson([&](double x) { return std::exp(cd(0.0, -x * xi)) * std::pow(sech(x), l) * std::pow(std::tanh(x), k); },
                   -L, L, 120000) /
           std::sqrt(2.0 * M_PI);
}

}
