#include "soliton_lab/fft.hpp"

#include <unsupported/Eigen/FFT>

namespace sl {

namespace {

Eigen::FFT<double>& engine()
{
    thread_local Eigen::FFT<double> fft;
    return fft;
}

}

Eigen::VectorXcd fft_forward(const Eigen::VectorXcd& v)
{
    Eigen::VectorXcd out(v.size());
    engine().fwd(out, v);
    return out;
}

Eigen::VectorXcd fft_inverse(const Eigen::VectorXcd& v)
{
    Eigen::VectorXcd out(v.size());
    engine().inv(out, v);
    return out;
}

}
