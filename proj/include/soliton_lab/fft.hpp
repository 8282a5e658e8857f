#pragma once

#include <Eigen/Dense>

namespace sl {

// unnormalized forward transform, inverse scaled by 1/N
Eigen::VectorXcd fft_forward(const Eigen::VectorXcd& v);
Eigen::VectorXcd fft_inverse(const Eigen::VectorXcd& v);

}
