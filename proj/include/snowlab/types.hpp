#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace snowlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// 80 significant digits. The spiral's late turns are of order 1e-13 while
/// its coordinates reach 1e50, so triangle slacks sit far below double or
/// quad resolution.
using Wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<80>,
                                           boost::multiprecision::et_off>;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace snowlab
