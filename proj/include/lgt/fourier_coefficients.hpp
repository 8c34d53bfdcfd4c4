#pragma once

#include <Eigen/Dense>

namespace lgt {

/// Digamma function psi_0(x) for x > 0.
double digamma(double x);

/// Trigamma function psi_1(x) for x > 0.
double trigamma(double x);

/// Coefficients of the finite trigonometric series that reproduce the linear
/// and quadratic flux operators on the integer grid of the cyclic group with
/// 2L+1 elements.  Entry nu-1 holds the weight of the nu-th ladder power,
/// nu = 1..2L.
struct TrigCoefficients {
  Eigen::VectorXd sine;    ///< weights of (P^nu - P^dag^nu)/(2i)
  Eigen::VectorXd cosine;  ///< weights of (P^nu + P^dag^nu)/2
};

TrigCoefficients trig_series_coefficients(int L);

}  // namespace lgt
