#include "lgt/fourier_coefficients.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lgt {

namespace {

// Bernoulli-number weights of the asymptotic expansions, -B_{2n}/(2n) for
// psi_0 and B_{2n} for psi_1.
constexpr double kDigammaTail[] = {
    -1.0 / 12.0,  1.0 / 120.0,    -1.0 / 252.0, 1.0 / 240.0,
    -1.0 / 132.0, 691.0 / 32760.0, -1.0 / 12.0,
};
constexpr double kBernoulli[] = {
    1.0 / 6.0,  -1.0 / 30.0,    1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0,
};
constexpr double kShift = 10.0;

}  // namespace

double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: requires x > 0");
  double acc = 0.0;
  while (x < kShift) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  double tail = 0.0;
  double p = inv2;
  for (double c : kDigammaTail) {
    tail += c * p;
    p *= inv2;
  }
  return acc + std::log(x) - 0.5 / x + tail;
}

double trigamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("trigamma: requires x > 0");
  double acc = 0.0;
  while (x < kShift) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double tail = 0.0;
  double p = inv * inv2;
  for (double c : kBernoulli) {
    tail += c * p;
    p *= inv2;
  }
  return acc + inv + 0.5 * inv2 + tail;
}

TrigCoefficients trig_series_coefficients(int L) {
  if (L < 1) throw std::invalid_argument("trig_series_coefficients: L >= 1");
  const int n = 2 * L + 1;
  TrigCoefficients out;
  out.sine.resize(2 * L);
  out.cosine.resize(2 * L);
  constexpr double pi = std::numbers::pi;
  for (int nu = 1; nu <= 2 * L; ++nu) {
    const double lo = nu / (2.0 * n);
    const double hi = (n + nu) / (2.0 * n);
    const double sgn = (nu % 2 == 0) ? 1.0 : -1.0;
    out.sine[nu - 1] = -sgn / (2.0 * pi) * (digamma(hi) - digamma(lo));
    out.cosine[nu - 1] = sgn / (4.0 * pi * pi) * (trigamma(lo) - trigamma(hi));
  }
  return out;
}

}  // namespace lgt
