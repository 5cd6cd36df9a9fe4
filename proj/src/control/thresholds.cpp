#include <cmath>
#include <numbers>
#include <string>

#include "npe/control.hpp"
#include "npe/error.hpp"

namespace npe {

double choose_t0(double u_inf) {
  if (!(u_inf > 0.0)) throw Error(ErrorCode::kDomain, "choose_t0: sup norm must be positive");
  return 1.0 / (8.0 * std::numbers::e * std::pow(u_inf, 4));
}

double a_constant(double t0) {
  if (!(t0 > 0.0)) throw Error(ErrorCode::kDomain, "a_constant: t0 must be positive");
  return std::exp(t0 - 0.25) / (std::numbers::sqrt2 * std::pow(t0, 0.25));
}

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw Error(ErrorCode::kDomain, std::string(name) + " must be positive");
}

}  // namespace

double lambda_threshold_1(double y0_half, double horizon, double beta_hat, double c_hat, double a) {
  require_positive(y0_half, "lambda_threshold_1: ||y0||_{1/2}");
  require_positive(beta_hat, "lambda_threshold_1: beta");
  require_positive(c_hat, "lambda_threshold_1: c");
  require_positive(a, "lambda_threshold_1: A");
  if (!(horizon >= 0.0)) throw Error(ErrorCode::kDomain, "lambda_threshold_1: T must be >= 0");
  const double y = y0_half;
  return c_hat * std::exp(15.0 * horizon) / beta_hat * (a * a * y + a * y * y + y * y * y);
}

double lambda_threshold_2(double y0_half, double t0, double beta_hat, double c_hat, double a) {
  require_positive(y0_half, "lambda_threshold_2: ||y0||_{1/2}");
  require_positive(beta_hat, "lambda_threshold_2: beta");
  require_positive(c_hat, "lambda_threshold_2: c");
  require_positive(a, "lambda_threshold_2: A");
  if (!(t0 >= 0.0)) throw Error(ErrorCode::kDomain, "lambda_threshold_2: t0 must be >= 0");
  const double y = y0_half;
  return c_hat / beta_hat *
         (a * a * y * std::exp(16.0 * t0) + a * y * y * std::exp(17.0 * t0) +
          y * y * y * std::exp(18.0 * t0));
}

Horizon stabilization_horizon(double beta_hat, double c1) {
  require_positive(beta_hat, "stabilization_horizon: beta");
  require_positive(c1, "stabilization_horizon: c1");
  auto f = [&](double x) { return beta_hat * std::pow(x, 16) + 32.0 * c1 * x - beta_hat; };
  double lo = 0.0;
  double hi = 1.0;
  // F is increasing on [0, 1]; bisect until the bracket stops shrinking.
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  const double root = std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
  return {std::log(1.0 / root), root};
}

}  // namespace npe
