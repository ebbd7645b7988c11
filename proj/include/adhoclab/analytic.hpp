#pragma once

#include <cmath>
#include <stdexcept>

#include "adhoclab/expint.hpp"
#include "adhoclab/quadrature.hpp"

namespace adhoclab {

inline constexpr double kSqrt2Pi = 2.50662827463100050241576528481104525;

/* Inputs of the delivery-ratio and delay models. lambda is a spatial vehicle
 * density (vehicles per meter): every exponent lambda*x in the model needs
 * lambda*length dimensionless, and the traffic-volume conversion below yields
 * veh/m as well. */
struct ModelParams {
  double lambda = 0.00025;  // vehicles per meter
  double range_r = 250.0;   // radio range, meters
  double wait_t = 10.0;     // max one-step wait time T, seconds
  double sigma = 3.0;       // velocity std dev, m/s
  double gamma = 1.0;       // wait-time density coefficient
  double delta = 0.3;       // average transmission time, seconds

  void validate() const {
    if (!(lambda >= 0.0)) throw std::domain_error("ModelParams: lambda must be >= 0");
    if (!(range_r > 0.0)) throw std::domain_error("ModelParams: range_r must be > 0");
    if (!(wait_t >= 0.0)) throw std::domain_error("ModelParams: wait_t must be >= 0");
    if (!(sigma > 0.0)) throw std::domain_error("ModelParams: sigma must be > 0");
    if (!(gamma > 0.0)) throw std::domain_error("ModelParams: gamma must be > 0");
    if (!(delta >= 0.0)) throw std::domain_error("ModelParams: delta must be >= 0");
  }
};

/* Delivery probability with an out-of-range flag: values can exceed 1 for
 * large gamma; the caller decides how to present that, we never clamp. */
struct PdrResult {
  double value = 0.0;
  bool exceeds_unity = false;
};

inline double rate_lambda(double traffic_volume, double speed) {
  if (!(speed > 0.0)) throw std::domain_error("rate_lambda: speed must be > 0");
  if (!(traffic_volume >= 0.0))
    throw std::domain_error("rate_lambda: traffic_volume must be >= 0");
  return traffic_volume / (3600.0 * speed);
}

inline double velocity_pdf(double v, double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("velocity_pdf: sigma must be > 0");
  const double z = v / sigma;
  return std::exp(-0.5 * z * z) / (sigma * kSqrt2Pi);
}

inline double velocity_cdf(double v, double sigma) {
  if (!(sigma > 0.0)) throw std::domain_error("velocity_cdf: sigma must be > 0");
  return 0.5 * (1.0 + std::erf(v / (sigma * std::sqrt(2.0))));
}

/* beta(z) = -int_0^inf x e^{-zx} Ei(-x^2) dx.
 * Ei(-x^2) has an integrable log singularity at 0; the first panel [0, eps]
 * is evaluated from the small-argument expansion Ei(-w) ~ gamma + ln w, the
 * rest by quadrature. beta(0) = 1/2. */
inline double beta_fn(double z, const QuadratureSpec& quad = {}) {
  if (!(z >= 0.0)) throw std::domain_error("beta_fn: z must be >= 0");
  constexpr double kEps = 1e-8;
  // -int_0^eps x (gamma + 2 ln x) dx, e^{-zx} ~ 1 on the panel
  const double head = -kEps * kEps * (0.5 * detail::kEulerGamma + std::log(kEps) - 0.5);
  const double tail = integrate(
      [z](double x) { return x * std::exp(-z * x) * exp_integral_e1(x * x); }, kEps,
      std::numeric_limits<double>::infinity(), quad);
  return head + tail;
}

/* One-direction delivery ratio
 *   rho0 = (1 - e^{-lambda R}) + lambda gamma e^{-lambda R}
 *          int_0^inf e^{-lambda u} (1 - q(u/T)) du
 * The integral term is the wait-time contribution after substituting
 * w = u/t in the inner density integral. */
inline PdrResult pdr_one_dir(const ModelParams& p, const QuadratureSpec& quad = {}) {
  p.validate();
  if (p.lambda == 0.0) return {0.0, false};
  const double direct = 1.0 - std::exp(-p.lambda * p.range_r);
  double wait = 0.0;
  if (p.wait_t > 0.0) {
    const double sigma = p.sigma, T = p.wait_t, lambda = p.lambda;
    wait = p.lambda * p.gamma * std::exp(-p.lambda * p.range_r) *
           integrate(
               [lambda, sigma, T](double u) {
                 return std::exp(-lambda * u) * (1.0 - velocity_cdf(u / T, sigma));
               },
               0.0, std::numeric_limits<double>::infinity(), quad);
  }
  const double rho = direct + wait;
  return {rho, rho > 1.0};
}

/* Two-direction delivery ratio: same wait-term reduction under the
 * first-passage kernel e^{-(lambda^2 x^2 + 2 lambda x)}. */
inline PdrResult pdr_two_dir(const ModelParams& p, const QuadratureSpec& quad = {}) {
  p.validate();
  if (p.lambda == 0.0) return {0.0, false};
  const double lambda = p.lambda, R = p.range_r, sigma = p.sigma, T = p.wait_t;
  const double direct = integrate(
      [lambda](double x) { return lambda * std::exp(-(lambda * lambda * x * x + 2.0 * lambda * x)); },
      0.0, R, quad);
  double wait = 0.0;
  if (p.wait_t > 0.0) {
    wait = lambda * p.gamma *
           integrate(
               [lambda, R, sigma, T](double u) {
                 const double y = u + R;
                 return std::exp(-(lambda * lambda * y * y + 2.0 * lambda * y)) *
                        (1.0 - velocity_cdf(u / T, sigma));
               },
               0.0, std::numeric_limits<double>::infinity(), quad);
  }
  const double rho = direct + wait;
  return {rho, rho > 1.0};
}

namespace detail {

/* Closed form of the inner wait-delay integral:
 *   int_0^T (u/t) p(u/t) dt = -u Ei(-u^2 / (2 sigma^2 T^2)) / (2 sigma sqrt(2 pi)) */
inline double delay_inner(double u, double sigma, double T) {
  const double arg = u * u / (2.0 * sigma * sigma * T * T);
  if (arg > 745.0) return 0.0;  // E1 underflows
  return u * exp_integral_e1(arg) / (2.0 * sigma * kSqrt2Pi);
}

}  // namespace detail

inline double delay_one_dir_numeric(const ModelParams& p, const QuadratureSpec& quad = {}) {
  p.validate();
  if (p.lambda == 0.0 || p.wait_t == 0.0) return 0.0;
  const double lambda = p.lambda, sigma = p.sigma, T = p.wait_t;
  return p.lambda * p.gamma * std::exp(-p.lambda * p.range_r) *
         integrate(
             [lambda, sigma, T](double u) {
               return std::exp(-lambda * u) * detail::delay_inner(u, sigma, T);
             },
             0.0, std::numeric_limits<double>::infinity(), quad);
}

/* Beta form of the one-direction delay. The substitution x = sigma T sqrt(2) y
 * applied to the numeric form forces a sigma factor in the prefactor:
 *   tau0 = lambda gamma sigma T^2 e^{-lambda R} / sqrt(2 pi) * beta(lambda T sigma sqrt(2)) */
inline double delay_one_dir_beta(const ModelParams& p, const QuadratureSpec& quad = {}) {
  p.validate();
  if (p.lambda == 0.0 || p.wait_t == 0.0) return 0.0;
  const double z = p.lambda * p.wait_t * p.sigma * std::sqrt(2.0);
  return p.lambda * p.gamma * p.sigma * p.wait_t * p.wait_t *
         std::exp(-p.lambda * p.range_r) / kSqrt2Pi * beta_fn(z, quad);
}

inline double delay_two_dir_numeric(const ModelParams& p, const QuadratureSpec& quad = {}) {
  p.validate();
  if (p.lambda == 0.0 || p.wait_t == 0.0) return 0.0;
  const double lambda = p.lambda, R = p.range_r, sigma = p.sigma, T = p.wait_t;
  return lambda * p.gamma *
         integrate(
             [lambda, R, sigma, T](double u) {
               const double y = u + R;
               return std::exp(-(lambda * lambda * y * y + 2.0 * lambda * y)) *
                      detail::delay_inner(u, sigma, T);
             },
             0.0, std::numeric_limits<double>::infinity(), quad);
}

inline double average_delay(double tau0, const ModelParams& p) {
  p.validate();
  if (!(tau0 >= 0.0)) throw std::domain_error("average_delay: tau0 must be >= 0");
  return tau0 + p.delta;
}

}  // namespace adhoclab
