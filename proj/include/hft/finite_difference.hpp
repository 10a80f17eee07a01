#pragma once

#include <cmath>
#include <concepts>
#include <string>

#include "hft/error.hpp"
#include "hft/matrix.hpp"

namespace hft {

inline constexpr double kDefaultFdStep = 1e-4;

namespace detail {
template <class F>
double checked_eval(F& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y))
    throw NumericError("fd_derivative: non-finite function value at " + std::to_string(x));
  return y;
}
}  // namespace detail

// Central difference with one Richardson level: (4·D(h/2) − D(h))/3, error O(h⁴).
template <class F>
  requires std::invocable<F&, double>
double fd_derivative(F&& f, double x0, double h = kDefaultFdStep) {
  require(h > 0.0, "fd_derivative: step must be positive");
  const double d1 = (detail::checked_eval(f, x0 + h) - detail::checked_eval(f, x0 - h)) / (2.0 * h);
  const double d2 =
      (detail::checked_eval(f, x0 + 0.5 * h) - detail::checked_eval(f, x0 - 0.5 * h)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace hft
