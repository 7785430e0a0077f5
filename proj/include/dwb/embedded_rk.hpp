#pragma once

// Dormand–Prince 5(4) embedded pair with FSAL and standard PI-free step
// control. The stepper never steps past a caller-supplied limit, which lets
// callers land exactly on sample points instead of interpolating.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <type_traits>
#include <utility>

namespace dwb
{

struct RkOptions
{
  double rtol = 1e-10;
  double atol = 1e-14;
  double h_init = 1e-3;
  double h_min = 1e-14;
  double h_max = 1e300;
};

enum class RkStatus
{
  ok,
  step_underflow,
  non_finite
};

template<std::size_t N, class Rhs>
class EmbeddedRk45
{
public:
  using State = std::array<double, N>;

  EmbeddedRk45(Rhs rhs, double x0, State const &y0, RkOptions opts)
      : rhs_(std::move(rhs)), opts_(opts), x_(x0), y_(y0), h_(opts.h_init)
  {
    k1_ = rhs_(x_, y_);
  }

  double x() const { return x_; }
  State const &y() const { return y_; }
  /// Derivative at the current point (FSAL stage).
  State const &dydx() const { return k1_; }
  std::size_t accepted() const { return accepted_; }
  std::size_t rejected() const { return rejected_; }
  double suggested_step() const { return h_; }

  /// Takes one accepted step, never beyond x_limit (x_limit > x()).
  RkStatus step(double x_limit)
  {
    for (;;)
    {
      double h = std::min(h_, opts_.h_max);
      bool clipped = false;
      if (x_ + h >= x_limit)
      {
        h = x_limit - x_;
        clipped = true;
      }
      if (h < opts_.h_min * std::max(1.0, std::abs(x_)))
        return RkStatus::step_underflow;

      State y5{}, err{};
      State k7 = attempt(h, y5, err);

      double norm = 0.0;
      bool finite = true;
      for (std::size_t i = 0; i < N; ++i)
      {
        if (!std::isfinite(y5[i]))
          finite = false;
        double const sc = opts_.atol + opts_.rtol * std::max(std::abs(y_[i]), std::abs(y5[i]));
        double const e = err[i] / sc;
        norm = std::max(norm, std::abs(e));
      }
      if (!finite || !std::isfinite(norm))
      {
        ++rejected_;
        h_ = 0.25 * h;
        if (h_ < opts_.h_min * std::max(1.0, std::abs(x_)))
          return RkStatus::non_finite;
        continue;
      }

      if (norm <= 1.0)
      {
        x_ = clipped ? x_limit : x_ + h;
        y_ = y5;
        k1_ = k7;
        ++accepted_;
        double const grow = norm == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(norm, -0.2));
        double const next = h * std::max(1.0, grow);
        // Keep a clipped step from shrinking the controller's proposal.
        h_ = clipped ? std::max(h_, next) : next;
        return RkStatus::ok;
      }
      ++rejected_;
      h_ = h * std::max(0.1, 0.9 * std::pow(norm, -0.2));
    }
  }

  /// Steps until x() == x_target.
  RkStatus advance_to(double x_target)
  {
    while (x_ < x_target)
    {
      RkStatus const st = step(x_target);
      if (st != RkStatus::ok)
        return st;
    }
    return RkStatus::ok;
  }

private:
  State attempt(double h, State &y5, State &err)
  {
    // Dormand–Prince coefficients.
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    State const &k1 = k1_;
    State tmp{};
    auto stage = [&](auto &&combine) {
      for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y_[i] + h * combine(i);
      return tmp;
    };

    State const k2 = rhs_(x_ + c2 * h, stage([&](std::size_t i) { return a21 * k1[i]; }));
    State const k3 =
        rhs_(x_ + c3 * h, stage([&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; }));
    State const k4 = rhs_(x_ + c4 * h, stage([&](std::size_t i) {
                            return a41 * k1[i] + a42 * k2[i] + a43 * k3[i];
                          }));
    State const k5 = rhs_(x_ + c5 * h, stage([&](std::size_t i) {
                            return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i];
                          }));
    State const k6 = rhs_(x_ + h, stage([&](std::size_t i) {
                            return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                   a65 * k5[i];
                          }));
    for (std::size_t i = 0; i < N; ++i)
      y5[i] = y_[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    State const k7 = rhs_(x_ + h, y5);
    for (std::size_t i = 0; i < N; ++i)
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    return k7;
  }

  Rhs rhs_;
  RkOptions opts_;
  double x_;
  State y_;
  State k1_{};
  double h_;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
};

template<std::size_t N, class Rhs>
EmbeddedRk45<N, std::decay_t<Rhs>> make_rk45(Rhs &&rhs, double x0,
                                              std::array<double, N> const &y0, RkOptions opts)
{
  return EmbeddedRk45<N, std::decay_t<Rhs>>(std::forward<Rhs>(rhs), x0, y0, opts);
}

} // namespace dwb
