#pragma once

// Radial geometry shared by every other component: the half-line / exterior
// of a ball, uniform radial grids, surface-measure quadrature and the
// problem definition for u_tt - Δu - Δu_t = |u|^p with Dirichlet data on
// the obstacle boundary.

#include <cstddef>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dwb
{

/// Thrown when a value violates a documented precondition or invariant.
class DomainError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Spatial dimension together with the obstacle geometry.
///
/// n = 1 is the half-line x > 0 (boundary at x = 0). For n >= 2 the domain
/// is the exterior of the closed ball of radius r0 > 0.
class Dimension
{
public:
  static Dimension half_line() { return Dimension(1, 0.0); }
  static Dimension exterior_ball(int n, double r0);

  /// Dispatches to half_line() for n == 1 (r0 is then ignored).
  static Dimension make(int n, double r0);

  int n() const { return n_; }
  double r0() const { return r0_; }
  bool is_half_line() const { return n_ == 1; }

  bool operator==(Dimension const &) const = default;

private:
  Dimension(int n, double r0) : n_(n), r0_(r0) {}
  int n_;
  double r0_;
};

/// Uniform grid r0 = r_0 < r_1 < ... < r_{m-1} = rmax.
class RadialGrid
{
public:
  RadialGrid(double r0, double rmax, std::size_t m);

  /// Smallest grid with spacing exactly h whose last node is >= rmax_min.
  static RadialGrid with_spacing(double r0, double rmax_min, double h);

  double r0() const { return r0_; }
  double rmax() const { return r0_ + static_cast<double>(m_ - 1) * h_; }
  std::size_t size() const { return m_; }
  double h() const { return h_; }
  double node(std::size_t i) const { return r0_ + static_cast<double>(i) * h_; }
  std::vector<double> nodes() const;

  /// Index of the last node with r_i <= r (clamped to [0, m-1]).
  std::size_t last_node_at_or_below(double r) const;

private:
  double r0_;
  std::size_t m_;
  double h_;
};

/// Surface area of the unit sphere S^{n-1}: 2π^{n/2}/Γ(n/2).
double unit_sphere_area(int n);

/// Volume of the closed unit ball in R^n.
double unit_ball_volume(int n);

/// Radial measure weight ω_n r^{n-1}; 1 on the half-line.
double radial_weight(int n, double r);

/// Strauss exponent p_c(n); +infinity for n == 1.
double strauss_exponent(int n);

/// Composite trapezoid value of ∫_Ω f dx for radial samples f on grid.
double radial_quadrature(RadialGrid const &grid, std::span<double const> f, int n);

/// Same integral restricted to r <= upper. The partial cell ending at
/// `upper` uses the linear interpolant of the weighted integrand.
double radial_quadrature(RadialGrid const &grid, std::span<double const> f, int n,
                         double upper);

/// Nonnegative radial profile for the initial data.
///
/// `quartic_bump` is scale·(1 - ((r - center)/width)^2)_+^4, a C^3 function
/// supported on [center - width, center + width].
struct Profile
{
  enum class Kind
  {
    zero,
    quartic_bump
  };

  Kind kind = Kind::quartic_bump;
  double center = 2.0;
  double width = 1.0;
  double scale = 1.0;

  double operator()(double r) const;
  /// Radius beyond which the profile vanishes identically.
  double outer_radius() const;
  std::string describe() const;

  static Profile zero() { return Profile{Kind::zero, 0.0, 1.0, 0.0}; }
  static Profile bump(double center, double width, double scale = 1.0)
  {
    return Profile{Kind::quartic_bump, center, width, scale};
  }
};

/// Profile keyword used in configuration files ("bump" or "zero").
Profile::Kind parse_profile_kind(std::string const &name);

struct RadialProblem
{
  Dimension dim = Dimension::exterior_ball(3, 1.0);
  double p = 2.0;
  double eps = 1.0;
  Profile u0 = Profile::bump(2.0, 1.0);
  Profile u1 = Profile::bump(2.0, 1.0);
  double R = 3.0;

  /// Throws DomainError when p <= 1, eps < 0, r0 >= R, or the data are
  /// not supported in B(R). eps == 0 is accepted (trivial solution).
  void validate() const;
};

/// t + R: the ball containing supp u(·, t).
double support_radius_at(RadialProblem const &problem, double t);

/// Applies the second-order radial Laplacian u_rr + ((n-1)/r) u_r at interior
/// nodes. Boundary entries of `out` are set to zero.
void apply_radial_laplacian(RadialGrid const &grid, int n, std::span<double const> u,
                            std::span<double> out);

/// |x|^p with a multiplication fast path for p = 2 and p = 3.
inline double abs_pow(double x, double p)
{
  double const a = x < 0.0 ? -x : x;
  if (p == 2.0)
    return a * a;
  if (p == 3.0)
    return a * a * a;
  return std::pow(a, p);
}

/// Ordinary least squares y ≈ intercept + slope·x.
struct LinearFit
{
  double slope = 0.0;
  double intercept = 0.0;
  /// Standard deviation of the residuals (n - 2 degrees of freedom).
  double residual_sd = 0.0;
  double x_mean = 0.0;
  double sxx = 0.0;
  std::size_t count = 0;
};

LinearFit fit_line(std::span<double const> x, std::span<double const> y);

} // namespace dwb
