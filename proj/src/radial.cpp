#include "dwb/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace dwb
{

Dimension Dimension::exterior_ball(int n, double r0)
{
  if (n < 2)
    throw DomainError("exterior_ball requires n >= 2");
  if (!(r0 > 0.0) || !std::isfinite(r0))
    throw DomainError("obstacle radius r0 must be positive for n >= 2");
  return Dimension(n, r0);
}

Dimension Dimension::make(int n, double r0)
{
  if (n < 1)
    throw DomainError("dimension n must be >= 1");
  return n == 1 ? half_line() : exterior_ball(n, r0);
}

RadialGrid::RadialGrid(double r0, double rmax, std::size_t m) : r0_(r0), m_(m), h_(0.0)
{
  if (!(r0 < rmax) || !std::isfinite(r0) || !std::isfinite(rmax))
    throw DomainError("radial grid requires r0 < rmax");
  if (m < 3)
    throw DomainError("radial grid requires at least 3 nodes");
  h_ = (rmax - r0) / static_cast<double>(m - 1);
}

RadialGrid RadialGrid::with_spacing(double r0, double rmax_min, double h)
{
  if (!(h > 0.0))
    throw DomainError("grid spacing must be positive");
  auto const cells = static_cast<std::size_t>(std::ceil((rmax_min - r0) / h - 1e-9));
  std::size_t const m = std::max<std::size_t>(cells, 2) + 1;
  return RadialGrid(r0, r0 + static_cast<double>(m - 1) * h, m);
}

std::vector<double> RadialGrid::nodes() const
{
  std::vector<double> r(m_);
  for (std::size_t i = 0; i < m_; ++i)
    r[i] = node(i);
  return r;
}

std::size_t RadialGrid::last_node_at_or_below(double r) const
{
  if (r <= r0_)
    return 0;
  auto const k = static_cast<std::size_t>(std::floor((r - r0_) / h_ + 1e-12));
  return std::min(k, m_ - 1);
}

double unit_sphere_area(int n)
{
  if (n < 1)
    throw DomainError("unit_sphere_area requires n >= 1");
  double const half = 0.5 * n;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double unit_ball_volume(int n) { return unit_sphere_area(n) / n; }

double radial_weight(int n, double r)
{
  if (n == 1)
    return 1.0;
  return unit_sphere_area(n) * std::pow(r, n - 1);
}

double strauss_exponent(int n)
{
  if (n < 1)
    throw DomainError("strauss_exponent requires n >= 1");
  if (n == 1)
    return std::numeric_limits<double>::infinity();
  double const a = n - 1.0;
  double const b = n + 1.0;
  return (b + std::sqrt(b * b + 8.0 * a)) / (2.0 * a);
}

namespace
{

void check_samples(RadialGrid const &grid, std::span<double const> f)
{
  if (f.size() != grid.size())
    throw DomainError("sample count does not match grid size");
}

} // namespace

double radial_quadrature(RadialGrid const &grid, std::span<double const> f, int n)
{
  check_samples(grid, f);
  double const w_n = n == 1 ? 1.0 : unit_sphere_area(n);
  double sum = 0.0;
  std::size_t const m = grid.size();
  for (std::size_t i = 0; i < m; ++i)
  {
    double const g = f[i] * std::pow(grid.node(i), n - 1);
    sum += (i == 0 || i == m - 1) ? 0.5 * g : g;
  }
  return w_n * grid.h() * sum;
}

double radial_quadrature(RadialGrid const &grid, std::span<double const> f, int n, double upper)
{
  check_samples(grid, f);
  if (upper >= grid.rmax())
    return radial_quadrature(grid, f, n);
  if (upper <= grid.r0())
    return 0.0;
  double const w_n = n == 1 ? 1.0 : unit_sphere_area(n);
  auto weighted = [&](std::size_t i) { return f[i] * std::pow(grid.node(i), n - 1); };

  std::size_t const j = grid.last_node_at_or_below(upper);
  double sum = 0.0;
  for (std::size_t i = 0; i < j; ++i)
    sum += 0.5 * (weighted(i) + weighted(i + 1));
  sum *= grid.h();

  double const rest = upper - grid.node(j);
  if (rest > 0.0)
  {
    double const frac = rest / grid.h();
    double const g_end = weighted(j) + frac * (weighted(j + 1) - weighted(j));
    sum += 0.5 * rest * (weighted(j) + g_end);
  }
  return w_n * sum;
}

double Profile::operator()(double r) const
{
  if (kind == Kind::zero)
    return 0.0;
  double const z = (r - center) / width;
  if (std::abs(z) >= 1.0)
    return 0.0;
  double const s = 1.0 - z * z;
  return scale * s * s * s * s;
}

double Profile::outer_radius() const { return kind == Kind::zero ? 0.0 : center + width; }

std::string Profile::describe() const
{
  if (kind == Kind::zero)
    return "zero";
  std::ostringstream os;
  os.precision(17);
  os << "bump(center=" << center << ",width=" << width << ",scale=" << scale << ")";
  return os.str();
}

Profile::Kind parse_profile_kind(std::string const &name)
{
  if (name == "bump" || name == "quartic_bump")
    return Profile::Kind::quartic_bump;
  if (name == "zero")
    return Profile::Kind::zero;
  throw DomainError("unknown profile '" + name + "' (expected bump or zero)");
}

void RadialProblem::validate() const
{
  if (!(p > 1.0) || !std::isfinite(p))
    throw DomainError("p must exceed 1");
  if (!(eps >= 0.0) || !std::isfinite(eps))
    throw DomainError("eps must be nonnegative");
  if (!(R > dim.r0()))
    throw DomainError("support radius R must exceed the obstacle radius r0");
  for (Profile const *prof : {&u0, &u1})
  {
    if (prof->kind == Profile::Kind::zero)
      continue;
    if (!(prof->width > 0.0))
      throw DomainError("profile width must be positive");
    if (prof->scale < 0.0)
      throw DomainError("initial data must be nonnegative");
    if (prof->outer_radius() > R)
      throw DomainError("initial data must vanish for r >= R");
  }
}

double support_radius_at(RadialProblem const &problem, double t)
{
  if (!(t >= 0.0))
    throw DomainError("support_radius_at requires t >= 0");
  return t + problem.R;
}

void apply_radial_laplacian(RadialGrid const &grid, int n, std::span<double const> u,
                            std::span<double> out)
{
  check_samples(grid, u);
  std::size_t const m = grid.size();
  double const h = grid.h();
  double const inv_h2 = 1.0 / (h * h);
  double const inv_2h = 0.5 / h;
  out[0] = 0.0;
  out[m - 1] = 0.0;
  for (std::size_t i = 1; i + 1 < m; ++i)
  {
    double const urr = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_h2;
    double const ur = (u[i + 1] - u[i - 1]) * inv_2h;
    out[i] = n == 1 ? urr : urr + (n - 1) / grid.node(i) * ur;
  }
}

LinearFit fit_line(std::span<double const> x, std::span<double const> y)
{
  if (x.size() != y.size() || x.size() < 2)
    throw DomainError("fit_line needs at least two paired samples");
  std::size_t const k = x.size();
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < k; ++i)
  {
    xm += x[i];
    ym += y[i];
  }
  xm /= static_cast<double>(k);
  ym /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i)
  {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  if (!(sxx > 0.0))
    throw DomainError("fit_line needs distinct abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  fit.x_mean = xm;
  fit.sxx = sxx;
  fit.count = k;
  if (k > 2)
  {
    double ss = 0.0;
    for (std::size_t i = 0; i < k; ++i)
    {
      double const e = y[i] - (fit.intercept + fit.slope * x[i]);
      ss += e * e;
    }
    fit.residual_sd = std::sqrt(ss / static_cast<double>(k - 2));
  }
  return fit;
}

} // namespace dwb
