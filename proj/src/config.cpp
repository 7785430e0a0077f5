#include "dwb/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

namespace dwb
{

ConfigError::ConfigError(std::size_t line, std::string key, std::string const &message)
    : std::runtime_error("line " + std::to_string(line) + (key.empty() ? "" : ", key '" + key + "'") +
                         ": " + message),
      line_(line), key_(std::move(key))
{
}

std::string to_string(RunKind k)
{
  switch (k)
  {
  case RunKind::simulate:
    return "simulate";
  case RunKind::ode_scan:
    return "ode_scan";
  case RunKind::ode_threshold:
    return "ode_threshold";
  case RunKind::testfn:
    return "testfn";
  case RunKind::estimates:
    return "estimates";
  }
  return "simulate";
}

RunKind parse_run_kind(std::string const &name)
{
  for (RunKind k : {RunKind::simulate, RunKind::ode_scan, RunKind::ode_threshold, RunKind::testfn,
                    RunKind::estimates})
    if (to_string(k) == name)
      return k;
  throw DomainError("unknown run kind '" + name + "'");
}

std::string format_double(double x)
{
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  auto const res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

namespace
{

struct Entry
{
  std::string value;
  std::size_t line = 0;
};

struct Section
{
  std::string name;
  std::size_t line = 0;
  std::map<std::string, Entry> keys;
};

std::string trim(std::string_view s)
{
  auto const first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  auto const last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string const &value)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;)
  {
    auto const comma = value.find(',', start);
    out.push_back(trim(std::string_view(value).substr(start, comma - start)));
    if (comma == std::string::npos)
      break;
    start = comma + 1;
  }
  return out;
}

bool valid_name(std::string const &s)
{
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

// Keys accepted per run kind. `kind` is accepted everywhere.
std::set<std::string> const &allowed_keys(RunKind kind)
{
  static std::map<RunKind, std::set<std::string>> const table{
      {RunKind::simulate,
       {"n", "r0", "p", "eps", "R", "profile", "bump_center", "bump_width", "h", "dt", "t_end",
        "output_interval", "blowup_threshold", "dt_min", "cfl_safety", "growth_limit",
        "rmax_margin", "window_growth", "late_fraction"}},
      {RunKind::ode_scan, {"a", "q", "p", "k", "delta", "R", "horizon", "variant"}},
      {RunKind::ode_threshold,
       {"p", "a", "q", "K1", "T0", "R", "k0", "k0_min", "k0_max", "k0_count", "horizon"}},
      {RunKind::testfn, {"n", "r0", "h", "rmax"}},
      {RunKind::estimates, {"n", "r0", "p", "R", "h", "t_min", "t_max", "samples"}},
  };
  return table.at(kind);
}

// Keys whose comma-separated values expand into one run per value.
std::vector<std::string> sweep_keys(RunKind kind)
{
  switch (kind)
  {
  case RunKind::simulate:
    return {"n", "p", "eps"};
  case RunKind::estimates:
    return {"n", "p"};
  case RunKind::testfn:
    return {"n"};
  default:
    return {};
  }
}

class Reader
{
public:
  Reader(std::map<std::string, Entry> keys, std::size_t section_line)
      : keys_(std::move(keys)), section_line_(section_line)
  {
  }

  bool has(std::string const &key) const { return keys_.count(key) != 0; }

  std::size_t line(std::string const &key) const
  {
    auto it = keys_.find(key);
    return it == keys_.end() ? section_line_ : it->second.line;
  }

  [[noreturn]] void fail(std::string const &key, std::string const &msg) const
  {
    throw ConfigError(line(key), key, msg);
  }

  double number(std::string const &key, double fallback) const
  {
    auto it = keys_.find(key);
    return it == keys_.end() ? fallback : parse_number(key, it->second.value);
  }

  std::vector<double> numbers(std::string const &key, std::vector<double> fallback) const
  {
    auto it = keys_.find(key);
    if (it == keys_.end())
      return fallback;
    std::vector<double> out;
    for (std::string const &item : split_list(it->second.value))
      out.push_back(parse_number(key, item));
    return out;
  }

  long long integer(std::string const &key, long long fallback) const
  {
    auto it = keys_.find(key);
    if (it == keys_.end())
      return fallback;
    std::string const &v = it->second.value;
    long long x = 0;
    auto const res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
      fail(key, "expected an integer, got '" + v + "'");
    return x;
  }

  std::string text(std::string const &key, std::string fallback) const
  {
    auto it = keys_.find(key);
    return it == keys_.end() ? fallback : it->second.value;
  }

private:
  double parse_number(std::string const &key, std::string const &v) const
  {
    double x = 0.0;
    auto const res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size())
      fail(key, "expected a number, got '" + v + "'");
    if (!std::isfinite(x))
      fail(key, "value must be finite");
    return x;
  }

  std::map<std::string, Entry> keys_;
  std::size_t section_line_;
};

void require(bool ok, Reader const &rd, std::string const &key, std::string const &msg)
{
  if (!ok)
    rd.fail(key, msg);
}

Dimension read_dimension(Reader const &rd)
{
  long long const n = rd.integer("n", 3);
  require(n >= 1 && n <= 64, rd, "n", "n must lie in [1, 64]");
  double const r0 = rd.number("r0", 1.0);
  if (n >= 2)
    require(r0 > 0.0, rd, "r0", "r0 must be positive for n >= 2");
  return Dimension::make(static_cast<int>(n), r0);
}

SimulateRun read_simulate(Reader const &rd)
{
  SimulateRun run;
  RadialProblem &pr = run.problem;
  pr.dim = read_dimension(rd);
  pr.p = rd.number("p", 2.0);
  require(pr.p > 1.0, rd, "p", "p must exceed 1");
  pr.eps = rd.number("eps", 1.0);
  require(pr.eps >= 0.0, rd, "eps", "eps must be nonnegative");
  pr.R = rd.number("R", 3.0);
  require(pr.R > pr.dim.r0(), rd, "R", "R must exceed the obstacle radius r0");
  std::string const profile = rd.text("profile", "bump");
  Profile::Kind kind{};
  try
  {
    kind = parse_profile_kind(profile);
  }
  catch (DomainError const &e)
  {
    rd.fail("profile", e.what());
  }
  double const center = rd.number("bump_center", 2.0);
  double const width = rd.number("bump_width", 1.0);
  require(width > 0.0, rd, "bump_width", "bump_width must be positive");
  pr.u0 = kind == Profile::Kind::zero ? Profile::zero() : Profile::bump(center, width);
  pr.u1 = pr.u0;
  if (kind != Profile::Kind::zero)
  {
    require(center + width <= pr.R, rd, "bump_center",
            "bump support must lie inside B(R): bump_center + bump_width <= R");
    if (pr.dim.n() >= 2)
      require(center - width >= pr.dim.r0(), rd, "bump_center",
              "bump support must lie outside the obstacle: bump_center - bump_width >= r0");
    else
      require(center - width >= 0.0, rd, "bump_center", "bump support must lie in x >= 0");
  }

  SolverConfig &s = run.solver;
  s.h = rd.number("h", s.h);
  require(s.h > 0.0, rd, "h", "h must be positive");
  s.dt = rd.number("dt", 1e-2);
  require(s.dt > 0.0, rd, "dt", "dt must be positive");
  s.dt_min = rd.number("dt_min", s.dt_min);
  require(s.dt_min > 0.0 && s.dt_min <= s.dt, rd, "dt_min", "dt_min must lie in (0, dt]");
  s.cfl_safety = rd.number("cfl_safety", s.cfl_safety);
  require(s.cfl_safety > 0.0 && s.cfl_safety <= 1.0, rd, "cfl_safety",
          "cfl_safety must lie in (0, 1]");
  s.growth_limit = rd.number("growth_limit", s.growth_limit);
  require(s.growth_limit > 1.0, rd, "growth_limit", "growth_limit must exceed 1");
  s.output_interval = rd.number("output_interval", s.output_interval);
  require(s.output_interval > 0.0, rd, "output_interval", "output_interval must be positive");
  s.rmax_margin = rd.number("rmax_margin", s.rmax_margin);
  require(s.rmax_margin >= 0.0, rd, "rmax_margin", "rmax_margin must be nonnegative");
  s.blowup_threshold = rd.number("blowup_threshold", s.blowup_threshold);
  double const initial_sup = pr.eps * std::max(pr.u0.scale, pr.u1.scale);
  require(s.blowup_threshold > initial_sup, rd, "blowup_threshold",
          "blowup_threshold must exceed the initial sup norm");
  run.t_end = rd.number("t_end", run.t_end);
  require(run.t_end > 0.0, rd, "t_end", "t_end must be positive");

  run.certificate.window_growth = rd.number("window_growth", run.certificate.window_growth);
  require(run.certificate.window_growth > 1.0, rd, "window_growth", "window_growth must exceed 1");
  run.certificate.late_fraction = rd.number("late_fraction", run.certificate.late_fraction);
  require(run.certificate.late_fraction >= 0.0 && run.certificate.late_fraction < 1.0, rd,
          "late_fraction", "late_fraction must lie in [0, 1)");
  return run;
}

OdeScanRun read_ode_scan(Reader const &rd)
{
  OdeScanRun run;
  run.a = rd.numbers("a", run.a);
  run.q = rd.numbers("q", run.q);
  run.p = rd.numbers("p", run.p);
  for (double a : run.a)
    require(a >= 1.0, rd, "a", "every a must be >= 1");
  for (double p : run.p)
    require(p > 1.0, rd, "p", "p must exceed 1");
  run.grid.k = rd.number("k", 1.0);
  require(run.grid.k > 0.0, rd, "k", "k must be positive");
  run.grid.delta = rd.number("delta", 1.0);
  require(run.grid.delta > 0.0, rd, "delta", "delta must be positive");
  run.grid.R = rd.number("R", 1.0);
  require(run.grid.R > 0.0, rd, "R", "R must be positive");
  run.grid.horizon = rd.number("horizon", 1e6);
  require(run.grid.horizon > 0.0, rd, "horizon", "horizon must be positive");
  std::string const variant = rd.text("variant", "plain");
  try
  {
    run.grid.variant = parse_ode_variant(variant);
  }
  catch (DomainError const &e)
  {
    rd.fail("variant", e.what());
  }
  require(run.grid.variant != OdeVariant::log_critical, rd, "variant",
          "log_critical belongs to kind ode_threshold");
  if (run.grid.variant == OdeVariant::log_subcritical)
    require(run.grid.R > 1.0, rd, "R", "logarithmic weight needs R > 1");
  return run;
}

OdeThresholdRun read_ode_threshold(Reader const &rd)
{
  OdeThresholdRun run;
  OdeBlowupSpec &s = run.spec;
  s.variant = OdeVariant::log_critical;
  s.p = rd.number("p", strauss_exponent(2));
  require(s.p > 1.0, rd, "p", "p must exceed 1");
  s.a = rd.number("a", 3.0 - s.p / 2.0);
  require(s.a >= 1.0, rd, "a", "a must be >= 1");
  s.q = rd.number("q", 2.0 * (s.p - 1.0));
  s.K1 = rd.number("K1", 1.0);
  require(s.K1 > 0.0, rd, "K1", "K1 must be positive");
  s.T0 = rd.number("T0", 10.0);
  require(s.T0 > 0.0, rd, "T0", "T0 must be positive");
  s.R = rd.number("R", 1.0);
  require(s.R > 0.0, rd, "R", "R must be positive");
  require(s.T0 + s.R > 1.0, rd, "T0", "logarithmic weight needs T0 + R > 1");
  double const gap = (s.p - 1.0) * s.a - (s.q - 2.0);
  require(std::abs(gap) <= 1e-12 * std::max({1.0, std::abs((s.p - 1.0) * s.a), std::abs(s.q - 2.0)}),
          rd, "q", "log_critical needs (p-1)a = q-2");
  run.horizon = rd.number("horizon", 1e6);
  require(run.horizon > s.T0, rd, "horizon", "horizon must exceed T0");
  if (rd.has("k0"))
  {
    for (char const *key : {"k0_min", "k0_max", "k0_count"})
      require(!rd.has(key), rd, key, "give either k0 or k0_min/k0_max/k0_count");
    run.k0 = rd.numbers("k0", {});
  }
  else
  {
    double const lo = rd.number("k0_min", 1e-2);
    double const hi = rd.number("k0_max", 1e4);
    long long const count = rd.integer("k0_count", 25);
    require(lo > 0.0, rd, "k0_min", "k0_min must be positive");
    require(hi > lo, rd, "k0_max", "k0_max must exceed k0_min");
    require(count >= 2 && count <= 100000, rd, "k0_count", "k0_count must lie in [2, 100000]");
    for (long long i = 0; i < count; ++i)
      run.k0.push_back(
          std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * static_cast<double>(i) /
                                      static_cast<double>(count - 1)));
  }
  for (std::size_t i = 0; i < run.k0.size(); ++i)
  {
    require(run.k0[i] > 0.0, rd, "k0", "K0 values must be positive");
    if (i > 0)
      require(run.k0[i] > run.k0[i - 1], rd, "k0", "K0 values must increase");
  }
  s.K0 = run.k0.empty() ? 1.0 : run.k0.front();
  return run;
}

TestFnRun read_testfn(Reader const &rd)
{
  TestFnRun run;
  run.dim = read_dimension(rd);
  run.h = rd.number("h", run.h);
  require(run.h > 0.0, rd, "h", "h must be positive");
  run.rmax = rd.number("rmax", run.rmax);
  require(run.rmax > run.dim.r0() + 2.0 * run.h, rd, "rmax", "rmax must exceed r0 + 2h");
  return run;
}

EstimatesRun read_estimates(Reader const &rd)
{
  EstimatesRun run;
  run.dim = read_dimension(rd);
  run.p = rd.number("p", run.p);
  require(run.p > 1.0, rd, "p", "p must exceed 1");
  run.R = rd.number("R", run.R);
  require(run.R > run.dim.r0(), rd, "R", "R must exceed the obstacle radius r0");
  run.h = rd.number("h", run.h);
  require(run.h > 0.0, rd, "h", "h must be positive");
  run.t_min = rd.number("t_min", run.t_min);
  require(run.t_min >= 1.0, rd, "t_min", "t_min must be >= 1");
  run.t_max = rd.number("t_max", run.t_max);
  require(run.t_max >= 10.0 * run.t_min, rd, "t_max", "t_max must be at least 10 t_min");
  long long const samples = rd.integer("samples", 16);
  require(samples >= 8 && samples <= 100000, rd, "samples", "samples must lie in [8, 100000]");
  run.samples = static_cast<std::size_t>(samples);
  if (run.dim.n() == 2)
    require(run.t_min + run.R > 1.0, rd, "t_min", "log correction needs t_min + R > 1");
  return run;
}

RunSpec build_run(std::string id, RunKind kind, Reader const &rd)
{
  RunSpec run;
  run.id = std::move(id);
  run.kind = kind;
  switch (kind)
  {
  case RunKind::simulate:
    run.body = read_simulate(rd);
    break;
  case RunKind::ode_scan:
    run.body = read_ode_scan(rd);
    break;
  case RunKind::ode_threshold:
    run.body = read_ode_threshold(rd);
    break;
  case RunKind::testfn:
    run.body = read_testfn(rd);
    break;
  case RunKind::estimates:
    run.body = read_estimates(rd);
    break;
  }
  return run;
}

void expand_section(Section const &sec, std::map<std::string, Entry> const &globals,
                    RunKind default_kind, std::vector<RunSpec> &runs)
{
  std::map<std::string, Entry> merged = globals;
  for (auto const &[k, e] : sec.keys)
    merged[k] = e;

  RunKind kind = default_kind;
  if (auto it = merged.find("kind"); it != merged.end())
  {
    try
    {
      kind = parse_run_kind(it->second.value);
    }
    catch (DomainError const &e)
    {
      throw ConfigError(it->second.line, "kind", e.what());
    }
  }
  auto const &allowed = allowed_keys(kind);
  for (auto const &[k, e] : merged)
    if (k != "kind" && allowed.count(k) == 0)
      throw ConfigError(e.line, k, "unknown key for kind " + to_string(kind));
  merged.erase("kind");

  // Cartesian product over the sweep keys, in the fixed order of sweep_keys().
  std::vector<std::map<std::string, Entry>> variants{merged};
  std::vector<std::string> ids{sec.name};
  for (std::string const &key : sweep_keys(kind))
  {
    auto it = merged.find(key);
    if (it == merged.end())
      continue;
    std::vector<std::string> values = split_list(it->second.value);
    if (values.size() == 1)
      continue;
    std::vector<std::map<std::string, Entry>> next;
    std::vector<std::string> next_ids;
    for (std::size_t v = 0; v < variants.size(); ++v)
      for (std::string const &value : values)
      {
        if (value.empty())
          throw ConfigError(it->second.line, key, "empty entry in list");
        auto m = variants[v];
        m[key].value = value;
        next.push_back(std::move(m));
        next_ids.push_back(ids[v] + "_" + key + value);
      }
    variants = std::move(next);
    ids = std::move(next_ids);
  }
  for (std::size_t v = 0; v < variants.size(); ++v)
  {
    for (auto const &[k, e] : variants[v])
    {
      bool const list_ok = (kind == RunKind::ode_scan && (k == "a" || k == "q" || k == "p")) ||
                           (kind == RunKind::ode_threshold && k == "k0");
      if (!list_ok && e.value.find(',') != std::string::npos)
        throw ConfigError(e.line, k, "lists are not accepted for this key");
    }
    runs.push_back(build_run(ids[v], kind, Reader(variants[v], sec.line)));
  }
}

} // namespace

ExperimentPlan parse_config(std::string_view text, RunKind default_kind)
{
  ExperimentPlan plan;
  Section globals;
  globals.name = "run";
  std::vector<Section> sections;
  std::set<std::string> section_names;
  Section *current = &globals;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size())
  {
    auto const nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto const hash = raw.find('#'); hash != std::string_view::npos)
      raw = raw.substr(0, hash);
    std::string const line = trim(raw);
    if (line.empty())
      continue;
    if (line.front() == '[')
    {
      if (line.back() != ']')
        throw ConfigError(line_no, "", "malformed section header");
      std::string const name = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!valid_name(name))
        throw ConfigError(line_no, "", "section names use letters, digits, '_', '-' or '.'");
      if (!section_names.insert(name).second)
        throw ConfigError(line_no, "", "duplicate run name '" + name + "'");
      sections.push_back(Section{name, line_no, {}});
      current = &sections.back();
      continue;
    }
    auto const eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line_no, "", "expected key = value");
    std::string const key = trim(std::string_view(line).substr(0, eq));
    std::string const value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty())
      throw ConfigError(line_no, "", "missing key");
    if (value.empty())
      throw ConfigError(line_no, key, "missing value");
    if (key == "name")
    {
      if (current != &globals)
        throw ConfigError(line_no, key, "the plan name is a top-level key");
      if (!valid_name(value))
        throw ConfigError(line_no, key, "names use letters, digits, '_', '-' or '.'");
      plan.name = value;
      continue;
    }
    if (!current->keys.emplace(key, Entry{value, line_no}).second)
      throw ConfigError(line_no, key, "key given twice in the same section");
  }

  // Without sections the top-level keys form one run; with none at all the plan is empty.
  if (sections.empty() && !globals.keys.empty())
  {
    globals.line = 1;
    sections.push_back(globals);
    globals.keys.clear();
  }
  for (Section const &sec : sections)
    expand_section(sec, globals.keys, default_kind, plan.runs);

  std::set<std::string> ids;
  for (RunSpec const &r : plan.runs)
    if (!ids.insert(r.id).second)
      throw ConfigError(0, "", "duplicate run name '" + r.id + "'");
  return plan;
}

std::vector<std::pair<std::string, std::string>> resolved_config(RunSpec const &run)
{
  std::vector<std::pair<std::string, std::string>> out;
  auto num = [&](char const *k, double v) { out.emplace_back(k, format_double(v)); };
  auto list = [&](char const *k, std::vector<double> const &v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += (i ? "," : "") + format_double(v[i]);
    out.emplace_back(k, s);
  };
  out.emplace_back("run", run.id);
  out.emplace_back("kind", to_string(run.kind));
  std::visit(
      [&](auto const &b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, SimulateRun>)
        {
          RadialProblem const &pr = b.problem;
          out.emplace_back("n", std::to_string(pr.dim.n()));
          num("r0", pr.dim.r0());
          num("p", pr.p);
          num("eps", pr.eps);
          num("R", pr.R);
          out.emplace_back("profile", pr.u0.kind == Profile::Kind::zero ? "zero" : "bump");
          num("bump_center", pr.u0.center);
          num("bump_width", pr.u0.width);
          num("h", b.solver.h);
          num("dt", b.solver.dt);
          num("t_end", b.t_end);
          num("output_interval", b.solver.output_interval);
          num("blowup_threshold", b.solver.blowup_threshold);
          num("dt_min", b.solver.dt_min);
          num("cfl_safety", b.solver.cfl_safety);
          num("growth_limit", b.solver.growth_limit);
          num("rmax_margin", b.solver.rmax_margin);
          num("window_growth", b.certificate.window_growth);
          num("late_fraction", b.certificate.late_fraction);
        }
        else if constexpr (std::is_same_v<T, OdeScanRun>)
        {
          list("a", b.a);
          list("q", b.q);
          list("p", b.p);
          num("k", b.grid.k);
          num("delta", b.grid.delta);
          num("R", b.grid.R);
          num("horizon", b.grid.horizon);
          out.emplace_back("variant", to_string(b.grid.variant));
        }
        else if constexpr (std::is_same_v<T, OdeThresholdRun>)
        {
          num("p", b.spec.p);
          num("a", b.spec.a);
          num("q", b.spec.q);
          num("K1", b.spec.K1);
          num("T0", b.spec.T0);
          num("R", b.spec.R);
          list("k0", b.k0);
          num("horizon", b.horizon);
        }
        else if constexpr (std::is_same_v<T, TestFnRun>)
        {
          out.emplace_back("n", std::to_string(b.dim.n()));
          num("r0", b.dim.r0());
          num("h", b.h);
          num("rmax", b.rmax);
        }
        else
        {
          out.emplace_back("n", std::to_string(b.dim.n()));
          num("r0", b.dim.r0());
          num("p", b.p);
          num("R", b.R);
          num("h", b.h);
          num("t_min", b.t_min);
          num("t_max", b.t_max);
          out.emplace_back("samples", std::to_string(b.samples));
        }
      },
      run.body);
  return out;
}

} // namespace dwb
