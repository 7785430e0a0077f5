#include "dwb/runner.hpp"

#include "dwb/simulation.hpp"
#include "dwb/weighted_estimates.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace dwb
{

ToleranceProfile parse_tolerance_profile(std::string const &name)
{
  if (name == "default")
    return ToleranceProfile::standard;
  if (name == "tight")
    return ToleranceProfile::tight;
  throw DomainError("tolerance profile must be 'default' or 'tight'");
}

std::string to_string(ToleranceProfile p) { return p == ToleranceProfile::tight ? "tight" : "default"; }

OdeTolerances ode_tolerances(ToleranceProfile p)
{
  return p == ToleranceProfile::tight ? OdeTolerances::tight() : OdeTolerances::defaults();
}

namespace
{

std::string fmt(double x) { return format_double(x); }

Json config_json(ConfigEcho const &echo)
{
  Json j = Json::object();
  for (auto const &[k, v] : echo)
    j[k] = v;
  return j;
}

char const *verdict(bool ok) { return ok ? "pass" : "fail"; }

// Status from the audit block: any "fail" fails the run.
std::string status_of(Json const &audits)
{
  for (auto const &[k, v] : audits.items())
    if (v == "fail")
      return "audit_failed";
  return "ok";
}

Json report_json(BlowupReport const &r)
{
  return Json{{"outcome", to_string(r.outcome)}, {"blew_up", r.blew_up},
              {"t_end", r.t_end},                {"t_blowup_est", r.t_blowup_est},
              {"f_max", r.f_max},                {"steps", r.steps},
              {"detail", r.detail}};
}

Json simulate_audits(RunCertificate const &c)
{
  auto optional_verdict = [](bool present, bool ok) { return present ? verdict(ok) : "skipped"; };
  Json a;
  a["support"] = verdict(c.support_ok);
  a["lemma9"] = verdict(c.lemma9_ok);
  a["identity"] = optional_verdict(c.identity.has_value(), c.identity_ok);
  a["inequality"] = optional_verdict(c.inequality.has_value(), c.inequality_ok);
  a["f0_exponent"] = optional_verdict(c.blew_up && c.lower_bound.has_value(), c.exponent_ok);
  a["ode_consistency"] = optional_verdict(c.blew_up && c.ode.has_value(), c.ode_ok);
  if (c.critical_growth)
    a["critical_growth"] = verdict(c.critical_growth->increasing);
  return a;
}

RunArtifacts execute_simulate(RunSpec const &spec, SimulateRun const &b, ToleranceProfile profile)
{
  ConfigEcho const echo = resolved_config(spec);
  RadialGrid const grid = grid_for(b.problem, b.solver, b.t_end);
  TestFunctionSet const tf = make_test_functions(b.problem.dim, grid);
  SimulationResult const res = run(b.problem, b.solver, b.t_end, tf);
  CertificateOptions copts = b.certificate;
  copts.ode_tolerances = ode_tolerances(profile);
  RunCertificate const cert = certify_run(res.trace, res.report, b.problem, tf, copts);

  DataIntegrals const d = data_integrals(b.problem, tf);
  CsvDocument csv(echo, {"t", "F0", "F1", "sup_norm", "l2_norm", "nonlin_weighted", "tail_ratio",
                         "lemma9_bound"});
  FunctionalTrace const &tr = res.trace;
  for (std::size_t i = 0; i < tr.size(); ++i)
    csv.add_row({fmt(tr.times[i]), fmt(tr.F0[i]), fmt(tr.F1[i]), fmt(tr.sup_norm[i]),
                 fmt(tr.l2_norm[i]), fmt(tr.nonlin_weighted[i]), fmt(tr.tail_ratio[i]),
                 fmt(lemma9_bound(b.problem.eps, d, tr.times[i]))});

  SimulationReport const &r = res.report;
  RunArtifacts out;
  out.files.push_back({"trace.csv", csv.text()});
  Json &s = out.summary;
  s["run"] = spec.id;
  s["kind"] = to_string(spec.kind);
  s["config"] = config_json(echo);
  s["tolerance_profile"] = to_string(profile);
  s["detection_criterion"] =
      "sup norm exceeds blowup_threshold, or growth persists at dt_min, or a non-finite state";
  s["report"] = Json{{"blew_up", r.blew_up},
                     {"stop_reason", r.stop_reason},
                     {"t_end", r.t_end},
                     {"t_blowup_est", r.t_blowup_est},
                     {"t_blowup_half_width", r.t_blowup_half_width},
                     {"estimate_method", r.estimate_method},
                     {"final_sup_norm", r.final_sup_norm},
                     {"steps", r.steps},
                     {"rejections", r.rejections},
                     {"max_tail_ratio", r.max_tail_ratio},
                     {"tail_tolerance", r.tail_tolerance},
                     {"support_ok", r.support_ok},
                     {"grid_nodes", r.grid_nodes},
                     {"rmax", r.rmax}};
  s["certificate"] = certificate_json(cert);
  s["audits"] = simulate_audits(cert);
  out.status = status_of(s["audits"]);
  return out;
}

RunArtifacts execute_ode_scan(RunSpec const &spec, OdeScanRun const &b, ToleranceProfile profile,
                              unsigned jobs)
{
  ConfigEcho const echo = resolved_config(spec);
  GridScanOptions opts = b.grid;
  opts.jobs = jobs;
  std::vector<GridCell> const cells = classify_grid(b.a, b.q, b.p, opts, ode_tolerances(profile));
  CsvDocument csv(echo, {"a", "q", "p", "classification", "outcome", "blew_up", "t_blowup_est",
                         "t_end", "f_max", "steps"});
  std::size_t super = 0, super_blown = 0, inconclusive = 0;
  for (GridCell const &c : cells)
  {
    csv.add_row({fmt(c.a), fmt(c.q), fmt(c.p), to_string(c.classification),
                 to_string(c.report.outcome), c.report.blew_up ? "1" : "0",
                 fmt(c.report.t_blowup_est), fmt(c.report.t_end), fmt(c.report.f_max),
                 std::to_string(c.report.steps)});
    if (c.classification == Classification::supercritical)
    {
      ++super;
      super_blown += c.report.blew_up ? 1 : 0;
    }
    inconclusive += c.report.outcome == OdeOutcome::inconclusive ? 1 : 0;
  }
  RunArtifacts out;
  out.files.push_back({"cells.csv", csv.text()});
  Json &s = out.summary;
  s["run"] = spec.id;
  s["kind"] = to_string(spec.kind);
  s["config"] = config_json(echo);
  s["tolerance_profile"] = to_string(profile);
  s["cells"] = cells.size();
  s["supercritical"] = super;
  s["supercritical_blew_up"] = super_blown;
  s["supercritical_failures"] = count_supercritical_failures(cells);
  s["inconclusive"] = inconclusive;
  s["audits"] = Json{{"supercritical_blowup", verdict(super_blown == super)},
                     {"no_inconclusive", verdict(inconclusive == 0)}};
  out.status = status_of(s["audits"]);
  return out;
}

RunArtifacts execute_ode_threshold(RunSpec const &spec, OdeThresholdRun const &b,
                                   ToleranceProfile profile)
{
  ConfigEcho const echo = resolved_config(spec);
  ThresholdScan const scan = critical_threshold_scan(b.spec, b.k0, b.horizon, ode_tolerances(profile));
  CsvDocument csv(echo, {"K0", "outcome", "blew_up", "t_blowup_est", "t_end", "f_max", "steps"});
  for (std::size_t i = 0; i < scan.k0.size(); ++i)
  {
    BlowupReport const &r = scan.reports[i];
    csv.add_row({fmt(scan.k0[i]), to_string(r.outcome), r.blew_up ? "1" : "0", fmt(r.t_blowup_est),
                 fmt(r.t_end), fmt(r.f_max), std::to_string(r.steps)});
  }
  RunArtifacts out;
  out.files.push_back({"thresholds.csv", csv.text()});
  Json &s = out.summary;
  s["run"] = spec.id;
  s["kind"] = to_string(spec.kind);
  s["config"] = config_json(echo);
  s["tolerance_profile"] = to_string(profile);
  s["threshold"] = scan.threshold ? Json(*scan.threshold) : Json(nullptr);
  s["monotone"] = scan.monotone;
  s["audits"] = Json{{"threshold_exists", verdict(scan.threshold.has_value())},
                     {"threshold_monotone", verdict(scan.monotone)}};
  out.status = status_of(s["audits"]);
  return out;
}

RunArtifacts execute_testfn(RunSpec const &spec, TestFnRun const &b)
{
  ConfigEcho const echo = resolved_config(spec);
  RadialGrid const grid = RadialGrid::with_spacing(b.dim.r0(), b.rmax, b.h);
  TestFunctionSet const tf = make_test_functions(b.dim, grid);
  int const n = b.dim.n();

  CsvDocument csv(echo, {"r", "phi0", "phi1", "log_phi1", "dphi1"});
  bool positive = true, phi0_monotone = true, phi1_monotone = true, phi0_below_one = true;
  for (std::size_t i = 0; i < grid.size(); ++i)
  {
    csv.add_row({fmt(grid.node(i)), fmt(tf.phi0[i]), fmt(tf.phi1[i]), fmt(tf.log_phi1[i]),
                 fmt(tf.dphi1[i])});
    if (i > 0)
    {
      positive = positive && tf.phi0[i] > 0.0 && tf.log_phi1[i] > -INFINITY;
      phi0_monotone = phi0_monotone && tf.phi0[i] >= tf.phi0[i - 1];
      phi1_monotone = phi1_monotone && tf.log_phi1[i] > tf.log_phi1[i - 1];
    }
    if (n >= 3)
      phi0_below_one = phi0_below_one && tf.phi0[i] < 1.0;
  }
  double const rh = residual_harmonic(tf);
  double const re = residual_eigen(tf);
  double const rate = phi1_growth_rate(tf);
  double const rate_err = std::abs(rate * std::sqrt(2.0) - 1.0);

  RunArtifacts out;
  out.files.push_back({"samples.csv", csv.text()});
  Json &s = out.summary;
  s["run"] = spec.id;
  s["kind"] = to_string(spec.kind);
  s["config"] = config_json(echo);
  s["nodes"] = grid.size();
  s["residual_harmonic"] = rh;
  s["residual_eigen"] = re;
  s["growth_rate"] = rate;
  s["growth_rate_relative_error"] = rate_err;
  Json audits{{"residual_harmonic", verdict(rh < 1e-4)},
              {"residual_eigen", verdict(re < 1e-4)},
              {"growth_rate", verdict(rate_err < 0.02)},
              {"positivity", verdict(positive)},
              {"phi0_monotone", verdict(phi0_monotone)},
              {"phi1_monotone", verdict(phi1_monotone)}};
  if (n >= 3)
    audits["phi0_below_one"] = verdict(phi0_below_one);
  if (n == 1)
  {
    // Closed form √2 sinh(x/√2) on [0, 10].
    double worst = 0.0;
    for (std::size_t i = 1; i < grid.size() && grid.node(i) <= 10.0 + 1e-12; ++i)
    {
      double const exact = std::sqrt(2.0) * std::sinh(grid.node(i) / std::sqrt(2.0));
      worst = std::max(worst, std::abs(tf.phi1[i] / exact - 1.0));
    }
    s["closed_form_relative_error"] = worst;
    audits["closed_form"] = verdict(worst < 1e-8);
  }
  s["audits"] = audits;
  out.status = status_of(audits);
  return out;
}

RunArtifacts execute_estimates(RunSpec const &spec, EstimatesRun const &b)
{
  ConfigEcho const echo = resolved_config(spec);
  RadialGrid const grid = RadialGrid::with_spacing(b.dim.r0(), b.t_max + b.R + b.h, b.h);
  TestFunctionSet const tf = make_test_functions(b.dim, grid);
  int const n = b.dim.n();
  double const env = envelope_exponent(n, b.p);

  std::vector<double> ts, l7, l8;
  for (std::size_t i = 0; i < b.samples; ++i)
  {
    double const x = static_cast<double>(i) / static_cast<double>(b.samples - 1);
    double const t = std::exp(std::log(b.t_min) + x * (std::log(b.t_max) - std::log(b.t_min)));
    ts.push_back(t);
    l7.push_back(log_integral_lemma7(tf, b.p, t, b.R));
    l8.push_back(log_integral_lemma8(tf, b.p, t, b.R));
  }
  DecayBound const plain{env, 0.0};
  EstimateFit const f7 = fit_decay_log(ts, l7, b.R, std::nullopt, plain);
  EstimateFit const f8 = fit_decay_log(ts, l8, b.R, std::nullopt, plain);

  CsvDocument csv(echo, {"t", "log_lemma7", "log_lemma8", "lemma7", "lemma8", "bound", "ratio7",
                         "ratio8"});
  for (std::size_t i = 0; i < ts.size(); ++i)
    csv.add_row({fmt(ts[i]), fmt(l7[i]), fmt(l8[i]), fmt(std::exp(l7[i])), fmt(std::exp(l8[i])),
                 fmt(plain(ts[i], b.R)), fmt(f7.ratios[i]), fmt(f8.ratios[i])});

  auto fit_json = [](EstimateFit const &f) {
    return Json{{"fitted_exponent", f.fitted_exponent},
                {"fitted_constant", f.fitted_constant},
                {"max_ratio", f.max_ratio},
                {"max_ratio_final_decade", max_ratio_final_decade(f)},
                {"ratio_nonincreasing_final_decade", ratio_nonincreasing_final_decade(f)}};
  };
  auto bounded = [](EstimateFit const &f) {
    return std::isfinite(f.max_ratio) && ratio_nonincreasing_final_decade(f);
  };

  RunArtifacts out;
  out.files.push_back({"estimates.csv", csv.text()});
  Json &s = out.summary;
  s["run"] = spec.id;
  s["kind"] = to_string(spec.kind);
  s["config"] = config_json(echo);
  s["target_exponent"] = env;
  s["lemma7"] = fit_json(f7);
  s["lemma8"] = fit_json(f8);
  Json audits{{"lemma7_exponent", verdict(std::abs(f7.fitted_exponent - env) <= 0.1)},
              {"lemma8_exponent", verdict(std::abs(f8.fitted_exponent - env) <= 0.1)},
              {"lemma7_ratio_bounded", verdict(bounded(f7))},
              {"lemma8_ratio_bounded", verdict(bounded(f8))}};
  if (n == 2)
  {
    double const lc = -1.0 / (b.p - 1.0);
    EstimateFit const f8log = fit_decay_log(ts, l8, b.R, lc, DecayBound{env, lc});
    s["lemma8_log_corrected"] = fit_json(f8log);
    audits["lemma8_log_exponent"] = verdict(std::abs(f8log.fitted_exponent - env) <= 0.1);
    audits["lemma8_log_ratio_bounded"] = verdict(bounded(f8log));
  }
  s["audits"] = audits;
  out.status = status_of(audits);
  return out;
}

} // namespace

Json certificate_json(RunCertificate const &c)
{
  Json j;
  j["rows"] = c.rows;
  j["window"] = Json{{"pre_blowup_rows", c.window_rows},
                     {"pre_blowup_t_end", c.window_t_end},
                     {"late_first_row", c.late_first}};
  j["lemma9"] = Json{{"c0", c.lemma9.c0},
                     {"int_phi1_u0", c.lemma9.int_phi1_u0},
                     {"int_phi1_u1", c.lemma9.int_phi1_u1},
                     {"margin", c.lemma9.margin},
                     {"worst_slack", c.lemma9.worst_slack},
                     {"holds", c.lemma9.holds}};
  if (c.identity)
    j["identity"] = Json{{"max_abs_residual", c.identity->max_abs},
                         {"relative_residual", c.identity->relative}};
  if (c.inequality)
    j["inequality"] = Json{{"k_fit", c.inequality->k_fit},
                           {"k_theory", c.inequality->k_theory},
                           {"violations", c.inequality->violations}};
  if (c.lower_bound)
    j["lower_bound"] = Json{{"delta_fit", c.lower_bound->delta_fit},
                            {"exponent_fit", c.lower_bound->exponent_fit},
                            {"target_exponent", c.lower_bound->target_exponent}};
  if (c.critical_growth)
    j["critical_growth"] = Json{{"k0_half", c.critical_growth->k0_half},
                                {"k0_quarter", c.critical_growth->k0_quarter},
                                {"increasing", c.critical_growth->increasing}};
  j["blowup"] = Json{{"blew_up", c.blew_up},
                     {"t_blowup_est", c.t_blowup_est},
                     {"half_width", c.t_blowup_half_width}};
  if (c.ode)
  {
    OdeConsistency const &o = *c.ode;
    j["ode_consistency"] = Json{{"a", o.spec.a},
                                {"q", o.spec.q},
                                {"k", o.spec.k},
                                {"delta", o.spec.delta},
                                {"R", o.spec.R},
                                {"variant", to_string(o.spec.variant)},
                                {"f0", o.f0},
                                {"f0prime", o.f0prime},
                                {"report", report_json(o.report)},
                                {"ratio_to_pde", o.ratio},
                                {"ok", o.ok},
                                {"error", o.error}};
  }
  j["support"] = Json{{"max_tail_ratio", c.max_tail_ratio}, {"ok", c.support_ok}};
  j["notes"] = c.notes;
  return j;
}

std::vector<std::string> output_names(RunKind kind)
{
  switch (kind)
  {
  case RunKind::simulate:
    return {"trace.csv", "summary.json"};
  case RunKind::ode_scan:
    return {"cells.csv", "summary.json"};
  case RunKind::ode_threshold:
    return {"thresholds.csv", "summary.json"};
  case RunKind::testfn:
    return {"samples.csv", "summary.json"};
  case RunKind::estimates:
    return {"estimates.csv", "summary.json"};
  }
  return {};
}

RunArtifacts execute_run(RunSpec const &run, ToleranceProfile profile, unsigned jobs)
{
  try
  {
    return std::visit(
        [&](auto const &b) -> RunArtifacts {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, SimulateRun>)
            return execute_simulate(run, b, profile);
          else if constexpr (std::is_same_v<T, OdeScanRun>)
            return execute_ode_scan(run, b, profile, jobs);
          else if constexpr (std::is_same_v<T, OdeThresholdRun>)
            return execute_ode_threshold(run, b, profile);
          else if constexpr (std::is_same_v<T, TestFnRun>)
            return execute_testfn(run, b);
          else
            return execute_estimates(run, b);
        },
        run.body);
  }
  catch (std::exception const &e)
  {
    RunArtifacts out;
    out.status = "error";
    out.summary["run"] = run.id;
    out.summary["kind"] = to_string(run.kind);
    out.summary["config"] = config_json(resolved_config(run));
    out.summary["error"] = e.what();
    return out;
  }
}

PlanOutcome run_plan(ExperimentPlan const &plan, RunnerOptions const &opts)
{
  namespace fs = std::filesystem;
  fs::path const index_path = opts.out_dir / "index.json";
  if (!opts.force)
  {
    std::vector<fs::path> targets{index_path};
    for (RunSpec const &r : plan.runs)
      for (std::string const &name : output_names(r.kind))
        targets.push_back(opts.out_dir / r.id / name);
    for (fs::path const &t : targets)
      if (fs::exists(t))
        throw OutputExistsError(t.string() + " exists; pass --force to overwrite");
  }

  std::vector<RunArtifacts> results(plan.runs.size());
  unsigned const jobs = std::max(1u, opts.jobs);
  unsigned const workers = std::min<unsigned>(jobs, static_cast<unsigned>(plan.runs.size()));
  unsigned const inner = workers <= 1 ? jobs : 1;
  if (workers <= 1)
  {
    for (std::size_t i = 0; i < plan.runs.size(); ++i)
      results[i] = execute_run(plan.runs[i], opts.profile, inner);
  }
  else
  {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < plan.runs.size(); i = next++)
          results[i] = execute_run(plan.runs[i], opts.profile, inner);
      });
    for (auto &th : pool)
      th.join();
  }

  PlanOutcome outcome;
  Json &index = outcome.index;
  index["plan"] = plan.name;
  index["tolerance_profile"] = to_string(opts.profile);
  index["runs"] = Json::array();
  for (std::size_t i = 0; i < plan.runs.size(); ++i)
  {
    RunSpec const &spec = plan.runs[i];
    RunArtifacts &res = results[i];
    res.summary["status"] = res.status;
    Json files = Json::array();
    for (OutputFile const &f : res.files)
    {
      write_atomic(opts.out_dir / spec.id / f.name, f.contents);
      files.push_back(spec.id + "/" + f.name);
    }
    write_atomic(opts.out_dir / spec.id / "summary.json", res.summary.dump(2) + "\n");
    files.push_back(spec.id + "/summary.json");

    Json entry{{"id", spec.id}, {"kind", to_string(spec.kind)}, {"status", res.status},
               {"files", files}, {"config", config_json(resolved_config(spec))}};
    if (res.summary.contains("audits"))
      entry["audits"] = res.summary["audits"];
    if (res.summary.contains("error"))
      entry["error"] = res.summary["error"];
    index["runs"].push_back(entry);
    if (res.status != "ok")
      outcome.exit_code = ExitCode::audit_failure;
  }
  write_atomic(index_path, index.dump(2) + "\n");
  return outcome;
}

FunctionalTrace read_trace_csv(std::string const &text)
{
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  FunctionalTrace tr;
  std::size_t line_no = 0;
  while (std::getline(in, line))
  {
    ++line_no;
    if (line.empty() || line.front() == '#')
      continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (header.empty())
    {
      header = cells;
      std::vector<std::string> const want{"t", "F0", "F1", "sup_norm", "l2_norm",
                                          "nonlin_weighted", "tail_ratio"};
      for (std::size_t i = 0; i < want.size(); ++i)
        if (i >= header.size() || header[i] != want[i])
          throw DomainError("trace CSV header does not start with t,F0,F1,sup_norm,l2_norm,"
                            "nonlin_weighted,tail_ratio");
      continue;
    }
    if (cells.size() != header.size())
      throw DomainError("trace CSV line " + std::to_string(line_no) + " has the wrong width");
    double v[7];
    for (int c = 0; c < 7; ++c)
    {
      std::string const &cell = cells[c];
      auto const res = std::from_chars(cell.data(), cell.data() + cell.size(), v[c]);
      if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw DomainError("trace CSV line " + std::to_string(line_no) + ": bad number '" +
                          cells[c] + "'");
    }
    tr.push_back(TraceRow{v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
  }
  tr.validate();
  return tr;
}

Json diagnose_files(std::filesystem::path const &trace_csv, std::filesystem::path const &summary_json,
                    ToleranceProfile profile, bool &audits_ok)
{
  Json const summary = Json::parse(read_file(summary_json));
  if (!summary.contains("config") || summary.value("kind", "") != "simulate")
    throw DomainError("summary is not from a simulate run");
  std::string text;
  for (auto const &[k, v] : summary["config"].items())
    if (k != "run")
      text += k + "=" + v.get<std::string>() + "\n";
  ExperimentPlan const plan = parse_config(text);
  if (plan.runs.size() != 1)
    throw DomainError("summary config does not describe a single run");
  SimulateRun const &b = std::get<SimulateRun>(plan.runs.front().body);

  FunctionalTrace const trace = read_trace_csv(read_file(trace_csv));
  Json const &rj = summary.at("report");
  SimulationReport rep;
  rep.blew_up = rj.at("blew_up").get<bool>();
  rep.t_blowup_est = rj.at("t_blowup_est").get<double>();
  rep.t_blowup_half_width = rj.at("t_blowup_half_width").get<double>();
  rep.t_end = rj.at("t_end").get<double>();
  rep.max_tail_ratio = 0.0;
  for (double r : trace.tail_ratio)
    rep.max_tail_ratio = std::max(rep.max_tail_ratio, r);
  rep.support_ok = rep.max_tail_ratio < rep.tail_tolerance;

  RadialGrid const grid = grid_for(b.problem, b.solver, b.t_end);
  TestFunctionSet const tf = make_test_functions(b.problem.dim, grid);
  CertificateOptions copts = b.certificate;
  copts.ode_tolerances = ode_tolerances(profile);
  RunCertificate const cert = certify_run(trace, rep, b.problem, tf, copts);

  Json out;
  out["run"] = summary.value("run", "");
  out["config"] = summary["config"];
  out["tolerance_profile"] = to_string(profile);
  out["certificate"] = certificate_json(cert);
  out["audits"] = simulate_audits(cert);
  audits_ok = status_of(out["audits"]) == "ok";
  return out;
}

} // namespace dwb
