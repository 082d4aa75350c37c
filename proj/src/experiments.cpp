#include "frm/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "frm/config.hpp"

namespace frm {

namespace {

using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Regime {
  bool gls = false;
  bool ls = false;
};

Regime regime_for(const Dimensions& d) { return Regime{d.m < d.n, d.m > d.n}; }

ExperimentReport theory_report(const ModelConfig& config, const ModelInstance& inst,
                               const SpectralModel& spec, LambdaRange range) {
  ExperimentReport r;
  r.config = to_json(config);
  r.dims = inst.dims;
  r.seed = config.seed;
  r.null_risk = null_risk(inst);
  const double alpha = inst.dims.alpha();
  const Regime regime = regime_for(inst.dims);
  if (!regime.gls && !regime.ls) {
    throw Error(ErrorKind::InterpolationSingularity,
                "alpha = 1 (m = n = " + std::to_string(inst.dims.n) + "): GLS and LS risks diverge");
  }
  if (regime.gls) r.gls = gls_predict(spec, alpha, inst.sigma_bar_sq);
  if (regime.ls) r.ls = ls_predict(inst, spec, alpha, inst.sigma_bar_sq);
  auto [lambda, ridge] = optimal_lambda(spec, alpha, inst.sigma_bar_sq, range);
  r.lambda_star = lambda;
  r.ridge = ridge;
  return r;
}

std::string csv_field(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::optional<double> parse_optional(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::ConfigError, "bad numeric CSV field '" + s + "'");
  }
  if (used != s.size()) throw Error(ErrorKind::ConfigError, "bad numeric CSV field '" + s + "'");
  return v;
}

const char* kSweepHeader =
    "inv_alpha,m,k,null_risk,gls_theory,gls_mc,gls_mc_stderr,ls_theory,ls_mc,ls_mc_stderr,"
    "lambda_star,ridge_theory,ridge_mc,ridge_mc_stderr,error";

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json aggregate_json(const Aggregate& a) {
  auto field = [](const FieldStats& s) {
    return json{{"mean", s.mean}, {"std", s.stdev}, {"stderr", s.std_error}};
  };
  return json{{"count", a.count},
              {"norm_sq", field(a.norm_sq)},
              {"objective", field(a.objective)},
              {"residual_sq", field(a.residual_sq)},
              {"excess_risk", field(a.excess_risk)}};
}

struct Quantity {
  std::string name;
  double theory;
  const FieldStats* mc;
};

std::vector<Quantity> gls_quantities(const GlsPrediction& p, const Aggregate* mc) {
  return {{"gamma_hat", p.gamma_hat, nullptr},
          {"a1", p.a1, nullptr},
          {"a2", p.a2, nullptr},
          {"nu1_hat", p.nu1_hat, nullptr},
          {"risk", p.risk, mc ? &mc->excess_risk : nullptr},
          {"norm_sq", p.norm_sq(), mc ? &mc->norm_sq : nullptr},
          {"objective", p.objective, mc ? &mc->objective : nullptr},
          {"residual_sq", p.residual_sq(), mc ? &mc->residual_sq : nullptr}};
}

std::vector<Quantity> ridge_quantities(const RidgePrediction& p, const Aggregate* mc) {
  return {{"lambda", p.lambda, nullptr},
          {"gamma_hat", p.gamma_hat, nullptr},
          {"a1", p.a1r, nullptr},
          {"a2", p.a2r, nullptr},
          {"nu1_hat", p.nu1_hat, nullptr},
          {"risk", p.risk, mc ? &mc->excess_risk : nullptr},
          {"norm_sq", p.norm_sq, mc ? &mc->norm_sq : nullptr},
          {"objective", p.objective, mc ? &mc->objective : nullptr},
          {"residual_sq", p.residual_sq, mc ? &mc->residual_sq : nullptr}};
}

std::vector<Quantity> ls_quantities(const LsPrediction& p, const Aggregate* mc) {
  return {{"gamma_hat", p.gamma_hat, nullptr},
          {"a1", p.a1r, nullptr},
          {"nu1_hat", p.nu1_hat, nullptr},
          {"risk", p.risk, mc ? &mc->excess_risk : nullptr},
          {"norm_sq", p.norm_sq, mc ? &mc->norm_sq : nullptr},
          {"objective", p.objective, mc ? &mc->objective : nullptr},
          {"residual_sq", p.residual_sq, mc ? &mc->residual_sq : nullptr}};
}

std::vector<std::pair<std::string, std::vector<Quantity>>> report_quantities(const ExperimentReport& r) {
  std::vector<std::pair<std::string, std::vector<Quantity>>> out;
  if (r.gls) out.emplace_back("gls", gls_quantities(*r.gls, r.gls_mc ? &*r.gls_mc : nullptr));
  if (r.ls) out.emplace_back("ls", ls_quantities(*r.ls, r.ls_mc ? &*r.ls_mc : nullptr));
  out.emplace_back("ridge", ridge_quantities(r.ridge, r.ridge_mc ? &*r.ridge_mc : nullptr));
  return out;
}

std::optional<double> relative_gap(double theory, const FieldStats* mc) {
  if (!mc || theory == 0.0) return std::nullopt;
  return (mc->mean - theory) / theory;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::InvalidParameter:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NonSquare:
    case ErrorKind::NotPsd:
      return 2;
    case ErrorKind::IoError:
      return 4;
    default:
      return 3;
  }
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::IoError, "rename to " + path.string() + ": " + ec.message());
}

ExperimentReport cmd_theory(const ModelConfig& config, LambdaRange range) {
  const auto start = std::chrono::steady_clock::now();
  const ModelInstance inst = materialize(config);
  const SpectralModel spec = build_spectral(inst);
  ExperimentReport r = theory_report(config, inst, spec, range);
  r.wall_seconds = seconds_since(start);
  return r;
}

ExperimentReport cmd_simulate(const ModelConfig& config, int trials, std::uint64_t seed,
                              LambdaRange range) {
  const auto start = std::chrono::steady_clock::now();
  ModelConfig cfg = config;
  cfg.seed = seed;
  const ModelInstance inst = materialize(cfg);
  const SpectralModel spec = build_spectral(inst);
  ExperimentReport r = theory_report(cfg, inst, spec, range);
  r.trials = trials;

  std::vector<EstimatorKind> kinds;
  if (r.gls) kinds.emplace_back(Gls{});
  if (r.ls) kinds.emplace_back(Ls{});
  kinds.emplace_back(Ridge{r.lambda_star});
  std::vector<Aggregate> aggs = run_trials(inst, kinds, trials, seed);
  std::size_t next = 0;
  if (r.gls) r.gls_mc = std::move(aggs[next++]);
  if (r.ls) r.ls_mc = std::move(aggs[next++]);
  r.ridge_mc = std::move(aggs[next]);
  r.wall_seconds = seconds_since(start);
  return r;
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "estimator,quantity,theory,mc_mean,mc_stderr,rel_gap\n";
  for (const auto& [name, quantities] : report_quantities(report)) {
    for (const auto& q : quantities) {
      os << name << ',' << q.name << ',' << format_number(q.theory) << ','
         << csv_field(q.mc ? std::optional<double>(q.mc->mean) : std::nullopt) << ','
         << csv_field(q.mc ? std::optional<double>(q.mc->std_error) : std::nullopt) << ','
         << csv_field(relative_gap(q.theory, q.mc)) << '\n';
    }
  }
  return os.str();
}

json report_to_json(const ExperimentReport& report) {
  json out;
  out["config"] = report.config;
  out["dims"] = {{"n", report.dims.n}, {"m", report.dims.m}, {"k", report.dims.k},
                 {"alpha", report.dims.alpha()}, {"kappa", report.dims.kappa()}};
  out["seed"] = report.seed;
  out["trials"] = report.trials;
  out["null_risk"] = report.null_risk;
  out["wall_seconds"] = report.wall_seconds;
  json est = json::object();
  for (const auto& [name, quantities] : report_quantities(report)) {
    json theory = json::object();
    for (const auto& q : quantities) theory[q.name] = q.theory;
    est[name]["theory"] = std::move(theory);
  }
  if (report.gls_mc) est["gls"]["mc"] = aggregate_json(*report.gls_mc);
  if (report.ls_mc) est["ls"]["mc"] = aggregate_json(*report.ls_mc);
  if (report.ridge_mc) est["ridge"]["mc"] = aggregate_json(*report.ridge_mc);
  out["estimators"] = std::move(est);
  return out;
}

std::vector<double> default_sweep_grid() { return {0.5, 0.7, 1.5, 2, 3, 5, 10, 20, 40, 60}; }

namespace {

SweepRow sweep_row(const ModelConfig& config, double inv_alpha, int trials, std::uint64_t seed,
                   LambdaRange range) {
  SweepRow row;
  row.inv_alpha = inv_alpha;
  try {
    if (!(inv_alpha > 0.0) || inv_alpha == 1.0) {
      throw Error(ErrorKind::InvalidParameter, "grid values must be positive and != 1");
    }
    const ModelInstance inst = materialize(config.with_inv_alpha(inv_alpha));
    row.m = inst.dims.m;
    row.k = inst.dims.k;
    const SpectralModel spec = build_spectral(inst);
    row.null_risk = null_risk(inst);
    const double alpha = inst.dims.alpha();
    const bool singular = std::abs(alpha - 1.0) < kSingularBand;
    std::vector<std::string> errors;
    if (singular) errors.emplace_back("singular: alpha within 1e-3 of 1");

    std::optional<GlsPrediction> gls;
    std::optional<LsPrediction> ls;
    if (!singular && alpha < 1.0) {
      try {
        gls = gls_predict(spec, alpha, inst.sigma_bar_sq);
        row.gls_theory = gls->risk;
      } catch (const Error& e) {
        errors.emplace_back(e.what());
      }
    }
    if (!singular && alpha > 1.0) {
      ls = ls_predict(inst, spec, alpha, inst.sigma_bar_sq);
      row.ls_theory = ls->risk;
    }
    const auto [lambda, ridge] = optimal_lambda(spec, alpha, inst.sigma_bar_sq, range);
    row.lambda_star = lambda;
    row.ridge_theory = ridge.risk;

    if (trials > 0) {
      std::vector<EstimatorKind> kinds;
      const bool run_gls = inst.dims.m < inst.dims.n && !singular;
      const bool run_ls = inst.dims.m > inst.dims.n && !singular;
      if (run_gls) kinds.emplace_back(Gls{});
      if (run_ls) kinds.emplace_back(Ls{});
      kinds.emplace_back(Ridge{lambda});
      const std::vector<Aggregate> aggs = run_trials(inst, kinds, trials, seed);
      std::size_t next = 0;
      if (run_gls) {
        row.gls_mc = aggs[next].excess_risk.mean;
        row.gls_mc_stderr = aggs[next++].excess_risk.std_error;
      }
      if (run_ls) {
        row.ls_mc = aggs[next].excess_risk.mean;
        row.ls_mc_stderr = aggs[next++].excess_risk.std_error;
      }
      row.ridge_mc = aggs[next].excess_risk.mean;
      row.ridge_mc_stderr = aggs[next].excess_risk.std_error;
    }
    for (std::size_t i = 0; i < errors.size(); ++i) row.error += (i ? "; " : "") + errors[i];
  } catch (const Error& e) {
    if (!row.error.empty()) row.error += "; ";
    row.error += e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> cmd_sweep(const ModelConfig& config, const std::vector<double>& grid,
                                int trials, std::uint64_t seed, LambdaRange range) {
  std::vector<SweepRow> rows(grid.size());
  const int count = static_cast<int>(grid.size());
  if (trials > 0) {
    // Trials are parallel inside each row.
    for (int i = 0; i < count; ++i) rows[i] = sweep_row(config, grid[i], trials, seed, range);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) rows[i] = sweep_row(config, grid[i], trials, seed, range);
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << kSweepHeader << '\n';
  for (const auto& r : rows) {
    os << format_number(r.inv_alpha) << ',' << r.m << ',' << r.k << ',' << csv_field(r.null_risk) << ','
       << csv_field(r.gls_theory) << ',' << csv_field(r.gls_mc) << ',' << csv_field(r.gls_mc_stderr) << ','
       << csv_field(r.ls_theory) << ',' << csv_field(r.ls_mc) << ',' << csv_field(r.ls_mc_stderr) << ','
       << csv_field(r.lambda_star) << ',' << csv_field(r.ridge_theory) << ',' << csv_field(r.ridge_mc)
       << ',' << csv_field(r.ridge_mc_stderr) << ',' << csv_quote(r.error) << '\n';
  }
  return os.str();
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSweepHeader) {
    throw Error(ErrorKind::ConfigError, "sweep CSV header mismatch");
  }
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 15) throw Error(ErrorKind::ConfigError, "sweep CSV row needs 15 fields");
    SweepRow r;
    r.inv_alpha = parse_optional(f[0]).value_or(0.0);
    r.m = static_cast<int>(parse_optional(f[1]).value_or(0.0));
    r.k = static_cast<int>(parse_optional(f[2]).value_or(0.0));
    r.null_risk = parse_optional(f[3]);
    r.gls_theory = parse_optional(f[4]);
    r.gls_mc = parse_optional(f[5]);
    r.gls_mc_stderr = parse_optional(f[6]);
    r.ls_theory = parse_optional(f[7]);
    r.ls_mc = parse_optional(f[8]);
    r.ls_mc_stderr = parse_optional(f[9]);
    r.lambda_star = parse_optional(f[10]);
    r.ridge_theory = parse_optional(f[11]);
    r.ridge_mc = parse_optional(f[12]);
    r.ridge_mc_stderr = parse_optional(f[13]);
    r.error = f[14];
    rows.push_back(std::move(r));
  }
  return rows;
}

json sweep_to_json(const std::vector<SweepRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"inv_alpha", r.inv_alpha},
                   {"m", r.m},
                   {"k", r.k},
                   {"null_risk", optional_json(r.null_risk)},
                   {"gls_theory", optional_json(r.gls_theory)},
                   {"gls_mc", optional_json(r.gls_mc)},
                   {"gls_mc_stderr", optional_json(r.gls_mc_stderr)},
                   {"ls_theory", optional_json(r.ls_theory)},
                   {"ls_mc", optional_json(r.ls_mc)},
                   {"ls_mc_stderr", optional_json(r.ls_mc_stderr)},
                   {"lambda_star", optional_json(r.lambda_star)},
                   {"ridge_theory", optional_json(r.ridge_theory)},
                   {"ridge_mc", optional_json(r.ridge_mc)},
                   {"ridge_mc_stderr", optional_json(r.ridge_mc_stderr)},
                   {"error", r.error}});
  }
  return out;
}

TuneResult cmd_tune(const ModelConfig& config, LambdaRange range, int points) {
  const ModelInstance inst = materialize(config);
  const SpectralModel spec = build_spectral(inst);
  const double alpha = inst.dims.alpha();
  TuneResult out;
  const auto [lambda, optimum] = optimal_lambda(spec, alpha, inst.sigma_bar_sq, range);
  out.lambda_star = lambda;
  out.optimum = optimum;
  if (inst.dims.m < inst.dims.n) {
    out.gls_risk = gls_predict(spec, alpha, inst.sigma_bar_sq).risk;
    out.smoothing_marginal = std::abs(optimum.risk - *out.gls_risk) <= 0.01 * *out.gls_risk;
  }

  const int count = range.hi > range.lo ? std::max(points, 2) : 1;
  out.curve.resize(static_cast<std::size_t>(count));
  const double t_lo = std::log(range.lo);
  const double t_hi = std::log(range.hi);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < count; ++i) {
    TunePoint& p = out.curve[static_cast<std::size_t>(i)];
    p.lambda = count == 1 ? range.lo : std::exp(t_lo + (t_hi - t_lo) * i / (count - 1));
    try {
      p.prediction = ridge_predict(spec, alpha, p.lambda, inst.sigma_bar_sq);
    } catch (const Error&) {
      p.prediction.reset();
    }
  }
  return out;
}

std::string tune_to_csv(const TuneResult& result) {
  std::ostringstream os;
  os << "lambda,risk,gamma_hat,norm_sq,objective,residual_sq\n";
  for (const auto& p : result.curve) {
    os << format_number(p.lambda);
    if (p.prediction) {
      const auto& r = *p.prediction;
      os << ',' << format_number(r.risk) << ',' << format_number(r.gamma_hat) << ','
         << format_number(r.norm_sq) << ',' << format_number(r.objective) << ','
         << format_number(r.residual_sq);
    } else {
      os << ",,,,,";
    }
    os << '\n';
  }
  return os.str();
}

json tune_to_json(const TuneResult& result) {
  json curve = json::array();
  for (const auto& p : result.curve) {
    json point = {{"lambda", p.lambda}};
    point["risk"] = p.prediction ? json(p.prediction->risk) : json(nullptr);
    curve.push_back(std::move(point));
  }
  return json{{"lambda_star", result.lambda_star},
              {"risk_star", result.optimum.risk},
              {"norm_sq_star", result.optimum.norm_sq},
              {"objective_star", result.optimum.objective},
              {"gls_risk", result.gls_risk ? json(*result.gls_risk) : json(nullptr)},
              {"smoothing", result.gls_risk ? (result.smoothing_marginal ? "marginal" : "material") : "n/a"},
              {"curve", std::move(curve)}};
}

ModelConfig table1_config(double inv_alpha) {
  ModelConfig c;
  c.n = 600;
  c.inv_alpha = inv_alpha;
  c.kappa = 0.5;
  c.sigma_sq = 0.2;
  c.factor_cov = IdentityScaled{1.0};
  c.feature_noise_cov = IdentityScaled{1.0};
  c.response_noise_cov = IdentityScaled{1.0};
  c.loadings = ScaledUnitary{4.0};
  return c;
}

Table1Result cmd_table1(std::uint64_t seed, int trials) {
  return Table1Result{cmd_simulate(table1_config(0.7), trials, seed),
                      cmd_simulate(table1_config(3.0), trials, seed)};
}

namespace {

struct Cell {
  double theory;
  double simulated;
  double stderr_;
};

struct Column {
  double inv_alpha;
  std::string estimator;
  Cell norm, objective, in_sample, out_of_sample;
};

Cell cell(double theory, const FieldStats& s) { return Cell{theory, s.mean, s.std_error}; }

std::vector<Column> table_columns(const Table1Result& t) {
  std::vector<Column> cols;
  const auto& u = t.under;
  const auto& o = t.over;
  cols.push_back({0.7, "LS", cell(u.ls->norm_sq, u.ls_mc->norm_sq), cell(u.ls->objective, u.ls_mc->objective),
                  cell(u.ls->residual_sq, u.ls_mc->residual_sq), cell(u.ls->risk, u.ls_mc->excess_risk)});
  cols.push_back({0.7, "Ridge", cell(u.ridge.norm_sq, u.ridge_mc->norm_sq),
                  cell(u.ridge.objective, u.ridge_mc->objective),
                  cell(u.ridge.residual_sq, u.ridge_mc->residual_sq),
                  cell(u.ridge.risk, u.ridge_mc->excess_risk)});
  cols.push_back({3.0, "GLS", cell(o.gls->norm_sq(), o.gls_mc->norm_sq), cell(o.gls->objective, o.gls_mc->objective),
                  cell(o.gls->residual_sq(), o.gls_mc->residual_sq), cell(o.gls->risk, o.gls_mc->excess_risk)});
  cols.push_back({3.0, "Ridge", cell(o.ridge.norm_sq, o.ridge_mc->norm_sq),
                  cell(o.ridge.objective, o.ridge_mc->objective),
                  cell(o.ridge.residual_sq, o.ridge_mc->residual_sq),
                  cell(o.ridge.risk, o.ridge_mc->excess_risk)});
  return cols;
}

}  // namespace

std::string table1_text(const Table1Result& table) {
  const auto cols = table_columns(table);
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << std::left << std::setw(22) << "1/alpha";
  for (const auto& c : cols) os << std::setw(18) << c.inv_alpha;
  os << '\n' << std::setw(22) << "estimator";
  for (const auto& c : cols) os << std::setw(18) << c.estimator;
  os << '\n';
  auto line = [&](const char* label, Cell Column::*field) {
    os << std::setw(22) << label;
    for (const auto& c : cols) {
      std::ostringstream cellos;
      cellos << std::fixed << std::setprecision(4) << (c.*field).theory << "/" << (c.*field).simulated;
      os << std::setw(18) << cellos.str();
    }
    os << '\n';
  };
  line("norm E||b||^2", &Column::norm);
  line("objective E xi", &Column::objective);
  line("in-sample", &Column::in_sample);
  line("out-of-sample risk", &Column::out_of_sample);
  os << "(theory/simulated; lambda* = " << table.under.lambda_star << " at 1/alpha=0.7, "
     << table.over.lambda_star << " at 1/alpha=3; " << table.over.trials << " trials)\n";
  return os.str();
}

std::string table1_csv(const Table1Result& table) {
  std::ostringstream os;
  os << "inv_alpha,estimator,quantity,theory,simulated,simulated_stderr\n";
  for (const auto& c : table_columns(table)) {
    const std::pair<const char*, Cell> cells[] = {{"norm_sq", c.norm},
                                                  {"objective", c.objective},
                                                  {"in_sample", c.in_sample},
                                                  {"out_of_sample", c.out_of_sample}};
    for (const auto& [name, v] : cells) {
      os << format_number(c.inv_alpha) << ',' << c.estimator << ',' << name << ','
         << format_number(v.theory) << ',' << format_number(v.simulated) << ','
         << format_number(v.stderr_) << '\n';
    }
  }
  return os.str();
}

}  // namespace frm
