#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "frm/config.hpp"
#include "frm/error.hpp"
#include "frm/experiments.hpp"

using namespace frm;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an frm::Error");
  return ErrorKind::IoError;
}

const SweepRow& row_at(const std::vector<SweepRow>& rows, double inv_alpha) {
  for (const auto& r : rows) {
    if (r.inv_alpha == inv_alpha) return r;
  }
  throw std::runtime_error("missing row");
}

ModelConfig small_sweep_config() {
  ModelConfig c;
  c.n = 60;
  c.kappa = 0.25;
  c.factor_cov = ToeplitzMix{0.5, 1.0};
  c.feature_noise_cov = ToeplitzMix{0.3, 0.01};
  c.loadings = LeadingEigenvectors{0.3};
  return c;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cmd_theory dispatches by regime") {
  const auto over = cmd_theory(table1_config(3.0));
  REQUIRE(over.gls.has_value());
  CHECK_FALSE(over.ls.has_value());
  CHECK(std::abs(over.gls->risk - 0.3205) < 5e-4);
  CHECK(std::abs(over.ridge.risk - 0.2347) < 1e-3);
  CHECK(over.dims.m == 200);

  const auto under = cmd_theory(table1_config(0.7));
  CHECK_FALSE(under.gls.has_value());
  REQUIRE(under.ls.has_value());
  CHECK(std::abs(under.ls->risk - 0.975) < 5e-3);

  ModelConfig threshold = table1_config(3.0);
  threshold.inv_alpha.reset();
  threshold.m = 600;
  CHECK(kind_of([&] { cmd_theory(threshold); }) == ErrorKind::InterpolationSingularity);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ErrorKind::ConfigError) == 2);
  CHECK(exit_code_for(ErrorKind::InvalidParameter) == 2);
  CHECK(exit_code_for(ErrorKind::InterpolationSingularity) == 3);
  CHECK(exit_code_for(ErrorKind::RegimeError) == 3);
  CHECK(exit_code_for(ErrorKind::IoError) == 4);
}

TEST_CASE("report CSV and JSON") {
  const auto report = cmd_theory(table1_config(3.0));
  const std::string csv = report_to_csv(report);
  CHECK(csv.rfind("estimator,quantity,theory,mc_mean,mc_stderr,rel_gap\n", 0) == 0);
  CHECK(csv.find("gls,risk,0.320473991,,,\n") != std::string::npos);
  CHECK(csv.find("\nls,") == std::string::npos);
  const auto doc = report_to_json(report);
  CHECK(doc["estimators"]["gls"]["theory"]["risk"].get<double>() == report.gls->risk);
  CHECK(doc["dims"]["m"].get<int>() == 200);

  // The config echo alone reproduces the report.
  const auto rerun = cmd_theory(parse_model_config(doc["config"]));
  CHECK(report_to_csv(rerun) == csv);
}

TEST_CASE("cmd_simulate fills Monte Carlo columns") {
  ModelConfig c = small_sweep_config();
  c.inv_alpha = 3.0;
  const auto r = cmd_simulate(c, 6, 5);
  REQUIRE(r.gls_mc.has_value());
  REQUIRE(r.ridge_mc.has_value());
  CHECK_FALSE(r.ls_mc.has_value());
  CHECK(r.gls_mc->count == 6);
  CHECK(r.seed == 5);
  const std::string csv = report_to_csv(r);
  CHECK(csv.find(",,,\n") != std::string::npos);  // theory-only quantities
  CHECK(report_to_csv(cmd_simulate(c, 6, 5)) == csv);
}

TEST_CASE("sweep rows on the uncorrelated family") {
  const auto rows = cmd_sweep(table1_config(3.0), {0.5, 0.7, 3, 10}, 0, 1);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].inv_alpha == 0.5);
  CHECK_FALSE(rows[0].error.empty());  // k = n leaves the model undefined
  CHECK_FALSE(rows[0].ridge_theory.has_value());

  const auto& under = row_at(rows, 0.7);
  CHECK(under.error.empty());
  CHECK_FALSE(under.gls_theory.has_value());
  CHECK(*under.ls_theory >= 0.970);
  CHECK(*under.ls_theory <= 0.977);
  CHECK(std::abs(*under.ridge_theory - 0.3764) < 2e-3);

  const auto& over = row_at(rows, 3);
  CHECK(std::abs(*over.gls_theory - 0.3205) < 5e-4);
  CHECK(std::abs(*over.ridge_theory - 0.2347) < 1e-3);
  CHECK_FALSE(over.ls_theory.has_value());
  CHECK_FALSE(over.gls_mc.has_value());

  for (const auto& r : rows) {
    if (!r.ridge_theory) continue;
    double bound = *r.null_risk;
    if (r.gls_theory) bound = std::min(bound, *r.gls_theory);
    if (r.ls_theory) bound = std::min(bound, *r.ls_theory);
    CHECK(*r.ridge_theory <= bound + 1e-10);
  }
}

TEST_CASE("sweep shows the double-descent peak") {
  const auto rows = cmd_sweep(table1_config(3.0), {1.0 / 0.99, 2.0}, 0, 1);
  CHECK(*rows[0].gls_theory > 5 * *rows[1].gls_theory);
}

TEST_CASE("sweep marks singular and invalid grid points") {
  const auto rows = cmd_sweep(table1_config(3.0), {1.0005, 1.0, -2.0}, 0, 1);
  CHECK(rows[0].m == 600);
  CHECK(rows[0].error.find("singular") != std::string::npos);
  CHECK_FALSE(rows[0].gls_theory.has_value());
  CHECK_FALSE(rows[0].ls_theory.has_value());
  CHECK(rows[0].ridge_theory.has_value());
  CHECK(rows[1].error.find("InvalidParameter") != std::string::npos);
  CHECK(rows[2].error.find("InvalidParameter") != std::string::npos);
}

TEST_CASE("sweep CSV format and round trip") {
  const auto rows = cmd_sweep(small_sweep_config(), {0.7, 1.0005, 3, 8}, 4, 11);
  const std::string csv = sweep_to_csv(rows);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "inv_alpha,m,k,null_risk,gls_theory,gls_mc,gls_mc_stderr,ls_theory,ls_mc,ls_mc_stderr,"
        "lambda_star,ridge_theory,ridge_mc,ridge_mc_stderr,error");
  CHECK(csv.find(",0,") == std::string::npos);  // absent cells are empty, never zero

  const auto parsed = parse_sweep_csv(csv);
  REQUIRE(parsed.size() == rows.size());
  CHECK(sweep_to_csv(parsed) == csv);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(parsed[i].gls_theory.has_value() == rows[i].gls_theory.has_value());
    CHECK(parsed[i].ls_mc.has_value() == rows[i].ls_mc.has_value());
    CHECK(parsed[i].error == rows[i].error);
  }

  SweepRow tricky;
  tricky.inv_alpha = 2;
  tricky.error = "a, \"quoted\" message";
  const auto back = parse_sweep_csv(sweep_to_csv({tricky}));
  CHECK(back.front() == tricky);

  const auto doc = sweep_to_json(rows);
  std::vector<std::string> keys;
  for (const auto& [key, _] : doc.front().items()) keys.push_back(key);
  CHECK(keys.size() == 15);
  CHECK(doc[2]["ls_theory"].is_null());

  CHECK(kind_of([] { parse_sweep_csv("bad header\n"); }) == ErrorKind::ConfigError);
  CHECK(kind_of([&] { parse_sweep_csv(header + "\n1,2,3\n"); }) == ErrorKind::ConfigError);
  CHECK(kind_of([&] { parse_sweep_csv(header + "\n1,2,3,x,,,,,,,,,,,\n"); }) == ErrorKind::ConfigError);
}

TEST_CASE("sweep output is independent of the thread count") {
  const std::vector<double> grid = {0.7, 3, 8};
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const std::string one = sweep_to_csv(cmd_sweep(small_sweep_config(), grid, 5, 3));
  const std::string theory_one = sweep_to_csv(cmd_sweep(small_sweep_config(), grid, 0, 3));
  omp_set_num_threads(4);
  const std::string four = sweep_to_csv(cmd_sweep(small_sweep_config(), grid, 5, 3));
  const std::string theory_four = sweep_to_csv(cmd_sweep(small_sweep_config(), grid, 0, 3));
  omp_set_num_threads(saved);
  CHECK(one == four);
  CHECK(theory_one == theory_four);
}

TEST_CASE("cmd_tune") {
  const auto over = cmd_tune(table1_config(3.0), LambdaRange{});
  CHECK(std::abs(over.optimum.risk - 0.2347) < 1e-3);
  REQUIRE(over.gls_risk.has_value());
  CHECK(std::abs(*over.gls_risk - 0.3205) < 5e-4);
  CHECK_FALSE(over.smoothing_marginal);
  CHECK(over.curve.size() == 200);
  CHECK(over.curve.front().lambda == doctest::Approx(1e-6));
  CHECK(over.curve.back().lambda == doctest::Approx(1e3));
  for (const auto& p : over.curve) {
    REQUIRE(p.prediction.has_value());
    CHECK(p.prediction->risk >= over.optimum.risk - 1e-12);
  }

  const auto ten = cmd_tune(table1_config(10.0), LambdaRange{});
  CHECK(std::abs(ten.optimum.risk - *ten.gls_risk) / *ten.gls_risk < 0.05);

  const auto point = cmd_tune(table1_config(3.0), LambdaRange{0.25, 0.25});
  CHECK(point.lambda_star == 0.25);
  CHECK(point.curve.size() == 1);

  const std::string csv = tune_to_csv(over);
  CHECK(csv.rfind("lambda,risk,gamma_hat,norm_sq,objective,residual_sq\n", 0) == 0);
  CHECK(tune_to_json(over)["smoothing"] == "material");

  const auto under = cmd_tune(table1_config(0.7), LambdaRange{});
  CHECK_FALSE(under.gls_risk.has_value());
  CHECK(tune_to_json(under)["smoothing"] == "n/a");
}

TEST_CASE("cmd_table1 with 50 trials") {
  const auto table = cmd_table1(20240101, 50);
  const auto& u = table.under;
  const auto& o = table.over;

  CHECK(std::abs(o.gls->norm_sq() - 0.1031) < 5e-4);
  CHECK(o.gls->residual_sq() == 0.0);
  CHECK(std::abs(o.gls->risk - 0.3205) < 5e-4);
  CHECK(u.ls->residual_sq == u.ls->objective);

  auto within = [](double theory, const FieldStats& s) { return std::abs(s.mean - theory) <= 3 * s.std_error; };
  CHECK(within(o.gls->norm_sq(), o.gls_mc->norm_sq));
  CHECK(within(o.gls->objective, o.gls_mc->objective));
  CHECK(within(o.gls->risk, o.gls_mc->excess_risk));
  CHECK(o.gls_mc->residual_sq.mean < 1e-20);
  CHECK(within(u.ls->norm_sq, u.ls_mc->norm_sq));
  CHECK(within(u.ls->objective, u.ls_mc->objective));
  CHECK(within(u.ls->residual_sq, u.ls_mc->residual_sq));
  CHECK(within(u.ls->risk, u.ls_mc->excess_risk));
  for (const auto* r : {&u, &o}) {
    CHECK(within(r->ridge.norm_sq, r->ridge_mc->norm_sq));
    CHECK(within(r->ridge.objective, r->ridge_mc->objective));
    CHECK(within(r->ridge.risk, r->ridge_mc->excess_risk));
  }

  const std::string text = table1_text(table);
  CHECK(text.find("out-of-sample risk") != std::string::npos);
  const std::string csv = table1_csv(table);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
  CHECK(csv.find("3,GLS,in_sample,0,") != std::string::npos);
}

TEST_CASE("write_atomic") {
  const auto dir = std::filesystem::temp_directory_path() / "frm_write_atomic_test";
  std::filesystem::create_directories(dir);
  const auto target = dir / "out.csv";
  write_atomic(target, "a,b\n1,2\n");
  CHECK(read_file(target) == "a,b\n1,2\n");
  write_atomic(target, "x\n");
  CHECK(read_file(target) == "x\n");
  CHECK_FALSE(std::filesystem::exists(dir / "out.csv.tmp"));
  std::filesystem::remove_all(dir);
  CHECK(kind_of([&] { write_atomic(dir / "missing" / "out.csv", "x"); }) == ErrorKind::IoError);
}
