// frm-risk: closed-form and simulated excess risk for factor regression models.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "frm/config.hpp"
#include "frm/error.hpp"
#include "frm/experiments.hpp"

namespace {

struct Options {
  std::string config_path;
  int trials = 50;
  std::optional<std::uint64_t> seed;
  std::vector<double> grid;
  double lambda_lo = frm::LambdaRange{}.lo;
  double lambda_hi = frm::LambdaRange{}.hi;
  std::string format = "csv";
  std::string out;
};

void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    frm::write_atomic(opt.out, text);
  }
}

void emit(const Options& opt, const std::string& csv, const nlohmann::json& doc) {
  emit(opt, opt.format == "json" ? doc.dump(2) + "\n" : csv);
}

frm::ModelConfig load(const Options& opt) {
  frm::ModelConfig config = frm::load_model_config(opt.config_path);
  if (opt.seed) config.seed = *opt.seed;
  return config;
}

frm::LambdaRange lambda_range(const Options& opt) {
  if (!(opt.lambda_lo > 0.0) || !(opt.lambda_hi >= opt.lambda_lo)) {
    throw frm::Error(frm::ErrorKind::ConfigError, "need 0 < lambda-lo <= lambda-hi");
  }
  return frm::LambdaRange{opt.lambda_lo, opt.lambda_hi};
}

void add_common(CLI::App* cmd, Options& opt, bool needs_config) {
  auto* config = cmd->add_option("--config", opt.config_path, "Model configuration (JSON)");
  if (needs_config) config->required()->check(CLI::ExistingFile);
  cmd->add_option("--trials", opt.trials, "Monte Carlo trials (sweep accepts 0)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", opt.seed, "Master seed (overrides the config)");
  cmd->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", opt.out, "Output file (default stdout)");
}

void add_lambda(CLI::App* cmd, Options& opt) {
  cmd->add_option("--lambda-lo", opt.lambda_lo, "Lower end of the lambda search range");
  cmd->add_option("--lambda-hi", opt.lambda_hi, "Upper end of the lambda search range");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Excess risk of GLS, ridge and least squares in factor regression models"};
  app.require_subcommand(1);
  Options opt;

  auto* theory = app.add_subcommand("theory", "Closed-form predictions at the configured point");
  add_common(theory, opt, true);
  add_lambda(theory, opt);

  auto* simulate = app.add_subcommand("simulate", "Predictions next to Monte Carlo estimates");
  add_common(simulate, opt, true);
  add_lambda(simulate, opt);

  auto* sweep = app.add_subcommand("sweep", "Risk curves over the over-parametrization ratio");
  add_common(sweep, opt, true);
  add_lambda(sweep, opt);
  sweep->add_option("--grid", opt.grid, "Comma-separated 1/alpha values")->delimiter(',');

  auto* tune = app.add_subcommand("tune", "Ridge risk over a log-spaced lambda grid");
  add_common(tune, opt, true);
  add_lambda(tune, opt);

  auto* table1 = app.add_subcommand("table1", "Reference table at 1/alpha = 0.7 and 3");
  add_common(table1, opt, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (theory->parsed()) {
      const auto report = frm::cmd_theory(load(opt), lambda_range(opt));
      emit(opt, frm::report_to_csv(report), frm::report_to_json(report));
    } else if (simulate->parsed()) {
      const auto config = load(opt);
      const auto report = frm::cmd_simulate(config, opt.trials, config.seed, lambda_range(opt));
      emit(opt, frm::report_to_csv(report), frm::report_to_json(report));
    } else if (sweep->parsed()) {
      const auto config = load(opt);
      const auto grid = opt.grid.empty() ? frm::default_sweep_grid() : opt.grid;
      const auto rows = frm::cmd_sweep(config, grid, opt.trials, config.seed, lambda_range(opt));
      emit(opt, frm::sweep_to_csv(rows), frm::sweep_to_json(rows));
    } else if (tune->parsed()) {
      const auto result = frm::cmd_tune(load(opt), lambda_range(opt));
      emit(opt, frm::tune_to_csv(result), frm::tune_to_json(result));
      std::cerr << "lambda* = " << frm::format_number(result.lambda_star)
                << "  risk = " << frm::format_number(result.optimum.risk);
      if (result.gls_risk) {
        std::cerr << "  gls risk = " << frm::format_number(*result.gls_risk) << "  smoothing "
                  << (result.smoothing_marginal ? "marginal" : "material");
      }
      std::cerr << '\n';
    } else if (table1->parsed()) {
      const std::uint64_t seed = opt.seed.value_or(frm::ModelConfig{}.seed);
      const auto table = frm::cmd_table1(seed, opt.trials);
      if (opt.format == "json") {
        nlohmann::json doc = {{"under", frm::report_to_json(table.under)},
                              {"over", frm::report_to_json(table.over)}};
        emit(opt, doc.dump(2) + "\n");
      } else {
        std::cerr << frm::table1_text(table);
        emit(opt, frm::table1_csv(table));
      }
    }
  } catch (const frm::Error& e) {
    std::cerr << "frm-risk: " << e.what() << '\n';
    return frm::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "frm-risk: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
