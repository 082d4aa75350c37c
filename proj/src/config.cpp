#include "frm/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "frm/error.hpp"

namespace frm {

namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) fail(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) fail("unknown key '" + key + "' in " + where);
  }
}

double number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) fail(where + "." + key + " is required");
  const json& v = obj.at(key);
  if (!v.is_number()) fail(where + "." + key + " must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

int integer(const json& obj, const std::string& key, const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(where + "." + key + " must be an integer");
  return v.get<int>();
}

std::string kind_of(const json& obj, const std::string& where) {
  if (!obj.is_object() || !obj.contains("kind") || !obj.at("kind").is_string()) {
    fail(where + ".kind must be a string");
  }
  return obj.at("kind").get<std::string>();
}

DenseMatrix matrix_from(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty() || !v.front().is_array()) fail(where + " must be a nested array");
  const auto rows = static_cast<Eigen::Index>(v.size());
  const auto cols = static_cast<Eigen::Index>(v.front().size());
  DenseMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = v.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) fail(where + " is ragged");
    for (Eigen::Index j = 0; j < cols; ++j) {
      const json& x = row.at(static_cast<std::size_t>(j));
      if (!x.is_number()) fail(where + " has a non-numeric entry");
      m(i, j) = x.get<double>();
    }
  }
  return m;
}

json matrix_to(const DenseMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

CovarianceSpec covariance_from(const json& obj, const std::string& where) {
  const std::string kind = kind_of(obj, where);
  if (kind == "identity") {
    reject_unknown(obj, {"kind", "scale"}, where);
    return IdentityScaled{number_or(obj, "scale", 1.0, where)};
  }
  if (kind == "toeplitz_mix") {
    reject_unknown(obj, {"kind", "q", "scale"}, where);
    return ToeplitzMix{number(obj, "q", where), number_or(obj, "scale", 1.0, where)};
  }
  if (kind == "dense") {
    reject_unknown(obj, {"kind", "matrix"}, where);
    if (!obj.contains("matrix")) fail(where + ".matrix is required");
    return DenseCovariance{matrix_from(obj.at("matrix"), where + ".matrix")};
  }
  fail("unknown " + where + ".kind '" + kind + "'");
}

LoadingsSpec loadings_from(const json& obj) {
  const std::string where = "loadings";
  const std::string kind = kind_of(obj, where);
  if (kind == "scaled_unitary") {
    reject_unknown(obj, {"kind", "c_l"}, where);
    return ScaledUnitary{number(obj, "c_l", where)};
  }
  if (kind == "leading_eigenvectors") {
    reject_unknown(obj, {"kind", "q_L"}, where);
    return LeadingEigenvectors{number(obj, "q_L", where)};
  }
  if (kind == "dense") {
    reject_unknown(obj, {"kind", "matrix"}, where);
    if (!obj.contains("matrix")) fail("loadings.matrix is required");
    return DenseLoadings{matrix_from(obj.at("matrix"), "loadings.matrix")};
  }
  fail("unknown loadings.kind '" + kind + "'");
}

json covariance_to(const CovarianceSpec& spec) {
  return std::visit(
      overloaded{[](const IdentityScaled& s) { return json{{"kind", "identity"}, {"scale", s.scale}}; },
                 [](const ToeplitzMix& s) { return json{{"kind", "toeplitz_mix"}, {"q", s.q}, {"scale", s.scale}}; },
                 [](const DenseCovariance& s) { return json{{"kind", "dense"}, {"matrix", matrix_to(s.matrix)}}; }},
      spec);
}

json loadings_to(const LoadingsSpec& spec) {
  return std::visit(
      overloaded{[](const ScaledUnitary& s) { return json{{"kind", "scaled_unitary"}, {"c_l", s.c_l}}; },
                 [](const LeadingEigenvectors& s) { return json{{"kind", "leading_eigenvectors"}, {"q_L", s.q_L}}; },
                 [](const DenseLoadings& s) { return json{{"kind", "dense"}, {"matrix", matrix_to(s.matrix)}}; }},
      spec);
}

const char* distribution_name(EntryDistribution d) {
  switch (d) {
    case EntryDistribution::Gaussian: return "gaussian";
    case EntryDistribution::Rademacher: return "rademacher";
    case EntryDistribution::ScaledUniform: return "scaled_uniform";
  }
  return "gaussian";
}

}  // namespace

ModelConfig parse_model_config(const json& doc) {
  reject_unknown(doc,
                 {"n", "inv_alpha", "m", "kappa", "sigma_sq", "factor_cov", "feature_noise_cov",
                  "response_noise_cov", "loadings", "beta_bar", "entry_distribution", "seed"},
                 "config");
  ModelConfig c;
  if (!doc.contains("n")) fail("config.n is required");
  c.n = integer(doc, "n", "config");
  if (doc.contains("inv_alpha") == doc.contains("m")) fail("exactly one of inv_alpha or m is required");
  if (doc.contains("m")) {
    c.m = integer(doc, "m", "config");
    c.inv_alpha.reset();
  } else {
    c.inv_alpha = number(doc, "inv_alpha", "config");
  }
  c.kappa = number(doc, "kappa", "config");
  c.sigma_sq = number_or(doc, "sigma_sq", c.sigma_sq, "config");
  if (doc.contains("factor_cov")) c.factor_cov = covariance_from(doc.at("factor_cov"), "factor_cov");
  if (doc.contains("feature_noise_cov")) {
    c.feature_noise_cov = covariance_from(doc.at("feature_noise_cov"), "feature_noise_cov");
  }
  if (doc.contains("response_noise_cov")) {
    c.response_noise_cov = covariance_from(doc.at("response_noise_cov"), "response_noise_cov");
  }
  if (doc.contains("loadings")) c.loadings = loadings_from(doc.at("loadings"));
  if (doc.contains("beta_bar")) {
    const json& b = doc.at("beta_bar");
    if (b.is_string()) {
      if (b.get<std::string>() != "default") fail("beta_bar must be \"default\" or a list");
    } else if (b.is_array()) {
      Vector v(static_cast<Eigen::Index>(b.size()));
      for (std::size_t i = 0; i < b.size(); ++i) {
        if (!b[i].is_number()) fail("beta_bar has a non-numeric entry");
        v(static_cast<Eigen::Index>(i)) = b[i].get<double>();
      }
      c.beta_bar = std::move(v);
    } else {
      fail("beta_bar must be \"default\" or a list");
    }
  }
  if (doc.contains("entry_distribution")) {
    const json& d = doc.at("entry_distribution");
    const std::string name = d.is_string() ? d.get<std::string>() : "";
    if (name == "gaussian") c.entry_distribution = EntryDistribution::Gaussian;
    else if (name == "rademacher") c.entry_distribution = EntryDistribution::Rademacher;
    else if (name == "scaled_uniform") c.entry_distribution = EntryDistribution::ScaledUniform;
    else fail("entry_distribution must be gaussian, rademacher or scaled_uniform");
  }
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      fail("seed must be a non-negative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }
  return c;
}

ModelConfig load_model_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(path.string() + ": " + e.what());
  }
  return parse_model_config(doc);
}

json to_json(const ModelConfig& c) {
  json out;
  out["n"] = c.n;
  if (c.m) out["m"] = *c.m;
  else if (c.inv_alpha) out["inv_alpha"] = *c.inv_alpha;
  out["kappa"] = c.kappa;
  out["sigma_sq"] = c.sigma_sq;
  out["factor_cov"] = covariance_to(c.factor_cov);
  out["feature_noise_cov"] = covariance_to(c.feature_noise_cov);
  out["response_noise_cov"] = covariance_to(c.response_noise_cov);
  out["loadings"] = loadings_to(c.loadings);
  if (c.beta_bar) {
    json b = json::array();
    for (Eigen::Index i = 0; i < c.beta_bar->size(); ++i) b.push_back((*c.beta_bar)(i));
    out["beta_bar"] = std::move(b);
  } else {
    out["beta_bar"] = "default";
  }
  out["entry_distribution"] = distribution_name(c.entry_distribution);
  out["seed"] = c.seed;
  return out;
}

}  // namespace frm
