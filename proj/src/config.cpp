#include "dpmk/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "dpmk/error.hpp"

namespace dpmk {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items())
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <class T>
T get(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <class T>
T get_or(const json& j, const std::string& where, const char* key, T fallback) {
  return j.contains(key) ? get<T>(j, where, key) : fallback;
}

std::string kind_of(const json& j, const std::string& where) { return get<std::string>(j, where, "type"); }

TabulatedDensity parse_density(const json& j, const std::string& where) {
  const auto type = kind_of(j, where);
  if (type == "uniform") {
    check_keys(j, where, {"type", "lo", "hi"});
    return TabulatedDensity::uniform(get<double>(j, where, "lo"), get<double>(j, where, "hi"));
  }
  if (type == "truncated_normal") {
    check_keys(j, where, {"type", "mean", "sd", "lo", "hi", "points"});
    return TabulatedDensity::truncated_normal(get<double>(j, where, "mean"), get<double>(j, where, "sd"),
                                              get<double>(j, where, "lo"), get<double>(j, where, "hi"),
                                              get_or<int>(j, where, "points", 2001));
  }
  if (type == "tabulated") {
    check_keys(j, where, {"type", "x", "y"});
    return TabulatedDensity(get<std::vector<double>>(j, where, "x"), get<std::vector<double>>(j, where, "y"));
  }
  throw ConfigError(where + ": unknown density type '" + type + "'");
}

KernelModel parse_model(const json& j) {
  const std::string where = "model";
  const auto type = kind_of(j, where);
  if (type == "gaussian_conjugate") {
    check_keys(j, where, {"type"});
    return GaussianConjugate{};
  }
  if (type == "uniform_location") {
    check_keys(j, where, {"type", "theta_star", "c", "base"});
    UniformLocation u{get<double>(j, where, "theta_star"), get<double>(j, where, "c"), std::nullopt};
    if (j.contains("base")) {
      const auto b = get<std::vector<double>>(j, where, "base");
      if (b.size() != 2) throw ConfigError("model.base: expected [lo, hi]");
      u.base = std::make_pair(b[0], b[1]);
    }
    return u;
  }
  if (type == "bounded_location") {
    check_keys(j, where, {"type", "g", "q0"});
    return BoundedLocation{parse_density(j.at("g"), "model.g"), parse_density(j.at("q0"), "model.q0")};
  }
  throw ConfigError("model: unknown type '" + type + "'");
}

AlphaPrior parse_prior(const json& j) {
  const std::string where = "prior";
  const auto type = kind_of(j, where);
  if (type == "gamma") {
    check_keys(j, where, {"type", "shape", "rate"});
    return AlphaPrior::gamma(get<double>(j, where, "shape"), get<double>(j, where, "rate"));
  }
  if (type == "generalized_gamma") {
    check_keys(j, where, {"type", "d", "a", "p"});
    return AlphaPrior::generalized_gamma(get<double>(j, where, "d"), get<double>(j, where, "a"),
                                         get<double>(j, where, "p"));
  }
  if (type == "bounded_poly") {
    check_keys(j, where, {"type", "c", "beta"});
    return AlphaPrior::bounded_poly(get<double>(j, where, "c"), get_or<double>(j, where, "beta", 0.0));
  }
  if (type == "point_mass") {
    check_keys(j, where, {"type", "value"});
    return AlphaPrior::point_mass(get<double>(j, where, "value"));
  }
  throw ConfigError("prior: unknown type '" + type + "'");
}

DataSpec parse_data(const json& j) {
  const std::string where = "data";
  DataSpec d;
  const auto type = kind_of(j, where);
  if (type == "constant") {
    check_keys(j, where, {"type", "value"});
    d.kind = DataSpec::Kind::Constant;
    d.value = get<double>(j, where, "value");
    if (!std::isfinite(d.value)) throw ConfigError("data.value must be finite");
  } else if (type == "truth") {
    check_keys(j, where, {"type", "weights", "locations", "kernel", "c", "g", "degenerate", "completely_separated"});
    d.kind = DataSpec::Kind::Truth;
    auto& t = d.truth;
    t.weights = get<std::vector<double>>(j, where, "weights");
    t.locations = get<std::vector<double>>(j, where, "locations");
    const auto kernel = get_or<std::string>(j, where, "kernel", "gaussian");
    if (kernel == "uniform") t.kernel = TruthKernel::Uniform;
    else if (kernel == "gaussian") t.kernel = TruthKernel::Gaussian;
    else if (kernel == "bounded") t.kernel = TruthKernel::Bounded;
    else throw ConfigError("data.kernel: expected uniform, gaussian or bounded");
    t.c = get_or<double>(j, where, "c", 1.0);
    if (j.contains("g")) t.g = parse_density(j.at("g"), "data.g");
    t.degenerate = get_or<bool>(j, where, "degenerate", false);
    t.completely_separated = get_or<bool>(j, where, "completely_separated", false);
    validate(t);
  } else if (type == "file") {
    check_keys(j, where, {"type", "path"});
    d.kind = DataSpec::Kind::File;
    d.path = get<std::string>(j, where, "path");
  } else {
    throw ConfigError("data: unknown type '" + type + "'");
  }
  return d;
}

template <class T>
void check_increasing(const std::vector<T>& v, const std::string& where) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) throw ConfigError(where + " must be strictly increasing");
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  check_keys(doc, "config",
             {"experiment", "model", "prior", "data", "n_grid", "s_max", "tol", "seed", "t", "epsilon",
              "alpha_grid", "sampler", "origin_certificate", "moment_check", "bounds"});
  ExperimentConfig c;
  c.raw = doc;
  try {
    c.experiment = get_or<std::string>(doc, "config", "experiment", "");
    if (doc.contains("model")) c.model = parse_model(doc.at("model"));
    validate(c.model);
    if (doc.contains("prior")) c.prior = parse_prior(doc.at("prior"));
    if (doc.contains("data")) c.data = parse_data(doc.at("data"));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  c.n_grid = get_or<std::vector<std::int64_t>>(doc, "config", "n_grid", {});
  check_increasing(c.n_grid, "n_grid");
  for (auto n : c.n_grid)
    if (n < 1) throw ConfigError("n_grid entries must be positive");
  c.s_max = get_or<int>(doc, "config", "s_max", 64);
  if (c.s_max < 1) throw ConfigError("s_max must be positive");
  c.tol = get_or<double>(doc, "config", "tol", 1e-10);
  if (!(c.tol > 0.0)) throw ConfigError("tol must be positive");
  c.seed = get_or<std::uint64_t>(doc, "config", "seed", 1);
  c.t = get_or<int>(doc, "config", "t", 1);
  if (c.t < 1) throw ConfigError("t must be positive");
  if (doc.contains("epsilon")) {
    const auto& e = doc.at("epsilon");
    c.epsilons = e.is_array() ? get<std::vector<double>>(doc, "config", "epsilon")
                              : std::vector<double>{get<double>(doc, "config", "epsilon")};
  }
  for (double e : c.epsilons)
    if (!(e > 0.0)) throw ConfigError("epsilon entries must be positive");
  c.alpha_grid = get_or<std::vector<double>>(doc, "config", "alpha_grid", {});
  if (c.alpha_grid.empty())
    for (int i = 0; i <= 50; ++i) c.alpha_grid.push_back(std::pow(10.0, -3.0 + 5.0 * i / 50.0));
  check_increasing(c.alpha_grid, "alpha_grid");

  if (doc.contains("sampler")) {
    const auto& s = doc.at("sampler");
    check_keys(s, "sampler", {"sweeps", "burn_in", "thin", "chains", "initial_alpha"});
    c.sampler.sweeps = get_or<std::int64_t>(s, "sampler", "sweeps", 10'000);
    c.sampler.burn_in = get_or<std::int64_t>(s, "sampler", "burn_in", c.sampler.sweeps / 5);
    c.sampler.thin = get_or<std::int64_t>(s, "sampler", "thin", 1);
    c.sampler.initial_alpha = get_or<double>(s, "sampler", "initial_alpha", 1.0);
    c.chains = get_or<int>(s, "sampler", "chains", 1);
  } else {
    c.sampler.burn_in = c.sampler.sweeps / 5;
  }
  if (!(c.sampler.sweeps > c.sampler.burn_in) || c.sampler.burn_in < 0 || c.sampler.thin < 1 || c.chains < 1 ||
      !(c.sampler.initial_alpha > 0.0))
    throw ConfigError("sampler: need sweeps > burn_in >= 0, thin >= 1, chains >= 1, initial_alpha > 0");

  if (doc.contains("origin_certificate")) {
    const auto& o = doc.at("origin_certificate");
    check_keys(o, "origin_certificate", {"epsilon", "delta_max"});
    if (o.contains("epsilon")) c.origin.epsilon = get<double>(o, "origin_certificate", "epsilon");
    c.origin.delta_max = get_or<double>(o, "origin_certificate", "delta_max", 1e6);
  }
  if (doc.contains("moment_check")) {
    const auto& m = doc.at("moment_check");
    check_keys(m, "moment_check", {"rho", "s_max"});
    if (m.contains("rho")) c.moments.rho = get<double>(m, "moment_check", "rho");
    c.moments.s_max = get_or<int>(m, "moment_check", "s_max", 50);
  }
  if (doc.contains("bounds")) {
    const auto& b = doc.at("bounds");
    const std::string w = "bounds";
    check_keys(b, w,
               {"n_grid", "s_values", "t", "tol", "tail_constant", "composition_n_max", "composition_s_max",
                "composition_p", "identity_n", "identity_s", "identity_reps", "range_sizes", "range_samples",
                "range_level"});
    auto& B = c.bounds;
    B.n_grid = get_or(b, w, "n_grid", B.n_grid);
    B.s_values = get_or(b, w, "s_values", B.s_values);
    B.t = get_or(b, w, "t", B.t);
    B.tol = get_or(b, w, "tol", B.tol);
    B.tail_constant = get_or(b, w, "tail_constant", B.tail_constant);
    B.composition_n_max = get_or(b, w, "composition_n_max", B.composition_n_max);
    B.composition_s_max = get_or(b, w, "composition_s_max", B.composition_s_max);
    B.composition_p = get_or(b, w, "composition_p", B.composition_p);
    B.identity_n = get_or(b, w, "identity_n", B.identity_n);
    B.identity_s = get_or(b, w, "identity_s", B.identity_s);
    B.identity_reps = get_or(b, w, "identity_reps", B.identity_reps);
    B.range_sizes = get_or(b, w, "range_sizes", B.range_sizes);
    B.range_samples = get_or(b, w, "range_samples", B.range_samples);
    B.range_level = get_or(b, w, "range_level", B.range_level);
    check_increasing(B.n_grid, "bounds.n_grid");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

}  // namespace dpmk
