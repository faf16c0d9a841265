// SPDX-License-Identifier: Apache-2.0

#include "freqcover/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace freqcover {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!known.contains(key)) fail("unknown key '" + key + "' in " + where);
  }
}

double get_number(const json& obj, const std::string& where, const std::string& key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail("'" + where + "." + key + "' must be a number");
  return v.get<double>();
}

std::int64_t get_integer(const json& obj, const std::string& where, const std::string& key,
                         std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail("'" + where + "." + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::string get_string(const json& obj, const std::string& where, const std::string& key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail("'" + where + "." + key + "' must be a string");
  return v.get<std::string>();
}

Expr parse_expression(const std::string& src, const std::string& where, int dim) {
  Expr e;
  try {
    e = Expr::parse(src);
  } catch (const ParseError& pe) {
    fail(where + ": " + pe.what());
  }
  if (e.max_axis() >= dim)
    fail(where + ": expression '" + src + "' references axis " +
         std::to_string(e.max_axis()) + " but dim = " + std::to_string(dim));
  return e;
}

}  // namespace

Grid RunConfig::make_grid() const {
  return Grid::create(domain.dim, domain.bounds, domain.n);
}

InnerMask RunConfig::make_mask() const {
  return InnerMask::create(make_grid(), domain.shrink);
}

CoeffSet RunConfig::make_coeffs() const {
  CoeffSet cs;
  for (std::size_t ax = 0; ax < coefficients.a.size(); ++ax)
    cs.a.push_back(parse_expression(coefficients.a[ax], "coefficients.a[" + std::to_string(ax) + "]",
                                    domain.dim));
  cs.eps = parse_expression(coefficients.eps, "coefficients.eps", domain.dim);
  cs.sigma = parse_expression(coefficients.sigma, "coefficients.sigma", domain.dim);
  cs.lambda = coefficients.lambda;
  return cs;
}

std::vector<Expr> RunConfig::make_bcs() const {
  std::vector<Expr> out;
  for (std::size_t b = 0; b < bcs.size(); ++b)
    out.push_back(parse_expression(bcs[b], "bcs[" + std::to_string(b) + "]", domain.dim));
  return out;
}

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) fail("config must be a JSON object");

  reject_unknown_keys(root, "config",
                      {"dim", "bounds", "n", "shrink", "coefficients", "bcs", "band",
                       "tolerances", "search", "output_dir"});

  RunConfig cfg;

  // Domain.
  if (!root.contains("dim")) fail("config requires 'dim'");
  if (!root.at("dim").is_number_integer()) fail("'dim' must be an integer");
  cfg.domain.dim = root.at("dim").get<int>();
  const int dim = cfg.domain.dim;
  if (dim != 1 && dim != 2) fail("'dim' must be 1 or 2");

  if (root.contains("bounds")) {
    const json& b = root.at("bounds");
    if (!b.is_array() || b.size() != static_cast<std::size_t>(dim))
      fail("'bounds' must be an array of dim [lo, hi] pairs");
    for (const auto& pair : b) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
        fail("'bounds' entries must be [lo, hi] number pairs");
      cfg.domain.bounds.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
  } else {
    cfg.domain.bounds.assign(static_cast<std::size_t>(dim), {0.0, 1.0});
  }

  if (root.contains("n")) {
    const json& n = root.at("n");
    if (!n.is_array() || n.size() != static_cast<std::size_t>(dim))
      fail("'n' must be an array of dim cell counts");
    for (const auto& v : n) {
      if (!v.is_number_integer()) fail("'n' entries must be integers");
      cfg.domain.n.push_back(v.get<int>());
    }
  } else {
    cfg.domain.n.assign(static_cast<std::size_t>(dim), 64);
  }

  cfg.domain.shrink = get_number(root, "config", "shrink", 0.1);
  if (!(cfg.domain.shrink > 0.0 && cfg.domain.shrink < 0.5))
    fail("'shrink' must lie in (0, 0.5)");

  // Coefficients.
  cfg.coefficients.a.assign(static_cast<std::size_t>(dim), "1");
  if (root.contains("coefficients")) {
    const json& co = root.at("coefficients");
    if (!co.is_object()) fail("'coefficients' must be an object");
    reject_unknown_keys(co, "coefficients", {"a", "eps", "sigma", "lambda"});
    if (co.contains("a")) {
      const json& a = co.at("a");
      if (a.is_string()) {
        cfg.coefficients.a.assign(static_cast<std::size_t>(dim), a.get<std::string>());
      } else if (a.is_array() && a.size() == static_cast<std::size_t>(dim)) {
        cfg.coefficients.a.clear();
        for (const auto& v : a) {
          if (!v.is_string()) fail("'coefficients.a' entries must be strings");
          cfg.coefficients.a.push_back(v.get<std::string>());
        }
      } else {
        fail("'coefficients.a' must be a string or an array of dim strings");
      }
    }
    cfg.coefficients.eps = get_string(co, "coefficients", "eps", "1");
    cfg.coefficients.sigma = get_string(co, "coefficients", "sigma", "0");
    cfg.coefficients.lambda = get_number(co, "coefficients", "lambda", 2.0);
  }
  if (cfg.coefficients.lambda < 1.0) fail("'coefficients.lambda' must be >= 1");

  // Boundary conditions: default {1, x} / {1, x, y}.
  if (root.contains("bcs")) {
    const json& b = root.at("bcs");
    if (!b.is_array() || b.size() != static_cast<std::size_t>(dim + 1))
      fail("'bcs' must be an array of dim + 1 expressions");
    for (const auto& v : b) {
      if (!v.is_string()) fail("'bcs' entries must be strings");
      cfg.bcs.push_back(v.get<std::string>());
    }
  } else {
    cfg.bcs = {"1", "x"};
    if (dim == 2) cfg.bcs.push_back("y");
  }

  // Band: per-dim default [5, 20] (1D) / [5, 10] (2D).
  cfg.band.a_min = 5.0;
  cfg.band.a_max = dim == 1 ? 20.0 : 10.0;
  if (root.contains("band")) {
    const json& b = root.at("band");
    if (!b.is_object()) fail("'band' must be an object");
    reject_unknown_keys(b, "band", {"a_min", "a_max", "guard_radius", "eigen_count"});
    cfg.band.a_min = get_number(b, "band", "a_min", cfg.band.a_min);
    cfg.band.a_max = get_number(b, "band", "a_max", cfg.band.a_max);
    cfg.band.guard_radius = get_number(b, "band", "guard_radius", cfg.band.guard_radius);
    cfg.band.eigen_count =
        static_cast<int>(get_integer(b, "band", "eigen_count", cfg.band.eigen_count));
  }
  if (!(cfg.band.a_min > 0.0)) fail("'band.a_min' must be positive");
  if (!(cfg.band.a_min < cfg.band.a_max)) fail("'band' requires a_min < a_max");
  if (cfg.band.guard_radius < 0.0) fail("'band.guard_radius' must be non-negative");
  if (cfg.band.eigen_count < 1) fail("'band.eigen_count' must be >= 1");

  // Tolerances.
  if (root.contains("tolerances")) {
    const json& t = root.at("tolerances");
    if (!t.is_object()) fail("'tolerances' must be an object");
    reject_unknown_keys(t, "tolerances", {"tol_rel", "delta", "blowup_factor"});
    cfg.tolerances.tol_rel = get_number(t, "tolerances", "tol_rel", cfg.tolerances.tol_rel);
    cfg.tolerances.delta = get_number(t, "tolerances", "delta", cfg.tolerances.delta);
    cfg.tolerances.blowup_factor =
        get_number(t, "tolerances", "blowup_factor", cfg.tolerances.blowup_factor);
  }
  if (!(cfg.tolerances.tol_rel > 0.0)) fail("'tolerances.tol_rel' must be positive");
  if (!(cfg.tolerances.delta > 0.0 && cfg.tolerances.delta < 1.0))
    fail("'tolerances.delta' must lie in (0, 1)");
  if (!(cfg.tolerances.blowup_factor > 1.0)) fail("'tolerances.blowup_factor' must exceed 1");

  // Search.
  cfg.search.k = dim + 1;
  cfg.search.max_greedy_steps = dim + 1;
  cfg.search.perturb_radius = 0.01 * (cfg.band.a_max - cfg.band.a_min);
  if (root.contains("search")) {
    const json& s = root.at("search");
    if (!s.is_object()) fail("'search' must be an object");
    reject_unknown_keys(s, "search",
                        {"m", "k", "samples", "seed", "perturb_radius", "budget",
                         "max_greedy_steps"});
    cfg.search.m = static_cast<int>(get_integer(s, "search", "m", cfg.search.m));
    cfg.search.k = static_cast<int>(get_integer(s, "search", "k", cfg.search.k));
    cfg.search.samples =
        static_cast<int>(get_integer(s, "search", "samples", cfg.search.samples));
    if (s.contains("seed")) {
      const json& v = s.at("seed");
      if (!v.is_number_unsigned() && !v.is_number_integer())
        fail("'search.seed' must be a non-negative integer");
      cfg.search.seed = v.get<std::uint64_t>();
    }
    cfg.search.perturb_radius =
        get_number(s, "search", "perturb_radius", cfg.search.perturb_radius);
    cfg.search.budget = get_integer(s, "search", "budget", cfg.search.budget);
    cfg.search.max_greedy_steps = static_cast<int>(
        get_integer(s, "search", "max_greedy_steps", cfg.search.max_greedy_steps));
  }
  if (cfg.search.m < dim + 2) fail("'search.m' must be at least dim + 2");
  if (cfg.search.k < 1) fail("'search.k' must be >= 1");
  if (cfg.search.samples < 1) fail("'search.samples' must be >= 1");
  if (!(cfg.search.perturb_radius > 0.0)) fail("'search.perturb_radius' must be positive");
  if (cfg.search.budget < 1) fail("'search.budget' must be >= 1");
  if (cfg.search.max_greedy_steps < 1) fail("'search.max_greedy_steps' must be >= 1");

  cfg.output_dir = get_string(root, "config", "output_dir", "out");

  // Validate grid/mask/expressions eagerly so faults surface at load time.
  try {
    (void)cfg.make_mask();
    (void)cfg.make_coeffs();
    (void)cfg.make_bcs();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string emit_config(const RunConfig& cfg) {
  json root;
  root["dim"] = cfg.domain.dim;
  json bounds = json::array();
  for (const auto& b : cfg.domain.bounds) bounds.push_back({b[0], b[1]});
  root["bounds"] = bounds;
  root["n"] = cfg.domain.n;
  root["shrink"] = cfg.domain.shrink;
  root["coefficients"] = {{"a", cfg.coefficients.a},
                          {"eps", cfg.coefficients.eps},
                          {"sigma", cfg.coefficients.sigma},
                          {"lambda", cfg.coefficients.lambda}};
  root["bcs"] = cfg.bcs;
  root["band"] = {{"a_min", cfg.band.a_min},
                  {"a_max", cfg.band.a_max},
                  {"guard_radius", cfg.band.guard_radius},
                  {"eigen_count", cfg.band.eigen_count}};
  root["tolerances"] = {{"tol_rel", cfg.tolerances.tol_rel},
                        {"delta", cfg.tolerances.delta},
                        {"blowup_factor", cfg.tolerances.blowup_factor}};
  root["search"] = {{"m", cfg.search.m},
                    {"k", cfg.search.k},
                    {"samples", cfg.search.samples},
                    {"seed", cfg.search.seed},
                    {"perturb_radius", cfg.search.perturb_radius},
                    {"budget", cfg.search.budget},
                    {"max_greedy_steps", cfg.search.max_greedy_steps}};
  root["output_dir"] = cfg.output_dir;
  return root.dump(2) + "\n";
}

}  // namespace freqcover
