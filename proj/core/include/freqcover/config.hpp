// SPDX-License-Identifier: Apache-2.0
//
// Run configuration: strict-schema JSON with per-dimension defaults.  Unknown
// keys are rejected at every nesting level.  parse(emit(config)) == config.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "freqcover/coeff.hpp"
#include "freqcover/completeness.hpp"
#include "freqcover/grid.hpp"
#include "freqcover/search.hpp"

namespace freqcover {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct DomainConfig {
  int dim = 1;
  std::vector<std::array<double, 2>> bounds;  // one [lo, hi] per axis
  std::vector<int> n;                         // cells per axis
  double shrink = 0.1;
  bool operator==(const DomainConfig&) const = default;
};

struct CoeffConfig {
  std::vector<std::string> a;  // one expression per axis
  std::string eps = "1";
  std::string sigma = "0";
  double lambda = 2.0;
  bool operator==(const CoeffConfig&) const = default;
};

struct BandConfig {
  double a_min = 0.0;
  double a_max = 0.0;
  double guard_radius = 0.1;
  int eigen_count = 12;
  bool operator==(const BandConfig&) const = default;
};

struct TolConfig {
  double tol_rel = 1e-10;
  double delta = 1e-3;
  double blowup_factor = 1e6;
  bool operator==(const TolConfig&) const = default;
};

struct SearchConfig {
  int m = 40;              // candidate count for sweeps/greedy
  int k = 0;               // tuple size; defaults to dim + 1
  int samples = 100;       // density experiment sample count
  std::uint64_t seed = 1;
  double perturb_radius = 0.0;  // defaults to 0.01 * band width
  std::int64_t budget = 2000000;
  int max_greedy_steps = 0;     // defaults to dim + 1
  bool operator==(const SearchConfig&) const = default;
};

struct RunConfig {
  DomainConfig domain;
  CoeffConfig coefficients;
  std::vector<std::string> bcs;  // dim + 1 boundary expressions
  BandConfig band;
  TolConfig tolerances;
  SearchConfig search;
  std::string output_dir = "out";
  bool operator==(const RunConfig&) const = default;

  // Derived objects (validated on construction).
  Grid make_grid() const;
  InnerMask make_mask() const;  // of make_grid()
  CoeffSet make_coeffs() const;
  std::vector<Expr> make_bcs() const;
};

// Parses JSON text; fills defaults (documented per field above; per-dim
// defaults for bounds/n/bcs/band); rejects unknown keys, type mismatches, and
// semantic violations (a_min >= a_max, lambda < 1, wrong arity, expressions
// referencing axes beyond dim, ...).
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Canonical JSON emission; round-trips through parse_config.
std::string emit_config(const RunConfig& config);

}  // namespace freqcover
