#pragma once

#include "pnorm/module_pairing.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pnorm {

/// T_2: strictly upper triangular 2 x 2 matrices, span{E_12}.
ParametrizedAlgebra upper_triangular_algebra();

/// Column element over T_2. Without an explicit element, n copies of E_12.
/// The pairing vanishes identically, so the gap is the element norm.
GapReport upper_triangular_example(PExponent p, int n, const std::optional<ColumnModuleElement>& element = {},
                                   const OptimizerConfig& cfg = {});

/// 2 x 2 normalized Hadamard matrix; its own inverse.
ComplexMatrix hadamard2();
/// u diag(l1, l2) u^{-1}.
ComplexMatrix sd_element(Complex l1, Complex l2);
/// Span{u diag(1,0) u^{-1}, u diag(0,1) u^{-1}}.
ParametrizedAlgebra sd_algebra();
/// [a_1; a_2] with a_1 = u diag(2,1) u^{-1}, a_2 = u diag(1,2) u^{-1}.
ColumnModuleElement sd_module_element();

inline constexpr double kSdTolerance = 1e-4;

struct SdCounterexample {
  GapReport report;
  double expected_norm = 4.0;
  double expected_sup = 0.0;  // sqrt(10)
  bool reproduced = false;    // |norm - 4| <= 1e-12 and sup >= sqrt(10) - 1e-4
};

/// Defaults with restarts = 256 for the SD instance.
OptimizerConfig sd_default_config();
/// Runs the p = 1 gap computation on sd_module_element().
SdCounterexample sd_counterexample(const OptimizerConfig& cfg = sd_default_config());

/// Reduced objective |3w1 + w2 + 3w3 - w4| + |w1 + 3w2 - w3 + 3w4| with
/// w_j = r_j e^{i theta_j}; twice the pairing norm.
long double sd_reduced_objective(const std::array<long double, 4>& r, const std::array<long double, 4>& theta);

struct ClaimCase {
  std::array<int, 4> radii{};   // extreme point (r1, r2, r3, r4)
  long double value = 0.0L;     // maximum before halving
  long double argmax = 0.0L;    // theta of the free phase (0 if none)
  bool has_free_phase = false;
};

struct ClaimOracle {
  std::array<ClaimCase, 4> cases;
  double value = 0.0;  // half the largest case value
};

/// Evaluates the four extreme-point cases of the reduced SD objective with a
/// 10^4-point theta grid and golden-section refinement, in long double.
ClaimOracle sd_claim_oracle();

/// Maximizes g on [0, 2pi) by dense grid plus golden-section refinement;
/// returns (argmax, max).
std::pair<long double, long double> maximize_periodic(const std::function<long double(long double)>& g, int grid = 10000,
                                                      long double bracket_width = 1e-12L);

struct SweepResult {
  std::vector<PExponent> p_grid;
  std::vector<double> norms;
  std::vector<double> sups;
  std::vector<double> gaps;
  std::vector<Certification> certified;
  std::vector<std::uint64_t> seeds;
  OptimizerConfig config;
};

std::vector<PExponent> default_sweep_grid();
/// One sd instance per grid point, with seed = cfg.seed + index.
SweepResult sd_sweep(const std::vector<PExponent>& grid, const OptimizerConfig& cfg = sd_default_config());
/// Header p,norm,sup,gap,certified,restarts,seed then one row per point.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace pnorm
