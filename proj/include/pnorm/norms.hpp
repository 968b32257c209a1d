#pragma once

#include "pnorm/matrix.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace pnorm {

enum class NormMethod { exact_formula, singular_value, power_iteration, grid_oracle };

std::string to_string(NormMethod m);

/// An achieved lower bound on ||a||_{p->q} together with the vectors that
/// achieve it: value == ||a * primal_witness||_q and, when present,
/// Re <dual_witness, a * primal_witness> == value.
struct NormEstimate {
  double value = 0.0;
  ComplexVector primal_witness;
  std::optional<ComplexVector> dual_witness;
  NormMethod method = NormMethod::exact_formula;
  int iterations = 0;
  bool converged = true;
};

struct OptimizerConfig {
  int restarts = 64;
  int max_iters = 500;
  double tol = 1e-12;
  std::uint64_t seed = 0;
  std::optional<int> oracle_resolution;

  void validate() const;
};

class UnsupportedExponents : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double vector_p_norm(const ComplexVector& xi, PExponent p);

/// Bilinear pairing sum_i eta_i xi_i (no conjugation).
Complex holder_pairing(const ComplexVector& eta, const ComplexVector& xi);

/// Norming functional of y in l^{q'}: ||eta||_{q'} = 1 (0 for y = 0) and
/// <eta, y> = ||y||_q. Zero coordinates of y map to zero.
ComplexVector duality_map(const ComplexVector& y, PExponent q);

/// True when op_norm_exact handles (p, q): p = 1, q = inf, or p = q = 2.
bool has_exact_formula(PExponent p, PExponent q);

/// Closed-form p->q norm. Throws UnsupportedExponents outside
/// has_exact_formula; callers then use op_norm_estimate.
NormEstimate op_norm_exact(const ComplexMatrix& a, PExponent p, PExponent q);

/// Best available p->q norm: exact formula when one exists, otherwise the
/// nonlinear power iteration xi <- J_{p'}(a^T J_q(a xi)) from cfg.restarts
/// random starts.
NormEstimate op_norm_estimate(const ComplexMatrix& a, PExponent p, PExponent q,
                              const OptimizerConfig& cfg = {});

/// Default grid budget (number of evaluated sphere points).
inline constexpr std::uint64_t kDefaultOracleBudget = 50'000'000;

/// Number of sphere points op_norm_oracle would evaluate.
std::uint64_t oracle_grid_size(Index dim, PExponent p, int resolution);

/// Deterministic grid maximum of ||a xi||_q over the unit p-sphere.
/// Magnitude ratios |xi_i| / ||xi||_1 lie on a simplex grid with step 1/N
/// and are projected radially to the sphere; phases lie on a uniform grid
/// of P angles, with the first nonzero coordinate real.
/// N and P are the largest powers of two <= resolution (P >= 8), so
/// grids are nested and the value is nondecreasing in resolution.
/// Throws BudgetExceeded when the grid is larger than budget.
double op_norm_oracle(const ComplexMatrix& a, PExponent p, PExponent q, int resolution,
                      std::uint64_t budget = kDefaultOracleBudget);

/// Radius delta such that every unit vector is within p-distance delta of
/// some grid point of op_norm_oracle.
double oracle_covering_radius(Index dim, PExponent p, int resolution);

/// Upper bound on the true norm implied by an oracle value: value/(1-delta),
/// or +inf if delta >= 1.
double oracle_upper_bound(double oracle_value, Index dim, PExponent p, int resolution);

/// | ||a||_{p->q} - ||a^T||_{q'->p'} | with the best available method per side.
double transpose_duality_residual(const ComplexMatrix& a, PExponent p, PExponent q,
                                  const OptimizerConfig& cfg = {});

}  // namespace pnorm
