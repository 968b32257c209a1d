#pragma once

#include "pnorm/block_algebra.hpp"
#include "pnorm/norms.hpp"

#include <optional>
#include <string>

namespace pnorm {

/// (b | a)_A = b * a = sum_l b_l a_l, a d x d element of A.
ComplexMatrix pairing(const RowModuleElement& b, const ColumnModuleElement& a);

/// Row element over M_d whose first row is eta^T (dim eta = nd).
RowModuleElement b_eta(const ComplexVector& eta, int d, int n);
/// Column element over M_d whose first column is zeta (dim zeta = nd).
ColumnModuleElement a_zeta(const ComplexVector& zeta, int d, int n);

struct FullAlgebraWitness {
  ComplexVector vector;  // eta in Ba(l^{p'}_{nd}) or zeta in Ba(l^p_{nd})
  double value = 0.0;    // ||(b_eta | a)|| or ||(b | a_zeta)||
  double target = 0.0;   // the element norm the witness reproduces
  bool converged = true;
};

/// eta from the dual witness of ||a||_{nd x d}, so that ||(b_eta | a)|| = ||a||.
/// The stacked matrix form is what the block constructions call per block.
FullAlgebraWitness full_algebra_witness_eta(const ComplexMatrix& stacked, int n, PExponent p,
                                            const OptimizerConfig& cfg = {});
FullAlgebraWitness full_algebra_witness_eta(const ColumnModuleElement& a, PExponent p,
                                            const OptimizerConfig& cfg = {});
/// zeta from the primal witness of ||b||_{d x nd}, so that ||(b | a_zeta)|| = ||b||.
FullAlgebraWitness full_algebra_witness_zeta(const ComplexMatrix& side_by_side, int n, PExponent p,
                                             const OptimizerConfig& cfg = {});
FullAlgebraWitness full_algebra_witness_zeta(const RowModuleElement& b, PExponent p,
                                             const OptimizerConfig& cfg = {});

/// Interleaved row witness diag(b_{eta_11}, ..., b_{eta_k1}) | ... built
/// from per-block witnesses; lies in the unit ball of M_{1,n}(A).
RowModuleElement constructive_witness_b0(const ColumnModuleElement& a, PExponent p,
                                         const OptimizerConfig& cfg = {});
/// Mirror of constructive_witness_b0 for row elements, from a_zeta blocks.
ColumnModuleElement constructive_witness_a0(const RowModuleElement& b, PExponent p,
                                            const OptimizerConfig& cfg = {});

struct PairingSup {
  double value = 0.0;
  /// Opposite-side element scaled into the unit ball (d x nd for a column
  /// element, nd x d for a row element).
  ComplexMatrix witness = ComplexMatrix::zeros(1, 1);
  double witness_norm = 0.0;
  long evaluations = 0;
  int restarts = 0;
  bool constructive_start = false;
};

/// sup ||(b | a)|| over b in Ba(M_{1,n}(A)) by derivative-free ascent on the
/// algebra coordinates of b with radial normalization. Block-diagonal
/// algebras add the constructive witness as a start.
PairingSup pairing_sup(const ColumnModuleElement& a, PExponent p, const OptimizerConfig& cfg = {});
/// sup ||(b | a)|| over a in Ba(M_{n,1}(A)).
PairingSup pairing_sup(const RowModuleElement& b, PExponent p, const OptimizerConfig& cfg = {});

enum class Side { column, row };
enum class Certification { constructive, heuristic, oracle_bracketed };

std::string to_string(Side s);
std::string to_string(Certification c);

struct OracleBracket {
  int resolution = 0;
  double norm_lower = 0.0;
  double norm_upper = 0.0;
  /// Certified lower bound on the supremum at the best witness.
  double sup_lower = 0.0;
  /// sup <= element norm <= norm_upper.
  double sup_upper = 0.0;
};

struct GapReport {
  Side side = Side::column;
  PExponent p = PExponent(1.0);
  double element_norm = 0.0;
  double pairing_sup = 0.0;
  double gap = 0.0;
  ComplexMatrix best_witness = ComplexMatrix::zeros(1, 1);
  double witness_norm = 0.0;
  Certification certified = Certification::heuristic;
  bool exact_norms = false;
  double tolerance = 0.0;
  bool cstar_like = false;
  long evaluations = 0;
  int restarts = 0;
  std::optional<OracleBracket> oracle;
};

/// Tolerance under which a gap counts as zero: 1e-6 when the p->p norms
/// have closed forms (p in {1, 2, inf}), 1e-3 otherwise.
double default_gap_tolerance(PExponent p);

/// Element norm minus the pairing supremum (conditions 4 and 5 of
/// C*-likeness). For block-diagonal algebras the constructive witness is
/// tried first and, when it closes the gap, no search runs.
GapReport cstar_gap(const ColumnModuleElement& a, PExponent p, const OptimizerConfig& cfg = {});
GapReport cstar_gap(const RowModuleElement& b, PExponent p, const OptimizerConfig& cfg = {});

}  // namespace pnorm
