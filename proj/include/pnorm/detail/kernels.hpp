#pragma once

// Raw Eigen kernels behind the validated public API. Used by the norm
// routines and by the pairing search, where matrices are rebuilt in a hot
// loop and the ComplexMatrix checks would dominate.

#include "pnorm/matrix.hpp"
#include "pnorm/norms.hpp"
#include "pnorm/random.hpp"

namespace pnorm::detail {

double p_norm(const Eigen::Ref<const DenseVector>& v, PExponent p);

/// out = J_q(y); see pnorm::duality_map.
void duality_map_into(const Eigen::Ref<const DenseVector>& y, PExponent q, DenseVector& out);

/// Scales v onto the unit p-sphere; returns false (v untouched) if v = 0.
bool normalize(DenseVector& v, PExponent p);

/// max_j ||a e_j||_q; smallest maximizing index in *arg.
double max_column_norm(const DenseMatrix& a, PExponent q, Index* arg = nullptr);
/// max_i ||row_i||_r; smallest maximizing index in *arg.
double max_row_norm(const DenseMatrix& a, PExponent r, Index* arg = nullptr);
double spectral_norm(const DenseMatrix& a);

/// Closed-form value; requires has_exact_formula(p, q).
double exact_value(const DenseMatrix& a, PExponent p, PExponent q);

struct PowerRun {
  double value = 0.0;
  DenseVector xi;
  int iterations = 0;
  bool converged = false;
};

/// Nonlinear power iteration from start (normalized internally). The value
/// sequence is nondecreasing in exact arithmetic; stops when the relative
/// increase drops below tol.
PowerRun power_iterate(const DenseMatrix& a, PExponent p, PExponent q, DenseVector start,
                       int max_iters, double tol);

DenseVector random_sphere_point(Index dim, PExponent p, Rng& rng);

/// p->p norm evaluator for repeated calls on slowly varying matrices of a
/// fixed shape. Exact exponents use closed forms; otherwise each call runs
/// the power iteration from the previous maximizer plus a few fresh random
/// starts, which tracks the maximizer along a continuous path.
class WarmNorm {
 public:
  WarmNorm(PExponent p, std::uint64_t seed, int fresh_starts = 2, int max_iters = 200,
           double tol = 1e-10);
  double operator()(const DenseMatrix& a);
  bool exact() const { return exact_; }

 private:
  PExponent p_;
  bool exact_;
  Rng rng_;
  int fresh_starts_;
  int max_iters_;
  double tol_;
  DenseVector last_;
};

}  // namespace pnorm::detail
