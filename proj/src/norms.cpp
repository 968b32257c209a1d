#include "pnorm/norms.hpp"

#include "pnorm/detail/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace pnorm {

namespace detail {

namespace {

// |v_i| / scale for the largest |v_i| = scale. Squared moduli avoid hypot
// unless they would overflow or underflow.
double moduli(const Eigen::Ref<const DenseVector>& v, Eigen::ArrayXd& m) {
  m.resize(v.size());
  double top = 0.0;
  for (Index i = 0; i < v.size(); ++i) top = std::max(top, m(i) = std::norm(v(i)));
  if (top == 0.0) return 0.0;
  if (std::isfinite(top) && top > 1e-290) {
    m = (m / top).sqrt();
    return std::sqrt(top);
  }
  double scale = 0.0;
  for (Index i = 0; i < v.size(); ++i) scale = std::max(scale, m(i) = std::abs(v(i)));
  m /= scale;
  return scale;
}

thread_local Eigen::ArrayXd scratch;

}  // namespace

double p_norm(const Eigen::Ref<const DenseVector>& v, PExponent p) {
  const double scale = moduli(v, scratch);
  if (p.is_infinite() || scale == 0.0) return scale;
  if (p.is_one()) return scale * scratch.sum();
  if (p.is_two()) return scale * std::sqrt(scratch.square().sum());
  const double e = p.value();
  double s = 0.0;
  for (Index i = 0; i < v.size(); ++i)
    if (scratch(i) > 0.0) s += std::pow(scratch(i), e);
  return scale * std::pow(s, 1.0 / e);
}

void duality_map_into(const Eigen::Ref<const DenseVector>& y, PExponent q, DenseVector& out) {
  out.setZero(y.size());
  const double scale = moduli(y, scratch);
  if (scale == 0.0) return;
  if (q.is_infinite()) {
    Index arg = 0;
    scratch.maxCoeff(&arg);
    out(arg) = std::conj(y(arg)) / std::abs(y(arg));
    return;
  }
  if (q.is_two()) {
    out = y.conjugate() / (scale * std::sqrt(scratch.square().sum()));
    return;
  }
  const bool one = q.is_one();
  const double e = one ? 0.0 : q.value() - 1.0;
  // With t_i = (|y_i|/scale)^(q-1): eta_i = t_i (scale/||y||)^(q-1) phase_i.
  double s = 0.0;
  for (Index i = 0; i < y.size(); ++i) {
    if (scratch(i) == 0.0) continue;
    const double t = one ? 1.0 : std::pow(scratch(i), e);
    s += t * scratch(i);
    out(i) = t * (std::conj(y(i)) / std::abs(y(i)));
  }
  if (!one) out *= std::pow(s, -e / q.value());
}

bool normalize(DenseVector& v, PExponent p) {
  const double n = p_norm(v, p);
  if (n == 0.0) return false;
  v /= n;
  return true;
}

double max_column_norm(const DenseMatrix& a, PExponent q, Index* arg) {
  double best = -1.0;
  Index idx = 0;
  for (Index j = 0; j < a.cols(); ++j) {
    const double v = p_norm(a.col(j), q);
    if (v > best) {
      best = v;
      idx = j;
    }
  }
  if (arg) *arg = idx;
  return best;
}

double max_row_norm(const DenseMatrix& a, PExponent r, Index* arg) {
  double best = -1.0;
  Index idx = 0;
  for (Index i = 0; i < a.rows(); ++i) {
    const double v = p_norm(a.row(i).transpose(), r);
    if (v > best) {
      best = v;
      idx = i;
    }
  }
  if (arg) *arg = idx;
  return best;
}

double spectral_norm(const DenseMatrix& a) {
  // Top eigenvalue of the smaller Gram matrix.
  const DenseMatrix g = a.rows() <= a.cols() ? DenseMatrix(a * a.adjoint()) : DenseMatrix(a.adjoint() * a);
  if (g.rows() == 1) return std::sqrt(std::max(0.0, g(0, 0).real()));
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double exact_value(const DenseMatrix& a, PExponent p, PExponent q) {
  if (p.is_one()) return max_column_norm(a, q);
  if (q.is_infinite()) return max_row_norm(a, p.conjugate());
  if (p.is_two() && q.is_two()) return spectral_norm(a);
  throw UnsupportedExponents("no closed form for p=" + p.to_string() + ", q=" + q.to_string());
}

PowerRun power_iterate(const DenseMatrix& a, PExponent p, PExponent q, DenseVector start,
                       int max_iters, double tol) {
  PowerRun run;
  run.xi = std::move(start);
  if (!normalize(run.xi, p)) {
    run.xi = DenseVector::Zero(a.cols());
    run.xi(0) = 1.0;
  }
  const PExponent p_dual = p.conjugate();
  DenseVector y = a * run.xi;
  run.value = p_norm(y, q);
  DenseVector eta, w, next;
  for (int it = 0; it < max_iters; ++it) {
    run.iterations = it + 1;
    if (run.value == 0.0) {
      run.converged = true;
      break;
    }
    duality_map_into(y, q, eta);
    w = a.transpose() * eta;
    duality_map_into(w, p_dual, next);
    if (next.isZero(0.0)) {
      run.converged = true;
      break;
    }
    DenseVector y_next = a * next;
    const double v_next = p_norm(y_next, q);
    const bool small_step = std::abs(v_next - run.value) <= tol * std::max(v_next, run.value);
    if (v_next >= run.value) {
      run.xi = std::move(next);
      y = std::move(y_next);
      run.value = v_next;
    }
    if (small_step || v_next < run.value) {
      run.converged = true;
      break;
    }
  }
  return run;
}

DenseVector random_sphere_point(Index dim, PExponent p, Rng& rng) {
  DenseVector v = random_complex_gaussian(dim, rng);
  if (!normalize(v, p)) {
    v.setZero();
    v(0) = 1.0;
  }
  return v;
}

namespace {
bool is_exact_pp(PExponent p) { return p.is_one() || p.is_two() || p.is_infinite(); }
constexpr int kPilotIters = 12;
constexpr double kPilotMargin = 1e-3;
}  // namespace

WarmNorm::WarmNorm(PExponent p, std::uint64_t seed, int fresh_starts, int max_iters, double tol)
    : p_(p), exact_(is_exact_pp(p)), rng_(seed), fresh_starts_(fresh_starts), max_iters_(max_iters),
      tol_(tol) {}

double WarmNorm::operator()(const DenseMatrix& a) {
  if (exact_) return exact_value(a, p_, p_);
  double best = -1.0;
  DenseVector best_xi;
  auto consider = [&](DenseVector start) {
    PowerRun run = power_iterate(a, p_, p_, std::move(start), max_iters_, tol_);
    if (run.value > best) {
      best = run.value;
      best_xi = std::move(run.xi);
    }
  };
  if (last_.size() == a.cols()) {
    consider(last_);
  } else {
    consider(random_sphere_point(a.cols(), p_, rng_));
  }
  // Fresh starts run a short pilot and continue only if they come close.
  const int pilot = std::min(max_iters_, kPilotIters);
  for (int s = 0; s < fresh_starts_; ++s) {
    PowerRun run = power_iterate(a, p_, p_, random_sphere_point(a.cols(), p_, rng_), pilot, tol_);
    if (run.converged || run.value < best * (1.0 - kPilotMargin)) {
      if (run.value > best) {
        best = run.value;
        best_xi = std::move(run.xi);
      }
      continue;
    }
    consider(std::move(run.xi));
  }
  last_ = std::move(best_xi);
  return best;
}

}  // namespace detail

std::string to_string(NormMethod m) {
  switch (m) {
    case NormMethod::exact_formula: return "exact_formula";
    case NormMethod::singular_value: return "singular_value";
    case NormMethod::power_iteration: return "power_iteration";
    case NormMethod::grid_oracle: return "grid_oracle";
  }
  return "unknown";
}

void OptimizerConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (oracle_resolution && *oracle_resolution < 1) throw std::invalid_argument("oracle_resolution must be >= 1");
}

double vector_p_norm(const ComplexVector& xi, PExponent p) { return detail::p_norm(xi.dense(), p); }

Complex holder_pairing(const ComplexVector& eta, const ComplexVector& xi) {
  if (eta.dim() != xi.dim()) throw std::invalid_argument("pairing dimension mismatch");
  return (eta.dense().array() * xi.dense().array()).sum();
}

ComplexVector duality_map(const ComplexVector& y, PExponent q) {
  DenseVector out;
  detail::duality_map_into(y.dense(), q, out);
  return ComplexVector(std::move(out));
}

bool has_exact_formula(PExponent p, PExponent q) {
  return p.is_one() || q.is_infinite() || (p.is_two() && q.is_two());
}

NormEstimate op_norm_exact(const ComplexMatrix& a, PExponent p, PExponent q) {
  const DenseMatrix& m = a.dense();
  DenseVector xi = DenseVector::Zero(m.cols());
  NormMethod method = NormMethod::exact_formula;
  if (p.is_one()) {
    Index j = 0;
    detail::max_column_norm(m, q, &j);
    xi(j) = 1.0;
  } else if (q.is_infinite()) {
    Index i = 0;
    detail::max_row_norm(m, p.conjugate(), &i);
    detail::duality_map_into(m.row(i).transpose(), p.conjugate(), xi);
    if (xi.isZero(0.0)) xi(0) = 1.0;
  } else if (p.is_two() && q.is_two()) {
    method = NormMethod::singular_value;
    Eigen::JacobiSVD<DenseMatrix> svd(m, Eigen::ComputeThinV);
    xi = svd.matrixV().col(0);
    if (!detail::normalize(xi, p)) xi(0) = 1.0;
  } else {
    throw UnsupportedExponents("no closed form for p=" + p.to_string() + ", q=" + q.to_string());
  }
  const DenseVector y = m * xi;
  DenseVector eta;
  detail::duality_map_into(y, q, eta);
  NormEstimate est{detail::p_norm(y, q), ComplexVector(std::move(xi)), ComplexVector(std::move(eta)),
                   method, 0, true};
  return est;
}

NormEstimate op_norm_estimate(const ComplexMatrix& a, PExponent p, PExponent q, const OptimizerConfig& cfg) {
  if (has_exact_formula(p, q)) return op_norm_exact(a, p, q);
  cfg.validate();
  const DenseMatrix& m = a.dense();

  // The best column is a cheap deterministic start that already certifies
  // the max-column lower bound; the random starts follow.
  Index best_col = 0;
  detail::max_column_norm(m, q, &best_col);
  DenseVector col_start = DenseVector::Zero(m.cols());
  col_start(best_col) = 1.0;

  detail::PowerRun best = detail::power_iterate(m, p, q, col_start, cfg.max_iters, cfg.tol);
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng = make_rng(cfg.seed, static_cast<std::uint64_t>(r));
    detail::PowerRun run =
        detail::power_iterate(m, p, q, detail::random_sphere_point(m.cols(), p, rng), cfg.max_iters, cfg.tol);
    if (run.value > best.value) best = std::move(run);
  }
  const DenseVector y = m * best.xi;
  DenseVector eta;
  detail::duality_map_into(y, q, eta);
  return NormEstimate{detail::p_norm(y, q), ComplexVector(std::move(best.xi)), ComplexVector(std::move(eta)),
                      NormMethod::power_iteration, best.iterations, best.converged};
}

double transpose_duality_residual(const ComplexMatrix& a, PExponent p, PExponent q, const OptimizerConfig& cfg) {
  OptimizerConfig dual_cfg = cfg;
  dual_cfg.seed = split_seed(cfg.seed, 0x7a);
  const double direct = op_norm_estimate(a, p, q, cfg).value;
  const double transposed = op_norm_estimate(a.transpose(), q.conjugate(), p.conjugate(), dual_cfg).value;
  return std::abs(direct - transposed);
}

}  // namespace pnorm
