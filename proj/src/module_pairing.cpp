#include "pnorm/module_pairing.hpp"

#include "pnorm/detail/kernels.hpp"
#include "pnorm/parallel.hpp"
#include "pnorm/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pnorm {

namespace {

Algebra full_algebra(int d) { return BlockDiagAlgebra(Composition::full(d)); }

bool exact_exponent(PExponent p) { return p.is_one() || p.is_two() || p.is_infinite(); }

void check_compatible(const Algebra& x, const Algebra& y) {
  if (algebra_dim(x) != algebra_dim(y)) throw std::invalid_argument("pairing: algebra dimension mismatch");
  const auto* bx = as_block(x);
  const auto* by = as_block(y);
  if ((bx == nullptr) != (by == nullptr) || (bx && !(bx->composition() == by->composition()))) {
    throw std::invalid_argument("pairing: algebra mismatch");
  }
}

double best_norm(const ComplexMatrix& m, PExponent p, const OptimizerConfig& cfg) {
  return op_norm_estimate(m, p, p, cfg).value;
}

// The opposite element is linear in its complex algebra coordinates
// lambda (index l*m + i: block l, basis element i), and so is the pairing.
struct SearchSpace {
  Index opp_rows = 0;
  Index opp_cols = 0;
  Index d = 0;
  Index coords = 0;
  DenseMatrix opp_map;   // vec(opposite) = opp_map * lambda
  DenseMatrix prod_map;  // vec(pairing)  = prod_map * lambda
};

DenseVector vec(const DenseMatrix& m) { return Eigen::Map<const DenseVector>(m.data(), m.size()); }

SearchSpace column_side_space(const ColumnModuleElement& a, const ParametrizedAlgebra& alg) {
  SearchSpace s;
  const Index d = a.d(), n = a.n(), m = alg.size();
  s.d = d;
  s.opp_rows = d;
  s.opp_cols = n * d;
  s.coords = n * m;
  s.opp_map = DenseMatrix::Zero(s.opp_rows * s.opp_cols, s.coords);
  s.prod_map = DenseMatrix::Zero(d * d, s.coords);
  for (Index l = 0; l < n; ++l) {
    for (Index i = 0; i < m; ++i) {
      DenseMatrix b = DenseMatrix::Zero(s.opp_rows, s.opp_cols);
      b.block(0, l * d, d, d) = alg.basis()[i].dense();
      s.opp_map.col(l * m + i) = vec(b);
      s.prod_map.col(l * m + i) = vec(alg.basis()[i].dense() * a.blocks()[l].dense());
    }
  }
  return s;
}

SearchSpace row_side_space(const RowModuleElement& b, const ParametrizedAlgebra& alg) {
  SearchSpace s;
  const Index d = b.d(), n = b.n(), m = alg.size();
  s.d = d;
  s.opp_rows = n * d;
  s.opp_cols = d;
  s.coords = n * m;
  s.opp_map = DenseMatrix::Zero(s.opp_rows * s.opp_cols, s.coords);
  s.prod_map = DenseMatrix::Zero(d * d, s.coords);
  for (Index l = 0; l < n; ++l) {
    for (Index i = 0; i < m; ++i) {
      DenseMatrix a = DenseMatrix::Zero(s.opp_rows, s.opp_cols);
      a.block(l * d, 0, d, d) = alg.basis()[i].dense();
      s.opp_map.col(l * m + i) = vec(a);
      s.prod_map.col(l * m + i) = vec(b.blocks()[l].dense() * alg.basis()[i].dense());
    }
  }
  return s;
}

DenseVector to_complex(const Eigen::VectorXd& x) {
  DenseVector z(x.size() / 2);
  for (Index k = 0; k < z.size(); ++k) z(k) = Complex(x(2 * k), x(2 * k + 1));
  return z;
}

Eigen::VectorXd to_real(const std::vector<Complex>& z) {
  Eigen::VectorXd x(2 * static_cast<Index>(z.size()));
  for (std::size_t k = 0; k < z.size(); ++k) {
    x(2 * k) = z[k].real();
    x(2 * k + 1) = z[k].imag();
  }
  return x;
}

// ||(opposite | x)|| / ||opposite||, evaluated with warm-started norms.
class RatioObjective {
 public:
  RatioObjective(const SearchSpace& space, PExponent p, std::uint64_t seed)
      : space_(space), num_norm_(p, split_seed(seed, 1)), den_norm_(p, split_seed(seed, 2)) {}

  double operator()(const Eigen::VectorXd& x) {
    ++evaluations;
    assemble(x);
    last_den = den_norm_(opp_);
    if (last_den == 0.0) {
      last_num = 0.0;
      return 0.0;
    }
    last_num = num_norm_(prod_);
    return last_num / last_den;
  }

  void assemble(const Eigen::VectorXd& x) {
    const DenseVector z = to_complex(x);
    opp_vec_.noalias() = space_.opp_map * z;
    prod_vec_.noalias() = space_.prod_map * z;
    opp_ = Eigen::Map<const DenseMatrix>(opp_vec_.data(), space_.opp_rows, space_.opp_cols);
    prod_ = Eigen::Map<const DenseMatrix>(prod_vec_.data(), space_.d, space_.d);
  }

  const DenseMatrix& opposite() const { return opp_; }
  const DenseMatrix& product() const { return prod_; }

  long evaluations = 0;
  double last_num = 0.0;
  double last_den = 0.0;

 private:
  const SearchSpace& space_;
  detail::WarmNorm num_norm_;
  detail::WarmNorm den_norm_;
  DenseVector opp_vec_;
  DenseVector prod_vec_;
  DenseMatrix opp_;
  DenseMatrix prod_;
};

struct AscentOutcome {
  Eigen::VectorXd x;
  double value = 0.0;
  long evaluations = 0;
};

// Derivative-free local ascent: per-coordinate three-point line search with
// a parabolic step, step halving on stagnation. Coordinate sweeps can stall
// on ridges of the piecewise-smooth ratio, so a stalled sweep is retried
// along random directions before the step shrinks.
constexpr Index kPolls = 4;

AscentOutcome local_ascent(RatioObjective& f, Eigen::VectorXd x, long budget, Rng& rng) {
  const Index dim = x.size();
  std::normal_distribution<double> normal(0.0, 1.0);
  if (x.norm() == 0.0) x(0) = 1.0;
  x.normalize();
  double fx = f(x);
  double h = 0.25;
  const long start = f.evaluations;

  auto line_search = [&](const Eigen::VectorXd& dir) {
    const Eigen::VectorXd xp = x + h * dir, xm = x - h * dir;
    const double fp = f(xp), fm = f(xm);
    double best = fx;
    Eigen::VectorXd best_x;
    if (fp > best) best = fp, best_x = xp;
    if (fm > best) best = fm, best_x = xm;
    const double curv = fp - 2.0 * fx + fm;
    if (curv < 0.0) {
      double t = h * (fm - fp) / (2.0 * curv);
      t = std::clamp(t, -4.0 * h, 4.0 * h);
      if (std::abs(std::abs(t) - h) > 1e-3 * h && std::abs(t) > 1e-6 * h) {
        const Eigen::VectorXd xt = x + t * dir;
        const double ft = f(xt);
        if (ft > best) best = ft, best_x = xt;
      }
    }
    if (best > fx * (1.0 + 1e-15) && best_x.size() == dim) {
      x = best_x;
      fx = best;
      return true;
    }
    return false;
  };

  while (f.evaluations - start < budget && h > 1e-10) {
    bool improved = false;
    for (Index c = 0; c < dim && f.evaluations - start < budget; ++c) {
      improved |= line_search(Eigen::VectorXd::Unit(dim, c));
    }
    if (!improved) {
      for (Index r = 0; r < kPolls * dim && f.evaluations - start < budget; ++r) {
        Eigen::VectorXd dir(dim);
        for (Index k = 0; k < dim; ++k) dir(k) = normal(rng);
        dir.normalize();
        if (line_search(dir)) {
          improved = true;
          // Follow a successful poll with doubling steps.
          const double h0 = h;
          while (f.evaluations - start < budget) {
            h *= 2.0;
            if (!line_search(dir)) break;
          }
          h = h0;
        }
      }
    }
    if (!improved) h *= 0.5;
    const double nx = x.norm();
    if (nx > 0.0) {
      x /= nx;
    } else {
      break;
    }
  }
  return {x, fx, f.evaluations - start};
}

struct RestartResult {
  Eigen::VectorXd x;
  double value = -1.0;
  double num = 0.0;
  double den = 0.0;
  DenseMatrix opposite;
  long evaluations = 0;
};

bool lexicographically_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

PairingSup run_search(const SearchSpace& space, PExponent p, const OptimizerConfig& cfg,
                      const std::optional<Eigen::VectorXd>& extra_start) {
  cfg.validate();
  const long budget = 2L * space.coords * cfg.max_iters;
  const std::size_t starts = static_cast<std::size_t>(cfg.restarts) + (extra_start ? 1 : 0);
  std::vector<RestartResult> results(starts);

  parallel_for(starts, [&](std::size_t r) {
    Rng rng = make_rng(cfg.seed, r);
    Eigen::VectorXd x0;
    if (extra_start && r == starts - 1) {
      x0 = *extra_start;
    } else {
      std::normal_distribution<double> normal(0.0, 1.0);
      x0.resize(2 * space.coords);
      for (Index k = 0; k < x0.size(); ++k) x0(k) = normal(rng);
    }
    RatioObjective f(space, p, split_seed(cfg.seed, 1000 + r));
    AscentOutcome out = local_ascent(f, std::move(x0), budget, rng);

    // Re-check the end point with the full multi-start estimator; both
    // estimates are achieved lower bounds, so keep the larger of each.
    f(out.x);
    OptimizerConfig check;
    check.seed = split_seed(cfg.seed, 5000 + r);
    RestartResult res;
    res.opposite = f.opposite();
    res.num = f.last_num;
    res.den = f.last_den;
    if (!exact_exponent(p) && res.den > 0.0) {
      res.num = std::max(res.num, op_norm_estimate(ComplexMatrix(f.product()), p, p, check).value);
      res.den = std::max(res.den, op_norm_estimate(ComplexMatrix(f.opposite()), p, p, check).value);
    }
    res.value = res.den > 0.0 ? res.num / res.den : 0.0;
    res.x = std::move(out.x);
    res.evaluations = f.evaluations;
    results[r] = std::move(res);
  });

  std::size_t best = 0;
  long evaluations = 0;
  for (std::size_t r = 0; r < starts; ++r) {
    evaluations += results[r].evaluations;
    if (r == 0) continue;
    const auto& cand = results[r];
    const auto& cur = results[best];
    if (cand.value > cur.value || (cand.value == cur.value && lexicographically_less(cand.x, cur.x))) best = r;
  }
  const RestartResult& win = results[best];
  PairingSup out;
  out.value = win.value;
  out.evaluations = evaluations;
  out.restarts = static_cast<int>(starts);
  out.constructive_start = extra_start.has_value() && best == starts - 1;
  if (win.den > 0.0) {
    out.witness = ComplexMatrix(DenseMatrix(win.opposite / win.den));
    out.witness_norm = best_norm(out.witness, p, OptimizerConfig{});
  } else {
    out.witness = ComplexMatrix::zeros(space.opp_rows, space.opp_cols);
    out.witness_norm = 0.0;
  }
  return out;
}

Eigen::VectorXd coordinates_of(const std::vector<ComplexMatrix>& blocks, const ParametrizedAlgebra& alg) {
  std::vector<Complex> all;
  for (const auto& blk : blocks) {
    const auto c = alg.coordinates(blk);
    all.insert(all.end(), c.begin(), c.end());
  }
  return to_real(all);
}

}  // namespace

ComplexMatrix pairing(const RowModuleElement& b, const ColumnModuleElement& a) {
  check_compatible(b.algebra(), a.algebra());
  if (b.n() != a.n()) throw std::invalid_argument("pairing: module sizes differ");
  return b.matrix() * a.matrix();
}

RowModuleElement b_eta(const ComplexVector& eta, int d, int n) {
  if (d < 1 || n < 1 || eta.dim() != static_cast<Index>(n) * d) {
    throw std::invalid_argument("b_eta: eta must have dimension n*d");
  }
  DenseMatrix m = DenseMatrix::Zero(d, eta.dim());
  m.row(0) = eta.dense().transpose();
  return RowModuleElement::from_matrix(full_algebra(d), ComplexMatrix(std::move(m)));
}

ColumnModuleElement a_zeta(const ComplexVector& zeta, int d, int n) {
  if (d < 1 || n < 1 || zeta.dim() != static_cast<Index>(n) * d) {
    throw std::invalid_argument("a_zeta: zeta must have dimension n*d");
  }
  DenseMatrix m = DenseMatrix::Zero(zeta.dim(), d);
  m.col(0) = zeta.dense();
  return ColumnModuleElement::from_matrix(full_algebra(d), ComplexMatrix(std::move(m)));
}

FullAlgebraWitness full_algebra_witness_eta(const ComplexMatrix& stacked, int n, PExponent p,
                                            const OptimizerConfig& cfg) {
  if (n < 1 || stacked.rows() != static_cast<Index>(n) * stacked.cols()) {
    throw std::invalid_argument("full_algebra_witness_eta: expected an nd x d matrix");
  }
  const int d = static_cast<int>(stacked.cols());
  const NormEstimate est = op_norm_estimate(stacked, p, p, cfg);
  ComplexVector eta = *est.dual_witness;
  const RowModuleElement b = b_eta(eta, d, n);
  const double value = best_norm(b.matrix() * stacked, p, cfg);
  return {std::move(eta), value, est.value, est.converged};
}

FullAlgebraWitness full_algebra_witness_eta(const ColumnModuleElement& a, PExponent p, const OptimizerConfig& cfg) {
  const auto* blk = as_block(a.algebra());
  if (!blk || !blk->is_full()) throw std::invalid_argument("full_algebra_witness_eta requires the full algebra M_d");
  return full_algebra_witness_eta(a.matrix(), a.n(), p, cfg);
}

FullAlgebraWitness full_algebra_witness_zeta(const ComplexMatrix& side_by_side, int n, PExponent p,
                                             const OptimizerConfig& cfg) {
  if (n < 1 || side_by_side.cols() != static_cast<Index>(n) * side_by_side.rows()) {
    throw std::invalid_argument("full_algebra_witness_zeta: expected a d x nd matrix");
  }
  const int d = static_cast<int>(side_by_side.rows());
  const NormEstimate est = op_norm_estimate(side_by_side, p, p, cfg);
  ComplexVector zeta = est.primal_witness;
  const ColumnModuleElement a = a_zeta(zeta, d, n);
  const double value = best_norm(side_by_side * a.matrix(), p, cfg);
  return {std::move(zeta), value, est.value, est.converged};
}

FullAlgebraWitness full_algebra_witness_zeta(const RowModuleElement& b, PExponent p, const OptimizerConfig& cfg) {
  const auto* blk = as_block(b.algebra());
  if (!blk || !blk->is_full()) throw std::invalid_argument("full_algebra_witness_zeta requires the full algebra M_d");
  return full_algebra_witness_zeta(b.matrix(), b.n(), p, cfg);
}

RowModuleElement constructive_witness_b0(const ColumnModuleElement& a, PExponent p, const OptimizerConfig& cfg) {
  const auto* blk = as_block(a.algebra());
  if (!blk) throw std::invalid_argument("constructive_witness_b0 requires a block-diagonal algebra");
  const Composition& comp = blk->composition();
  const int n = a.n(), d = a.d();
  std::vector<DenseMatrix> blocks(n, DenseMatrix::Zero(d, d));
  for (int j = 0; j < comp.length(); ++j) {
    const int s = comp.part(j), o = comp.offset(j);
    const FullAlgebraWitness w = full_algebra_witness_eta(column_block(a, j), n, p, cfg);
    // eta_j = (eta_j1, ..., eta_jn); b_{eta_jl} has first row eta_jl^T.
    for (int l = 0; l < n; ++l) {
      blocks[l].block(o, o, 1, s) = w.vector.dense().segment(static_cast<Index>(l) * s, s).transpose();
    }
  }
  std::vector<ComplexMatrix> out;
  for (auto& m : blocks) out.emplace_back(std::move(m));
  return RowModuleElement::from_blocks(a.algebra(), std::move(out));
}

ColumnModuleElement constructive_witness_a0(const RowModuleElement& b, PExponent p, const OptimizerConfig& cfg) {
  const auto* blk = as_block(b.algebra());
  if (!blk) throw std::invalid_argument("constructive_witness_a0 requires a block-diagonal algebra");
  const Composition& comp = blk->composition();
  const int n = b.n(), d = b.d();
  std::vector<DenseMatrix> blocks(n, DenseMatrix::Zero(d, d));
  for (int j = 0; j < comp.length(); ++j) {
    const int s = comp.part(j), o = comp.offset(j);
    const FullAlgebraWitness w = full_algebra_witness_zeta(row_block(b, j), n, p, cfg);
    // a_{zeta_jl} has first column zeta_jl.
    for (int l = 0; l < n; ++l) {
      blocks[l].block(o, o, s, 1) = w.vector.dense().segment(static_cast<Index>(l) * s, s);
    }
  }
  std::vector<ComplexMatrix> out;
  for (auto& m : blocks) out.emplace_back(std::move(m));
  return ColumnModuleElement::from_blocks(b.algebra(), std::move(out));
}

PairingSup pairing_sup(const ColumnModuleElement& a, PExponent p, const OptimizerConfig& cfg) {
  const ParametrizedAlgebra alg = parametrize(a.algebra());
  const SearchSpace space = column_side_space(a, alg);
  std::optional<Eigen::VectorXd> start;
  if (as_block(a.algebra())) start = coordinates_of(constructive_witness_b0(a, p, cfg).blocks(), alg);
  return run_search(space, p, cfg, start);
}

PairingSup pairing_sup(const RowModuleElement& b, PExponent p, const OptimizerConfig& cfg) {
  const ParametrizedAlgebra alg = parametrize(b.algebra());
  const SearchSpace space = row_side_space(b, alg);
  std::optional<Eigen::VectorXd> start;
  if (as_block(b.algebra())) start = coordinates_of(constructive_witness_a0(b, p, cfg).blocks(), alg);
  return run_search(space, p, cfg, start);
}

std::string to_string(Side s) { return s == Side::column ? "column" : "row"; }

std::string to_string(Certification c) {
  switch (c) {
    case Certification::constructive: return "constructive";
    case Certification::heuristic: return "heuristic";
    case Certification::oracle_bracketed: return "oracle_bracketed";
  }
  return "unknown";
}

double default_gap_tolerance(PExponent p) { return exact_exponent(p) ? 1e-6 : 1e-3; }

namespace {

// Oracle bracket for the search witness: numerator and denominator of the
// witness ratio, plus the element norm, each bracketed by grid value and
// covering bound. Skipped (nullopt) when any grid exceeds the budget.
std::optional<OracleBracket> bracket(const ComplexMatrix& element, const ComplexMatrix& witness,
                                     const ComplexMatrix& product, double element_est, double num_est,
                                     double den_est, PExponent p, int resolution) {
  try {
    auto lo_hi = [&](const ComplexMatrix& m, double est) {
      const double grid = op_norm_oracle(m, p, p, resolution);
      return std::pair{std::max(est, grid), oracle_upper_bound(grid, m.cols(), p, resolution)};
    };
    const auto [elo, ehi] = lo_hi(element, element_est);
    const auto [nlo, nhi] = lo_hi(product, num_est);
    const auto [dlo, dhi] = lo_hi(witness, den_est);
    (void)nhi;
    (void)dlo;
    OracleBracket b;
    b.resolution = resolution;
    b.norm_lower = elo;
    b.norm_upper = std::max(elo, ehi);
    b.sup_lower = dhi > 0.0 && std::isfinite(dhi) ? nlo / dhi : 0.0;
    b.sup_upper = b.norm_upper;
    return b;
  } catch (const BudgetExceeded&) {
    return std::nullopt;
  }
}

template <class Element, class Witness>
GapReport finish_gap(const Element& x, Side side, PExponent p, const OptimizerConfig& cfg,
                     Witness (*constructive)(const Element&, PExponent, const OptimizerConfig&)) {
  GapReport rep;
  rep.side = side;
  rep.p = p;
  rep.exact_norms = exact_exponent(p);
  rep.tolerance = default_gap_tolerance(p);
  rep.element_norm = element_norm(x, p, cfg);
  const bool block = as_block(x.algebra()) != nullptr;
  if (block) rep.element_norm = std::max(rep.element_norm, stacked_norm(x, p, cfg));

  if (block) {
    const Witness w = constructive(x, p, cfg);
    const ComplexMatrix prod = side == Side::column ? ComplexMatrix(w.matrix() * x.matrix())
                                                    : ComplexMatrix(x.matrix() * w.matrix());
    const double value = best_norm(prod, p, cfg);
    if (rep.element_norm - value <= rep.tolerance) {
      rep.pairing_sup = value;
      rep.gap = rep.element_norm - value;
      rep.best_witness = w.matrix();
      rep.witness_norm = best_norm(w.matrix(), p, cfg);
      rep.certified = Certification::constructive;
      rep.cstar_like = true;
      return rep;
    }
  }

  const PairingSup sup = pairing_sup(x, p, cfg);
  rep.pairing_sup = sup.value;
  rep.best_witness = sup.witness;
  rep.witness_norm = sup.witness_norm;
  rep.evaluations = sup.evaluations;
  rep.restarts = sup.restarts;
  rep.certified = Certification::heuristic;
  if (cfg.oracle_resolution && !rep.exact_norms) {
    const ComplexMatrix prod = side == Side::column ? ComplexMatrix(sup.witness * x.matrix())
                                                    : ComplexMatrix(x.matrix() * sup.witness);
    rep.oracle = bracket(x.matrix(), sup.witness, prod, rep.element_norm, sup.value,
                         sup.witness_norm, p, *cfg.oracle_resolution);
    if (rep.oracle) {
      rep.certified = Certification::oracle_bracketed;
      rep.element_norm = rep.oracle->norm_lower;
    }
  }
  rep.gap = rep.element_norm - rep.pairing_sup;
  rep.cstar_like = rep.gap <= rep.tolerance;
  return rep;
}

}  // namespace

GapReport cstar_gap(const ColumnModuleElement& a, PExponent p, const OptimizerConfig& cfg) {
  return finish_gap<ColumnModuleElement, RowModuleElement>(a, Side::column, p, cfg, &constructive_witness_b0);
}

GapReport cstar_gap(const RowModuleElement& b, PExponent p, const OptimizerConfig& cfg) {
  return finish_gap<RowModuleElement, ColumnModuleElement>(b, Side::row, p, cfg, &constructive_witness_a0);
}

}  // namespace pnorm
