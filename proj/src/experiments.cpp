#include "pnorm/experiments.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace pnorm {

ParametrizedAlgebra upper_triangular_algebra() { return ParametrizedAlgebra(2, {ComplexMatrix::unit(2, 2, 0, 1)}); }

GapReport upper_triangular_example(PExponent p, int n, const std::optional<ColumnModuleElement>& element,
                                   const OptimizerConfig& cfg) {
  if (p.is_infinite()) throw std::invalid_argument("upper_triangular_example: p must be finite");
  if (n < 1) throw std::invalid_argument("upper_triangular_example: n must be >= 1");
  ColumnModuleElement a = element ? *element
                                  : ColumnModuleElement::from_blocks(
                                        upper_triangular_algebra(),
                                        std::vector<ComplexMatrix>(n, ComplexMatrix::unit(2, 2, 0, 1)));
  if (a.n() != n) throw std::invalid_argument("upper_triangular_example: element has the wrong n");
  return cstar_gap(a, p, cfg);
}

ComplexMatrix hadamard2() {
  const double s = 1.0 / std::numbers::sqrt2;
  return ComplexMatrix(2, 2, {s, s, s, -s});
}

ComplexMatrix sd_element(Complex l1, Complex l2) {
  // u diag(l1, l2) u^{-1} written out, so integer eigenvalues give exact entries.
  const Complex s = 0.5 * (l1 + l2), t = 0.5 * (l1 - l2);
  return ComplexMatrix(2, 2, {s, t, t, s});
}

ParametrizedAlgebra sd_algebra() { return ParametrizedAlgebra(2, {sd_element(1.0, 0.0), sd_element(0.0, 1.0)}); }

ColumnModuleElement sd_module_element() {
  return ColumnModuleElement::from_blocks(sd_algebra(), {sd_element(2.0, 1.0), sd_element(1.0, 2.0)});
}

OptimizerConfig sd_default_config() {
  OptimizerConfig cfg;
  cfg.restarts = 256;
  return cfg;
}

SdCounterexample sd_counterexample(const OptimizerConfig& cfg) {
  SdCounterexample out;
  out.expected_sup = std::sqrt(10.0);
  out.report = cstar_gap(sd_module_element(), PExponent(1.0), cfg);
  out.reproduced = std::abs(out.report.element_norm - out.expected_norm) <= 1e-12 &&
                   out.report.pairing_sup >= out.expected_sup - kSdTolerance;
  return out;
}

long double sd_reduced_objective(const std::array<long double, 4>& r, const std::array<long double, 4>& theta) {
  using C = std::complex<long double>;
  std::array<C, 4> w;
  for (int j = 0; j < 4; ++j) w[j] = std::polar(r[j], theta[j]);
  return std::abs(3.0L * w[0] + w[1] + 3.0L * w[2] - w[3]) + std::abs(w[0] + 3.0L * w[1] - w[2] + 3.0L * w[3]);
}

std::pair<long double, long double> maximize_periodic(const std::function<long double(long double)>& g, int grid,
                                                      long double bracket_width) {
  if (grid < 3) throw std::invalid_argument("maximize_periodic: grid must have at least 3 points");
  constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  const long double h = two_pi / grid;
  int best = 0;
  long double best_val = g(0.0L);
  for (int k = 1; k < grid; ++k) {
    const long double v = g(k * h);
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  // Golden section on the two grid cells around the best point.
  const long double inv_phi = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  long double lo = (best - 1) * h;
  long double hi = (best + 1) * h;
  long double x1 = hi - inv_phi * (hi - lo);
  long double x2 = lo + inv_phi * (hi - lo);
  long double f1 = g(x1);
  long double f2 = g(x2);
  while (hi - lo > bracket_width) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = g(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = g(x2);
    }
  }
  long double x = (lo + hi) / 2.0L;
  long double fx = g(x);
  if (best_val > fx) {
    x = best * h;
    fx = best_val;
  }
  x = std::fmod(x + two_pi, two_pi);
  return {x, fx};
}

ClaimOracle sd_claim_oracle() {
  ClaimOracle out;
  const std::array<std::array<int, 4>, 4> radii{{{0, 0, 0, 0}, {0, 0, 1, 0}, {1, 0, 1, 0}, {1, 0, 0, 1}}};
  long double top = 0.0L;
  for (int c = 0; c < 4; ++c) {
    ClaimCase& cc = out.cases[c];
    cc.radii = radii[c];
    std::array<long double, 4> r{};
    int active = 0;
    int free = -1;
    for (int j = 0; j < 4; ++j) {
      r[j] = radii[c][j];
      if (radii[c][j] != 0 && active++ > 0) free = j;
    }
    if (free < 0) {
      cc.value = sd_reduced_objective(r, {});
    } else {
      // Global phase removed: only the second active phase varies.
      cc.has_free_phase = true;
      const auto [arg, val] = maximize_periodic([&](long double t) {
        std::array<long double, 4> th{};
        th[free] = t;
        return sd_reduced_objective(r, th);
      });
      cc.argmax = arg;
      cc.value = val;
    }
    top = std::max(top, cc.value);
  }
  out.value = static_cast<double>(top / 2.0L);
  return out;
}

std::vector<PExponent> default_sweep_grid() {
  std::vector<PExponent> g;
  for (double p : {1.1, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 4.0, 6.0}) g.emplace_back(p);
  return g;
}

SweepResult sd_sweep(const std::vector<PExponent>& grid, const OptimizerConfig& cfg) {
  cfg.validate();
  SweepResult res;
  res.config = cfg;
  const ColumnModuleElement a = sd_module_element();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i].is_infinite()) throw std::invalid_argument("sd_sweep: grid exponents must be finite");
    OptimizerConfig point = cfg;
    point.seed = cfg.seed + i;
    const GapReport rep = cstar_gap(a, grid[i], point);
    res.p_grid.push_back(grid[i]);
    res.norms.push_back(rep.element_norm);
    res.sups.push_back(rep.pairing_sup);
    res.gaps.push_back(rep.gap);
    res.certified.push_back(rep.certified);
    res.seeds.push_back(point.seed);
  }
  return res;
}

void write_sweep_csv(std::ostream& out, const SweepResult& r) {
  out << "p,norm,sup,gap,certified,restarts,seed\n";
  char buf[256];
  for (std::size_t i = 0; i < r.p_grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%s,%d,%llu\n", r.p_grid[i].to_string().c_str(), r.norms[i],
                  r.sups[i], r.gaps[i], to_string(r.certified[i]).c_str(), r.config.restarts,
                  static_cast<unsigned long long>(r.seeds[i]));
    out << buf;
  }
}

}  // namespace pnorm
