// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "pnorm/experiments.hpp"
#include "pnorm/random.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace pnorm;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... xs) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, xs...);
  return buf;
}

double norm_pp(const ComplexMatrix& m, PExponent p) { return op_norm_estimate(m, p, p).value; }

ComplexMatrix random_block_element(const Composition& c, Rng& rng) {
  std::vector<ComplexMatrix> blocks;
  for (int part : c.parts()) blocks.push_back(random_matrix(part, part, rng));
  return block_diag(blocks);
}

std::vector<ComplexMatrix> random_blocks(const Composition& c, int n, Rng& rng) {
  std::vector<ComplexMatrix> out;
  for (int l = 0; l < n; ++l) out.push_back(random_block_element(c, rng));
  return out;
}

bool exact_p(PExponent p) { return p.is_one() || p.is_two(); }

const std::vector<PExponent> kExponents = {PExponent(1.0), PExponent(1.5), PExponent(2.0), PExponent(3.0)};

Outcome sd_reproduction() {
  const SdCounterexample sd = sd_counterexample();
  const double root10 = std::sqrt(10.0);
  Outcome o;
  o.pass = sd.report.element_norm == 4.0 && std::abs(sd.report.pairing_sup - root10) <= 1e-4 &&
           std::abs(sd.report.gap - (4.0 - root10)) <= 2e-4;
  o.detail = fmt("norm=%.12g sup=%.10f gap=%.10f", sd.report.element_norm, sd.report.pairing_sup, sd.report.gap);
  return o;
}

Outcome claim_oracle() {
  const ClaimOracle c = sd_claim_oracle();
  const long double two_root10 = 2.0L * std::sqrt(10.0L);
  const double v[4] = {static_cast<double>(c.cases[0].value), static_cast<double>(c.cases[1].value),
                       static_cast<double>(c.cases[2].value), static_cast<double>(c.cases[3].value)};
  const double cos3 = std::cos(static_cast<double>(c.cases[2].argmax));
  const double theta4 = static_cast<double>(c.cases[3].argmax);
  Outcome o;
  o.pass = v[0] == 0.0 && std::abs(v[1] - 4.0) <= 1e-12 && std::abs(c.cases[2].value - two_root10) <= 1e-10L &&
           std::abs(c.cases[3].value - two_root10) <= 1e-10L && std::abs(cos3 - 0.8) <= 1e-8 &&
           std::abs(theta4 - std::numbers::pi / 2) <= 1e-8 && std::abs(c.value - std::sqrt(10.0)) <= 1e-10;
  o.detail = fmt("cases={%.12g, %.12g, %.12g, %.12g} cos(theta3)=%.12f theta4=%.12f value=%.15f", v[0], v[1], v[2],
                 v[3], cos3, theta4, c.value);
  return o;
}

Outcome main_t2() {
  const std::vector<Composition> comps = {Composition::full(3), Composition::diagonal(3), Composition({1, 2, 1})};
  Rng rng = make_rng(2024, 3);
  double worst_witness = 0.0, worst_exact = -1e300, worst_est = -1e300;
  int instances = 0;
  for (const auto& c : comps) {
    const Algebra alg = BlockDiagAlgebra(c);
    for (int n : {1, 2, 3}) {
      for (PExponent p : kExponents) {
        for (int t = 0; t < 25; ++t, ++instances) {
          const auto a = ColumnModuleElement::from_blocks(alg, random_blocks(c, n, rng));
          const auto b0 = constructive_witness_b0(a, p);
          const double gap_a = norm_pp(a.matrix(), p) - norm_pp(pairing(b0, a), p);
          const auto b = RowModuleElement::from_blocks(alg, random_blocks(c, n, rng));
          const auto a0 = constructive_witness_a0(b, p);
          const double gap_b = norm_pp(b.matrix(), p) - norm_pp(pairing(b, a0), p);
          worst_witness = std::max({worst_witness, norm_pp(b0.matrix(), p), norm_pp(a0.matrix(), p)});
          double& worst = exact_p(p) ? worst_exact : worst_est;
          worst = std::max({worst, gap_a, gap_b});
        }
      }
    }
  }
  Outcome o;
  o.pass = worst_witness <= 1.0 + 1e-9 && worst_exact <= 1e-6 && worst_est <= 1e-3;
  o.detail = fmt("instances=%d max witness norm=%.15f max gap exact=%.3e estimated=%.3e", instances, worst_witness,
                 worst_exact, worst_est);
  return o;
}

Outcome key_block_norms() {
  const std::vector<Composition> comps = {Composition({1, 2, 1}), Composition({2, 1}), Composition::diagonal(3),
                                          Composition({2, 2}), Composition::full(3)};
  Rng rng = make_rng(2024, 4);
  double worst_exact = 0.0, worst_est = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Composition& c = comps[t % comps.size()];
    const Algebra alg = BlockDiagAlgebra(c);
    const int n = 1 + t % 3;
    const auto a = ColumnModuleElement::from_blocks(alg, random_blocks(c, n, rng));
    const auto b = RowModuleElement::from_blocks(alg, random_blocks(c, n, rng));
    for (PExponent p : kExponents) {
      double slices_a = 0.0, slices_b = 0.0;
      for (int j = 0; j < c.length(); ++j) {
        slices_a = std::max(slices_a, norm_pp(column_slice(a, j), p));
        slices_b = std::max(slices_b, norm_pp(row_slice(b, j), p));
      }
      const double r = std::max(std::abs(norm_pp(a.matrix(), p) - slices_a), std::abs(norm_pp(b.matrix(), p) - slices_b));
      double& worst = exact_p(p) ? worst_exact : worst_est;
      worst = std::max(worst, r);
    }
  }
  Outcome o;
  o.pass = worst_exact <= 1e-6 && worst_est <= 1e-3;
  o.detail = fmt("instances=50 max residual exact=%.3e estimated=%.3e", worst_exact, worst_est);
  return o;
}

Outcome transpose_duality() {
  const std::vector<PExponent> ps = {PExponent(1.0), PExponent(1.5), PExponent(2.0), PExponent(2.5),
                                     PExponent::infinity()};
  Rng rng = make_rng(2024, 5);
  double worst_exact = 0.0, worst_est = 0.0;
  int exact_pairs = 0, est_pairs = 0;
  for (int t = 0; t < 100; ++t) {
    const Index rows = 1 + static_cast<Index>(rng() % 5), cols = 1 + static_cast<Index>(rng() % 5);
    const ComplexMatrix a = random_matrix(rows, cols, rng);
    for (PExponent p : ps) {
      for (PExponent q : ps) {
        const double r = transpose_duality_residual(a, p, q);
        if (has_exact_formula(p, q) && has_exact_formula(q.conjugate(), p.conjugate())) {
          worst_exact = std::max(worst_exact, r);
          ++exact_pairs;
        } else {
          worst_est = std::max(worst_est, r);
          ++est_pairs;
        }
      }
    }
  }
  Outcome o;
  o.pass = worst_exact <= 1e-6 && worst_est <= 2e-3;
  o.detail = fmt("matrices=100 exact pairs=%d max=%.3e estimated pairs=%d max=%.3e", exact_pairs, worst_exact,
                 est_pairs, worst_est);
  return o;
}

Outcome estimator_vs_oracle() {
  constexpr int kResolution = 64;
  const std::vector<PExponent> ps = {PExponent(1.5), PExponent(3.0)};
  double worst_below = -INFINITY, worst_above = -INFINITY;
  std::vector<double> worst_diff(ps.size(), 0.0);
  for (int t = 0; t < 20; ++t) {
    Rng rng = make_rng(42, t);
    const ComplexMatrix a = random_matrix(3, 3, rng);
    for (std::size_t k = 0; k < ps.size(); ++k) {
      const double est = op_norm_estimate(a, ps[k], ps[k]).value;
      const double orc = op_norm_oracle(a, ps[k], ps[k], kResolution);
      const double upper = oracle_upper_bound(orc, 3, ps[k], kResolution);
      worst_below = std::max(worst_below, orc - est);
      worst_above = std::max(worst_above, est - upper);
      worst_diff[k] = std::max(worst_diff[k], std::abs(est - orc));
    }
  }
  Outcome o;
  o.pass = worst_below <= 1e-9 && worst_above <= 0.0 && worst_diff[0] <= 1e-3 && worst_diff[1] <= 1e-3;
  o.detail = fmt("max(oracle-est)=%.3e max(est-upper)=%.3e max|est-oracle| p=1.5:%.3e p=3:%.3e (limit 1e-3)",
                 worst_below, worst_above, worst_diff[0], worst_diff[1]);
  return o;
}

Outcome upper_triangular() {
  Outcome o;
  double worst = 0.0, worst_pairing = 0.0;
  Rng rng = make_rng(2024, 7);
  const ParametrizedAlgebra t2 = upper_triangular_algebra();
  for (PExponent p : kExponents) {
    for (int n : {1, 2}) {
      const GapReport r = upper_triangular_example(p, n);
      worst = std::max({worst, std::abs(r.gap - r.element_norm), std::abs(r.pairing_sup)});
      // Random elements of both modules multiply to exactly zero.
      for (int t = 0; t < 10; ++t) {
        std::vector<ComplexMatrix> xa, xb;
        for (int l = 0; l < n; ++l) {
          const DenseVector z = random_complex_gaussian(2, rng);
          xa.push_back(t2.element({z(0)}));
          xb.push_back(t2.element({z(1)}));
        }
        const ComplexMatrix prod = pairing(RowModuleElement::from_blocks(t2, xb), ColumnModuleElement::from_blocks(t2, xa));
        worst_pairing = std::max(worst_pairing, prod.dense().cwiseAbs().maxCoeff());
        const auto a = ColumnModuleElement::from_blocks(t2, xa);
        const GapReport g = upper_triangular_example(p, n, a);
        worst = std::max({worst, std::abs(g.gap - g.element_norm), std::abs(g.pairing_sup)});
      }
    }
  }
  o.pass = worst <= 1e-12 && worst_pairing == 0.0;
  o.detail = fmt("max|gap-norm|,|sup|=%.3e max|pairing entry|=%.3e", worst, worst_pairing);
  return o;
}

Outcome sweep() {
  const SweepResult r = sd_sweep(default_sweep_grid());
  const std::filesystem::path csv = std::filesystem::current_path() / "acceptance_sweep.csv";
  {
    std::ofstream out(csv);
    write_sweep_csv(out, r);
  }
  Outcome o;
  o.pass = std::filesystem::file_size(csv) > 0;
  std::string rows;
  bool saw_two = false;
  for (std::size_t i = 0; i < r.p_grid.size(); ++i) {
    rows += fmt(" p=%s:%.4g", r.p_grid[i].to_string().c_str(), r.gaps[i]);
    if (r.p_grid[i].is_two()) {
      saw_two = true;
      o.pass = o.pass && r.gaps[i] <= 1e-4;
    }
  }
  o.pass = o.pass && saw_two;
  o.detail = "csv=" + csv.string() + " gaps:" + rows;
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "sd-reproduction", 30, sd_reproduction},
      {2, "claim-oracle", 1, claim_oracle},
      {3, "constructive-witnesses", 120, main_t2},
      {4, "block-norms", 60, key_block_norms},
      {5, "transpose-duality", 120, transpose_duality},
      {6, "estimator-vs-oracle", 300, estimator_vs_oracle},
      {7, "upper-triangular", 1e300, upper_triangular},
      {8, "sweep", 600, sweep},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.time_limit;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s [%d] %s: %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                in_time ? "" : ", over time limit");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
