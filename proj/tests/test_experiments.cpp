#include "pnorm/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace pnorm;

namespace {

bool close(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  return (a.dense() - b.dense()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("sd algebra") {
    const ComplexMatrix u = hadamard2();
    CHECK(close(u * u, ComplexMatrix::identity(2), 1e-15));
    CHECK(close(sd_element(2.0, 1.0), ComplexMatrix(2, 2, {1.5, 0.5, 0.5, 1.5}), 1e-15));
    CHECK(close(sd_element(1.0, 2.0), ComplexMatrix(2, 2, {1.5, -0.5, -0.5, 1.5}), 1e-15));
    CHECK(close(sd_element(1.0, 1.0), ComplexMatrix::identity(2), 1e-15));
    const auto a = sd_module_element();
    CHECK(a.n() == 2);
    CHECK(a.matrix().rows() == 4);
    CHECK(op_norm_exact(a.matrix(), PExponent(1.0), PExponent(1.0)).value == 4.0);
  }

  TEST_CASE("reduced objective") {
    // Twice the pairing norm at lambda = (1, 0, 0, 0): 2 * ||[[1,1],[1,1]]||_1 = 4.
    CHECK(sd_reduced_objective({1, 0, 0, 0}, {}) == doctest::Approx(4.0));
    CHECK(sd_reduced_objective({0, 0, 0, 0}, {}) == 0.0L);
    CHECK(sd_reduced_objective({0, 0, 1, 0}, {}) == doctest::Approx(4.0));
    // Case (1,0,1,0) in closed form: sqrt(18 + 18 cos t) + sqrt(2 - 2 cos t).
    for (double t : {0.0, 0.3, 1.0, 2.0, 3.0}) {
      const double closed = std::sqrt(18 + 18 * std::cos(t)) + std::sqrt(2 - 2 * std::cos(t));
      CHECK(static_cast<double>(sd_reduced_objective({1, 0, 1, 0}, {0, 0, t, 0})) ==
            doctest::Approx(closed).epsilon(1e-14));
    }
    // A global phase does not change the objective.
    CHECK(static_cast<double>(sd_reduced_objective({1, 0.5L, 1, 0.25L}, {0.4L, 1.1L, 2.0L, -0.3L})) ==
          doctest::Approx(static_cast<double>(
                              sd_reduced_objective({1, 0.5L, 1, 0.25L}, {0.0L, 0.7L, 1.6L, -0.7L})))
              .epsilon(1e-15));
  }

  TEST_CASE("periodic maximizer") {
    const auto [x, v] = maximize_periodic([](long double t) { return std::cos(t - 1.0L); });
    CHECK(static_cast<double>(x) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(static_cast<double>(v) == doctest::Approx(1.0).epsilon(1e-15));
    const auto [x0, v0] = maximize_periodic([](long double t) { return -std::abs(std::sin(t / 2)); }, 64);
    CHECK(std::abs(static_cast<double>(x0)) < 1e-9);
    CHECK(static_cast<double>(v0) == 0.0);
    CHECK_THROWS_AS(maximize_periodic([](long double) { return 0.0L; }, 2), std::invalid_argument);
  }

  TEST_CASE("claim oracle") {
    const ClaimOracle o = sd_claim_oracle();
    CHECK(o.cases[0].value == 0.0L);
    CHECK(static_cast<double>(o.cases[1].value) == doctest::Approx(4.0).epsilon(1e-15));
    const double two_root_ten = 2.0 * std::sqrt(10.0);
    CHECK(std::abs(static_cast<double>(o.cases[2].value) - two_root_ten) < 1e-12);
    CHECK(std::abs(static_cast<double>(o.cases[3].value) - two_root_ten) < 1e-12);
    CHECK(o.cases[2].has_free_phase);
    CHECK_FALSE(o.cases[1].has_free_phase);
    CHECK(std::abs(std::cos(static_cast<double>(o.cases[2].argmax)) - 0.8) < 1e-8);
    CHECK(std::abs(static_cast<double>(o.cases[3].argmax) - std::numbers::pi / 2) < 1e-8);
    CHECK(std::abs(o.value - std::sqrt(10.0)) < 1e-10);
  }

  TEST_CASE("sd counterexample") {
    const SdCounterexample sd = sd_counterexample();
    CHECK(sd.reproduced);
    CHECK(sd.report.element_norm == 4.0);
    CHECK(std::abs(sd.report.pairing_sup - std::sqrt(10.0)) <= kSdTolerance);
    CHECK(std::abs(sd.report.gap - (4.0 - std::sqrt(10.0))) <= 2e-4);
    CHECK(sd.report.pairing_sup <= sd.report.element_norm + 1e-6);
    CHECK(sd.report.witness_norm <= 1.0 + 1e-9);
    CHECK_FALSE(sd.report.cstar_like);
    CHECK(sd.report.certified == Certification::heuristic);
    // The witness reproduces the reported value.
    const double achieved = op_norm_exact(ComplexMatrix(sd.report.best_witness * sd_module_element().matrix()),
                                          PExponent(1.0), PExponent(1.0))
                                .value;
    CHECK(achieved / sd.report.witness_norm == doctest::Approx(sd.report.pairing_sup).epsilon(1e-9));
    // And it cannot beat the claim value.
    CHECK(sd.report.pairing_sup <= std::sqrt(10.0) + 1e-9);
  }

  TEST_CASE("upper triangular") {
    for (double pv : {1.0, 1.5, 2.0, 3.0}) {
      for (int n : {1, 2}) {
        const GapReport r = upper_triangular_example(PExponent(pv), n);
        CHECK(r.pairing_sup == 0.0);
        CHECK(std::abs(r.gap - r.element_norm) <= 1e-12);
        CHECK(r.element_norm == doctest::Approx(std::pow(n, 1.0 / pv)).epsilon(1e-9));
      }
    }
    const GapReport one = upper_triangular_example(PExponent(1.0), 1);
    CHECK(one.element_norm == 1.0);
    CHECK(one.gap == 1.0);
    const auto zero = ColumnModuleElement::from_matrix(upper_triangular_algebra(), ComplexMatrix::zeros(4, 2));
    CHECK(upper_triangular_example(PExponent(1.5), 2, zero).gap == 0.0);
    CHECK_THROWS_AS(upper_triangular_example(PExponent(1.5), 1, zero), std::invalid_argument);
    CHECK_THROWS_AS(upper_triangular_example(PExponent(1.5), 0), std::invalid_argument);
    CHECK_THROWS_AS(upper_triangular_example(PExponent::infinity(), 1), std::invalid_argument);
  }

  TEST_CASE("sweep") {
    CHECK(default_sweep_grid().size() == 9);
    const SweepResult r = sd_sweep({PExponent(1.0), PExponent(2.0)});
    REQUIRE(r.gaps.size() == 2);
    CHECK(std::abs(r.gaps[0] - (4.0 - std::sqrt(10.0))) <= 1e-4);
    CHECK(r.gaps[1] <= 1e-4);
    CHECK(r.gaps[1] >= -1e-6);
    CHECK(r.seeds[1] == r.config.seed + 1);

    std::ostringstream csv;
    write_sweep_csv(csv, r);
    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "p,norm,sup,gap,certified,restarts,seed");
    std::getline(lines, line);
    CHECK(line.rfind("1,4,", 0) == 0);
    int rows = 1;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == 2);

    // Same seed, same bytes.
    std::ostringstream again;
    write_sweep_csv(again, sd_sweep({PExponent(1.0), PExponent(2.0)}));
    CHECK(again.str() == csv.str());
    CHECK_THROWS_AS(sd_sweep({PExponent::infinity()}), std::invalid_argument);
  }
}
