#include "pnorm/experiments.hpp"
#include "pnorm/json_io.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

namespace py = pybind11;
using namespace pnorm;

namespace {

PExponent exponent(double p) { return std::isinf(p) && p > 0 ? PExponent::infinity() : PExponent(p); }

double as_float(PExponent p) { return p.is_infinite() ? INFINITY : p.value(); }

OptimizerConfig config(int restarts, int max_iters, double tol, std::uint64_t seed, std::optional<int> oracle) {
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.max_iters = max_iters;
  cfg.tol = tol;
  cfg.seed = seed;
  cfg.oracle_resolution = oracle;
  cfg.validate();
  return cfg;
}

py::dict estimate_dict(const NormEstimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["method"] = to_string(e.method);
  d["iterations"] = e.iterations;
  d["converged"] = e.converged;
  d["primal_witness"] = DenseVector(e.primal_witness.dense());
  d["dual_witness"] = e.dual_witness ? py::cast(DenseVector(e.dual_witness->dense())) : py::none();
  return d;
}

py::dict gap_dict(const GapReport& r) {
  py::dict d;
  d["side"] = to_string(r.side);
  d["p"] = as_float(r.p);
  d["element_norm"] = r.element_norm;
  d["pairing_sup"] = r.pairing_sup;
  d["gap"] = r.gap;
  d["tolerance"] = r.tolerance;
  d["cstar_like"] = r.cstar_like;
  d["certified"] = to_string(r.certified);
  d["exact_norms"] = r.exact_norms;
  d["witness_norm"] = r.witness_norm;
  d["best_witness"] = DenseMatrix(r.best_witness.dense());
  d["evaluations"] = r.evaluations;
  d["restarts"] = r.restarts;
  if (r.oracle) {
    py::dict o;
    o["resolution"] = r.oracle->resolution;
    o["norm_lower"] = r.oracle->norm_lower;
    o["norm_upper"] = r.oracle->norm_upper;
    o["sup_lower"] = r.oracle->sup_lower;
    o["sup_upper"] = r.oracle->sup_upper;
    d["oracle"] = o;
  } else {
    d["oracle"] = py::none();
  }
  return d;
}

Algebra algebra_arg(Index d, const std::optional<std::vector<int>>& composition,
                    const std::optional<std::vector<DenseMatrix>>& basis) {
  if (composition && basis) throw std::invalid_argument("give either composition or basis, not both");
  if (basis) {
    std::vector<ComplexMatrix> mats;
    for (const auto& m : *basis) mats.emplace_back(m);
    return ParametrizedAlgebra(static_cast<int>(d), std::move(mats));
  }
  if (composition) return BlockDiagAlgebra(Composition(*composition));
  return BlockDiagAlgebra(Composition::full(static_cast<int>(d)));
}

#define PNORM_CFG_ARGS                                                                                 \
  py::arg("restarts") = 64, py::arg("max_iters") = 500, py::arg("tol") = 1e-12, py::arg("seed") = 0, \
      py::arg("oracle_resolution") = py::none()

}  // namespace

PYBIND11_MODULE(_pnorm, m) {
  m.doc() = "Matrix p-operator norms and C*-likeness gaps of matrix modules.";
  m.attr("__version__") = library_version();
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  m.def(
      "vector_p_norm", [](const DenseVector& x, double p) { return vector_p_norm(ComplexVector(x), exponent(p)); },
      py::arg("x"), py::arg("p"));
  m.def(
      "holder_pairing",
      [](const DenseVector& eta, const DenseVector& xi) { return holder_pairing(ComplexVector(eta), ComplexVector(xi)); },
      py::arg("eta"), py::arg("xi"), "Bilinear pairing sum eta_i xi_i.");
  m.def(
      "duality_map",
      [](const DenseVector& y, double q) { return DenseVector(duality_map(ComplexVector(y), exponent(q)).dense()); },
      py::arg("y"), py::arg("q"));

  m.def(
      "op_norm",
      [](const DenseMatrix& a, double p, std::optional<double> q, const std::string& method, int restarts,
         int max_iters, double tol, std::uint64_t seed, std::optional<int> oracle) {
        const ComplexMatrix mat(a);
        const PExponent pe = exponent(p), qe = q ? exponent(*q) : pe;
        if (method == "exact") return estimate_dict(op_norm_exact(mat, pe, qe));
        if (method != "auto" && method != "estimate")
          throw std::invalid_argument("method must be 'auto', 'exact' or 'estimate'");
        const OptimizerConfig cfg = config(restarts, max_iters, tol, seed, oracle);
        return estimate_dict(op_norm_estimate(mat, pe, qe, cfg));
      },
      py::arg("a"), py::arg("p"), py::arg("q") = py::none(), py::arg("method") = "auto", PNORM_CFG_ARGS,
      "p->q operator norm; 'auto' uses closed forms where they exist.");
  m.def(
      "op_norm_oracle",
      [](const DenseMatrix& a, double p, std::optional<double> q, int resolution) {
        const PExponent pe = exponent(p);
        return op_norm_oracle(ComplexMatrix(a), pe, q ? exponent(*q) : pe, resolution);
      },
      py::arg("a"), py::arg("p"), py::arg("q") = py::none(), py::arg("resolution") = 16);
  m.def(
      "oracle_upper_bound",
      [](double value, Index dim, double p, int resolution) {
        return oracle_upper_bound(value, dim, exponent(p), resolution);
      },
      py::arg("value"), py::arg("dim"), py::arg("p"), py::arg("resolution"));
  m.def(
      "transpose_duality_residual",
      [](const DenseMatrix& a, double p, double q, int restarts, int max_iters, double tol, std::uint64_t seed,
         std::optional<int> oracle) {
        return transpose_duality_residual(ComplexMatrix(a), exponent(p), exponent(q),
                                          config(restarts, max_iters, tol, seed, oracle));
      },
      py::arg("a"), py::arg("p"), py::arg("q"), PNORM_CFG_ARGS);

  m.def(
      "cstar_gap",
      [](const DenseMatrix& x, double p, const std::string& side, std::optional<std::vector<int>> composition,
         std::optional<std::vector<DenseMatrix>> basis, int restarts, int max_iters, double tol, std::uint64_t seed,
         std::optional<int> oracle) {
        const OptimizerConfig cfg = config(restarts, max_iters, tol, seed, oracle);
        const ComplexMatrix mat(x);
        if (side == "column") {
          const Algebra alg = algebra_arg(mat.cols(), composition, basis);
          return gap_dict(cstar_gap(ColumnModuleElement::from_matrix(alg, mat), exponent(p), cfg));
        }
        if (side == "row") {
          const Algebra alg = algebra_arg(mat.rows(), composition, basis);
          return gap_dict(cstar_gap(RowModuleElement::from_matrix(alg, mat), exponent(p), cfg));
        }
        throw std::invalid_argument("side must be 'column' or 'row'");
      },
      py::arg("x"), py::arg("p"), py::arg("side") = "column", py::arg("composition") = py::none(),
      py::arg("basis") = py::none(), PNORM_CFG_ARGS,
      "Element norm minus the pairing supremum. The algebra is block diagonal (composition, default M_d) "
      "or the span of basis.");

  m.def("sd_module_element", [] { return DenseMatrix(sd_module_element().matrix().dense()); });
  m.def(
      "sd_counterexample",
      [](int restarts, int max_iters, double tol, std::uint64_t seed, std::optional<int> oracle) {
        const SdCounterexample sd = sd_counterexample(config(restarts, max_iters, tol, seed, oracle));
        py::dict d;
        d["report"] = gap_dict(sd.report);
        d["expected_norm"] = sd.expected_norm;
        d["expected_sup"] = sd.expected_sup;
        d["reproduced"] = sd.reproduced;
        return d;
      },
      py::arg("restarts") = 256, py::arg("max_iters") = 500, py::arg("tol") = 1e-12, py::arg("seed") = 0,
      py::arg("oracle_resolution") = py::none());
  m.def("sd_claim_oracle", [] {
    const ClaimOracle c = sd_claim_oracle();
    py::list cases;
    for (const auto& k : c.cases) {
      py::dict d;
      d["radii"] = k.radii;
      d["value"] = static_cast<double>(k.value);
      d["argmax"] = k.has_free_phase ? py::cast(static_cast<double>(k.argmax)) : py::none();
      cases.append(d);
    }
    py::dict out;
    out["cases"] = cases;
    out["value"] = c.value;
    return out;
  });
  m.def(
      "sd_sweep",
      [](std::optional<std::vector<double>> grid, int restarts, int max_iters, double tol, std::uint64_t seed) {
        std::vector<PExponent> g;
        if (grid) {
          for (double p : *grid) g.push_back(exponent(p));
        } else {
          g = default_sweep_grid();
        }
        const SweepResult r = sd_sweep(g, config(restarts, max_iters, tol, seed, std::nullopt));
        py::list rows;
        for (std::size_t i = 0; i < r.p_grid.size(); ++i) {
          py::dict d;
          d["p"] = as_float(r.p_grid[i]);
          d["norm"] = r.norms[i];
          d["sup"] = r.sups[i];
          d["gap"] = r.gaps[i];
          d["certified"] = to_string(r.certified[i]);
          d["seed"] = r.seeds[i];
          rows.append(d);
        }
        return rows;
      },
      py::arg("grid") = py::none(), py::arg("restarts") = 256, py::arg("max_iters") = 500, py::arg("tol") = 1e-12,
      py::arg("seed") = 0);
  m.def(
      "upper_triangular_example",
      [](double p, int n) { return gap_dict(upper_triangular_example(exponent(p), n)); }, py::arg("p"),
      py::arg("n") = 1);
}
