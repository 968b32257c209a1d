#include "pnorm/json_io.hpp"

#include <cmath>
#include <fstream>

#ifndef PNORM_VERSION
#define PNORM_VERSION "0.0.0"
#endif

namespace pnorm {

namespace {

Json complex_entry(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex parse_entry(const Json& e) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    throw InputError("entry must be a [re, im] pair of numbers");
  const double re = e[0].get<double>();
  const double im = e[1].get<double>();
  if (!std::isfinite(re) || !std::isfinite(im)) throw InputError("entry is not finite");
  return {re, im};
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int positive_int(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > (1 << 20))
    throw InputError(std::string("field \"") + key + "\" must be a positive integer");
  return v.get<int>();
}

Json exponent(PExponent p) { return p.is_infinite() ? Json("inf") : Json(p.value()); }

}  // namespace

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json to_json(const ComplexMatrix& m) {
  Json entries = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) entries.push_back(complex_entry(m(i, j)));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  const int rows = positive_int(j, "rows");
  const int cols = positive_int(j, "cols");
  const Json& entries = field(j, "entries");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(rows) * cols)
    throw InputError("\"entries\" must hold rows * cols pairs");
  DenseMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = parse_entry(entries[static_cast<std::size_t>(r) * cols + c]);
  return ComplexMatrix(std::move(m));
}

Json to_json(const ComplexVector& v) {
  Json entries = Json::array();
  for (Index i = 0; i < v.dim(); ++i) entries.push_back(complex_entry(v[i]));
  return {{"dim", v.dim()}, {"entries", entries}};
}

ComplexVector vector_from_json(const Json& j) {
  const int dim = positive_int(j, "dim");
  const Json& entries = field(j, "entries");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(dim))
    throw InputError("\"entries\" must hold dim pairs");
  DenseVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = parse_entry(entries[i]);
  return ComplexVector(std::move(v));
}

Json to_json(const Algebra& alg) {
  if (const auto* b = as_block(alg)) return {{"kind", "block"}, {"parts", b->composition().parts()}};
  const auto& pa = std::get<ParametrizedAlgebra>(alg);
  Json basis = Json::array();
  for (const auto& m : pa.basis()) basis.push_back(to_json(m));
  return {{"kind", "basis"}, {"dim", pa.dim()}, {"basis", basis}};
}

Algebra algebra_from_json(const Json& j) {
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) throw InputError("\"kind\" must be a string");
  try {
    if (kind == "block") {
      const Json& parts = field(j, "parts");
      if (!parts.is_array()) throw InputError("\"parts\" must be an array");
      std::vector<int> v;
      for (const auto& x : parts) {
        if (!x.is_number_integer()) throw InputError("\"parts\" must hold integers");
        v.push_back(x.get<int>());
      }
      return BlockDiagAlgebra(Composition(std::move(v)));
    }
    if (kind == "basis") {
      const int dim = positive_int(j, "dim");
      const Json& basis = field(j, "basis");
      if (!basis.is_array() || basis.empty()) throw InputError("\"basis\" must be a non-empty array");
      std::vector<ComplexMatrix> mats;
      for (const auto& m : basis) mats.push_back(matrix_from_json(m));
      return ParametrizedAlgebra(dim, std::move(mats));
    }
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  throw InputError("unknown algebra kind " + kind.dump());
}

Json to_json(const NormEstimate& e) {
  Json j = {{"value", number(e.value)},
            {"method", to_string(e.method)},
            {"iterations", e.iterations},
            {"converged", e.converged},
            {"primal_witness", to_json(e.primal_witness)}};
  j["dual_witness"] = e.dual_witness ? to_json(*e.dual_witness) : Json(nullptr);
  return j;
}

Json to_json(const GapReport& r) {
  Json j = {{"side", to_string(r.side)},
            {"p", exponent(r.p)},
            {"element_norm", number(r.element_norm)},
            {"pairing_sup", number(r.pairing_sup)},
            {"gap", number(r.gap)},
            {"tolerance", r.tolerance},
            {"cstar_like", r.cstar_like},
            {"certified", to_string(r.certified)},
            {"exact_norms", r.exact_norms},
            {"witness_norm", number(r.witness_norm)},
            {"best_witness", to_json(r.best_witness)},
            {"evaluations", r.evaluations},
            {"restarts", r.restarts}};
  if (r.oracle) {
    j["oracle"] = {{"resolution", r.oracle->resolution},
                   {"norm_lower", number(r.oracle->norm_lower)},
                   {"norm_upper", number(r.oracle->norm_upper)},
                   {"sup_lower", number(r.oracle->sup_lower)},
                   {"sup_upper", number(r.oracle->sup_upper)}};
  } else {
    j["oracle"] = nullptr;
  }
  return j;
}

Json to_json(const OptimizerConfig& cfg) {
  Json j = {{"restarts", cfg.restarts}, {"max_iters", cfg.max_iters}, {"tol", cfg.tol}, {"seed", cfg.seed}};
  j["oracle_resolution"] = cfg.oracle_resolution ? Json(*cfg.oracle_resolution) : Json(nullptr);
  return j;
}

Json to_json(const SweepResult& r) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.p_grid.size(); ++i) {
    rows.push_back({{"p", exponent(r.p_grid[i])},
                    {"norm", number(r.norms[i])},
                    {"sup", number(r.sups[i])},
                    {"gap", number(r.gaps[i])},
                    {"certified", to_string(r.certified[i])},
                    {"seed", r.seeds[i]}});
  }
  return {{"config", to_json(r.config)}, {"rows", rows}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

Json to_json(const RunManifest& m) {
  Json args = Json::object();
  for (const auto& [k, v] : m.args) args[k] = v;
  return {{"command", m.command},
          {"args", args},
          {"seed", m.seed},
          {"version", m.version},
          {"duration_seconds", m.duration_seconds}};
}

std::string library_version() { return PNORM_VERSION; }

}  // namespace pnorm
