#pragma once

#include "pnorm/experiments.hpp"

#include <json.hpp>

#include <map>
#include <stdexcept>
#include <string>

namespace pnorm {

using Json = nlohmann::ordered_json;

/// Malformed or non-finite JSON input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"rows": r, "cols": c, "entries": [[re, im], ...]}, row-major.
Json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);
// {"dim": d, "entries": [[re, im], ...]}.
Json to_json(const ComplexVector& v);
ComplexVector vector_from_json(const Json& j);

// {"kind": "block", "parts": [...]} or {"kind": "basis", "dim": d, "basis": [matrix, ...]}.
Json to_json(const Algebra& alg);
Algebra algebra_from_json(const Json& j);

Json to_json(const NormEstimate& e);
Json to_json(const GapReport& r);
Json to_json(const OptimizerConfig& cfg);
Json to_json(const SweepResult& r);

/// Numbers as JSON: non-finite values become strings ("inf", "nan").
Json number(double x);

Json read_json_file(const std::string& path);

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> args;
  std::uint64_t seed = 0;
  std::string version;
  double duration_seconds = 0.0;
};

Json to_json(const RunManifest& m);

std::string library_version();

}  // namespace pnorm
