#include "cli.hpp"

#include "pnorm/json_io.hpp"
#include "pnorm/random.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace pnorm::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PExponent exponent_arg(const std::string& text, const char* what) {
  try {
    return PExponent::parse(text);
  } catch (const std::logic_error& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
}

std::vector<PExponent> exponent_list(const std::string& text) {
  std::vector<PExponent> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(exponent_arg(item, "--grid"));
  if (out.empty()) throw UsageError("--grid: empty list");
  return out;
}

struct ConfigFlags {
  int restarts = 64;
  int max_iters = 500;
  double tol = 1e-12;
  std::uint64_t seed = 0;
  int oracle_resolution = 0;

  void attach(CLI::App* app, bool with_oracle) {
    app->add_option("--restarts", restarts, "random restarts")->capture_default_str();
    app->add_option("--max-iters", max_iters, "iteration cap per restart")->capture_default_str();
    app->add_option("--tol", tol, "relative convergence tolerance")->capture_default_str();
    app->add_option("--seed", seed, "base seed")->capture_default_str();
    if (with_oracle) app->add_option("--oracle-resolution", oracle_resolution, "attach an oracle bracket");
  }

  OptimizerConfig config() const {
    OptimizerConfig cfg;
    cfg.restarts = restarts;
    cfg.max_iters = max_iters;
    cfg.tol = tol;
    cfg.seed = seed;
    if (oracle_resolution > 0) cfg.oracle_resolution = oracle_resolution;
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }
};

std::map<std::string, std::string> recorded_args(const CLI::App* sub) {
  std::map<std::string, std::string> args;
  for (const CLI::Option* opt : sub->get_options()) {
    std::string name = opt->get_name();
    if (name == "--help" || name == "-h") continue;
    name.erase(0, name.find_first_not_of('-'));
    std::string value;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      for (std::size_t i = 0; i < res.size(); ++i) value += (i ? "," : "") + res[i];
      if (opt->get_expected_max() == 0) value = "true";
    } else {
      value = opt->get_default_str();
      if (opt->get_expected_max() == 0) value = "false";
    }
    args[name] = value;
  }
  return args;
}

std::vector<ComplexMatrix> random_blocks(const Composition& c, int n, Rng& rng) {
  std::vector<ComplexMatrix> out;
  for (int l = 0; l < n; ++l) {
    std::vector<ComplexMatrix> parts;
    for (int j = 0; j < c.length(); ++j) parts.push_back(random_matrix(c.part(j), c.part(j), rng));
    out.push_back(block_diag(parts));
  }
  return out;
}

const std::vector<Composition>& verify_compositions() {
  static const std::vector<Composition> all = {Composition({3}), Composition({1, 1, 1}), Composition({1, 2, 1}),
                                               Composition({2, 1})};
  return all;
}

const std::vector<PExponent>& verify_exponents() {
  static const std::vector<PExponent> all = {PExponent(1.0), PExponent(1.5), PExponent(2.0), PExponent(3.0)};
  return all;
}

bool exact_p(PExponent p) { return p.is_one() || p.is_two() || p.is_infinite(); }

// One property's running maximum over trials.
struct Property {
  double tolerance = 0.0;
  double max_residual = 0.0;
  int checked = 0;
  std::optional<std::uint64_t> failed_seed;

  void record(double residual, std::uint64_t seed) {
    ++checked;
    if (!(residual <= max_residual)) max_residual = std::isnan(residual) ? residual : std::max(max_residual, residual);
    if (!failed_seed && !(residual <= tolerance)) failed_seed = seed;
  }
};

using Suite = std::map<std::string, Property>;

Suite duality_suite(int trials, std::uint64_t seed) {
  const std::vector<PExponent> ps = {PExponent(1.0), PExponent(1.5), PExponent(2.0), PExponent(2.5),
                                     PExponent::infinity()};
  Suite s;
  s["transpose_duality_exact"].tolerance = 1e-6;
  s["transpose_duality_estimated"].tolerance = 2e-3;
  s["duality_map_pairing"].tolerance = 1e-12;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = split_seed(seed, t);
    Rng rng(ts);
    const PExponent p = ps[t % 5];
    const PExponent q = ps[(t / 5) % 5];
    std::uniform_int_distribution<int> dim(1, 5);
    const ComplexMatrix a = random_matrix(dim(rng), dim(rng), rng);
    OptimizerConfig cfg;
    cfg.seed = ts;
    const bool exact = has_exact_formula(p, q) && has_exact_formula(q.conjugate(), p.conjugate());
    s[exact ? "transpose_duality_exact" : "transpose_duality_estimated"].record(
        transpose_duality_residual(a, p, q, cfg), ts);
    const ComplexVector y(random_complex_gaussian(a.rows(), rng));
    const ComplexVector eta = duality_map(y, q);
    const double ny = vector_p_norm(y, q);
    s["duality_map_pairing"].record(std::abs(holder_pairing(eta, y) - Complex(ny, 0.0)) / std::max(1.0, ny) +
                                        std::abs(vector_p_norm(eta, q.conjugate()) - 1.0),
                                    ts);
  }
  return s;
}

Suite block_lemma_suite(int trials, std::uint64_t seed) {
  Suite s;
  s["column_exact"].tolerance = 1e-6;
  s["column_estimated"].tolerance = 1e-3;
  s["row_exact"].tolerance = 1e-6;
  s["row_estimated"].tolerance = 1e-3;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = split_seed(seed, t);
    Rng rng(ts);
    const Composition& c = verify_compositions()[t % verify_compositions().size()];
    const PExponent p = verify_exponents()[(t / verify_compositions().size()) % verify_exponents().size()];
    const int n = 1 + static_cast<int>(rng() % 3);
    const Algebra alg = BlockDiagAlgebra(c);
    OptimizerConfig cfg;
    cfg.seed = ts;
    const std::string kind = exact_p(p) ? "exact" : "estimated";
    const auto col = ColumnModuleElement::from_blocks(alg, random_blocks(c, n, rng));
    s["column_" + kind].record(
        std::abs(op_norm_estimate(col.matrix(), p, p, cfg).value - stacked_norm(col, p, cfg)), ts);
    const auto row = RowModuleElement::from_blocks(alg, random_blocks(c, n, rng));
    s["row_" + kind].record(std::abs(op_norm_estimate(row.matrix(), p, p, cfg).value - stacked_norm(row, p, cfg)),
                            ts);
  }
  return s;
}

Suite main_t1_suite(int trials, std::uint64_t seed) {
  Suite s;
  for (const char* side : {"eta", "zeta"}) {
    s[std::string(side) + "_exact"].tolerance = 1e-6;
    s[std::string(side) + "_estimated"].tolerance = 1e-3;
  }
  s["witness_in_ball"].tolerance = 1e-9;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = split_seed(seed, t);
    Rng rng(ts);
    const PExponent p = verify_exponents()[t % verify_exponents().size()];
    const int d = 1 + static_cast<int>(rng() % 3);
    const int n = 1 + static_cast<int>(rng() % 3);
    const Algebra alg = BlockDiagAlgebra(Composition::full(d));
    OptimizerConfig cfg;
    cfg.seed = ts;
    const std::string kind = exact_p(p) ? "_exact" : "_estimated";
    const auto a = ColumnModuleElement::from_matrix(alg, random_matrix(n * d, d, rng));
    const auto we = full_algebra_witness_eta(a, p, cfg);
    s["eta" + kind].record(std::abs(we.target - we.value), ts);
    s["witness_in_ball"].record(vector_p_norm(we.vector, p.conjugate()) - 1.0, ts);
    const auto b = RowModuleElement::from_matrix(alg, random_matrix(d, n * d, rng));
    const auto wz = full_algebra_witness_zeta(b, p, cfg);
    s["zeta" + kind].record(std::abs(wz.target - wz.value), ts);
    s["witness_in_ball"].record(vector_p_norm(wz.vector, p) - 1.0, ts);
  }
  return s;
}

Suite main_t2_suite(int trials, std::uint64_t seed) {
  Suite s;
  for (const char* side : {"column", "row"}) {
    s[std::string(side) + "_gap_exact"].tolerance = 1e-6;
    s[std::string(side) + "_gap_estimated"].tolerance = 1e-3;
    s[std::string(side) + "_witness_norm"].tolerance = 1e-9;
    s[std::string(side) + "_not_constructive"].tolerance = 0.0;
  }
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = split_seed(seed, t);
    Rng rng(ts);
    const Composition& c = verify_compositions()[t % verify_compositions().size()];
    const PExponent p = verify_exponents()[(t / verify_compositions().size()) % verify_exponents().size()];
    const int n = 1 + static_cast<int>(rng() % 3);
    const Algebra alg = BlockDiagAlgebra(c);
    OptimizerConfig cfg;
    cfg.seed = ts;
    const std::string kind = exact_p(p) ? "exact" : "estimated";
    auto check = [&](const std::string& side, const GapReport& r) {
      s[side + "_gap_" + kind].record(r.gap, ts);
      s[side + "_witness_norm"].record(r.witness_norm - 1.0, ts);
      s[side + "_not_constructive"].record(r.certified == Certification::constructive ? 0.0 : 1.0, ts);
    };
    check("column", cstar_gap(ColumnModuleElement::from_blocks(alg, random_blocks(c, n, rng)), p, cfg));
    check("row", cstar_gap(RowModuleElement::from_blocks(alg, random_blocks(c, n, rng)), p, cfg));
  }
  return s;
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"p-operator norms, L^p-module pairings and C*-likeness gaps", "pnorm"};
    app.require_subcommand(1);
    app.set_version_flag("--version", library_version());

    // norm
    std::string matrix_file, p_text = "2", q_text;
    bool exact = false, estimate = false, oracle = false;
    int resolution = 16;
    ConfigFlags norm_cfg;
    CLI::App* norm = app.add_subcommand("norm", "p->q operator norm of a matrix");
    norm->add_option("matrix", matrix_file, "matrix JSON file")->required();
    norm->add_option("--p", p_text, "domain exponent")->capture_default_str();
    norm->add_option("--q", q_text, "codomain exponent (default: p)");
    auto* fe = norm->add_flag("--exact", exact, "closed form only");
    auto* fs = norm->add_flag("--estimate", estimate, "multi-start power iteration");
    auto* fo = norm->add_flag("--oracle", oracle, "deterministic grid search");
    fe->excludes(fs)->excludes(fo);
    fs->excludes(fo);
    norm->add_option("--resolution", resolution, "oracle grid resolution")->capture_default_str();
    norm_cfg.attach(norm, false);

    // gap
    std::string element_file, algebra_file, composition, side_text = "column", gap_p = "1";
    double gap_tol = -1.0;
    ConfigFlags gap_cfg;
    CLI::App* gap = app.add_subcommand("gap", "C*-likeness gap of a module element");
    gap->add_option("element", element_file, "element matrix JSON file (nd x d column, d x nd row)")->required();
    auto* ga = gap->add_option("--algebra", algebra_file, "algebra JSON file");
    auto* gc = gap->add_option("--composition", composition, "block sizes, e.g. 1,2,1");
    ga->excludes(gc);
    gap->add_option("--p", gap_p, "exponent")->capture_default_str();
    gap->add_option("--side", side_text, "column or row")
        ->check(CLI::IsMember({"column", "row"}))
        ->capture_default_str();
    gap->add_option("--gap-tol", gap_tol, "gap tolerance (default: 1e-6 at p in {1,2,inf}, else 1e-3)");
    gap_cfg.attach(gap, true);

    // verify
    std::string suite_name;
    int trials = 0;
    std::uint64_t verify_seed = 0;
    CLI::App* verify = app.add_subcommand("verify", "randomized property suites");
    verify->add_option("suite", suite_name, "duality, block-lemma, mainT1 or mainT2")
        ->required()
        ->check(CLI::IsMember({"duality", "block-lemma", "mainT1", "mainT2"}));
    verify->add_option("--trials", trials, "number of random instances (default per suite)");
    verify->add_option("--seed", verify_seed, "base seed")->capture_default_str();

    // counterexample
    std::string example, ce_p = "1";
    int ce_n = 1;
    ConfigFlags ce_cfg;
    ce_cfg.restarts = 256;
    CLI::App* ce = app.add_subcommand("counterexample", "non-C*-like examples");
    ce->add_option("name", example, "upper-triangular or sd")
        ->required()
        ->check(CLI::IsMember({"upper-triangular", "sd"}));
    ce->add_option("--p", ce_p, "exponent")->capture_default_str();
    ce->add_option("--n", ce_n, "module size (upper-triangular)")->capture_default_str();
    ce_cfg.attach(ce, true);

    // sweep
    std::string grid_text, out_path = "sweep.csv";
    ConfigFlags sweep_cfg;
    sweep_cfg.restarts = 256;
    CLI::App* sweep = app.add_subcommand("sweep", "gap of the SD element over a grid of p");
    sweep->add_option("--grid", grid_text, "comma-separated exponents (default 1.1,...,6)");
    sweep->add_option("--out", out_path, "CSV output path")->capture_default_str();
    sweep_cfg.attach(sweep, true);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return kOk;
    } catch (const CLI::CallForVersion&) {
      out_ << library_version() << "\n";
      return kOk;
    } catch (const CLI::ParseError& e) {
      err_ << "pnorm: " << e.what() << "\n";
      return kInputError;
    }

    start_ = std::chrono::steady_clock::now();
    try {
      if (*norm) {
        manifest_ = {"norm", recorded_args(norm), norm_cfg.seed, library_version(), 0.0};
        return cmd_norm(matrix_file, p_text, q_text, exact, estimate, oracle, resolution, norm_cfg.config());
      }
      if (*gap) {
        manifest_ = {"gap", recorded_args(gap), gap_cfg.seed, library_version(), 0.0};
        return cmd_gap(element_file, algebra_file, composition, side_text, gap_p, gap_tol, gap_cfg.config());
      }
      if (*verify) {
        manifest_ = {"verify", recorded_args(verify), verify_seed, library_version(), 0.0};
        return cmd_verify(suite_name, trials, verify_seed);
      }
      if (*ce) {
        manifest_ = {"counterexample", recorded_args(ce), ce_cfg.seed, library_version(), 0.0};
        return cmd_counterexample(example, ce_p, ce_n, ce_cfg.config());
      }
      manifest_ = {"sweep", recorded_args(sweep), sweep_cfg.seed, library_version(), 0.0};
      return cmd_sweep(grid_text, out_path, sweep_cfg.config());
    } catch (const UsageError& e) {
      err_ << "pnorm: " << e.what() << "\n";
      return kInputError;
    } catch (const InputError& e) {
      err_ << "pnorm: " << e.what() << "\n";
      return kInputError;
    } catch (const UnsupportedExponents& e) {
      err_ << "pnorm: " << e.what() << "\n";
      return kInputError;
    } catch (const BudgetExceeded& e) {
      err_ << "pnorm: " << e.what() << "\n";
      return kInputError;
    } catch (const std::invalid_argument& e) {
      err_ << "pnorm: " << e.what() << "\n";
      return kInputError;
    } catch (const std::out_of_range& e) {
      err_ << "pnorm: " << e.what() << "\n";
      return kInputError;
    }
  }

 private:
  void emit(Json result) {
    manifest_.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    Json doc = {{"manifest", to_json(manifest_)}, {"result", std::move(result)}};
    out_ << doc.dump(2) << "\n";
  }

  int cmd_norm(const std::string& file, const std::string& p_text, const std::string& q_text, bool exact,
               bool estimate, bool oracle, int resolution, const OptimizerConfig& cfg) {
    const ComplexMatrix a = matrix_from_json(read_json_file(file));
    const PExponent p = exponent_arg(p_text, "--p");
    const PExponent q = q_text.empty() ? p : exponent_arg(q_text, "--q");
    if (oracle) {
      if (resolution < 1) throw UsageError("--resolution must be >= 1");
      const double v = op_norm_oracle(a, p, q, resolution);
      Json j = {{"value", number(v)},
                {"method", to_string(NormMethod::grid_oracle)},
                {"iterations", 0},
                {"converged", true},
                {"primal_witness", nullptr},
                {"dual_witness", nullptr},
                {"resolution", resolution},
                {"grid_points", oracle_grid_size(a.cols(), p, resolution)}};
      if (p == q) j["upper_bound"] = number(oracle_upper_bound(v, a.cols(), p, resolution));
      emit(std::move(j));
      return kOk;
    }
    const bool use_exact = exact || (!estimate && has_exact_formula(p, q));
    const NormEstimate e = use_exact ? op_norm_exact(a, p, q) : op_norm_estimate(a, p, q, cfg);
    emit(to_json(e));
    if (!e.converged) {
      err_ << "pnorm: power iteration did not converge within --max-iters\n";
      return kNotConverged;
    }
    return kOk;
  }

  int cmd_gap(const std::string& file, const std::string& algebra_file, const std::string& composition,
              const std::string& side, const std::string& p_text, double tol, const OptimizerConfig& cfg) {
    const ComplexMatrix m = matrix_from_json(read_json_file(file));
    const PExponent p = exponent_arg(p_text, "--p");
    Algebra alg = BlockDiagAlgebra(Composition::full(side == "column" ? m.cols() : m.rows()));
    if (!algebra_file.empty()) alg = algebra_from_json(read_json_file(algebra_file));
    if (!composition.empty()) alg = BlockDiagAlgebra(Composition::parse(composition));
    GapReport r = side == "column" ? cstar_gap(ColumnModuleElement::from_matrix(alg, m), p, cfg)
                                   : cstar_gap(RowModuleElement::from_matrix(alg, m), p, cfg);
    if (tol >= 0.0) {
      r.tolerance = tol;
      r.cstar_like = r.gap <= tol;
    }
    emit(to_json(r));
    return r.cstar_like ? kOk : kPropertyFailure;
  }

  int cmd_verify(const std::string& suite, int trials, std::uint64_t seed) {
    static const std::map<std::string, std::pair<int, std::function<Suite(int, std::uint64_t)>>> suites = {
        {"duality", {100, duality_suite}},
        {"block-lemma", {50, block_lemma_suite}},
        {"mainT1", {25, main_t1_suite}},
        {"mainT2", {25, main_t2_suite}}};
    const auto& [default_trials, fn] = suites.at(suite);
    if (trials == 0) trials = default_trials;
    if (trials < 1) throw UsageError("--trials must be >= 1");
    const Suite s = fn(trials, seed);
    Json props = Json::object();
    bool ok = true;
    std::optional<std::uint64_t> failed;
    for (const auto& [name, prop] : s) {
      const bool passed = !prop.failed_seed;
      ok &= passed;
      if (!passed && !failed) failed = prop.failed_seed;
      props[name] = {{"checked", prop.checked},
                     {"max_residual", number(prop.max_residual)},
                     {"tolerance", prop.tolerance},
                     {"passed", passed}};
    }
    Json j = {{"suite", suite}, {"trials", trials}, {"passed", ok}, {"properties", props}};
    j["failed_seed"] = failed ? Json(*failed) : Json(nullptr);
    emit(std::move(j));
    if (!ok) {
      err_ << "pnorm: property failure in suite " << suite << " at trial seed " << *failed << "\n";
      return kPropertyFailure;
    }
    return kOk;
  }

  int cmd_counterexample(const std::string& name, const std::string& p_text, int n, const OptimizerConfig& cfg) {
    const PExponent p = exponent_arg(p_text, "--p");
    if (name == "upper-triangular") {
      if (n < 1) throw UsageError("--n must be >= 1");
      const GapReport r = upper_triangular_example(p, n, std::nullopt, cfg);
      emit({{"example", name}, {"n", n}, {"report", to_json(r)}});
      return kOk;
    }
    if (!p.is_one()) {
      const GapReport r = cstar_gap(sd_module_element(), p, cfg);
      emit({{"example", name}, {"report", to_json(r)}});
      return kOk;
    }
    const SdCounterexample sd = sd_counterexample(cfg);
    const ClaimOracle claim = sd_claim_oracle();
    Json cases = Json::array();
    for (const auto& c : claim.cases) {
      cases.push_back({{"radii", c.radii},
                       {"value", static_cast<double>(c.value)},
                       {"argmax_theta", c.has_free_phase ? Json(static_cast<double>(c.argmax)) : Json(nullptr)}});
    }
    emit({{"example", name},
          {"expected_norm", sd.expected_norm},
          {"expected_sup", sd.expected_sup},
          {"reproduced", sd.reproduced},
          {"claim_oracle", {{"value", claim.value}, {"cases", cases}}},
          {"report", to_json(sd.report)}});
    if (!sd.reproduced) {
      err_ << "pnorm: SD regression: sup " << sd.report.pairing_sup << " below sqrt(10) - " << kSdTolerance << "\n";
      return kPropertyFailure;
    }
    return kOk;
  }

  int cmd_sweep(const std::string& grid_text, const std::string& path, const OptimizerConfig& cfg) {
    const std::vector<PExponent> grid = grid_text.empty() ? default_sweep_grid() : exponent_list(grid_text);
    for (const auto& p : grid) {
      if (p.is_infinite()) throw UsageError("--grid: exponents must be finite");
    }
    std::ofstream csv(path);
    if (!csv) throw InputError("cannot write " + path);
    const SweepResult r = sd_sweep(grid, cfg);
    write_sweep_csv(csv, r);
    csv.close();
    if (!csv) throw InputError("cannot write " + path);
    manifest_.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::ofstream side(path + ".manifest.json");
    if (side) side << to_json(manifest_).dump(2) << "\n";
    Json j = to_json(r);
    j["csv"] = path;
    emit(std::move(j));
    return kOk;
  }

  std::ostream& out_;
  std::ostream& err_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return Runner(out, err).run(args);
}

}  // namespace pnorm::cli
