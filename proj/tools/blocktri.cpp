#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "blocktri/commutator.hpp"
#include "blocktri/coupling.hpp"
#include "blocktri/factor.hpp"
#include "blocktri/json_io.hpp"
#include "blocktri/obstruction.hpp"
#include "blocktri/sl4gf2.hpp"

using namespace blocktri;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

struct Globals {
  std::string field;
  std::uint64_t seed = 0;
};

std::optional<Field> field_override(const Globals& g) {
  if (g.field.empty()) return std::nullopt;
  return Field::parse(g.field);
}

Matrix load_matrix(const std::string& path, const Globals& g) {
  return matrix_from_json(read_json_file(path), field_override(g));
}

Json report(const std::string& command) {
  return {{"blocktri_schema", kSchemaVersion}, {"command", command}};
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

// Writes to --output when given, else to stdout.
void deliver(const Json& artifact, const std::string& output, Json summary) {
  if (output.empty()) {
    emit(artifact);
    return;
  }
  write_json_file(artifact, output);
  summary["output"] = output;
  emit(summary);
}

double rel_error(const Matrix& approx, const Matrix& target) {
  double diff = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < target.rows(); ++i) {
    double row_diff = 0.0, row_norm = 0.0;
    for (std::size_t j = 0; j < target.cols(); ++j) {
      row_diff += std::fabs(approx(i, j).to_double() - target(i, j).to_double());
      row_norm += std::fabs(target(i, j).to_double());
    }
    diff = std::max(diff, row_diff);
    norm = std::max(norm, row_norm);
  }
  return diff / std::max(1.0, norm);
}

Matrix exact_or_lifted(const Matrix& m) {
  return m.field().kind() == FieldKind::float64 ? lift_to_rational(m) : m;
}

int run_factor(const Globals& g, const std::string& input, bool gl, const std::string& diag_path,
               const std::string& output) {
  const Matrix m = exact_or_lifted(load_matrix(input, g));
  Factorization fac;
  if (gl) {
    Vector d;
    if (!diag_path.empty()) {
      d = diag_from_json(read_json_file(diag_path), m.field());
    } else {
      d.assign(m.rows() / 2, Scalar::one(m.field()));
      if (!d.empty()) d[0] = det(m);
    }
    fac = six_layer_factor_gl(m, d);
  } else {
    fac = six_layer_factor_sl(m);
  }
  Json summary = report("factor");
  summary["kind"] = to_string(fac.kind);
  summary["layers"] = fac.layers.size();
  summary["field"] = fac.field.to_string();
  deliver(factorization_to_json(fac), output, summary);
  return kOk;
}

int run_verify(const Globals& g, const std::string& input, const std::string& fac_path,
               double tolerance) {
  const Matrix m = load_matrix(input, g);
  const Factorization fac = factorization_from_json(read_json_file(fac_path));
  const Matrix product = evaluate_factorization(fac);
  Json out = report("verify");
  if (product.rows() != m.rows() || product.cols() != m.cols()) {
    out["match"] = false;
    out["reason"] = "shape";
    emit(out);
    return kNegative;
  }
  bool match = false;
  if (m.field().kind() == FieldKind::float64 || fac.field.kind() == FieldKind::float64) {
    const double err = rel_error(product, m);
    out["relative_error"] = err;
    out["tolerance"] = tolerance;
    match = err <= tolerance;
  } else {
    if (!(m.field() == fac.field)) {
      throw Error(ErrorCode::FieldMismatch, "matrix and factorization fields differ",
                  m.field().to_string() + " vs " + fac.field.to_string());
    }
    match = product == m;
    out["exact"] = true;
  }
  out["match"] = match;
  out["layers"] = fac.layers.size();
  emit(out);
  return match ? kOk : kNegative;
}

int run_commutator(const Globals& g, const std::string& input, const std::string& output) {
  const Matrix m = load_matrix(input, g);
  try {
    const CommutatorResult r = commutator_decompose_ex(m);
    Json summary = report("commutator");
    summary["route"] = to_string(r.route);
    deliver(commutator_to_json(r), output, summary);
    return kOk;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoDecomposition) throw;
    Json out = report("commutator");
    out["decomposable"] = false;
    out["reason"] = e.what();
    emit(out);
    return kNegative;
  }
}

int run_obstruct(const Globals& g, const std::string& m1_path, const std::string& m4_path,
                 const std::string& mode) {
  const Matrix m1 = load_matrix(m1_path, g);
  const Matrix m4 = load_matrix(m4_path, g);
  ObstructionReport r;
  if (mode == "trace") {
    r = trace_obstruction(m1, m4);
  } else if (mode == "spectra") {
    r = spectra_obstruction(m1, m4);
  } else {
    throw Error(ErrorCode::ParseError, "mode must be trace or spectra", mode);
  }
  emit(to_json(r));
  return r.obstructed ? kOk : kNegative;
}

int run_witness(const Globals& g, std::size_t m, std::size_t n, const std::string& kind,
                const std::string& output) {
  const Field f = g.field.empty() ? Field::rational() : Field::parse(g.field);
  Json artifact;
  if (kind == "blockdiag") {
    artifact = matrix_to_json(blockdiag_witness_matrix(m, n, f));
    if (m > 1 && n > 1) {
      const auto [x, y] = build_blockdiag_witness(m, n, f);
      artifact["X"] = matrix_to_json(x);
      artifact["Y"] = matrix_to_json(y);
    }
  } else if (kind == "diag-perm") {
    artifact = matrix_to_json(build_perm_witness(m, n, f));
  } else {
    throw Error(ErrorCode::ParseError, "kind must be blockdiag or diag-perm", kind);
  }
  artifact["split"] = {m, n};
  Json summary = report("witness");
  summary["kind"] = kind;
  deliver(artifact, output, summary);
  return kOk;
}

int run_permsweep(const Globals& g, const std::string& input, std::size_t m, std::size_t n) {
  const ObstructionReport r = perm_sweep(load_matrix(input, g), m, n);
  emit(to_json(r));
  return r.obstructed ? kOk : kNegative;
}

const sl4gf2::ReachSet& cached_reach(const std::string& cache, Json& out) {
  static std::optional<sl4gf2::ReachSet> holder;
  if (cache.empty()) return sl4gf2::default_reach_set();
  if (std::filesystem::exists(cache)) {
    holder = sl4gf2::load_reach_cache(cache);
    if (holder && holder->max_depth >= 6) {
      out["cache"] = "loaded";
      return *holder;
    }
  }
  holder = sl4gf2::build_reach_set(6);
  sl4gf2::save_reach_cache(*holder, cache);
  out["cache"] = "written";
  return *holder;
}

int run_sl4gf2(bool lemma, bool nonrep, const std::string& output, const std::string& cache) {
  if (lemma == nonrep) {
    throw Error(ErrorCode::ParseError, "choose exactly one of --verify-lemma5, --find-nonrepresentable");
  }
  if (lemma) {
    const auto r = sl4gf2::verify_lemma_sl4gf2();
    Json out = lemma_report_to_json(r);
    out["command"] = "sl4gf2";
    emit(out);
    return r.pass ? kOk : kNegative;
  }
  Json summary = report("sl4gf2");
  const auto& reach = cached_reach(cache, summary);
  const auto found = sl4gf2::find_nonrepresentable(reach);
  Json list = Json::array();
  for (auto w : found) {
    list.push_back({{"packed", w},
                    {"depth", reach.depth[w]},
                    {"upper_right_invertible", sl4gf2::upper_right_invertible(w)},
                    {"matrix", matrix_to_json(sl4gf2::unpack(w))}});
  }
  Json artifact = report("sl4gf2");
  artifact["nonrepresentable"] = std::move(list);
  summary["count"] = found.size();
  deliver(artifact, output, summary);
  return found.empty() ? kNegative : kOk;
}

int run_export(const Globals& g, const std::string& input, const std::string& output, bool nice,
               const std::string& strategy) {
  const Matrix m = load_matrix(input, g);
  CouplingOptions opts;
  opts.diag = parse_diag_strategy(strategy);
  const CouplingNetwork net = nice ? nice_network(m) : to_coupling_network(m, opts);
  Json summary = report("export-coupling");
  summary["depth"] = net.layers.size();
  summary["reconstruction_error"] = reconstruction_error(net, m);
  summary["max_entry_bits"] = net.max_entry_bits;
  summary["volume_preserving"] = exact_volume(net).is_one();
  deliver(network_to_json(net), output, summary);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block unitriangular factorizations over exact fields"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--field", g.field, "rational | f64 | gf:p | gf:4");
  app.add_option("--seed", g.seed, "Seed for randomized generation");

  std::string input, output, diag, fac_path, m1, m4, mode, kind, cache;
  std::string strategy = "corner";
  bool gl = false, lemma = false, nonrep = false, nice = false;
  double tolerance = 1e-9;
  std::size_t m = 0, n = 0;

  auto* factor = app.add_subcommand("factor", "Six-layer factorization");
  factor->add_option("--input", input)->required();
  factor->add_flag("--gl", gl, "GL factorization with a final diagonal layer");
  factor->add_option("--diag", diag, "Diagonal for --gl (default diag(det, 1, ...))");
  factor->add_option("--output", output);

  auto* verify = app.add_subcommand("verify", "Check a factorization against a matrix");
  verify->add_option("--input", input)->required();
  verify->add_option("--factorization", fac_path)->required();
  verify->add_option("--tolerance", tolerance, "Relative tolerance for f64");

  auto* comm = app.add_subcommand("commutator", "Write M in SL as [X, Y]");
  comm->add_option("--input", input)->required();
  comm->add_option("--output", output);

  auto* obstruct = app.add_subcommand("obstruct", "Five-layer obstruction certificate");
  obstruct->add_option("--m1", m1)->required();
  obstruct->add_option("--m4", m4)->required();
  obstruct->add_option("--mode", mode)->required()->check(CLI::IsMember({"trace", "spectra"}));

  auto* witness = app.add_subcommand("witness", "Lower-bound witness matrices");
  witness->add_option("--m", m)->required();
  witness->add_option("--n", n)->required();
  witness->add_option("--kind", kind)->required()->check(CLI::IsMember({"blockdiag", "diag-perm"}));
  witness->add_option("--output", output);

  auto* sweep = app.add_subcommand("permsweep", "Spectra test over all bipartitions");
  sweep->add_option("--input", input)->required();
  sweep->add_option("--m", m)->required();
  sweep->add_option("--n", n)->required();

  auto* sl4 = app.add_subcommand("sl4gf2", "Exhaustive search over SL4(GF(2))");
  sl4->add_flag("--verify-lemma5", lemma);
  sl4->add_flag("--find-nonrepresentable", nonrep);
  sl4->add_option("--output", output);
  sl4->add_option("--cache", cache, "Reach-set cache file");

  auto* exportc = app.add_subcommand("export-coupling", "Depth-six linear coupling network");
  exportc->add_option("--input", input)->required();
  exportc->add_option("--output", output);
  exportc->add_flag("--nice", nice, "Volume-preserving network (det = 1)");
  exportc->add_option("--diag-strategy", strategy)->check(CLI::IsMember({"corner", "balanced"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*factor) return run_factor(g, input, gl, diag, output);
    if (*verify) return run_verify(g, input, fac_path, tolerance);
    if (*comm) return run_commutator(g, input, output);
    if (*obstruct) return run_obstruct(g, m1, m4, mode);
    if (*witness) return run_witness(g, m, n, kind, output);
    if (*sweep) return run_permsweep(g, input, m, n);
    if (*sl4) return run_sl4gf2(lemma, nonrep, output, cache);
    if (*exportc) return run_export(g, input, output, nice, strategy);
  } catch (const Error& e) {
    emit(error_to_json(e));
    return kUsage;
  } catch (const std::exception& e) {
    emit(error_to_json(Error(ErrorCode::ParseError, e.what())));
    return kUsage;
  }
  return kUsage;
}
