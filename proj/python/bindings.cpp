#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blocktri/commutator.hpp"
#include "blocktri/coupling.hpp"
#include "blocktri/factor.hpp"
#include "blocktri/json_io.hpp"
#include "blocktri/obstruction.hpp"
#include "blocktri/sl4gf2.hpp"

namespace py = pybind11;
using namespace blocktri;

// Documents cross the boundary as JSON text in the CLI schemas.
namespace {

Matrix parse_matrix(const std::string& text) { return matrix_from_json(Json::parse(text)); }

Matrix exact_or_lifted(const Matrix& m) {
  return m.field().kind() == FieldKind::float64 ? lift_to_rational(m) : m;
}

std::string factor(const std::string& matrix, bool gl, const std::optional<std::string>& diag) {
  const Matrix m = exact_or_lifted(parse_matrix(matrix));
  if (!gl) return factorization_to_json(six_layer_factor_sl(m)).dump();
  Vector d;
  if (diag) {
    d = diag_from_json(Json::parse(*diag), m.field());
  } else {
    d.assign(m.rows() / 2, Scalar::one(m.field()));
    if (!d.empty()) d[0] = det(m);
  }
  return factorization_to_json(six_layer_factor_gl(m, d)).dump();
}

std::string evaluate(const std::string& fac) {
  return matrix_to_json(evaluate_factorization(factorization_from_json(Json::parse(fac)))).dump();
}

std::string commutator_pair(const std::string& matrix) {
  return commutator_to_json(commutator_decompose_ex(parse_matrix(matrix))).dump();
}

std::string obstruction(const std::string& m1, const std::string& m4, const std::string& mode) {
  const Matrix a = parse_matrix(m1);
  const Matrix b = parse_matrix(m4);
  if (mode == "trace") return to_json(trace_obstruction(a, b)).dump();
  if (mode == "spectra") return to_json(spectra_obstruction(a, b)).dump();
  throw Error(ErrorCode::ParseError, "mode must be trace or spectra", mode);
}

std::string coupling(const std::string& matrix, bool nice, const std::string& strategy) {
  const Matrix m = parse_matrix(matrix);
  CouplingOptions opts;
  opts.diag = parse_diag_strategy(strategy);
  const CouplingNetwork net = nice ? nice_network(m) : to_coupling_network(m, opts);
  Json out = network_to_json(net);
  out["reconstruction_error"] = reconstruction_error(net, m);
  return out.dump();
}

std::vector<std::string> nonrepresentable() {
  std::vector<std::string> out;
  for (auto w : sl4gf2::find_nonrepresentable()) out.push_back(matrix_to_json(sl4gf2::unpack(w)).dump());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact block-triangular factorization kernels";

  static py::exception<Error> error(m, "BlocktriError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::tuple args = py::make_tuple(std::string(to_string(e.code())), e.what(), e.context());
      PyErr_SetObject(error.ptr(), args.ptr());
    } catch (const nlohmann::json::exception& e) {
      const py::tuple args = py::make_tuple("ParseError", e.what(), "");
      PyErr_SetObject(error.ptr(), args.ptr());
    }
  });

  m.attr("SCHEMA_VERSION") = kSchemaVersion;
  m.def("factor", &factor, py::arg("matrix"), py::arg("gl") = false, py::arg("diag") = py::none());
  m.def("evaluate", &evaluate, py::arg("factorization"));
  m.def(
      "canonical", [](const std::string& matrix) { return matrix_to_json(parse_matrix(matrix)).dump(); },
      py::arg("matrix"));
  m.def("commutator", &commutator_pair, py::arg("matrix"));
  m.def("obstruction", &obstruction, py::arg("m1"), py::arg("m4"), py::arg("mode"));
  m.def(
      "perm_sweep",
      [](const std::string& matrix, std::size_t top, std::size_t bottom) {
        return to_json(perm_sweep(parse_matrix(matrix), top, bottom)).dump();
      },
      py::arg("matrix"), py::arg("m"), py::arg("n"));
  m.def(
      "rank_one_case_check",
      [](std::size_t size, const std::string& field) {
        return to_json(rank_one_case_check(size, Field::parse(field))).dump();
      },
      py::arg("m"), py::arg("field"));
  m.def(
      "blockdiag_witness",
      [](std::size_t rows, std::size_t cols, const std::string& field) {
        return matrix_to_json(blockdiag_witness_matrix(rows, cols, Field::parse(field))).dump();
      },
      py::arg("m"), py::arg("n"), py::arg("field"));
  m.def(
      "perm_witness",
      [](std::size_t rows, std::size_t cols, const std::string& field) {
        return matrix_to_json(build_perm_witness(rows, cols, Field::parse(field))).dump();
      },
      py::arg("m"), py::arg("n"), py::arg("field"));
  m.def("verify_lemma", [] { return lemma_report_to_json(sl4gf2::verify_lemma_sl4gf2()).dump(); });
  m.def("nonrepresentable", &nonrepresentable);
  m.def("coupling_network", &coupling, py::arg("matrix"), py::arg("nice") = false,
        py::arg("strategy") = "corner");
}
