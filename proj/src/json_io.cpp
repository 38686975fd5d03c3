#include "blocktri/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace blocktri {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::ParseError, "missing key", key);
  }
  return j.at(key);
}

void check_schema(const Json& j) {
  if (j.is_object() && j.contains("blocktri_schema") && j.at("blocktri_schema") != kSchemaVersion) {
    throw Error(ErrorCode::ParseError, "unsupported schema version", j.at("blocktri_schema").dump());
  }
}

Json rows_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix rows_from_json(const Json& rows, const Field& f, std::size_t expect_rows,
                      std::size_t expect_cols) {
  if (!rows.is_array() || rows.size() != expect_rows) {
    throw Error(ErrorCode::ParseError, "row count", std::to_string(expect_rows));
  }
  Matrix m(f, expect_rows, expect_cols);
  for (std::size_t i = 0; i < expect_rows; ++i) {
    if (!rows[i].is_array() || rows[i].size() != expect_cols) {
      throw Error(ErrorCode::ParseError, "ragged rows", "row " + std::to_string(i));
    }
    for (std::size_t j = 0; j < expect_cols; ++j) m(i, j) = scalar_from_json(rows[i][j], f);
  }
  return m;
}

std::pair<std::size_t, std::size_t> shape_of(const Json& rows) {
  if (!rows.is_array()) throw Error(ErrorCode::ParseError, "rows must be an array");
  if (rows.empty()) return {0, 0};
  if (!rows[0].is_array()) throw Error(ErrorCode::ParseError, "rows must be arrays");
  return {rows.size(), rows[0].size()};
}

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << v;
  return out.str();
}

}  // namespace

Json scalar_to_json(const Scalar& s) {
  switch (s.field().kind()) {
    case FieldKind::prime: return s.residue();
    case FieldKind::float64: return s.to_double();
    default: return s.to_string();
  }
}

Scalar scalar_from_json(const Json& j, const Field& f) {
  if (j.is_string()) return Scalar::parse(j.get<std::string>(), f);
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) {
      return Scalar::from_mpz(mpz_class(std::to_string(j.get<std::uint64_t>())), f);
    }
    return Scalar::from_int(j.get<long long>(), f);
  }
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (f.kind() == FieldKind::float64) return Scalar::from_double(x);
    if (f.kind() == FieldKind::rational && std::isfinite(x)) {
      return Scalar::from_rational(mpq_class(x));
    }
    if (std::isfinite(x) && x == std::floor(x) && std::fabs(x) < 9e15) {
      return Scalar::from_int(static_cast<long long>(x), f);
    }
  }
  throw Error(ErrorCode::ParseError, "entry is not valid for " + f.to_string(), j.dump());
}

Json matrix_to_json(const Matrix& m) {
  return {{"blocktri_schema", kSchemaVersion},
          {"field", m.field().to_string()},
          {"rows", rows_to_json(m)}};
}

Matrix matrix_from_json(const Json& j, const std::optional<Field>& field) {
  check_schema(j);
  const Json& rows = j.is_array() ? j : require(j, "rows");
  Field f = Field::rational();
  if (field) {
    f = *field;
  } else if (j.is_object() && j.contains("field")) {
    f = Field::parse(j.at("field").get<std::string>());
  }
  const auto [r, c] = shape_of(rows);
  return rows_from_json(rows, f, r, c);
}

Json factorization_to_json(const Factorization& fac) {
  Json layers = Json::array();
  for (const auto& layer : fac.layers) {
    Json l{{"type", to_string(layer.kind)}, {"A", rows_to_json(layer.a)}};
    if (layer.kind == LayerKind::upper_diag) {
      Json d = Json::array();
      for (const auto& x : layer.d) d.push_back(scalar_to_json(x));
      l["D"] = std::move(d);
    }
    layers.push_back(std::move(l));
  }
  return {{"blocktri_schema", kSchemaVersion},
          {"field", fac.field.to_string()},
          {"kind", to_string(fac.kind)},
          {"m", fac.m},
          {"n", fac.n},
          {"layers", std::move(layers)}};
}

Factorization factorization_from_json(const Json& j) {
  check_schema(j);
  Factorization fac;
  fac.field = Field::parse(require(j, "field").get<std::string>());
  fac.m = require(j, "m").get<std::size_t>();
  fac.n = require(j, "n").get<std::size_t>();
  fac.kind = parse_factorization_kind(require(j, "kind").get<std::string>());
  for (const auto& l : require(j, "layers")) {
    const LayerKind kind = parse_layer_kind(require(l, "type").get<std::string>());
    const bool lower = kind == LayerKind::lower;
    Matrix a = rows_from_json(require(l, "A"), fac.field, lower ? fac.n : fac.m,
                              lower ? fac.m : fac.n);
    Vector d;
    if (kind == LayerKind::upper_diag) {
      for (const auto& x : require(l, "D")) d.push_back(scalar_from_json(x, fac.field));
    }
    fac.layers.push_back({kind, std::move(a), std::move(d)});
  }
  validate_factorization(fac);
  return fac;
}

Json network_to_json(const CouplingNetwork& net, bool include_exact) {
  Json layers = Json::array();
  for (const auto& layer : net.layers) {
    Json w = Json::array();
    for (std::size_t i = 0; i < layer.w.rows(); ++i) {
      Json row = Json::array();
      for (std::size_t k = 0; k < layer.w.cols(); ++k) row.push_back(layer.w(i, k).to_double());
      w.push_back(std::move(row));
    }
    layers.push_back({{"mask", to_string(layer.mask)}, {"s", layer.s}, {"W", std::move(w)}});
  }
  Json out{{"blocktri_schema", kSchemaVersion},
           {"split", {net.m, net.n}},
           {"kind", to_string(net.kind)},
           {"source_hash", hex64(net.source_hash)},
           {"max_entry_bits", net.max_entry_bits},
           {"candidate", net.candidate},
           {"layers", std::move(layers)}};
  if (include_exact) out["exact"] = factorization_to_json(net.exact);
  return out;
}

CouplingNetwork network_from_json(const Json& j) {
  check_schema(j);
  CouplingNetwork net;
  const Json& split = require(j, "split");
  if (!split.is_array() || split.size() != 2) throw Error(ErrorCode::ParseError, "split");
  net.m = split[0].get<std::size_t>();
  net.n = split[1].get<std::size_t>();
  if (j.contains("kind")) net.kind = parse_factorization_kind(j.at("kind").get<std::string>());
  if (j.contains("source_hash")) {
    net.source_hash = std::stoull(j.at("source_hash").get<std::string>(), nullptr, 16);
  }
  net.max_entry_bits = j.value("max_entry_bits", std::size_t{0});
  net.candidate = j.value("candidate", std::size_t{0});
  const Field f64 = Field::float64();
  for (const auto& l : require(j, "layers")) {
    CouplingLayer layer;
    layer.mask = parse_coupling_mask(require(l, "mask").get<std::string>());
    layer.s = require(l, "s").get<std::vector<double>>();
    const std::size_t active = layer.mask == CouplingMask::left ? net.m : net.n;
    const std::size_t passive = layer.mask == CouplingMask::left ? net.n : net.m;
    layer.w = rows_from_json(require(l, "W"), f64, active, passive);
    net.layers.push_back(std::move(layer));
  }
  if (j.contains("exact")) net.exact = factorization_from_json(j.at("exact"));
  return net;
}

Vector diag_from_json(const Json& j, const std::optional<Field>& field) {
  check_schema(j);
  if (j.is_object() && j.contains("rows")) return matrix_from_json(j, field).diagonal_entries();
  Field f = Field::rational();
  if (field) {
    f = *field;
  } else if (j.is_object() && j.contains("field")) {
    f = Field::parse(j.at("field").get<std::string>());
  }
  const Json& entries = j.is_array() ? j : require(j, "diag");
  if (!entries.is_array()) throw Error(ErrorCode::ParseError, "diag must be an array");
  Vector out;
  for (const auto& x : entries) out.push_back(scalar_from_json(x, f));
  return out;
}

Json commutator_to_json(const CommutatorResult& r) {
  return {{"blocktri_schema", kSchemaVersion},
          {"route", to_string(r.route)},
          {"X", matrix_to_json(r.pair.x)},
          {"Y", matrix_to_json(r.pair.y)}};
}

Json lemma_report_to_json(const sl4gf2::LemmaReport& r) {
  return {{"blocktri_schema", kSchemaVersion},
          {"group_order", r.group_order},
          {"invertible_upper_right", r.invertible_block_count},
          {"in_set5", r.in_reach5},
          {"in_lulul", r.in_alternating},
          {"set_sizes", r.depth_counts},
          {"pass", r.pass}};
}

Json error_to_json(const Error& e) {
  return {{"blocktri_schema", kSchemaVersion},
          {"code", std::string(to_string(e.code()))},
          {"message", e.what()},
          {"context", e.context()}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open file", path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what(), path);
  }
}

void write_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write file", path);
  out << j.dump(2) << '\n';
}

}  // namespace blocktri
