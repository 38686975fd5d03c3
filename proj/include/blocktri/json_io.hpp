#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "blocktri/commutator.hpp"
#include "blocktri/coupling.hpp"
#include "blocktri/factor.hpp"
#include "blocktri/sl4gf2.hpp"

namespace blocktri {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Strings for rational and GF(4) entries, numbers for GF(p) and f64.
Json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const Json& j, const Field& f);

/// {"blocktri_schema": 1, "field": ..., "rows": [[...], ...]}
Json matrix_to_json(const Matrix& m);
/// `field` overrides the document's field when given.
Matrix matrix_from_json(const Json& j, const std::optional<Field>& field = std::nullopt);

Json factorization_to_json(const Factorization& fac);
Factorization factorization_from_json(const Json& j);

Json network_to_json(const CouplingNetwork& net, bool include_exact = false);
/// Float layers only; the exact factorization is restored when present.
CouplingNetwork network_from_json(const Json& j);

/// {"field": ..., "diag": [...]}, a bare array, or a matrix document whose
/// diagonal is taken.
Vector diag_from_json(const Json& j, const std::optional<Field>& field = std::nullopt);

Json commutator_to_json(const CommutatorResult& r);
Json lemma_report_to_json(const sl4gf2::LemmaReport& r);
Json error_to_json(const Error& e);

Json read_json_file(const std::string& path);
void write_json_file(const Json& j, const std::string& path);

}  // namespace blocktri
