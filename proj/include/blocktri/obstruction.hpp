#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "blocktri/matrix.hpp"

namespace blocktri {

enum class ObstructionMode { trace, spectra, rank_one, perm_sweep };

std::string to_string(ObstructionMode mode);

/// obstructed = true certifies the target is outside the relevant five-fold
/// product set. obstructed = false means "no conclusion": the conditions
/// checked here are necessary, not sufficient.
struct ObstructionReport {
  ObstructionMode mode = ObstructionMode::trace;
  bool obstructed = false;
  nlohmann::json certificate;
  /// Indices of the diagonal entries placed in the first block.
  std::optional<std::vector<std::size_t>> bipartition;
};

nlohmann::json to_json(const ObstructionReport& report);

/// X (m x m cyclic shift, X(i, j) = 1 iff j - i = 1 mod m) and Y (n x n
/// shift with Y(1,1) = delta(m*1 - n*1) and Y(n,1) = (-1)^(m+n)).
/// det(X) = det(Y) = (-1)^(m+1). Requires m, n > 1.
std::pair<Matrix, Matrix> build_blockdiag_witness(std::size_t m, std::size_t n, const Field& f);

/// The cyclic shift X alone (valid for any m >= 1).
Matrix cyclic_shift(std::size_t m, const Field& f);

/// diag(X^{-1}, Y) in SL_{m+n}; for n = 1 the block Y is (-1)^(m+1).
Matrix blockdiag_witness_matrix(std::size_t m, std::size_t n, const Field& f);

/// Decides whether invertible diagonal D (m x m), E (n x n) exist with
///   m*1 + trace(M4 E) = n*1 + trace(M1^{-1} D).
/// obstructed iff none exist. Finite fields with q^(m+n) <= enumeration_limit
/// are decided by enumerating every tuple of units; otherwise by the exact
/// value set of a linear form over units.
ObstructionReport trace_obstruction(const Matrix& m1, const Matrix& m4,
                                    double enumeration_limit = 1e8);

/// Compares t^n char(I - M1^{-1}) with t^m char(I - M4); they differ iff the
/// nonzero spectra (with multiplicity) differ, which rules out
/// diag(M1, M4) in [BL u BU]^5.
ObstructionReport spectra_obstruction(const Matrix& m1, const Matrix& m4);

/// Diagonal witness with entries g, h, (gh)^{-1} from pick_gh and m+n-3 ones.
Matrix build_perm_witness(std::size_t m, std::size_t n, const Field& f);

/// Runs spectra_obstruction over all C(m+n, m) bipartitions of the diagonal
/// of M, lexicographic order; obstructed iff every bipartition is.
ObstructionReport perm_sweep(const Matrix& m, std::size_t top, std::size_t bottom);

/// The (m, 1) case: no invertible diagonal E, D make I - E X D of rank <= 1,
/// since its (1,1) and (2,2) entries are 1 and its (2,1) entry is 0 for
/// m > 2. Confirmed by enumeration over finite fields when q^(2m) fits the
/// limit.
ObstructionReport rank_one_case_check(std::size_t m, const Field& f,
                                      double enumeration_limit = 1e8);

}  // namespace blocktri
