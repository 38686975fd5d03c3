#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "blocktri/matrix.hpp"

namespace blocktri {

enum class LayerKind { lower, upper, upper_diag };

/// One block factor relative to an (m, n) split:
///   lower       [I 0; A I]   A is n x m
///   upper       [I A; 0 I]   A is m x n
///   upper_diag  [D A; 0 I]   A is m x n, D = diag(d), all d nonzero
struct BlockLayer {
  LayerKind kind;
  Matrix a;
  Vector d;

  static BlockLayer lower(Matrix a) { return {LayerKind::lower, std::move(a), {}}; }
  static BlockLayer upper(Matrix a) { return {LayerKind::upper, std::move(a), {}}; }
  static BlockLayer upper_diag(Vector d, Matrix a) {
    return {LayerKind::upper_diag, std::move(a), std::move(d)};
  }

  bool operator==(const BlockLayer&) const = default;
};

enum class FactorizationKind { sl6, gl6, lulul5 };

std::string to_string(LayerKind kind);
std::string to_string(FactorizationKind kind);
LayerKind parse_layer_kind(const std::string& s);
FactorizationKind parse_factorization_kind(const std::string& s);

/// Ordered block factors, leftmost first: M = layers[0] * layers[1] * ...
struct Factorization {
  std::size_t m = 0;
  std::size_t n = 0;
  Field field = Field::rational();
  FactorizationKind kind = FactorizationKind::sl6;
  std::vector<BlockLayer> layers;
};

/// The (m+n) x (m+n) matrix a layer encodes.
Matrix layer_matrix(const BlockLayer& layer, std::size_t m, std::size_t n, const Field& f);

/// Left-to-right product of the layers; identity for an empty list.
Matrix evaluate_factorization(const Factorization& f);

/// Checks block shapes, alternation and the kind's layer pattern. Throws
/// DimensionMismatch on the first violation.
void validate_factorization(const Factorization& f);

/// K = M2 (M4 M2^{-1} M1 - M3), the matrix whose commutator decomposition
/// drives the five-layer construction. det(K) = det(M).
Matrix five_layer_target(const Matrix& m);

/// M in SL_2n with invertible upper-right block as L U L U L. Uses the
/// closed-form layer formulas built from a commutator decomposition of
/// five_layer_target(M); for n = 2 over GF(2) the exhaustive table is used.
/// Throws SingularUpperRight, NotUnimodular, NoDecomposition.
Factorization five_layer_factor(const Matrix& m);

/// Some C with C A + B invertible; exists iff ker(A) and ker(B) meet only
/// in 0. Deterministic greedy basis completion. Throws KernelOverlap.
Matrix completion_left(const Matrix& a, const Matrix& b);

/// Some C with A C + B invertible (transpose dual). Throws CokernelOverlap.
Matrix completion_right(const Matrix& a, const Matrix& b);

/// M in SL_2n as L U L U L U. The final layer is Upper(0) whenever the
/// upper-right block of M is already invertible.
Factorization six_layer_factor_sl(const Matrix& m);

/// M in GL_2n as L U L U L [D A; 0 I] for the prescribed diagonal d with
/// prod(d) = det(M). Throws DeterminantMismatch, SingularMatrix.
Factorization six_layer_factor_gl(const Matrix& m, const Vector& d);
/// Same with an explicit shift A; the five-layer part factors
/// M [D^{-1} A; 0 I], so M1 A + M2 must be invertible (else SingularUpperRight).
Factorization six_layer_factor_gl(const Matrix& m, const Vector& d, const Matrix& shift);

}  // namespace blocktri
