#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "blocktri/matrix.hpp"

namespace blocktri {

struct CommutatorPair {
  Matrix x;
  Matrix y;
};

/// [X, Y] = X^{-1} Y^{-1} X Y.
Matrix commutator(const Matrix& x, const Matrix& y);

enum class CommutatorRoute { identity, scalar, exhaustive, random_search, triangular };

std::string to_string(CommutatorRoute route);

struct CommutatorOptions {
  /// Candidate X matrices tried by the randomized similarity search.
  std::size_t budget = 10'000;
  /// Finite-field instances with q^(k*k) at or below this are searched
  /// exhaustively, which makes NoDecomposition definitive.
  std::size_t exhaustive_limit = 4096;
  /// Re-check [X, Y] = M before returning.
  bool verify = true;
};

struct CommutatorResult {
  CommutatorPair pair;
  CommutatorRoute route;
};

/// Writes M in SL_k(F) as [X, Y] with X, Y in GL_k(F). The returned pair is
/// re-verified unless opts.verify is off. Throws NotUnimodular, NoDecomposition (only the three
/// non-commutators of SL_2(GF(2))) or DecompositionFailed.
CommutatorResult commutator_decompose_ex(const Matrix& m, const CommutatorOptions& opts = {});

inline CommutatorPair commutator_decompose(const Matrix& m, const CommutatorOptions& opts = {}) {
  return commutator_decompose_ex(m, opts).pair;
}

/// Some invertible S with S^{-1} U S = V, if one is found. Solves U S = S V
/// and searches the solution space for an invertible element; exhaustive
/// when the space is small over a finite field, randomized otherwise.
std::optional<Matrix> find_similarity(const Matrix& u, const Matrix& v, std::uint64_t seed = 0);

/// Triangular product route: for non-scalar A and nonzero targets with
/// prod(beta_i * gamma_i) = det(A), finds P, lower-triangular B with
/// diagonal beta and upper-triangular C with diagonal gamma such that
/// P^{-1} A P = B C.
struct TriangularProduct {
  Matrix p;
  Matrix lower;
  Matrix upper;
};
std::optional<TriangularProduct> triangular_product_form(const Matrix& a, const Vector& beta,
                                                         const Vector& gamma);

}  // namespace blocktri
