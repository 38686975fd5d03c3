#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "blocktri/factor.hpp"

namespace blocktri {

enum class CouplingMask { left, right };
enum class DiagStrategy { corner, balanced };

std::string to_string(CouplingMask mask);
std::string to_string(DiagStrategy strategy);
CouplingMask parse_coupling_mask(const std::string& s);
DiagStrategy parse_diag_strategy(const std::string& s);

/// Linear affine coupling: the active half becomes x_a * exp(s) + W x_p and
/// the passive half is copied. left = top m coordinates active.
struct CouplingLayer {
  CouplingMask mask = CouplingMask::left;
  std::vector<double> s;
  Matrix w;  // f64, active x passive
};

/// Layers are applied as maps in list order, so the network computes
/// layers[K-1] * ... * layers[0] * x.
struct CouplingNetwork {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<CouplingLayer> layers;
  std::uint64_t source_hash = 0;
  FactorizationKind kind = FactorizationKind::gl6;
  Factorization exact;
  /// Largest numerator or denominator bit length among the exact layers.
  std::size_t max_entry_bits = 0;
  /// Index of the upper-right shift candidate that was kept (0 = default).
  std::size_t candidate = 0;
};

/// Every candidate is an exact factorization; they differ in the shift A of
/// the final layer. The first whose f64 emission reconstructs M within
/// accept_error is kept, otherwise the best of all candidates.
struct CouplingOptions {
  DiagStrategy diag = DiagStrategy::corner;
  std::size_t candidates = 8;
  double accept_error = 1e-10;
};

/// Bit-exact rational image of an f64 matrix. Throws NonFiniteEntry.
Matrix lift_to_rational(const Matrix& m);

/// Depth-six network for M with det(M) > 0 (f64 inputs are lifted first).
/// Throws OrientationError, OddDimension.
CouplingNetwork to_coupling_network(const Matrix& m, const CouplingOptions& opts);
inline CouplingNetwork to_coupling_network(const Matrix& m,
                                           DiagStrategy strategy = DiagStrategy::corner) {
  return to_coupling_network(m, CouplingOptions{strategy});
}

/// Volume-preserving network (every s = 0) for det(M) = 1. Throws NotUnimodular.
CouplingNetwork nice_network(const Matrix& m);

/// f64 matrix of a single layer and of the whole network.
Matrix coupling_layer_matrix(const CouplingLayer& layer, std::size_t m, std::size_t n);
Matrix network_matrix(const CouplingNetwork& net);

/// Product of the exact layer determinants.
Scalar exact_volume(const CouplingNetwork& net);

/// |M_hat - M|_inf / max(1, |M|_inf). Throws DimensionMismatch.
double reconstruction_error(const CouplingNetwork& net, const Matrix& m);

}  // namespace blocktri
