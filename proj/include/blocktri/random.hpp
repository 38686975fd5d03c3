#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "blocktri/matrix.hpp"

namespace blocktri {

using Rng = std::mt19937_64;

/// 64-bit FNV-1a; stable across platforms, used to seed searches from a
/// matrix's canonical serialization.
std::uint64_t fnv1a(std::string_view bytes);

/// Uniform element of a finite field, or an integer in [-range, range] for
/// Q and f64.
Scalar random_scalar(const Field& f, Rng& rng, int range = 3);
Scalar random_nonzero(const Field& f, Rng& rng, int range = 3);
Matrix random_matrix(const Field& f, std::size_t rows, std::size_t cols, Rng& rng, int range = 3);
Matrix random_invertible(const Field& f, std::size_t n, Rng& rng, int range = 3);

/// Random element of SL_n. Over Q this is a product of elementary
/// unitriangular matrices, so the entries stay integral and small.
Matrix random_special_linear(const Field& f, std::size_t n, Rng& rng, int range = 3);

}  // namespace blocktri
