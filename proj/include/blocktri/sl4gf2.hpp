#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blocktri/factor.hpp"

// Exhaustive machinery over SL_4(GF(2)) = GL_4(GF(2)), order 20160, with the
// 2 + 2 block split.
namespace blocktri::sl4gf2 {

/// Row-major 4x4 GF(2) matrix; entry (i, j) is bit 4*i + j.
using PackedMat4 = std::uint16_t;

inline constexpr PackedMat4 kIdentity = 0x8421;
inline constexpr std::size_t kGroupOrder = 20160;
inline constexpr std::uint8_t kUnreached = 0xff;

constexpr bool bit(PackedMat4 m, unsigned i, unsigned j) { return (m >> (4 * i + j)) & 1u; }

PackedMat4 mul(PackedMat4 a, PackedMat4 b);
bool invertible(PackedMat4 m);
/// Inverse by bitwise Gauss-Jordan; nullopt if singular.
std::optional<PackedMat4> inverse(PackedMat4 m);

PackedMat4 pack(const Matrix& m);
Matrix unpack(PackedMat4 m);

/// 2x2 block as a 4-bit code, A(0,0) most significant (lexicographic order).
unsigned block_code(PackedMat4 m, unsigned block_row, unsigned block_col);
bool upper_right_invertible(PackedMat4 m);

/// [I 0; A I] and [I A; 0 I] for the 2x2 block with lexicographic code a.
PackedMat4 lower_generator(unsigned a);
PackedMat4 upper_generator(unsigned a);
Matrix block_from_code(unsigned a);

/// Every element of the group in increasing packed order.
const std::vector<PackedMat4>& group_elements();

/// Generator order: the 16 Lower layers, then the 16 Upper layers, each by
/// lexicographic block. Index g < 16 is Lower(g), otherwise Upper(g - 16).
PackedMat4 generator(unsigned index);

/// Minimal word length over BL u BU (product-set semantics) per element,
/// with one BFS parent pointer per reached element.
struct ReachSet {
  int max_depth = 0;
  std::vector<std::uint8_t> depth;          // 65536 entries, kUnreached if outside
  std::vector<PackedMat4> parent;           // element one generator shorter
  std::vector<std::uint8_t> parent_gen;     // generator index applied on the right

  bool contains(PackedMat4 m, int d) const { return depth[m] <= d; }
  std::size_t count(int d) const;
  /// Generators whose product (left to right) equals m.
  std::vector<unsigned> word(PackedMat4 m) const;
};

/// set(d+1) = set(d) * (BL u BU), starting from set(0) = {I}.
ReachSet build_reach_set(int max_depth = 5);

/// Products of exactly the alternating pattern L U L U L, with the
/// deterministic parent pointers used to recover concrete layers.
struct AlternatingTable {
  std::array<std::vector<std::int32_t>, 5> prev;  // -1 if not in stage
  std::array<std::vector<std::int8_t>, 5> block;  // block code of last layer

  bool contains(PackedMat4 m) const { return prev[4][m] >= 0; }
};

const AlternatingTable& lulul_table();
const ReachSet& default_reach_set();

struct LemmaReport {
  std::size_t group_order = 0;
  std::size_t invertible_block_count = 0;
  std::size_t in_reach5 = 0;      // of those, inside set(5)
  std::size_t in_alternating = 0; // of those, inside L U L U L
  std::array<std::size_t, 7> depth_counts{};  // |set(d)|, d = 0..6
  bool pass = false;
  double seconds = 0.0;
};

/// Every element with invertible upper-right block is an L U L U L product.
/// Throws VerificationFailed otherwise.
LemmaReport verify_lemma_sl4gf2();

/// Concrete L U L U L layers for m. Throws SingularUpperRight if the
/// upper-right block is singular, NotFound if m is not in the table.
Factorization five_layer_lookup_gf2(PackedMat4 m);

/// Meet in the middle: m in set(5) iff a^{-1} m is in set(2) for some a in set(3).
bool in_set5_meet_in_middle(PackedMat4 m, const ReachSet& reach);

/// Elements outside set(5), each re-verified by meet in the middle.
std::vector<PackedMat4> find_nonrepresentable();
std::vector<PackedMat4> find_nonrepresentable(const ReachSet& reach);

/// Versioned JSON reach-set cache keyed by a hash of the generator list.
std::uint64_t generator_set_hash();
void save_reach_cache(const ReachSet& reach, const std::string& path);
std::optional<ReachSet> load_reach_cache(const std::string& path);

}  // namespace blocktri::sl4gf2
