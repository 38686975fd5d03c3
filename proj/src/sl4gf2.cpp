#include "blocktri/sl4gf2.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include "json.hpp"

#include "blocktri/random.hpp"

namespace blocktri::sl4gf2 {

namespace {

constexpr std::size_t kTableSize = 1u << 16;

unsigned row_bits(PackedMat4 m, unsigned i) { return (m >> (4 * i)) & 0xfu; }

// 2x2 code (A00 A01 A10 A11 as bits 3..0) placed at block (br, bc).
PackedMat4 place_block(unsigned code, unsigned br, unsigned bc) {
  PackedMat4 out = 0;
  for (unsigned i = 0; i < 2; ++i) {
    for (unsigned j = 0; j < 2; ++j) {
      if ((code >> (3 - (2 * i + j))) & 1u) {
        out = static_cast<PackedMat4>(out | (1u << (4 * (2 * br + i) + (2 * bc + j))));
      }
    }
  }
  return out;
}

}  // namespace

PackedMat4 mul(PackedMat4 a, PackedMat4 b) {
  unsigned out = 0;
  for (unsigned i = 0; i < 4; ++i) {
    unsigned row = 0;
    const unsigned arow = row_bits(a, i);
    for (unsigned j = 0; j < 4; ++j) {
      if ((arow >> j) & 1u) row ^= row_bits(b, j);
    }
    out |= row << (4 * i);
  }
  return static_cast<PackedMat4>(out);
}

std::optional<PackedMat4> inverse(PackedMat4 m) {
  std::array<unsigned, 4> left{}, right{};
  for (unsigned i = 0; i < 4; ++i) {
    left[i] = row_bits(m, i);
    right[i] = 1u << i;
  }
  for (unsigned c = 0; c < 4; ++c) {
    unsigned p = c;
    while (p < 4 && !((left[p] >> c) & 1u)) ++p;
    if (p == 4) return std::nullopt;
    std::swap(left[p], left[c]);
    std::swap(right[p], right[c]);
    for (unsigned r = 0; r < 4; ++r) {
      if (r != c && ((left[r] >> c) & 1u)) {
        left[r] ^= left[c];
        right[r] ^= right[c];
      }
    }
  }
  unsigned out = 0;
  for (unsigned i = 0; i < 4; ++i) out |= right[i] << (4 * i);
  return static_cast<PackedMat4>(out);
}

bool invertible(PackedMat4 m) { return inverse(m).has_value(); }

PackedMat4 pack(const Matrix& m) {
  if (m.rows() != 4 || m.cols() != 4 || !(m.field() == Field::prime(2))) {
    throw Error(ErrorCode::DimensionMismatch, "packing needs a 4x4 matrix over GF(2)");
  }
  unsigned out = 0;
  for (unsigned i = 0; i < 4; ++i) {
    for (unsigned j = 0; j < 4; ++j) {
      if (!m(i, j).is_zero()) out |= 1u << (4 * i + j);
    }
  }
  return static_cast<PackedMat4>(out);
}

Matrix unpack(PackedMat4 m) {
  const Field f = Field::prime(2);
  Matrix out(f, 4, 4);
  for (unsigned i = 0; i < 4; ++i) {
    for (unsigned j = 0; j < 4; ++j) out(i, j) = Scalar::from_int(bit(m, i, j), f);
  }
  return out;
}

unsigned block_code(PackedMat4 m, unsigned br, unsigned bc) {
  unsigned code = 0;
  for (unsigned i = 0; i < 2; ++i) {
    for (unsigned j = 0; j < 2; ++j) code = (code << 1) | (bit(m, 2 * br + i, 2 * bc + j) ? 1u : 0u);
  }
  return code;
}

bool upper_right_invertible(PackedMat4 m) {
  const unsigned c = block_code(m, 0, 1);
  const unsigned a = (c >> 3) & 1u, b = (c >> 2) & 1u, d = (c >> 1) & 1u, e = c & 1u;
  return ((a & e) ^ (b & d)) != 0;
}

PackedMat4 lower_generator(unsigned a) {
  return static_cast<PackedMat4>(kIdentity | place_block(a, 1, 0));
}

PackedMat4 upper_generator(unsigned a) {
  return static_cast<PackedMat4>(kIdentity | place_block(a, 0, 1));
}

Matrix block_from_code(unsigned a) {
  const Field f = Field::prime(2);
  Matrix out(f, 2, 2);
  for (unsigned i = 0; i < 2; ++i) {
    for (unsigned j = 0; j < 2; ++j) {
      out(i, j) = Scalar::from_int((a >> (3 - (2 * i + j))) & 1u, f);
    }
  }
  return out;
}

PackedMat4 generator(unsigned index) {
  return index < 16 ? lower_generator(index) : upper_generator(index - 16);
}

const std::vector<PackedMat4>& group_elements() {
  static const std::vector<PackedMat4> elements = [] {
    std::vector<PackedMat4> out;
    for (std::size_t m = 0; m < kTableSize; ++m) {
      if (invertible(static_cast<PackedMat4>(m))) out.push_back(static_cast<PackedMat4>(m));
    }
    return out;
  }();
  return elements;
}

std::size_t ReachSet::count(int d) const {
  return static_cast<std::size_t>(std::count_if(
      depth.begin(), depth.end(), [d](std::uint8_t x) { return x != kUnreached && x <= d; }));
}

std::vector<unsigned> ReachSet::word(PackedMat4 m) const {
  if (depth[m] == kUnreached) throw Error(ErrorCode::NotFound, "element not reached");
  std::vector<unsigned> out;
  while (depth[m] > 0) {
    out.push_back(parent_gen[m]);
    m = parent[m];
  }
  std::reverse(out.begin(), out.end());
  return out;
}

ReachSet build_reach_set(int max_depth) {
  ReachSet reach;
  reach.max_depth = max_depth;
  reach.depth.assign(kTableSize, kUnreached);
  reach.parent.assign(kTableSize, 0);
  reach.parent_gen.assign(kTableSize, 0);
  reach.depth[kIdentity] = 0;
  std::vector<PackedMat4> frontier{kIdentity};
  for (int d = 0; d < max_depth && !frontier.empty(); ++d) {
    std::vector<PackedMat4> next;
    for (PackedMat4 g : frontier) {
      for (unsigned gen = 0; gen < 32; ++gen) {
        const PackedMat4 h = mul(g, generator(gen));
        if (reach.depth[h] != kUnreached) continue;
        reach.depth[h] = static_cast<std::uint8_t>(d + 1);
        reach.parent[h] = g;
        reach.parent_gen[h] = static_cast<std::uint8_t>(gen);
        next.push_back(h);
      }
    }
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
  }
  return reach;
}

const ReachSet& default_reach_set() {
  static const ReachSet reach = build_reach_set(6);
  return reach;
}

const AlternatingTable& lulul_table() {
  static const AlternatingTable table = [] {
    AlternatingTable t;
    for (auto& v : t.prev) v.assign(kTableSize, -1);
    for (auto& v : t.block) v.assign(kTableSize, -1);
    std::vector<PackedMat4> stage;
    for (unsigned a = 0; a < 16; ++a) {
      const PackedMat4 g = lower_generator(a);
      if (t.prev[0][g] >= 0) continue;
      t.prev[0][g] = kIdentity;
      t.block[0][g] = static_cast<std::int8_t>(a);
      stage.push_back(g);
    }
    for (std::size_t s = 1; s < 5; ++s) {
      std::sort(stage.begin(), stage.end());
      std::vector<PackedMat4> next;
      const bool lower = (s % 2) == 0;
      for (PackedMat4 g : stage) {
        for (unsigned a = 0; a < 16; ++a) {
          const PackedMat4 h = mul(g, lower ? lower_generator(a) : upper_generator(a));
          if (t.prev[s][h] >= 0) continue;
          t.prev[s][h] = g;
          t.block[s][h] = static_cast<std::int8_t>(a);
          next.push_back(h);
        }
      }
      stage = std::move(next);
    }
    return t;
  }();
  return table;
}

LemmaReport verify_lemma_sl4gf2() {
  const auto start = std::chrono::steady_clock::now();
  LemmaReport report;
  const ReachSet reach = build_reach_set(6);
  const AlternatingTable& alt = lulul_table();
  const auto& group = group_elements();
  report.group_order = group.size();
  for (int d = 0; d <= 6; ++d) report.depth_counts[static_cast<std::size_t>(d)] = reach.count(d);
  for (PackedMat4 g : group) {
    if (!upper_right_invertible(g)) continue;
    ++report.invertible_block_count;
    if (reach.contains(g, 5)) ++report.in_reach5;
    if (alt.contains(g)) ++report.in_alternating;
  }
  report.pass = report.group_order == kGroupOrder &&
                report.in_reach5 == report.invertible_block_count &&
                report.in_alternating == report.invertible_block_count;
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!report.pass) {
    throw Error(ErrorCode::VerificationFailed,
                "an element with invertible upper-right block needs more than five layers");
  }
  return report;
}

Factorization five_layer_lookup_gf2(PackedMat4 m) {
  if (!invertible(m)) throw Error(ErrorCode::NotFound, "matrix is not in SL_4(GF(2))");
  if (!upper_right_invertible(m)) {
    throw Error(ErrorCode::SingularUpperRight, "upper-right block is singular");
  }
  const AlternatingTable& alt = lulul_table();
  if (!alt.contains(m)) throw Error(ErrorCode::NotFound, "no L U L U L word found");
  std::array<unsigned, 5> blocks{};
  PackedMat4 cur = m;
  for (int s = 4; s >= 0; --s) {
    blocks[static_cast<std::size_t>(s)] = static_cast<unsigned>(alt.block[static_cast<std::size_t>(s)][cur]);
    cur = static_cast<PackedMat4>(alt.prev[static_cast<std::size_t>(s)][cur]);
  }
  Factorization f;
  f.m = 2;
  f.n = 2;
  f.field = Field::prime(2);
  f.kind = FactorizationKind::lulul5;
  for (std::size_t s = 0; s < 5; ++s) {
    Matrix a = block_from_code(blocks[s]);
    f.layers.push_back(s % 2 == 0 ? BlockLayer::lower(std::move(a)) : BlockLayer::upper(std::move(a)));
  }
  return f;
}

bool in_set5_meet_in_middle(PackedMat4 m, const ReachSet& reach) {
  for (PackedMat4 a : group_elements()) {
    if (!reach.contains(a, 3)) continue;
    if (reach.contains(mul(*inverse(a), m), 2)) return true;
  }
  return false;
}

std::vector<PackedMat4> find_nonrepresentable() { return find_nonrepresentable(default_reach_set()); }

std::vector<PackedMat4> find_nonrepresentable(const ReachSet& reach) {
  if (reach.max_depth < 5) throw Error(ErrorCode::DimensionTooSmall, "reach set must cover depth 5");
  std::vector<PackedMat4> out;
  for (PackedMat4 g : group_elements()) {
    if (reach.contains(g, 5)) continue;
    if (in_set5_meet_in_middle(g, reach)) {
      throw Error(ErrorCode::VerificationFailed, "BFS and meet in the middle disagree");
    }
    out.push_back(g);
  }
  return out;
}

std::uint64_t generator_set_hash() {
  std::string bytes;
  for (unsigned g = 0; g < 32; ++g) bytes += std::to_string(generator(g)) + ",";
  return fnv1a(bytes);
}

void save_reach_cache(const ReachSet& reach, const std::string& path) {
  nlohmann::json doc;
  doc["blocktri_schema"] = 1;
  doc["kind"] = "sl4gf2_reach_cache";
  doc["version"] = 1;
  doc["generator_hash"] = generator_set_hash();
  doc["max_depth"] = reach.max_depth;
  nlohmann::json entries = nlohmann::json::array();
  for (PackedMat4 g : group_elements()) {
    if (reach.depth[g] == kUnreached) continue;
    entries.push_back({g, reach.depth[g], reach.parent[g], reach.parent_gen[g]});
  }
  doc["entries"] = std::move(entries);
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write cache", path);
  out << doc.dump() << "\n";
}

std::optional<ReachSet> load_reach_cache(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  nlohmann::json doc;
  try {
    in >> doc;
    if (doc.at("kind") != "sl4gf2_reach_cache" || doc.at("version") != 1 ||
        doc.at("generator_hash").get<std::uint64_t>() != generator_set_hash()) {
      return std::nullopt;
    }
    ReachSet reach;
    reach.max_depth = doc.at("max_depth").get<int>();
    reach.depth.assign(kTableSize, kUnreached);
    reach.parent.assign(kTableSize, 0);
    reach.parent_gen.assign(kTableSize, 0);
    for (const auto& e : doc.at("entries")) {
      const auto g = e.at(0).get<PackedMat4>();
      reach.depth[g] = e.at(1).get<std::uint8_t>();
      reach.parent[g] = e.at(2).get<PackedMat4>();
      reach.parent_gen[g] = e.at(3).get<std::uint8_t>();
    }
    return reach;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

}  // namespace blocktri::sl4gf2
