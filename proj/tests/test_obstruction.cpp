#include "doctest.h"

#include <vector>

#include "blocktri/obstruction.hpp"
#include "blocktri/random.hpp"
#include "blocktri/sl4gf2.hpp"
#include "oracles.hpp"

using namespace blocktri;

namespace {

template <class Fn>
void expect_code(ErrorCode code, Fn&& fn) {
  try {
    fn();
    FAIL("expected " << to_string(code));
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

Matrix diag_ints(const Field& f, std::initializer_list<long long> values) {
  Vector v;
  for (long long x : values) v.push_back(Scalar::from_int(x, f));
  return Matrix::diagonal(f, v);
}

Scalar sign_pow(std::size_t k, const Field& f) { return Scalar::from_int(k % 2 == 0 ? 1 : -1, f); }

Scalar trace(const Matrix& a) {
  Scalar t = Scalar::zero(a.field());
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

// Direct search for units d, e with m + trace(M4 E) = n + trace(M1^{-1} D).
bool trace_equation_solvable(const Matrix& m1, const Matrix& m4) {
  const Field& f = m1.field();
  std::vector<Scalar> units;
  for (const auto& x : enumerate_elements(f)) {
    if (!x.is_zero()) units.push_back(x);
  }
  const std::size_t m = m1.rows();
  const std::size_t n = m4.rows();
  const Matrix inv = mat_inverse(m1);
  std::vector<std::size_t> idx(m + n, 0);
  for (;;) {
    Vector d, e;
    for (std::size_t i = 0; i < m; ++i) d.push_back(units[idx[i]]);
    for (std::size_t i = 0; i < n; ++i) e.push_back(units[idx[m + i]]);
    const Scalar lhs = Scalar::from_int(static_cast<long long>(m), f) + trace(m4 * Matrix::diagonal(f, e));
    const Scalar rhs = Scalar::from_int(static_cast<long long>(n), f) + trace(inv * Matrix::diagonal(f, d));
    if (lhs == rhs) return true;
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == units.size()) idx[k++] = 0;
    if (k == idx.size()) return false;
  }
}

Matrix random_diagonal(const Field& f, std::size_t k, Rng& rng, bool unit) {
  if (unit) return Matrix::identity(f, k);
  Vector v;
  for (std::size_t i = 0; i < k; ++i) v.push_back(random_nonzero(f, rng));
  return Matrix::diagonal(f, v);
}

Matrix lower_t(const Matrix& b, const Matrix& a, const Matrix& c) {
  return block_join({b, Matrix::zero(b.field(), b.rows(), c.cols()), a, c});
}

Matrix upper_t(const Matrix& b, const Matrix& a, const Matrix& c) {
  return block_join({b, a, Matrix::zero(b.field(), c.rows(), b.cols()), c});
}

}  // namespace

TEST_CASE("blockdiag witness examples") {
  const Field q = Field::rational();
  const auto [x2, y22] = build_blockdiag_witness(2, 2, q);
  CHECK(x2 == Matrix::from_ints(q, {{0, 1}, {1, 0}}));
  CHECK(y22 == Matrix::from_ints(q, {{1, 1}, {1, 0}}));
  const auto [x23, y23] = build_blockdiag_witness(2, 3, q);
  CHECK(y23(0, 0).is_zero());
  expect_code(ErrorCode::DimensionTooSmall, [&] { (void)build_blockdiag_witness(1, 3, q); });
  expect_code(ErrorCode::DimensionTooSmall, [&] { (void)build_blockdiag_witness(3, 1, q); });
}

TEST_CASE("blockdiag witness validity") {
  for (const auto& f : {Field::rational(), Field::prime(2), Field::prime(3), Field::prime(5)}) {
    for (std::size_t m = 2; m <= 6; ++m) {
      for (std::size_t n = 2; n <= 6; ++n) {
        const auto [x, y] = build_blockdiag_witness(m, n, f);
        const Scalar expected = sign_pow(m + 1, f);
        CHECK(oracle::leibniz_det(x) == expected);
        CHECK(det(y) == expected);
        for (std::size_t i = 0; i < m; ++i) {
          CHECK(x(i, i).is_zero());
          for (std::size_t j = 0; j < m; ++j) CHECK(x(i, j).is_one() == ((j + m - i) % m == 1));
        }
        const Scalar delta = Scalar::from_int(static_cast<long long>(m) - static_cast<long long>(n), f).is_zero()
                                 ? Scalar::one(f)
                                 : Scalar::zero(f);
        CHECK(y(0, 0) == delta);
        CHECK(y(n - 1, 0) == sign_pow(m + n, f));
        for (std::size_t i = 0; i + 1 < n; ++i) CHECK(y(i, i + 1).is_one());
        const Matrix w = blockdiag_witness_matrix(m, n, f);
        CHECK(det(w).is_one());
        CHECK(w == block_diag(mat_inverse(x), y));
      }
    }
  }
}

TEST_CASE("trace_obstruction examples") {
  const Field q = Field::rational();
  const auto [x, y] = build_blockdiag_witness(2, 2, q);
  CHECK(trace_obstruction(mat_inverse(x), y).obstructed);
  CHECK_FALSE(trace_obstruction(Matrix::identity(q, 3), Matrix::identity(q, 3)).obstructed);

  const Field gf3 = Field::prime(3);
  const Matrix m1 = Matrix::from_ints(gf3, {{0, 1}, {1, 0}});
  const Matrix m4 = Matrix::from_ints(gf3, {{1}});
  const auto report = trace_obstruction(m1, m4);
  CHECK(report.certificate["method"] == "enumeration");
  CHECK(report.certificate["tuples_checked"].get<std::size_t>() <= 8);
  CHECK(report.obstructed == !trace_equation_solvable(m1, m4));

  expect_code(ErrorCode::SingularMatrix,
              [&] { (void)trace_obstruction(Matrix::zero(q, 2, 2), Matrix::identity(q, 2)); });
}

TEST_CASE("trace_obstruction agrees with brute force and with the linear form") {
  Rng rng(3);
  for (const auto& f : {Field::prime(2), Field::prime(3), Field::gf4(), Field::prime(5)}) {
    for (int t = 0; t < 60; ++t) {
      const std::size_t m = 1 + rng() % 3;
      const std::size_t n = 1 + rng() % 3;
      Matrix m1 = random_invertible(f, m, rng);
      Matrix m4 = random_invertible(f, n, rng);
      if (t % 3 == 0 && n > 1) m4 = cyclic_shift(n, f) * Matrix::diagonal(f, random_diagonal(f, n, rng, false).diagonal_entries());
      const bool solvable = trace_equation_solvable(m1, m4);
      CHECK(trace_obstruction(m1, m4).obstructed == !solvable);
      const auto closed = trace_obstruction(m1, m4, 0);
      CHECK(closed.certificate["method"] == "linear_form");
      CHECK(closed.obstructed == !solvable);
    }
  }
}

TEST_CASE("trace_obstruction flags the witness family") {
  for (const auto& f : {Field::rational(), Field::prime(2), Field::prime(3), Field::prime(5)}) {
    for (std::size_t m = 2; m <= 5; ++m) {
      for (std::size_t n = 2; n <= 5; ++n) {
        const auto [x, y] = build_blockdiag_witness(m, n, f);
        CHECK(trace_obstruction(mat_inverse(x), y).obstructed);
      }
    }
  }
}

TEST_CASE("spectra_obstruction examples") {
  const Field gf5 = Field::prime(5);
  CHECK(spectra_obstruction(diag_ints(gf5, {2, 2}), diag_ints(gf5, {4, 1})).obstructed);
  const Field q = Field::rational();
  CHECK_FALSE(spectra_obstruction(Matrix::identity(q, 2), Matrix::identity(q, 2)).obstructed);
  const Field gf7 = Field::prime(7);
  CHECK(spectra_obstruction(diag_ints(gf7, {2, 3}), diag_ints(gf7, {2, 3})).obstructed);
  expect_code(ErrorCode::SingularMatrix,
              [&] { (void)spectra_obstruction(Matrix::zero(q, 2, 2), Matrix::identity(q, 2)); });
}

TEST_CASE("perm witness examples") {
  const Field gf5 = Field::prime(5);
  CHECK(build_perm_witness(2, 2, gf5) == diag_ints(gf5, {2, 2, 4, 1}));
  const Field gf4 = Field::gf4();
  const Scalar w = Scalar::gf4_symbol(2);
  const Vector expected{w, w, w, Scalar::one(gf4)};
  CHECK(build_perm_witness(2, 2, gf4) == Matrix::diagonal(gf4, expected));
  expect_code(ErrorCode::FieldTooSmall, [&] { (void)build_perm_witness(2, 2, Field::prime(3)); });
}

TEST_CASE("perm_sweep examples") {
  const Field gf5 = Field::prime(5);
  const auto report = perm_sweep(build_perm_witness(2, 2, gf5), 2, 2);
  CHECK(report.obstructed);
  CHECK(report.certificate["unobstructed_bipartitions"].empty());
  const Field q = Field::rational();
  const Vector gh{Scalar::from_int(2, q), Scalar::from_int(3, q), Scalar::parse("1/6", q), Scalar::one(q)};
  CHECK(perm_sweep(Matrix::diagonal(q, gh), 2, 2).obstructed);
  const auto id = perm_sweep(Matrix::identity(q, 4), 2, 2);
  CHECK_FALSE(id.obstructed);
  REQUIRE(id.bipartition.has_value());
  CHECK(*id.bipartition == std::vector<std::size_t>{0, 1});
  expect_code(ErrorCode::NotDiagonal,
              [&] { (void)perm_sweep(Matrix::from_ints(q, {{1, 1}, {0, 1}}), 1, 1); });
}

TEST_CASE("perm_sweep flags the perm witness for every small split") {
  for (const auto& f : {Field::gf4(), Field::prime(5), Field::rational()}) {
    for (std::size_t total = 4; total <= 6; ++total) {
      for (std::size_t m = 1; m < total; ++m) {
        CHECK(perm_sweep(build_perm_witness(m, total - m, f), m, total - m).obstructed);
      }
    }
  }
}

TEST_CASE("rank_one_case_check") {
  const auto gf2 = rank_one_case_check(3, Field::prime(2));
  CHECK(gf2.obstructed);
  CHECK(gf2.certificate["method"] == "entry_argument+enumeration");
  const auto q = rank_one_case_check(3, Field::rational());
  CHECK(q.obstructed);
  CHECK(q.certificate["method"] == "entry_argument");
  expect_code(ErrorCode::DimensionTooSmall, [&] { (void)rank_one_case_check(2, Field::rational()); });
  for (std::size_t m = 3; m <= 6; ++m) {
    for (const auto& f : {Field::prime(2), Field::prime(3), Field::prime(5), Field::rational()}) {
      CHECK(rank_one_case_check(m, f).obstructed);
    }
  }
}

TEST_CASE("spectra flags are sound against the GF(2) ground truth") {
  namespace s4 = blocktri::sl4gf2;
  const Field gf2 = Field::prime(2);
  const auto& reach = s4::default_reach_set();
  std::vector<Matrix> gl2;
  for (unsigned code = 0; code < 16; ++code) {
    const Matrix b = s4::block_from_code(code);
    if (is_invertible(b)) gl2.push_back(b);
  }
  REQUIRE(gl2.size() == 6);
  std::size_t flagged = 0;
  for (const auto& a : gl2) {
    for (const auto& b : gl2) {
      if (spectra_obstruction(a, b).obstructed) {
        ++flagged;
        CHECK_FALSE(reach.contains(s4::pack(block_diag(a, b)), 5));
      }
    }
  }
  CHECK(flagged > 0);
}

TEST_CASE("five-fold T-products replay the block identities") {
  Rng rng(17);
  std::size_t replayed = 0;
  for (const auto& f : {Field::prime(5), Field::rational()}) {
    for (int t = 0; t < 300; ++t) {
      const std::size_t m = 1 + rng() % 3;
      const std::size_t n = 1 + rng() % 3;
      const bool unit = t % 4 == 0;
      std::vector<Matrix> b, c;
      for (int i = 0; i < 5; ++i) {
        b.push_back(random_diagonal(f, m, rng, unit));
        c.push_back(random_diagonal(f, n, rng, unit));
      }
      const Matrix a1 = random_matrix(f, n, m, rng);
      const Matrix a2 = random_matrix(f, m, n, rng);
      const Matrix a3 = random_matrix(f, n, m, rng);
      const Matrix p = lower_t(b[0], a1, c[0]) * upper_t(b[1], a2, c[1]) * lower_t(b[2], a3, c[2]);
      const auto pv = block_split(p, m, n);
      if (!is_invertible(pv.m1)) continue;
      // Choose A4 and A5 so that the product is block diagonal.
      const Matrix a4 = -(mat_inverse(pv.m1) * pv.m2 * c[3]);
      const Matrix s = pv.m3 * a4 + pv.m4 * c[3];
      if (!is_invertible(s)) continue;
      const Matrix a5 = -(mat_inverse(s) * pv.m3 * b[3] * b[4]);
      const Matrix prod = p * upper_t(b[3], a4, c[3]) * lower_t(b[4], a5, c[4]);
      const auto v = block_split(prod, m, n);
      REQUIRE(v.m2.is_zero());
      REQUIRE(v.m3.is_zero());
      const Matrix m1_inv = mat_inverse(v.m1);
      const Matrix i_m = Matrix::identity(f, m);
      const Matrix i_n = Matrix::identity(f, n);

      CHECK(a2 * a3 == mat_inverse(b[0]) * v.m1 * mat_inverse(b[4]) * mat_inverse(b[3]) - b[1] * b[2]);
      CHECK(a4 * mat_inverse(c[3]) == -(b[3] * b[4] * m1_inv * b[0] * a2 * c[2]));
      const Matrix z = a3 * b[3] * b[4] * m1_inv * b[0];
      CHECK(a2 * z == i_m - b[1] * b[2] * b[3] * b[4] * m1_inv * b[0]);
      CHECK(z * a2 == i_n - mat_inverse(c[1]) * mat_inverse(c[0]) * v.m4 * mat_inverse(c[4]) *
                                mat_inverse(c[3]) * mat_inverse(c[2]));
      CHECK(trace(a2 * z) == trace(z * a2));
      CHECK_FALSE(trace_obstruction(v.m1, v.m4).obstructed);
      if (unit) CHECK_FALSE(spectra_obstruction(v.m1, v.m4).obstructed);
      ++replayed;
    }
  }
  CHECK(replayed > 300);
}

TEST_CASE("report serialization") {
  const auto report = spectra_obstruction(diag_ints(Field::prime(5), {2, 2}), diag_ints(Field::prime(5), {4, 1}));
  const auto j = to_json(report);
  CHECK(j["blocktri_schema"] == 1);
  CHECK(j["mode"] == "spectra");
  CHECK(j["obstructed"] == true);
}
