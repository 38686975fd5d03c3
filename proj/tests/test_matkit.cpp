#include "doctest.h"

#include <numeric>

#include "blocktri/matrix.hpp"
#include "blocktri/random.hpp"
#include "oracles.hpp"

using namespace blocktri;

namespace {

Matrix ints(const Field& f, const std::vector<std::vector<long long>>& rows) {
  return Matrix::from_ints(f, rows);
}

template <class Fn>
void expect_code(ErrorCode code, Fn&& fn) {
  try {
    fn();
    FAIL("expected " << to_string(code));
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

std::vector<Scalar> coeffs(const Field& f, std::initializer_list<long long> values) {
  std::vector<Scalar> out;
  for (long long v : values) out.push_back(Scalar::from_int(v, f));
  return out;
}

}  // namespace

TEST_CASE("mat_mul examples") {
  const Field q = Field::rational();
  Rng rng(1);
  const Matrix a = random_matrix(q, 3, 3, rng);
  CHECK(Matrix::identity(q, 3) * a == a);
  const Field gf2 = Field::prime(2);
  const Matrix swap = ints(gf2, {{0, 1}, {1, 0}});
  CHECK((swap * swap).is_identity());
  const Field gf3 = Field::prime(3);
  CHECK(ints(gf3, {{1, 1}, {0, 1}}) * ints(gf3, {{1, 0}, {1, 1}}) ==
        ints(gf3, {{2, 1}, {1, 1}}));
  expect_code(ErrorCode::DimensionMismatch, [&] { (void)(Matrix(q, 2, 3) * Matrix(q, 2, 3)); });
  expect_code(ErrorCode::FieldMismatch,
              [&] { (void)(Matrix::identity(gf2, 2) * Matrix::identity(gf3, 2)); });
}

TEST_CASE("mat_mul agrees with the naive product") {
  Rng rng(2);
  for (const auto& f : oracle::small_fields()) {
    for (int t = 0; t < 20; ++t) {
      const Matrix a = random_matrix(f, 3, 4, rng);
      const Matrix b = random_matrix(f, 4, 2, rng);
      CHECK(a * b == oracle::naive_mul(a, b));
    }
  }
  const Field q = Field::rational();
  const Matrix a = Matrix::from_rows(q, {{Scalar::parse("1/3", q), Scalar::parse("-2/7", q)}});
  const Matrix b = Matrix::from_rows(q, {{Scalar::parse("3/5", q)}, {Scalar::parse("7/4", q)}});
  CHECK((a * b)(0, 0) == Scalar::parse("-3/10", q));
}

TEST_CASE("mat_inverse examples") {
  const Field q = Field::rational();
  CHECK(mat_inverse(Matrix::identity(q, 3)).is_identity());
  const Matrix swap = ints(q, {{0, 1}, {1, 0}});
  CHECK(mat_inverse(swap) == swap);
  const Field gf2 = Field::prime(2);
  const Matrix u = ints(gf2, {{1, 1}, {0, 1}});
  CHECK(mat_inverse(u) == u);
  expect_code(ErrorCode::SingularMatrix, [&] { (void)mat_inverse(ints(q, {{1, 2}, {2, 4}})); });
  const Matrix fl = to_double_matrix(ints(q, {{4, 7}, {2, 6}}));
  const Matrix inv = mat_inverse(fl);
  CHECK(inv(0, 0).to_double() == doctest::Approx(0.6));
  CHECK(inv(1, 0).to_double() == doctest::Approx(-0.2));
}

TEST_CASE("det examples") {
  for (const auto& f : oracle::small_fields()) CHECK(det(Matrix::identity(f, 4)).is_one());
  const Field gf5 = Field::prime(5);
  CHECK(det(ints(gf5, {{2, 0}, {0, 3}})).is_one());
  const Field q = Field::rational();
  Matrix x(q, 3, 3);
  for (std::size_t i = 0; i < 3; ++i) x(i, (i + 1) % 3) = Scalar::one(q);
  CHECK(det(x).is_one());
  CHECK(det(ints(q, {{1, 2}, {2, 4}})).is_zero());
}

TEST_CASE("det agrees with Leibniz expansion") {
  Rng rng(3);
  for (const auto& f : oracle::small_fields()) {
    for (std::size_t n = 1; n <= 5; ++n) {
      const Matrix a = random_matrix(f, n, n, rng);
      CHECK(det(a) == oracle::leibniz_det(a));
    }
  }
}

TEST_CASE("kernel_basis examples") {
  const Field q = Field::rational();
  CHECK(kernel_basis(Matrix::identity(q, 3)).empty());
  CHECK(kernel_basis(Matrix::zero(q, 2, 2)).size() == 2);
  const auto k = kernel_basis(ints(q, {{1, 0}, {0, 0}}));
  REQUIRE(k.size() == 1);
  CHECK(k[0][0].is_zero());
  CHECK_FALSE(k[0][1].is_zero());
  expect_code(ErrorCode::UnsupportedField,
              [&] { (void)kernel_basis(Matrix::identity(Field::float64(), 2)); });
}

TEST_CASE("kernel_basis vectors are annihilated and independent") {
  Rng rng(4);
  for (const auto& f : oracle::small_fields()) {
    for (int t = 0; t < 20; ++t) {
      const Matrix a = random_matrix(f, 3, 5, rng, 1);
      const auto k = kernel_basis(a);
      CHECK(k.size() + rank(a) == 5);
      for (const auto& v : k) {
        for (const auto& x : a * v) CHECK(x.is_zero());
      }
      if (!k.empty()) CHECK(rank(from_columns(f, 5, k)) == k.size());
    }
  }
}

TEST_CASE("charpoly examples") {
  const Field q = Field::rational();
  CHECK(charpoly(Matrix::zero(q, 2, 2)) == coeffs(q, {0, 0, 1}));
  CHECK(charpoly(Matrix::identity(q, 2)) == coeffs(q, {1, -2, 1}));
  CHECK(charpoly(ints(q, {{0, 1}, {1, 0}})) == coeffs(q, {-1, 0, 1}));
  expect_code(ErrorCode::UnsupportedField,
              [&] { (void)charpoly(Matrix::identity(Field::float64(), 2)); });
}

TEST_CASE("charpoly agrees with det(cI - A) at sample points") {
  Rng rng(5);
  for (const auto& f : {Field::prime(7), Field::prime(11), Field::rational()}) {
    for (std::size_t n = 1; n <= 5; ++n) {
      const Matrix a = random_matrix(f, n, n, rng);
      const auto p = charpoly(a);
      REQUIRE(p.size() == n + 1);
      CHECK(p.back().is_one());
      for (long long c = 0; c <= static_cast<long long>(n); ++c) {
        const Scalar x = Scalar::from_int(c, f);
        CHECK(oracle::horner(p, x) == oracle::leibniz_det(oracle::scalar_minus(x, a)));
      }
    }
  }
}

TEST_CASE("Cayley-Hamilton") {
  Rng rng(6);
  for (const auto& f : oracle::small_fields()) {
    for (std::size_t n : {2u, 3u}) {
      for (int t = 0; t < 10; ++t) {
        const Matrix a = random_matrix(f, n, n, rng);
        CHECK(poly_eval(charpoly(a), a).is_zero());
      }
    }
  }
}

TEST_CASE("block split and join") {
  const Field gf7 = Field::prime(7);
  const auto v = block_split(Matrix::identity(gf7, 4), 2, 2);
  CHECK(v.m1.is_identity());
  CHECK(v.m2.is_zero());
  CHECK(v.m3.is_zero());
  CHECK(v.m4.is_identity());
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    const Matrix m = random_matrix(gf7, 4, 4, rng);
    CHECK(block_join(block_split(m, 2, 2)) == m);
    CHECK(block_join(block_split(m, 3, 1)) == m);
  }
  const auto s = block_split(random_matrix(gf7, 4, 4, rng), 3, 1);
  CHECK((s.m1.rows() == 3 && s.m1.cols() == 3));
  CHECK((s.m2.rows() == 3 && s.m2.cols() == 1));
  CHECK((s.m3.rows() == 1 && s.m3.cols() == 3));
  CHECK((s.m4.rows() == 1 && s.m4.cols() == 1));
  expect_code(ErrorCode::DimensionMismatch,
              [&] { (void)block_split(Matrix::identity(gf7, 4), 2, 1); });
}

TEST_CASE("permute_conjugate") {
  const Field q = Field::rational();
  Rng rng(8);
  const Matrix m = random_matrix(q, 3, 3, rng);
  const std::vector<std::size_t> id{0, 1, 2};
  CHECK(permute_conjugate(m, id) == m);
  const std::vector<std::size_t> swap{1, 0};
  CHECK(permute_conjugate(ints(q, {{2, 0}, {0, 5}}), swap) == ints(q, {{5, 0}, {0, 2}}));
  const Field gf5 = Field::prime(5);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = random_matrix(gf5, 4, 4, rng);
    std::vector<std::size_t> pi(4);
    std::iota(pi.begin(), pi.end(), 0);
    std::shuffle(pi.begin(), pi.end(), rng);
    const Matrix b = permute_conjugate(a, pi);
    CHECK(charpoly(b) == charpoly(a));
    CHECK(det(b) == det(a));
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) CHECK(b(pi[i], pi[j]) == a(i, j));
    }
  }
  const std::vector<std::size_t> short_pi{0, 1};
  expect_code(ErrorCode::DimensionMismatch, [&] { (void)permute_conjugate(m, short_pi); });
}

TEST_CASE("associativity and inverse postcondition") {
  Rng rng(9);
  for (const auto& f : oracle::small_fields()) {
    CAPTURE(f.to_string());
    for (int t = 0; t < 200; ++t) {
      const Matrix a = random_matrix(f, 3, 3, rng);
      const Matrix b = random_matrix(f, 3, 3, rng);
      const Matrix c = random_matrix(f, 3, 3, rng);
      CHECK((a * b) * c == a * (b * c));
      const Matrix g = random_invertible(f, 3, rng);
      CHECK((g * mat_inverse(g)).is_identity());
      CHECK(det(a * b) == det(a) * det(b));
    }
  }
}

TEST_CASE("Flanders identity") {
  Rng rng(10);
  for (const auto& f : {Field::prime(2), Field::prime(5), Field::rational()}) {
    for (int t = 0; t < 60; ++t) {
      const std::size_t m = 1 + rng() % 4;
      const std::size_t n = 1 + rng() % 4;
      const Matrix a = random_matrix(f, m, n, rng);
      const Matrix b = random_matrix(f, n, m, rng);
      CHECK(oracle::shift_poly(charpoly(a * b), n, f) ==
            oracle::shift_poly(charpoly(b * a), m, f));
    }
  }
}

TEST_CASE("to_double_matrix") {
  const Field q = Field::rational();
  const Matrix m = Matrix::from_rows(q, {{Scalar::parse("1/4", q), Scalar::parse("-3", q)}});
  const Matrix d = to_double_matrix(m);
  CHECK(d.field() == Field::float64());
  CHECK(d(0, 0).to_double() == 0.25);
  CHECK(d(0, 1).to_double() == -3.0);
}
