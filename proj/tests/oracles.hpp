#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "blocktri/matrix.hpp"
#include "blocktri/random.hpp"

// Reference computations written independently of the library kernels.
namespace oracle {

using blocktri::Field;
using blocktri::Matrix;
using blocktri::Scalar;

inline Matrix naive_mul(const Matrix& a, const Matrix& b) {
  Matrix c(a.field(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Scalar acc = Scalar::zero(a.field());
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  }
  return c;
}

// Leibniz expansion over all permutations.
inline Scalar leibniz_det(const Matrix& a) {
  const std::size_t n = a.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Scalar total = Scalar::zero(a.field());
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    }
    Scalar term = Scalar::one(a.field());
    for (std::size_t i = 0; i < n; ++i) term *= a(i, perm[i]);
    total = inversions % 2 == 0 ? total + term : total - term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline Scalar horner(const std::vector<Scalar>& coeffs, const Scalar& x) {
  Scalar acc = Scalar::zero(x.field());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline Matrix scalar_minus(const Scalar& c, const Matrix& a) {
  Matrix r = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = -a(i, j);
    r(i, i) = c - a(i, i);
  }
  return r;
}

inline std::vector<Scalar> shift_poly(const std::vector<Scalar>& p, std::size_t k, const Field& f) {
  std::vector<Scalar> out(k, Scalar::zero(f));
  out.insert(out.end(), p.begin(), p.end());
  return out;
}

inline std::vector<Field> small_fields() {
  return {Field::prime(2), Field::prime(3), Field::gf4(), Field::prime(5), Field::prime(7),
          Field::rational()};
}

}  // namespace oracle
