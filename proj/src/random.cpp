#include "blocktri/random.hpp"

namespace blocktri {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Scalar random_scalar(const Field& f, Rng& rng, int range) {
  if (const auto q = f.order()) {
    std::uniform_int_distribution<std::uint64_t> dist(0, *q - 1);
    return Scalar::from_residue(dist(rng), f);
  }
  std::uniform_int_distribution<int> dist(-range, range);
  return Scalar::from_int(dist(rng), f);
}

Scalar random_nonzero(const Field& f, Rng& rng, int range) {
  for (;;) {
    Scalar s = random_scalar(f, rng, range);
    if (!s.is_zero()) return s;
  }
}

Matrix random_matrix(const Field& f, std::size_t rows, std::size_t cols, Rng& rng, int range) {
  Matrix m(f, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_scalar(f, rng, range);
  }
  return m;
}

Matrix random_invertible(const Field& f, std::size_t n, Rng& rng, int range) {
  for (;;) {
    Matrix m = random_matrix(f, n, n, rng, range);
    if (!det(m).is_zero()) return m;
  }
}

Matrix random_special_linear(const Field& f, std::size_t n, Rng& rng, int range) {
  if (f.is_finite()) {
    Matrix m = random_invertible(f, n, rng, range);
    const Scalar d = det(m).inverse();
    for (std::size_t j = 0; j < n; ++j) m(0, j) *= d;
    return m;
  }
  Matrix m = Matrix::identity(f, n);
  if (n < 2) return m;
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> mult(-range, range);
  // Random row operations r_i += c r_j, then a random signed permutation
  // with determinant one.
  for (std::size_t step = 0; step < 2 * n; ++step) {
    const std::size_t i = idx(rng);
    std::size_t j = idx(rng);
    if (i == j) j = (j + 1) % n;
    int c_int = mult(rng);
    if (c_int == 0) c_int = 1;
    const Scalar c = Scalar::from_int(c_int, f);
    for (std::size_t k = 0; k < n; ++k) m(i, k) += c * m(j, k);
  }
  if (std::uniform_int_distribution<int>(0, 1)(rng)) {
    std::swap_ranges(&m(0, 0), &m(0, 0) + n, &m(1, 0));
    for (std::size_t k = 0; k < n; ++k) m(0, k) = -m(0, k);
  }
  return m;
}

}  // namespace blocktri
