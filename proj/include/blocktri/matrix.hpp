#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "blocktri/field.hpp"

namespace blocktri {

using Vector = std::vector<Scalar>;

/// Dense row-major matrix over a single Field. A value type: operations
/// return fresh matrices.
class Matrix {
 public:
  Matrix() : field_(Field::rational()) {}
  Matrix(const Field& f, std::size_t rows, std::size_t cols);

  static Matrix zero(const Field& f, std::size_t rows, std::size_t cols) {
    return Matrix(f, rows, cols);
  }
  static Matrix identity(const Field& f, std::size_t n);
  static Matrix diagonal(std::span<const Scalar> entries);
  static Matrix diagonal(const Field& f, std::span<const Scalar> entries);
  static Matrix from_rows(const Field& f, const std::vector<std::vector<Scalar>>& rows);
  /// Integer literals mapped through Z -> F.
  static Matrix from_ints(const Field& f, const std::vector<std::vector<long long>>& rows);
  /// A single column.
  static Matrix column(const Field& f, std::span<const Scalar> v);

  const Field& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  Vector row(std::size_t i) const;
  Vector col(std::size_t j) const;
  Vector diagonal_entries() const;

  bool is_zero() const;
  bool is_identity() const;
  bool is_diagonal() const;
  bool is_scalar() const;

  bool operator==(const Matrix& other) const;

  std::string to_string() const;

 private:
  Field field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(const Scalar& s, const Matrix& a);
Vector operator*(const Matrix& a, const Vector& v);

inline Matrix mat_mul(const Matrix& a, const Matrix& b) { return a * b; }
Matrix transpose(const Matrix& a);

/// Gauss-Jordan. Exact fields pivot on the first nonzero entry, f64 uses
/// partial pivoting. Throws SingularMatrix.
Matrix mat_inverse(const Matrix& a);

/// Determinant by elimination; zero for singular input.
Scalar det(const Matrix& a);

std::size_t rank(const Matrix& a);
bool is_invertible(const Matrix& a);

/// Reduced row echelon form; pivot columns returned through `pivots`.
Matrix rref(const Matrix& a, std::vector<std::size_t>* pivots = nullptr);

/// Basis of the right null space, one vector per free column of the RREF.
std::vector<Vector> kernel_basis(const Matrix& a);

/// Coefficients of det(tI - A) in ascending degree (c0, c1, ..., 1), by the
/// division-free Berkowitz recurrence.
std::vector<Scalar> charpoly(const Matrix& a);

/// Evaluates a polynomial (ascending coefficients) at a square matrix.
Matrix poly_eval(std::span<const Scalar> coeffs, const Matrix& a);

Matrix submatrix(const Matrix& a, std::size_t row0, std::size_t col0, std::size_t rows,
                 std::size_t cols);
Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);
Matrix from_columns(const Field& f, std::size_t rows, const std::vector<Vector>& columns);

struct BlockView {
  Matrix m1;  // m x m
  Matrix m2;  // m x n
  Matrix m3;  // n x m
  Matrix m4;  // n x n
};

BlockView block_split(const Matrix& m, std::size_t top, std::size_t bottom);
Matrix block_join(const BlockView& v);
Matrix block_diag(const Matrix& a, const Matrix& b);

/// P_pi M P_pi^{-1}, where P_pi permutes the columns of I by pi, i.e. the
/// result has entry (pi[i], pi[j]) = M(i, j).
Matrix permute_conjugate(const Matrix& m, std::span<const std::size_t> pi);

/// Entrywise conversion to f64; rationals are truncated toward zero.
Matrix to_double_matrix(const Matrix& m);

}  // namespace blocktri
