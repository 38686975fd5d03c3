#include "blocktri/matrix.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace blocktri {

namespace {

void require_same_field(const Matrix& a, const Matrix& b) {
  if (!(a.field() == b.field())) {
    throw Error(ErrorCode::FieldMismatch, "matrices live in different fields",
                a.field().to_string() + " vs " + b.field().to_string());
  }
}

void require_square(const Matrix& a, const char* what) {
  if (!a.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " needs a square matrix",
                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

void require_exact(const Field& f, const char* what) {
  if (!f.is_exact()) {
    throw Error(ErrorCode::UnsupportedField, std::string(what) + " needs an exact field");
  }
}

// Row index of the pivot for column `col` at or below `start`, or rows() if
// none. Exact fields take the first nonzero, f64 the largest magnitude.
std::size_t find_pivot(const Matrix& a, std::size_t start, std::size_t col) {
  if (a.field().is_exact()) {
    for (std::size_t r = start; r < a.rows(); ++r) {
      if (!a(r, col).is_zero()) return r;
    }
    return a.rows();
  }
  std::size_t best = a.rows();
  double best_mag = 0.0;
  for (std::size_t r = start; r < a.rows(); ++r) {
    const double mag = std::abs(a(r, col).to_double());
    if (mag > best_mag) {
      best_mag = mag;
      best = r;
    }
  }
  return best;
}

void swap_rows(Matrix& a, std::size_t r1, std::size_t r2) {
  if (r1 == r2) return;
  for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r1, j), a(r2, j));
}

}  // namespace

Matrix::Matrix(const Field& f, std::size_t rows, std::size_t cols)
    : field_(f), rows_(rows), cols_(cols), data_(rows * cols, Scalar::zero(f)) {}

Matrix Matrix::identity(const Field& f, std::size_t n) {
  Matrix m(f, n, n);
  const Scalar one = Scalar::one(f);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
  return m;
}

Matrix Matrix::diagonal(std::span<const Scalar> entries) {
  if (entries.empty()) throw Error(ErrorCode::DimensionMismatch, "empty diagonal");
  return diagonal(entries.front().field(), entries);
}

Matrix Matrix::diagonal(const Field& f, std::span<const Scalar> entries) {
  Matrix m(f, entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!(entries[i].field() == f)) throw Error(ErrorCode::FieldMismatch, "diagonal entry field");
    m(i, i) = entries[i];
  }
  return m;
}

Matrix Matrix::from_rows(const Field& f, const std::vector<std::vector<Scalar>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.front().size() : 0;
  Matrix m(f, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
    for (std::size_t j = 0; j < c; ++j) {
      if (!(rows[i][j].field() == f)) throw Error(ErrorCode::FieldMismatch, "entry field");
      m(i, j) = rows[i][j];
    }
  }
  return m;
}

Matrix Matrix::from_ints(const Field& f, const std::vector<std::vector<long long>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.front().size() : 0;
  Matrix m(f, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = Scalar::from_int(rows[i][j], f);
  }
  return m;
}

Matrix Matrix::column(const Field& f, std::span<const Scalar> v) {
  Matrix m(f, v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

Vector Matrix::row(std::size_t i) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

Vector Matrix::col(std::size_t j) const {
  Vector out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out.push_back((*this)(i, j));
  return out;
}

Vector Matrix::diagonal_entries() const {
  Vector out;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) out.push_back((*this)(i, i));
  return out;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_) {
    if (!x.is_zero()) return false;
  }
  return true;
}

bool Matrix::is_identity() const {
  if (!is_square()) return false;
  return *this == identity(field_, rows_);
}

bool Matrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (i != j && !(*this)(i, j).is_zero()) return false;
    }
  }
  return true;
}

bool Matrix::is_scalar() const {
  if (!is_square() || !is_diagonal()) return false;
  for (std::size_t i = 1; i < rows_; ++i) {
    if (!((*this)(i, i) == (*this)(0, 0))) return false;
  }
  return true;
}

bool Matrix::operator==(const Matrix& other) const {
  return field_ == other.field_ && rows_ == other.rows_ && cols_ == other.cols_ &&
         data_ == other.data_;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j).to_string();
  }
  os << "] over " << field_.to_string();
  return os.str();
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix sum shape mismatch");
  }
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) += b(i, j);
  }
  return out;
}

Matrix operator-(const Matrix& a) {
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = -a(i, j);
  }
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix difference shape mismatch");
  }
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) -= b(i, j);
  }
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "inner dimensions differ",
                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()));
  }
  Matrix out(a.field(), a.rows(), b.cols());
  if (a.field().kind() == FieldKind::rational) {
    // Sum each entry as one unreduced fraction; a single gcd at the end.
    mpz_class num, den, p, q;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < b.cols(); ++j) {
        num = 0;
        den = 1;
        for (std::size_t k = 0; k < a.cols(); ++k) {
          if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
          const mpq_class& x = a(i, k).rational();
          const mpq_class& y = b(k, j).rational();
          p = x.get_num() * y.get_num();
          q = x.get_den() * y.get_den();
          if (q == den) {
            num += p;
          } else if (den == 1) {
            num = num * q + p;
            den = q;
          } else {
            num = num * q + p * den;
            den *= q;
          }
        }
        mpq_class r(num, den);
        r.canonicalize();
        out(i, j) = Scalar::from_rational(r);
      }
    }
    return out;
  }
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Scalar& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (b(k, j).is_zero()) continue;
        out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

Matrix operator*(const Scalar& s, const Matrix& a) {
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = s * a(i, j);
  }
  return out;
}

Vector operator*(const Matrix& a, const Vector& v) {
  if (a.cols() != v.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector shape");
  Vector out(a.rows(), Scalar::zero(a.field()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
  }
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.field(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  }
  return out;
}

Matrix mat_inverse(const Matrix& a) {
  require_square(a, "inverse");
  const std::size_t n = a.rows();
  Matrix work = a;
  Matrix inv = Matrix::identity(a.field(), n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t p = find_pivot(work, c, c);
    if (p == n || work(p, c).is_zero()) {
      throw Error(ErrorCode::SingularMatrix, "matrix is singular", a.to_string());
    }
    swap_rows(work, p, c);
    swap_rows(inv, p, c);
    const Scalar pinv = work(c, c).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      work(c, j) *= pinv;
      inv(c, j) *= pinv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || work(r, c).is_zero()) continue;
      const Scalar factor = work(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        if (!work(c, j).is_zero()) work(r, j) -= factor * work(c, j);
        if (!inv(c, j).is_zero()) inv(r, j) -= factor * inv(c, j);
      }
    }
  }
  return inv;
}

Scalar det(const Matrix& a) {
  require_square(a, "det");
  const std::size_t n = a.rows();
  Matrix work = a;
  Scalar result = Scalar::one(a.field());
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t p = find_pivot(work, c, c);
    if (p == n || work(p, c).is_zero()) return Scalar::zero(a.field());
    if (p != c) {
      swap_rows(work, p, c);
      result = -result;
    }
    result *= work(c, c);
    const Scalar pinv = work(c, c).inverse();
    for (std::size_t r = c + 1; r < n; ++r) {
      if (work(r, c).is_zero()) continue;
      const Scalar factor = work(r, c) * pinv;
      for (std::size_t j = c; j < n; ++j) work(r, j) -= factor * work(c, j);
    }
  }
  return result;
}

Matrix rref(const Matrix& a, std::vector<std::size_t>* pivots) {
  require_exact(a.field(), "rref");
  Matrix work = a;
  std::size_t row = 0;
  if (pivots) pivots->clear();
  for (std::size_t c = 0; c < a.cols() && row < a.rows(); ++c) {
    const std::size_t p = find_pivot(work, row, c);
    if (p == a.rows()) continue;
    swap_rows(work, p, row);
    const Scalar pinv = work(row, c).inverse();
    for (std::size_t j = c; j < a.cols(); ++j) work(row, j) *= pinv;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == row || work(r, c).is_zero()) continue;
      const Scalar factor = work(r, c);
      for (std::size_t j = c; j < a.cols(); ++j) work(r, j) -= factor * work(row, j);
    }
    if (pivots) pivots->push_back(c);
    ++row;
  }
  return work;
}

std::size_t rank(const Matrix& a) {
  if (!a.field().is_exact()) {
    throw Error(ErrorCode::UnsupportedField, "rank needs an exact field");
  }
  std::vector<std::size_t> pivots;
  rref(a, &pivots);
  return pivots.size();
}

bool is_invertible(const Matrix& a) {
  return a.is_square() && !det(a).is_zero();
}

std::vector<Vector> kernel_basis(const Matrix& a) {
  require_exact(a.field(), "kernel_basis");
  std::vector<std::size_t> pivots;
  const Matrix r = rref(a, &pivots);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vector v(a.cols(), Scalar::zero(a.field()));
    v[free] = Scalar::one(a.field());
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -r(k, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Scalar> charpoly(const Matrix& a) {
  require_square(a, "charpoly");
  require_exact(a.field(), "charpoly");
  const Field& f = a.field();
  const std::size_t n = a.rows();
  if (n == 0) return {Scalar::one(f)};

  // Descending coefficients of the characteristic polynomial of the leading
  // r x r block, extended one row/column at a time by a Toeplitz product.
  std::vector<Scalar> v{Scalar::one(f), -a(0, 0)};
  for (std::size_t r = 1; r < n; ++r) {
    const Matrix lead = submatrix(a, 0, 0, r, r);
    Vector row_part = a.row(r);
    row_part.resize(r);
    Vector s(r, Scalar::zero(f));
    for (std::size_t i = 0; i < r; ++i) s[i] = a(i, r);

    std::vector<Scalar> t(r + 2, Scalar::zero(f));
    t[0] = Scalar::one(f);
    t[1] = -a(r, r);
    Vector power_s = s;  // lead^k * s
    for (std::size_t k = 2; k <= r + 1; ++k) {
      Scalar dot = Scalar::zero(f);
      for (std::size_t i = 0; i < r; ++i) dot += row_part[i] * power_s[i];
      t[k] = -dot;
      power_s = lead * power_s;
    }

    std::vector<Scalar> next(r + 2, Scalar::zero(f));
    for (std::size_t i = 0; i < r + 2; ++i) {
      for (std::size_t j = 0; j <= std::min(i, r); ++j) next[i] += t[i - j] * v[j];
    }
    v = std::move(next);
  }
  return std::vector<Scalar>(v.rbegin(), v.rend());
}

Matrix poly_eval(std::span<const Scalar> coeffs, const Matrix& a) {
  require_square(a, "poly_eval");
  Matrix acc = Matrix::zero(a.field(), a.rows(), a.cols());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * a + (*it) * Matrix::identity(a.field(), a.rows());
  }
  return acc;
}

Matrix submatrix(const Matrix& a, std::size_t row0, std::size_t col0, std::size_t rows,
                 std::size_t cols) {
  if (row0 + rows > a.rows() || col0 + cols > a.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "submatrix out of range");
  }
  Matrix out(a.field(), rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = a(row0 + i, col0 + j);
  }
  return out;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "hstack row mismatch");
  Matrix out(a.field(), a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, a.cols() + j) = b(i, j);
  }
  return out;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "vstack column mismatch");
  Matrix out(a.field(), a.rows() + b.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i) out(a.rows() + i, j) = b(i, j);
  }
  return out;
}

Matrix from_columns(const Field& f, std::size_t rows, const std::vector<Vector>& columns) {
  Matrix out(f, rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw Error(ErrorCode::DimensionMismatch, "column length");
    for (std::size_t i = 0; i < rows; ++i) out(i, j) = columns[j][i];
  }
  return out;
}

BlockView block_split(const Matrix& m, std::size_t top, std::size_t bottom) {
  if (m.rows() != top + bottom || m.cols() != top + bottom) {
    throw Error(ErrorCode::DimensionMismatch, "block split does not match matrix size",
                std::to_string(m.rows()) + " vs " + std::to_string(top) + "+" +
                    std::to_string(bottom));
  }
  return BlockView{submatrix(m, 0, 0, top, top), submatrix(m, 0, top, top, bottom),
                   submatrix(m, top, 0, bottom, top), submatrix(m, top, top, bottom, bottom)};
}

Matrix block_join(const BlockView& v) {
  if (v.m1.rows() != v.m2.rows() || v.m3.rows() != v.m4.rows() ||
      v.m1.cols() != v.m3.cols() || v.m2.cols() != v.m4.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "inconsistent block shapes");
  }
  return vstack(hstack(v.m1, v.m2), hstack(v.m3, v.m4));
}

Matrix block_diag(const Matrix& a, const Matrix& b) {
  return block_join({a, Matrix(a.field(), a.rows(), b.cols()),
                     Matrix(a.field(), b.rows(), a.cols()), b});
}

Matrix permute_conjugate(const Matrix& m, std::span<const std::size_t> pi) {
  require_square(m, "permute_conjugate");
  if (pi.size() != m.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "permutation length differs from matrix size");
  }
  std::vector<bool> seen(pi.size(), false);
  for (auto p : pi) {
    if (p >= pi.size() || seen[p]) throw Error(ErrorCode::DimensionMismatch, "not a permutation");
    seen[p] = true;
  }
  Matrix out(m.field(), m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(pi[i], pi[j]) = m(i, j);
  }
  return out;
}

Matrix to_double_matrix(const Matrix& m) {
  Matrix out(Field::float64(), m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Scalar::from_double(m(i, j).to_double());
  }
  return out;
}

}  // namespace blocktri
