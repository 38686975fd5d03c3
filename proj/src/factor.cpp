#include "blocktri/factor.hpp"

#include <algorithm>

#include "blocktri/commutator.hpp"
#include "blocktri/sl4gf2.hpp"

namespace blocktri {

namespace {

// Greedily appends standard basis vectors (index order) that enlarge the span.
std::vector<Vector> extend_to_basis(const Field& f, std::size_t n, std::vector<Vector> vecs,
                                    std::size_t target_count) {
  std::size_t current = vecs.empty() ? 0 : rank(from_columns(f, n, vecs));
  for (std::size_t i = 0; i < n && current < target_count; ++i) {
    Vector e(n, Scalar::zero(f));
    e[i] = Scalar::one(f);
    vecs.push_back(e);
    const std::size_t r = rank(from_columns(f, n, vecs));
    if (r > current) {
      current = r;
    } else {
      vecs.pop_back();
    }
  }
  return vecs;
}

std::size_t half_size(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "square matrix required");
  if (m.rows() % 2 != 0 || m.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "even matrix size 2n required",
                std::to_string(m.rows()));
  }
  return m.rows() / 2;
}

void require_exact(const Matrix& m) {
  if (!m.field().is_exact()) {
    throw Error(ErrorCode::UnsupportedField, "factorization needs an exact field; lift f64 first");
  }
}

Matrix upper_block_matrix(const Matrix& top_left, const Matrix& a) {
  const Field& f = a.field();
  return block_join({top_left, a, Matrix(f, a.cols(), a.rows()), Matrix::identity(f, a.cols())});
}

// A with M1 A + M2 invertible; zero when M2 is already invertible.
Matrix completion_for(const BlockView& v) {
  return completion_right(v.m1, v.m2);
}

}  // namespace

std::string to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::lower: return "lower";
    case LayerKind::upper: return "upper";
    case LayerKind::upper_diag: return "upper_diag";
  }
  return "?";
}

std::string to_string(FactorizationKind kind) {
  switch (kind) {
    case FactorizationKind::sl6: return "sl6";
    case FactorizationKind::gl6: return "gl6";
    case FactorizationKind::lulul5: return "lulul5";
  }
  return "?";
}

LayerKind parse_layer_kind(const std::string& s) {
  if (s == "lower") return LayerKind::lower;
  if (s == "upper") return LayerKind::upper;
  if (s == "upper_diag") return LayerKind::upper_diag;
  throw Error(ErrorCode::ParseError, "unknown layer type", s);
}

FactorizationKind parse_factorization_kind(const std::string& s) {
  if (s == "sl6") return FactorizationKind::sl6;
  if (s == "gl6") return FactorizationKind::gl6;
  if (s == "lulul5") return FactorizationKind::lulul5;
  throw Error(ErrorCode::ParseError, "unknown factorization kind", s);
}

Matrix layer_matrix(const BlockLayer& layer, std::size_t m, std::size_t n, const Field& f) {
  const bool lower = layer.kind == LayerKind::lower;
  const std::size_t want_rows = lower ? n : m;
  const std::size_t want_cols = lower ? m : n;
  if (layer.a.rows() != want_rows || layer.a.cols() != want_cols) {
    throw Error(ErrorCode::DimensionMismatch, "layer block has the wrong shape",
                to_string(layer.kind));
  }
  if (!(layer.a.field() == f)) throw Error(ErrorCode::FieldMismatch, "layer field");
  switch (layer.kind) {
    case LayerKind::lower:
      return block_join({Matrix::identity(f, m), Matrix(f, m, n), layer.a, Matrix::identity(f, n)});
    case LayerKind::upper:
      return upper_block_matrix(Matrix::identity(f, m), layer.a);
    case LayerKind::upper_diag: {
      if (layer.d.size() != m) throw Error(ErrorCode::DimensionMismatch, "diagonal length");
      for (const auto& x : layer.d) {
        if (x.is_zero()) throw Error(ErrorCode::SingularMatrix, "zero diagonal entry");
      }
      return upper_block_matrix(Matrix::diagonal(f, layer.d), layer.a);
    }
  }
  return {};
}

Matrix evaluate_factorization(const Factorization& fac) {
  const std::size_t m = fac.m;
  const std::size_t n = fac.n;
  Matrix left = vstack(Matrix::identity(fac.field, m), Matrix(fac.field, n, m));
  Matrix right = vstack(Matrix(fac.field, m, n), Matrix::identity(fac.field, n));
  // Right multiplication by a layer only touches one column block.
  for (const auto& layer : fac.layers) {
    (void)layer_matrix(layer, m, n, fac.field);
    switch (layer.kind) {
      case LayerKind::lower:
        left = left + right * layer.a;
        break;
      case LayerKind::upper:
        right = right + left * layer.a;
        break;
      case LayerKind::upper_diag:
        right = right + left * layer.a;
        left = left * Matrix::diagonal(fac.field, layer.d);
        break;
    }
  }
  return hstack(left, right);
}

void validate_factorization(const Factorization& fac) {
  for (std::size_t i = 0; i < fac.layers.size(); ++i) {
    (void)layer_matrix(fac.layers[i], fac.m, fac.n, fac.field);
    if (i > 0) {
      const bool prev_lower = fac.layers[i - 1].kind == LayerKind::lower;
      const bool cur_lower = fac.layers[i].kind == LayerKind::lower;
      if (prev_lower == cur_lower) {
        throw Error(ErrorCode::DimensionMismatch, "layer kinds must alternate");
      }
    }
  }
  const std::size_t expected = fac.kind == FactorizationKind::lulul5 ? 5 : 6;
  if (fac.layers.size() != expected) {
    throw Error(ErrorCode::DimensionMismatch, "wrong number of layers for " + to_string(fac.kind));
  }
  for (std::size_t i = 0; i < fac.layers.size(); ++i) {
    LayerKind want = i % 2 == 0 ? LayerKind::lower : LayerKind::upper;
    if (fac.kind == FactorizationKind::gl6 && i == 5) want = LayerKind::upper_diag;
    const bool plain_last = want == LayerKind::upper_diag && fac.layers[i].kind == LayerKind::upper;
    if (fac.layers[i].kind != want && !plain_last) {
      throw Error(ErrorCode::DimensionMismatch, "layer " + std::to_string(i) + " should be " +
                                                    to_string(want));
    }
  }
}

Matrix five_layer_target(const Matrix& m) {
  const std::size_t n = half_size(m);
  const BlockView v = block_split(m, n, n);
  const Matrix m2_inv = mat_inverse(v.m2);
  return v.m2 * (v.m4 * m2_inv * v.m1 - v.m3);
}

namespace {

Factorization five_layer_core(const Matrix& m, bool verify) {
  require_exact(m);
  const std::size_t n = half_size(m);
  const Field& f = m.field();
  if (!det(m).is_one()) throw Error(ErrorCode::NotUnimodular, "determinant is not one");
  const BlockView v = block_split(m, n, n);
  if (!is_invertible(v.m2)) {
    throw Error(ErrorCode::SingularUpperRight, "upper-right block is singular");
  }
  if (n == 2 && f == Field::prime(2)) return sl4gf2::five_layer_lookup_gf2(sl4gf2::pack(m));

  const Matrix i_n = Matrix::identity(f, n);
  const Matrix m2_inv = mat_inverse(v.m2);
  const Matrix target = v.m2 * (v.m4 * m2_inv * v.m1 - v.m3);
  if (!(det(target) == det(m))) {
    throw Error(ErrorCode::VerificationFailed, "det(K) differs from det(M)");
  }
  CommutatorOptions opts;
  opts.verify = verify;
  const CommutatorPair xy = commutator_decompose(target, opts);
  const Matrix x_inv = mat_inverse(xy.x);
  const Matrix y_inv = mat_inverse(xy.y);

  Factorization fac;
  fac.m = n;
  fac.n = n;
  fac.field = f;
  fac.kind = FactorizationKind::lulul5;
  fac.layers = {
      BlockLayer::lower(v.m4 * m2_inv + m2_inv * x_inv * y_inv * (i_n - xy.x) - m2_inv * x_inv),
      BlockLayer::upper(xy.x * v.m2),
      BlockLayer::lower(m2_inv * x_inv * (xy.y - i_n)),
      BlockLayer::upper(y_inv * (i_n - xy.x) * v.m2),
      BlockLayer::lower(m2_inv * (v.m1 - xy.y)),
  };
  if (verify && !(evaluate_factorization(fac) == m)) {
    throw Error(ErrorCode::VerificationFailed, "five-layer product does not reproduce M");
  }
  return fac;
}

}  // namespace

Factorization five_layer_factor(const Matrix& m) { return five_layer_core(m, true); }

Matrix completion_left(const Matrix& a, const Matrix& b) {
  const Field& f = a.field();
  if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "completion needs equal square blocks");
  }
  if (!f.is_exact()) throw Error(ErrorCode::UnsupportedField, "completion needs an exact field");
  const std::size_t n = a.rows();
  if (!kernel_basis(vstack(a, b)).empty()) {
    throw Error(ErrorCode::KernelOverlap, "ker(A) and ker(B) intersect nontrivially");
  }
  const auto ker_b = kernel_basis(b);
  if (ker_b.empty()) return Matrix(f, n, n);

  // C maps W = A(ker B) isomorphically onto a complement of im(B) and kills
  // a complement of W; then C A + B is injective.
  std::vector<Vector> w;
  for (const auto& k : ker_b) w.push_back(a * k);
  const std::vector<Vector> domain = extend_to_basis(f, n, w, n);

  std::vector<Vector> image_b;
  for (std::size_t j = 0; j < n; ++j) image_b.push_back(b.col(j));
  const std::size_t rank_b = rank(b);
  std::vector<Vector> spanning = extend_to_basis(f, n, image_b, n);
  // extend_to_basis keeps all of image_b; the appended vectors complete it.
  std::vector<Vector> complement(spanning.begin() + static_cast<std::ptrdiff_t>(image_b.size()),
                                 spanning.end());
  if (complement.size() != n - rank_b || complement.size() != w.size()) {
    throw Error(ErrorCode::VerificationFailed, "complement dimension mismatch");
  }

  std::vector<Vector> targets = complement;
  while (targets.size() < n) targets.push_back(Vector(n, Scalar::zero(f)));
  const Matrix c = from_columns(f, n, targets) * mat_inverse(from_columns(f, n, domain));
  if (!is_invertible(c * a + b)) {
    throw Error(ErrorCode::VerificationFailed, "completion did not produce an invertible matrix");
  }
  return c;
}

Matrix completion_right(const Matrix& a, const Matrix& b) {
  try {
    return transpose(completion_left(transpose(a), transpose(b)));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::KernelOverlap) {
      throw Error(ErrorCode::CokernelOverlap, "coker(A) and coker(B) intersect nontrivially");
    }
    throw;
  }
}

Factorization six_layer_factor_sl(const Matrix& m) {
  require_exact(m);
  const std::size_t n = half_size(m);
  if (!det(m).is_one()) throw Error(ErrorCode::NotUnimodular, "determinant is not one");
  if (m.is_identity()) {
    Factorization trivial{n, n, m.field(), FactorizationKind::sl6, {}};
    for (int i = 0; i < 3; ++i) {
      trivial.layers.push_back(BlockLayer::lower(Matrix::zero(m.field(), n, n)));
      trivial.layers.push_back(BlockLayer::upper(Matrix::zero(m.field(), n, n)));
    }
    return trivial;
  }
  const BlockView v = block_split(m, n, n);
  const Matrix shift = completion_for(v);
  const Matrix shifted = m * upper_block_matrix(Matrix::identity(m.field(), n), shift);

  Factorization fac = five_layer_core(shifted, false);
  fac.kind = FactorizationKind::sl6;
  fac.layers.push_back(BlockLayer::upper(-shift));
  if (!(evaluate_factorization(fac) == m)) {
    throw Error(ErrorCode::VerificationFailed, "six-layer product does not reproduce M");
  }
  return fac;
}

Factorization six_layer_factor_gl(const Matrix& m, const Vector& d) {
  require_exact(m);
  const std::size_t n = half_size(m);
  return six_layer_factor_gl(m, d, completion_for(block_split(m, n, n)));
}

Factorization six_layer_factor_gl(const Matrix& m, const Vector& d, const Matrix& shift) {
  require_exact(m);
  const std::size_t n = half_size(m);
  const Field& f = m.field();
  if (d.size() != n) throw Error(ErrorCode::DimensionMismatch, "diagonal must have n entries");
  if (shift.rows() != n || shift.cols() != n || !(shift.field() == f)) {
    throw Error(ErrorCode::DimensionMismatch, "shift must be n x n over the matrix field");
  }
  Scalar prod = Scalar::one(f);
  for (const auto& x : d) {
    if (!(x.field() == f)) throw Error(ErrorCode::FieldMismatch, "diagonal field");
    if (x.is_zero()) throw Error(ErrorCode::SingularMatrix, "diagonal entry is zero");
    prod *= x;
  }
  const Scalar det_m = det(m);
  if (det_m.is_zero()) throw Error(ErrorCode::SingularMatrix, "matrix is singular");
  if (!(prod == det_m)) {
    throw Error(ErrorCode::DeterminantMismatch, "det(D) differs from det(M)",
                prod.to_string() + " vs " + det_m.to_string());
  }
  Vector d_inv;
  for (const auto& x : d) d_inv.push_back(x.inverse());
  // M [D^{-1} A; 0 I] has determinant one and upper-right block M1 A + M2.
  const Matrix shifted = m * upper_block_matrix(Matrix::diagonal(f, d_inv), shift);

  Factorization fac = five_layer_core(shifted, false);
  fac.kind = FactorizationKind::gl6;
  const bool unit_diag = std::all_of(d.begin(), d.end(), [](const Scalar& x) { return x.is_one(); });
  if (unit_diag) {
    fac.layers.push_back(BlockLayer::upper(-shift));
  } else {
    fac.layers.push_back(BlockLayer::upper_diag(d, -(Matrix::diagonal(f, d) * shift)));
  }
  if (!(evaluate_factorization(fac) == m)) {
    throw Error(ErrorCode::VerificationFailed, "six-layer product does not reproduce M");
  }
  return fac;
}

}  // namespace blocktri
