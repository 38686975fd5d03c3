#include "blocktri/commutator.hpp"

#include <cmath>

#include "blocktri/random.hpp"

namespace blocktri {

namespace {

std::uint64_t ipow_capped(std::uint64_t base, std::uint64_t exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

// Matrix whose entries are the base-q digits of `index`, row-major.
Matrix matrix_from_index(const Field& f, std::size_t n, std::uint64_t index) {
  const std::uint64_t q = *f.order();
  Matrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = Scalar::from_residue(index % q, f);
      index /= q;
    }
  }
  return m;
}

std::optional<CommutatorPair> try_candidate(const Matrix& x, const Matrix& target,
                                            std::uint64_t seed) {
  const Matrix xk = x * target;
  if (charpoly(x) != charpoly(xk)) return std::nullopt;
  // Y^{-1} X Y = X K is exactly [X, Y] = K.
  auto y = find_similarity(x, xk, seed);
  if (!y) return std::nullopt;
  return CommutatorPair{x, *y};
}

std::optional<CommutatorPair> exhaustive_search(const Matrix& target, std::uint64_t total) {
  const std::size_t n = target.rows();
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    Matrix x = matrix_from_index(target.field(), n, idx);
    if (det(x).is_zero()) continue;
    if (auto pair = try_candidate(x, target, idx)) return pair;
  }
  return std::nullopt;
}

std::optional<CommutatorPair> random_search(const Matrix& target, std::size_t budget,
                                            std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = target.rows();
  for (std::size_t attempt = 0; attempt < budget; ++attempt) {
    Matrix x = random_invertible(target.field(), n, rng);
    if (auto pair = try_candidate(x, target, seed + attempt)) return pair;
  }
  return std::nullopt;
}

// n distinct nonzero elements of f, if the field has them: 1, 2, ..., n in
// general and 1, -1, 2, -2, ... over Q, which keeps the factors small.
std::optional<Vector> distinct_units(const Field& f, std::size_t n) {
  if (const auto q = f.order(); q && *q <= n) return std::nullopt;
  Vector out;
  if (f.kind() == FieldKind::rational) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto mag = static_cast<long long>(i / 2 + 1);
      out.push_back(Scalar::from_int(i % 2 == 0 ? mag : -mag, f));
    }
    return out;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    out.push_back(f.kind() == FieldKind::gf4 ? Scalar::gf4_symbol(static_cast<unsigned>(i))
                                             : Scalar::from_int(static_cast<long long>(i), f));
  }
  return out;
}

// Columns are eigenvectors of a triangular matrix with distinct diagonal,
// normalized to 1 at the diagonal position.
Matrix triangular_eigenvectors(const Matrix& t, bool lower) {
  const Field& f = t.field();
  const std::size_t n = t.rows();
  Matrix v(f, n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const Scalar lambda = t(c, c);
    v(c, c) = Scalar::one(f);
    if (lower) {
      for (std::size_t i = c + 1; i < n; ++i) {
        Scalar acc = Scalar::zero(f);
        for (std::size_t j = c; j < i; ++j) acc += t(i, j) * v(j, c);
        v(i, c) = acc / (lambda - t(i, i));
      }
    } else {
      for (std::size_t i = c; i-- > 0;) {
        Scalar acc = Scalar::zero(f);
        for (std::size_t j = i + 1; j <= c; ++j) acc += t(i, j) * v(j, c);
        v(i, c) = acc / (lambda - t(i, i));
      }
    }
  }
  return v;
}

double row_norm(const Matrix& a, std::size_t i) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) s += std::fabs(a(i, j).to_double());
  return s;
}

double col_norm(const Matrix& a, std::size_t j) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) s += std::fabs(a(i, j).to_double());
  return s;
}

// Z with Z^{-1} B Z = U for lower-triangular B and upper-triangular U sharing
// one distinct diagonal: Z = V_B L V_U^{-1} for any invertible diagonal L.
// Over Q the entries of L are powers of two balancing |Z| against |Z^{-1}|.
Matrix eigen_similarity(const Matrix& b, const Matrix& u) {
  const Field& f = b.field();
  const std::size_t n = b.rows();
  const Matrix vb = triangular_eigenvectors(b, true);
  const Matrix vu = triangular_eigenvectors(u, false);
  const Matrix vb_inv = mat_inverse(vb);
  const Matrix vu_inv = mat_inverse(vu);
  Vector scale(n, Scalar::one(f));
  if (f.kind() == FieldKind::rational) {
    for (std::size_t i = 0; i < n; ++i) {
      const double forward = col_norm(vb, i) * row_norm(vu_inv, i);
      const double backward = col_norm(vu, i) * row_norm(vb_inv, i);
      const long e = std::lround(0.5 * std::log2(backward / forward));
      mpq_class l(1);
      if (e >= 0) {
        l = mpq_class(mpz_class(1) << static_cast<mp_bitcnt_t>(e));
      } else {
        l = mpq_class(mpz_class(1), mpz_class(1) << static_cast<mp_bitcnt_t>(-e));
      }
      scale[i] = Scalar::from_rational(l);
    }
  }
  return vb * Matrix::diagonal(f, scale) * vu_inv;
}

std::optional<CommutatorPair> triangular_route(const Matrix& target) {
  const Field& f = target.field();
  const std::size_t n = target.rows();
  auto d = distinct_units(f, n);
  if (!d) return std::nullopt;
  Vector d_inv;
  for (const auto& x : *d) d_inv.push_back(x.inverse());
  auto form = triangular_product_form(target, *d, d_inv);
  if (!form) return std::nullopt;
  // B and C^{-1} share the distinct eigenvalues d, so Z^{-1} B Z = C^{-1}
  // has a solution and B C = [B^{-1}, Z].
  const Matrix z = eigen_similarity(form->lower, mat_inverse(form->upper));
  const Matrix p_inv = mat_inverse(form->p);
  return CommutatorPair{form->p * mat_inverse(form->lower) * p_inv, form->p * z * p_inv};
}

// Particular solution of G f = rhs plus the kernel of G, or nullopt.
std::optional<std::pair<Vector, std::vector<Vector>>> solve_affine(const Matrix& g,
                                                                   const Vector& rhs) {
  const Matrix aug = hstack(g, Matrix::column(g.field(), rhs));
  std::vector<std::size_t> pivots;
  const Matrix r = rref(aug, &pivots);
  if (!pivots.empty() && pivots.back() == g.cols()) return std::nullopt;
  Vector sol(g.cols(), Scalar::zero(g.field()));
  for (std::size_t k = 0; k < pivots.size(); ++k) sol[pivots[k]] = r(k, g.cols());
  return std::make_pair(sol, kernel_basis(g));
}

std::optional<TriangularProduct> triangular_rec(const Matrix& a, std::span<const Scalar> beta,
                                                std::span<const Scalar> gamma, Rng& rng) {
  const Field& f = a.field();
  const std::size_t n = a.rows();
  if (n == 1) {
    if (!(a(0, 0) == beta[0] * gamma[0])) return std::nullopt;
    return TriangularProduct{Matrix::identity(f, 1), Matrix::diagonal(f, beta),
                             Matrix::diagonal(f, gamma)};
  }
  if (a.is_scalar()) return std::nullopt;
  const Scalar alpha = beta[0] * gamma[0];

  // Candidate vectors x: standard basis vectors, then pairwise sums.
  std::vector<Vector> xs;
  for (std::size_t i = 0; i < n; ++i) {
    Vector e(n, Scalar::zero(f));
    e[i] = Scalar::one(f);
    xs.push_back(e);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Vector e(n, Scalar::zero(f));
      e[i] = e[j] = Scalar::one(f);
      xs.push_back(e);
    }
  }

  for (const auto& x : xs) {
    const Vector ax = a * x;
    const Matrix g = transpose(from_columns(f, n, {x, ax}));
    if (rank(g) < 2) continue;
    auto solved = solve_affine(g, {Scalar::one(f), alpha});
    if (!solved) continue;
    const auto& [f0, ker] = *solved;

    std::vector<Vector> fs{f0};
    for (const auto& k : ker) {
      Vector c = f0;
      for (std::size_t i = 0; i < n; ++i) c[i] += k[i];
      fs.push_back(c);
    }
    for (int extra = 0; extra < 6 && !ker.empty(); ++extra) {
      Vector c = f0;
      for (const auto& k : ker) {
        const Scalar w = random_scalar(f, rng, 2);
        for (std::size_t i = 0; i < n; ++i) c[i] += w * k[i];
      }
      fs.push_back(c);
    }

    for (const auto& functional : fs) {
      // Basis (x, ker functional): in it the (1,1) entry of A is functional(Ax) = alpha.
      Matrix frow(f, 1, n);
      for (std::size_t i = 0; i < n; ++i) frow(0, i) = functional[i];
      std::vector<Vector> cols{x};
      for (auto& k : kernel_basis(frow)) cols.push_back(std::move(k));
      const Matrix p = from_columns(f, n, cols);
      const Matrix ap = mat_inverse(p) * a * p;

      const Matrix r = submatrix(ap, 0, 1, 1, n - 1);
      const Matrix c = submatrix(ap, 1, 0, n - 1, 1);
      const Matrix a2 = submatrix(ap, 1, 1, n - 1, n - 1);
      const Matrix schur = a2 - alpha.inverse() * (c * r);
      if (n - 1 >= 2 && schur.is_scalar()) continue;

      auto sub = triangular_rec(schur, beta.subspan(1), gamma.subspan(1), rng);
      if (!sub) continue;

      const Matrix q = sub->p;
      const Matrix u = gamma[0].inverse() * (mat_inverse(q) * c);
      const Matrix v = beta[0].inverse() * (r * q);
      Matrix lower(f, n, n);
      Matrix upper(f, n, n);
      lower(0, 0) = beta[0];
      upper(0, 0) = gamma[0];
      for (std::size_t i = 1; i < n; ++i) {
        lower(i, 0) = u(i - 1, 0);
        upper(0, i) = v(0, i - 1);
        for (std::size_t j = 1; j < n; ++j) {
          lower(i, j) = sub->lower(i - 1, j - 1);
          upper(i, j) = sub->upper(i - 1, j - 1);
        }
      }
      return TriangularProduct{p * block_diag(Matrix::identity(f, 1), q), lower, upper};
    }
  }
  return std::nullopt;
}

}  // namespace

Matrix commutator(const Matrix& x, const Matrix& y) {
  return mat_inverse(x) * mat_inverse(y) * x * y;
}

std::string to_string(CommutatorRoute route) {
  switch (route) {
    case CommutatorRoute::identity: return "identity";
    case CommutatorRoute::scalar: return "scalar";
    case CommutatorRoute::exhaustive: return "exhaustive";
    case CommutatorRoute::random_search: return "random_search";
    case CommutatorRoute::triangular: return "triangular";
  }
  return "?";
}

std::optional<Matrix> find_similarity(const Matrix& u, const Matrix& v, std::uint64_t seed) {
  const Field& f = u.field();
  if (!f.is_exact()) throw Error(ErrorCode::UnsupportedField, "similarity needs an exact field");
  if (!u.is_square() || !(u.rows() == v.rows() && v.is_square())) {
    throw Error(ErrorCode::DimensionMismatch, "similarity needs equal square shapes");
  }
  const std::size_t n = u.rows();
  // Unknown S(l, j) sits at column l*n + j; equation (i, j) of U S - S V = 0.
  Matrix system(f, n * n, n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t l = 0; l < n; ++l) {
        system(i * n + j, l * n + j) += u(i, l);
        system(i * n + j, i * n + l) -= v(l, j);
      }
    }
  }
  const auto basis = kernel_basis(system);
  if (basis.empty()) return std::nullopt;

  auto assemble = [&](const std::vector<Scalar>& coeffs) {
    Matrix s(f, n, n);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (coeffs[b].is_zero()) continue;
      for (std::size_t k = 0; k < n * n; ++k) s(k / n, k % n) += coeffs[b] * basis[b][k];
    }
    return s;
  };

  const std::size_t dim = basis.size();
  std::vector<Scalar> coeffs(dim, Scalar::zero(f));
  for (std::size_t b = 0; b < dim; ++b) {
    coeffs.assign(dim, Scalar::zero(f));
    coeffs[b] = Scalar::one(f);
    Matrix s = assemble(coeffs);
    if (is_invertible(s)) return s;
  }

  if (const auto q = f.order()) {
    const std::uint64_t total = ipow_capped(*q, dim, 4096);
    if (total <= 4096) {
      for (std::uint64_t idx = 1; idx < total; ++idx) {
        std::uint64_t t = idx;
        for (std::size_t b = 0; b < dim; ++b) {
          coeffs[b] = Scalar::from_residue(t % *q, f);
          t /= *q;
        }
        Matrix s = assemble(coeffs);
        if (is_invertible(s)) return s;
      }
      return std::nullopt;
    }
  }
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int attempt = 0; attempt < 512; ++attempt) {
    for (std::size_t b = 0; b < dim; ++b) coeffs[b] = random_scalar(f, rng, 3);
    Matrix s = assemble(coeffs);
    if (is_invertible(s)) return s;
  }
  return std::nullopt;
}

std::optional<TriangularProduct> triangular_product_form(const Matrix& a, const Vector& beta,
                                                         const Vector& gamma) {
  if (!a.is_square() || beta.size() != a.rows() || gamma.size() != a.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "triangular form needs n targets per factor");
  }
  Rng rng(fnv1a(a.to_string()));
  auto out = triangular_rec(a, beta, gamma, rng);
  if (out && !(mat_inverse(out->p) * a * out->p == out->lower * out->upper)) {
    throw Error(ErrorCode::VerificationFailed, "triangular product form does not reproduce A");
  }
  return out;
}

CommutatorResult commutator_decompose_ex(const Matrix& m, const CommutatorOptions& opts) {
  const Field& f = m.field();
  if (!f.is_exact()) {
    throw Error(ErrorCode::UnsupportedField, "commutator decomposition needs an exact field");
  }
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "square matrix required");
  if (!det(m).is_one()) {
    throw Error(ErrorCode::NotUnimodular, "determinant is not one", m.to_string());
  }
  const std::size_t n = m.rows();

  auto verified = [&](CommutatorPair pair, CommutatorRoute route) {
    if (opts.verify &&
        (!is_invertible(pair.x) || !is_invertible(pair.y) || !(commutator(pair.x, pair.y) == m))) {
      throw Error(ErrorCode::VerificationFailed, "commutator pair failed verification",
                  m.to_string());
    }
    return CommutatorResult{std::move(pair), route};
  };

  if (m.is_identity()) {
    return verified({Matrix::identity(f, n), Matrix::identity(f, n)}, CommutatorRoute::identity);
  }
  if (m.is_scalar()) {
    // m = wI with w^n = 1: X the cyclic shift, Y = diag(1, w, ..., w^{n-1})
    // gives Y^{-1} X Y = wX.
    const Scalar w = m(0, 0);
    Matrix x(f, n, n);
    Matrix y(f, n, n);
    Scalar power = Scalar::one(f);
    for (std::size_t i = 0; i < n; ++i) {
      x(i, (i + 1) % n) = Scalar::one(f);
      y(i, i) = power;
      power *= w;
    }
    return verified({x, y}, CommutatorRoute::scalar);
  }

  const std::uint64_t seed = fnv1a(m.to_string());
  bool searched = false;
  if (const auto q = f.order()) {
    const std::uint64_t total = ipow_capped(*q, n * n, opts.exhaustive_limit);
    if (total <= opts.exhaustive_limit) {
      if (auto pair = exhaustive_search(m, total)) {
        return verified(*pair, CommutatorRoute::exhaustive);
      }
      throw Error(ErrorCode::NoDecomposition, "matrix is not a commutator in GL", m.to_string());
    }
    // Small fields: the charpoly match X ~ XK is frequent, so search first.
    if (ipow_capped(*q, n - 1, 4096) <= 4096) {
      searched = true;
      if (auto pair = random_search(m, opts.budget, seed)) {
        return verified(*pair, CommutatorRoute::random_search);
      }
    }
  }
  if (auto pair = triangular_route(m)) {
    return verified(*pair, CommutatorRoute::triangular);
  }
  if (f.is_finite() && !searched) {
    if (auto pair = random_search(m, opts.budget, seed)) {
      return verified(*pair, CommutatorRoute::random_search);
    }
  }
  throw Error(ErrorCode::DecompositionFailed, "candidate budget exhausted", m.to_string());
}

}  // namespace blocktri
