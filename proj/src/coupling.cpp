#include "blocktri/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "blocktri/random.hpp"

namespace blocktri {

namespace {

std::size_t bit_length(const mpz_class& z) {
  return z == 0 ? 0 : mpz_sizeinbase(z.get_mpz_t(), 2);
}

std::size_t entry_bits(const Matrix& a) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const mpq_class& q = a(i, j).rational();
      best = std::max({best, bit_length(q.get_num()), bit_length(q.get_den())});
    }
  }
  return best;
}

Matrix exact_input(const Matrix& m) {
  if (m.field().kind() == FieldKind::float64) return lift_to_rational(m);
  if (m.field().kind() != FieldKind::rational) {
    throw Error(ErrorCode::UnsupportedField, "coupling networks need rational or f64 input",
                m.field().to_string());
  }
  return m;
}

std::size_t even_half(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::DimensionMismatch, "square matrix required");
  if (m.rows() == 0 || m.rows() % 2 != 0) {
    throw Error(ErrorCode::OddDimension, "coupling networks need size 2n",
                std::to_string(m.rows()));
  }
  return m.rows() / 2;
}

// Positive rational close to x > 0 with a 2^-30 relative grid.
mpq_class positive_approx(double x) {
  int exponent = 0;
  const double mant = std::frexp(x, &exponent);
  mpq_class q(static_cast<long>(std::llround(std::ldexp(mant, 30))));
  const int shift = exponent - 30;
  if (shift >= 0) {
    q *= mpq_class(mpz_class(1) << shift);
  } else {
    q /= mpq_class(mpz_class(1) << -shift);
  }
  q.canonicalize();
  return q;
}

Vector diagonal_for(const Scalar& d, std::size_t m, DiagStrategy strategy) {
  const Field f = Field::rational();
  Vector out(m, Scalar::one(f));
  if (strategy == DiagStrategy::corner || m == 1) {
    out[0] = d;
    return out;
  }
  const mpq_class r = positive_approx(std::pow(d.to_double(), 1.0 / static_cast<double>(m)));
  mpq_class rest = d.rational();
  for (std::size_t i = 0; i + 1 < m; ++i) {
    out[i] = Scalar::from_rational(r);
    rest /= r;
  }
  out[m - 1] = Scalar::from_rational(rest);
  return out;
}

CouplingLayer convert(const BlockLayer& layer) {
  CouplingLayer out;
  out.w = to_double_matrix(layer.a);
  switch (layer.kind) {
    case LayerKind::lower:
      out.mask = CouplingMask::right;
      out.s.assign(layer.a.rows(), 0.0);
      break;
    case LayerKind::upper:
      out.mask = CouplingMask::left;
      out.s.assign(layer.a.rows(), 0.0);
      break;
    case LayerKind::upper_diag:
      out.mask = CouplingMask::left;
      for (const auto& d : layer.d) out.s.push_back(std::log(d.to_double()));
      break;
  }
  return out;
}

CouplingNetwork assemble(const Matrix& source, Factorization fac) {
  CouplingNetwork net;
  net.m = fac.m;
  net.n = fac.n;
  net.kind = fac.kind;
  net.source_hash = fnv1a(source.to_string());
  for (auto it = fac.layers.rbegin(); it != fac.layers.rend(); ++it) {
    net.layers.push_back(convert(*it));
    net.max_entry_bits = std::max(net.max_entry_bits, entry_bits(it->a));
    if (!it->d.empty()) {
      net.max_entry_bits =
          std::max(net.max_entry_bits, entry_bits(Matrix::diagonal(Field::rational(), it->d)));
    }
  }
  net.exact = std::move(fac);
  return net;
}

double inf_norm(const Matrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) sum += std::fabs(a(i, j).to_double());
    best = std::max(best, sum);
  }
  return best;
}

}  // namespace

std::string to_string(CouplingMask mask) { return mask == CouplingMask::left ? "left" : "right"; }

std::string to_string(DiagStrategy strategy) {
  return strategy == DiagStrategy::corner ? "corner" : "balanced";
}

CouplingMask parse_coupling_mask(const std::string& s) {
  if (s == "left") return CouplingMask::left;
  if (s == "right") return CouplingMask::right;
  throw Error(ErrorCode::ParseError, "mask must be left or right", s);
}

DiagStrategy parse_diag_strategy(const std::string& s) {
  if (s == "corner") return DiagStrategy::corner;
  if (s == "balanced") return DiagStrategy::balanced;
  throw Error(ErrorCode::ParseError, "diag strategy must be corner or balanced", s);
}

Matrix lift_to_rational(const Matrix& m) {
  const Field q = Field::rational();
  Matrix out(q, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double x = m(i, j).to_double();
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::NonFiniteEntry, "entry is not finite",
                    "(" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
      out(i, j) = Scalar::from_rational(mpq_class(x));
    }
  }
  return out;
}

CouplingNetwork to_coupling_network(const Matrix& m, const CouplingOptions& opts) {
  const std::size_t half = even_half(m);
  const Matrix exact = exact_input(m);
  const Scalar d = det(exact);
  if (d.rational() <= 0) {
    throw Error(ErrorCode::OrientationError, "determinant must be positive", d.to_string());
  }
  const Vector diag = diagonal_for(d, half, opts.diag);
  const Field& q = exact.field();
  Rng rng(fnv1a(exact.to_string()));

  std::optional<CouplingNetwork> best;
  double best_error = 0.0;
  for (std::size_t k = 0; k < std::max<std::size_t>(opts.candidates, 1); ++k) {
    Factorization fac;
    try {
      fac = k == 0 ? six_layer_factor_gl(exact, diag)
                   : six_layer_factor_gl(exact, diag, random_matrix(q, half, half, rng, 1));
    } catch (const Error& e) {
      if (k == 0 || e.code() != ErrorCode::SingularUpperRight) throw;
      continue;
    }
    CouplingNetwork net = assemble(exact, std::move(fac));
    net.candidate = k;
    const double err = reconstruction_error(net, exact);
    if (!best || err < best_error) {
      best = std::move(net);
      best_error = err;
    }
    if (best_error <= opts.accept_error) break;
  }
  return std::move(*best);
}

CouplingNetwork nice_network(const Matrix& m) {
  even_half(m);
  const Matrix exact = exact_input(m);
  const Scalar d = det(exact);
  if (!d.is_one()) throw Error(ErrorCode::NotUnimodular, "det(M) must be 1", d.to_string());
  return assemble(exact, six_layer_factor_sl(exact));
}

Matrix coupling_layer_matrix(const CouplingLayer& layer, std::size_t m, std::size_t n) {
  const Field f = Field::float64();
  Matrix out = Matrix::identity(f, m + n);
  const bool left = layer.mask == CouplingMask::left;
  const std::size_t active0 = left ? 0 : m;
  const std::size_t passive0 = left ? m : 0;
  const std::size_t active = left ? m : n;
  const std::size_t passive = left ? n : m;
  if (layer.s.size() != active || layer.w.rows() != active || layer.w.cols() != passive) {
    throw Error(ErrorCode::DimensionMismatch, "coupling layer shape");
  }
  for (std::size_t i = 0; i < active; ++i) {
    out(active0 + i, active0 + i) = Scalar::from_double(std::exp(layer.s[i]));
    for (std::size_t j = 0; j < passive; ++j) out(active0 + i, passive0 + j) = layer.w(i, j);
  }
  return out;
}

Matrix network_matrix(const CouplingNetwork& net) {
  Matrix out = Matrix::identity(Field::float64(), net.m + net.n);
  for (const auto& layer : net.layers) out = coupling_layer_matrix(layer, net.m, net.n) * out;
  return out;
}

Scalar exact_volume(const CouplingNetwork& net) {
  Scalar v = Scalar::one(net.exact.field);
  for (const auto& layer : net.exact.layers) {
    for (const auto& d : layer.d) v *= d;
  }
  return v;
}

double reconstruction_error(const CouplingNetwork& net, const Matrix& m) {
  if (m.rows() != net.m + net.n || m.cols() != net.m + net.n) {
    throw Error(ErrorCode::DimensionMismatch, "network and matrix sizes differ");
  }
  const Matrix target = to_double_matrix(m);
  const Matrix diff = network_matrix(net) - target;
  return inf_norm(diff) / std::max(1.0, inf_norm(target));
}

}  // namespace blocktri
