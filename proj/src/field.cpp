#include "blocktri/field.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace blocktri {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivideByZero: return "DivideByZero";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::FieldTooSmall: return "FieldTooSmall";
    case ErrorCode::InvalidField: return "InvalidField";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::UnsupportedField: return "UnsupportedField";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::NoDecomposition: return "NoDecomposition";
    case ErrorCode::DecompositionFailed: return "DecompositionFailed";
    case ErrorCode::SingularUpperRight: return "SingularUpperRight";
    case ErrorCode::KernelOverlap: return "KernelOverlap";
    case ErrorCode::CokernelOverlap: return "CokernelOverlap";
    case ErrorCode::DeterminantMismatch: return "DeterminantMismatch";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::SearchTooLarge: return "SearchTooLarge";
    case ErrorCode::NotDiagonal: return "NotDiagonal";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::OrientationError: return "OrientationError";
    case ErrorCode::OddDimension: return "OddDimension";
  }
  return "Unknown";
}

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return r;
}

// GF(4) = GF(2)[w]/(w^2 + w + 1); symbols 0, 1, w, w+1 as 0..3.
constexpr std::array<std::array<std::uint8_t, 4>, 4> kGf4Mul{{
    {0, 0, 0, 0},
    {0, 1, 2, 3},
    {0, 2, 3, 1},
    {0, 3, 1, 2},
}};
constexpr std::array<std::uint8_t, 4> kGf4Inv{0, 1, 3, 2};
constexpr std::array<const char*, 4> kGf4Names{"0", "1", "w", "w+1"};

constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 61;

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic for every 64-bit n.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Field Field::prime(std::uint64_t p) {
  if (p >= kMaxModulus || !is_prime(p)) {
    throw Error(ErrorCode::InvalidField,
                "modulus must be a prime below 2^61", std::to_string(p));
  }
  return Field(FieldKind::prime, p);
}

Field Field::parse(const std::string& s) {
  if (s == "rational" || s == "Q") return rational();
  if (s == "f64") return float64();
  if (s.rfind("gf:", 0) == 0) {
    const std::string tail = s.substr(3);
    if (tail == "4") return gf4();
    std::uint64_t p = 0;
    auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), p);
    if (ec != std::errc{} || ptr != tail.data() + tail.size() || tail.empty()) {
      throw Error(ErrorCode::InvalidField, "bad field spelling", s);
    }
    return prime(p);
  }
  throw Error(ErrorCode::InvalidField, "unknown field", s);
}

std::optional<std::uint64_t> Field::order() const noexcept {
  if (kind_ == FieldKind::prime) return p_;
  if (kind_ == FieldKind::gf4) return 4;
  return std::nullopt;
}

std::uint64_t Field::characteristic() const noexcept {
  if (kind_ == FieldKind::prime) return p_;
  if (kind_ == FieldKind::gf4) return 2;
  return 0;
}

std::string Field::to_string() const {
  switch (kind_) {
    case FieldKind::prime: return "gf:" + std::to_string(p_);
    case FieldKind::gf4: return "gf:4";
    case FieldKind::rational: return "rational";
    case FieldKind::float64: return "f64";
  }
  return "?";
}

Scalar Scalar::from_int(long long k, const Field& f) {
  switch (f.kind()) {
    case FieldKind::prime: {
      const auto p = static_cast<long long>(f.modulus());
      long long r = k % p;
      if (r < 0) r += p;
      return Scalar(f, static_cast<std::uint64_t>(r));
    }
    case FieldKind::gf4:
      return Scalar(f, static_cast<std::uint64_t>(k & 1));
    case FieldKind::rational:
      return Scalar(f, mpq_class(static_cast<long>(k)));
    case FieldKind::float64:
      return Scalar(f, static_cast<double>(k));
  }
  return {};
}

Scalar Scalar::from_mpz(const mpz_class& k, const Field& f) {
  switch (f.kind()) {
    case FieldKind::prime: {
      const unsigned long r = mpz_fdiv_ui(k.get_mpz_t(), f.modulus());
      return Scalar(f, static_cast<std::uint64_t>(r));
    }
    case FieldKind::gf4:
      return Scalar(f, static_cast<std::uint64_t>(mpz_odd_p(k.get_mpz_t()) ? 1 : 0));
    case FieldKind::rational:
      return Scalar(f, mpq_class(k));
    case FieldKind::float64:
      return Scalar(f, k.get_d());
  }
  return {};
}

Scalar Scalar::from_rational(const mpq_class& q) {
  mpq_class c(q);
  c.canonicalize();
  return Scalar(Field::rational(), std::move(c));
}

Scalar Scalar::from_double(double d) { return Scalar(Field::float64(), d); }

Scalar Scalar::gf4_symbol(unsigned symbol) {
  if (symbol > 3) throw Error(ErrorCode::ParseError, "GF(4) symbol out of range");
  return Scalar(Field::gf4(), static_cast<std::uint64_t>(symbol));
}

Scalar Scalar::from_residue(std::uint64_t r, const Field& f) {
  if (f.kind() == FieldKind::gf4) return gf4_symbol(static_cast<unsigned>(r));
  if (f.kind() != FieldKind::prime) {
    throw Error(ErrorCode::UnsupportedField, "residues need a finite field");
  }
  return Scalar(f, r % f.modulus());
}

Scalar Scalar::parse(const std::string& raw, const Field& f) {
  std::string text;
  for (char c : raw) {
    if (c != ' ') text.push_back(c);
  }
  switch (f.kind()) {
    case FieldKind::gf4:
      for (unsigned i = 0; i < 4; ++i) {
        if (text == kGf4Names[i]) return gf4_symbol(i);
      }
      if (text == "1+w") return gf4_symbol(3);
      throw Error(ErrorCode::ParseError, "bad GF(4) literal", raw);
    case FieldKind::prime: {
      mpz_class k;
      if (text.empty() || k.set_str(text, 10) != 0) {
        throw Error(ErrorCode::ParseError, "bad GF(p) literal", raw);
      }
      return from_mpz(k, f);
    }
    case FieldKind::rational: {
      mpq_class q;
      if (text.empty() || q.set_str(text, 10) != 0) {
        throw Error(ErrorCode::ParseError, "bad rational literal", raw);
      }
      if (q.get_den() == 0) throw Error(ErrorCode::DivideByZero, "zero denominator", raw);
      q.canonicalize();
      return Scalar(f, std::move(q));
    }
    case FieldKind::float64: {
      double d = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
      if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::ParseError, "bad f64 literal", raw);
      }
      return from_double(d);
    }
  }
  return {};
}

bool Scalar::is_zero() const {
  switch (field_.kind()) {
    case FieldKind::prime:
    case FieldKind::gf4: return std::get<std::uint64_t>(value_) == 0;
    case FieldKind::rational: return sgn(std::get<mpq_class>(value_)) == 0;
    case FieldKind::float64: return std::get<double>(value_) == 0.0;
  }
  return false;
}

bool Scalar::is_one() const { return *this == one(field_); }

std::uint64_t Scalar::residue() const {
  if (!field_.is_finite()) throw Error(ErrorCode::UnsupportedField, "not a finite field");
  return std::get<std::uint64_t>(value_);
}

const mpq_class& Scalar::rational() const {
  if (field_.kind() != FieldKind::rational) {
    throw Error(ErrorCode::FieldMismatch, "not a rational scalar");
  }
  return std::get<mpq_class>(value_);
}

double Scalar::to_double() const {
  switch (field_.kind()) {
    case FieldKind::rational: return std::get<mpq_class>(value_).get_d();
    case FieldKind::float64: return std::get<double>(value_);
    default: return static_cast<double>(std::get<std::uint64_t>(value_));
  }
}

std::string Scalar::to_string() const {
  switch (field_.kind()) {
    case FieldKind::prime: return std::to_string(std::get<std::uint64_t>(value_));
    case FieldKind::gf4: return kGf4Names[std::get<std::uint64_t>(value_)];
    case FieldKind::rational: return std::get<mpq_class>(value_).get_str();
    case FieldKind::float64: {
      std::array<char, 64> buf{};
      auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(),
                                     std::get<double>(value_));
      return std::string(buf.data(), ptr);
    }
  }
  return "?";
}

void Scalar::require_same_field(const Scalar& b) const {
  if (!(field_ == b.field_)) {
    throw Error(ErrorCode::FieldMismatch, "operands live in different fields",
                field_.to_string() + " vs " + b.field_.to_string());
  }
}

Scalar Scalar::operator+(const Scalar& b) const {
  require_same_field(b);
  switch (field_.kind()) {
    case FieldKind::prime: {
      const std::uint64_t p = field_.modulus();
      std::uint64_t s = std::get<std::uint64_t>(value_) + std::get<std::uint64_t>(b.value_);
      if (s >= p) s -= p;
      return Scalar(field_, s);
    }
    case FieldKind::gf4:
      return Scalar(field_, std::get<std::uint64_t>(value_) ^ std::get<std::uint64_t>(b.value_));
    case FieldKind::rational:
      return Scalar(field_, mpq_class(std::get<mpq_class>(value_) + std::get<mpq_class>(b.value_)));
    case FieldKind::float64:
      return Scalar(field_, std::get<double>(value_) + std::get<double>(b.value_));
  }
  return {};
}

Scalar Scalar::operator-() const {
  switch (field_.kind()) {
    case FieldKind::prime: {
      const std::uint64_t v = std::get<std::uint64_t>(value_);
      return Scalar(field_, v == 0 ? 0 : field_.modulus() - v);
    }
    case FieldKind::gf4: return *this;
    case FieldKind::rational: return Scalar(field_, mpq_class(-std::get<mpq_class>(value_)));
    case FieldKind::float64: return Scalar(field_, -std::get<double>(value_));
  }
  return {};
}

Scalar Scalar::operator-(const Scalar& b) const {
  require_same_field(b);
  if (field_.kind() == FieldKind::rational) {
    return Scalar(field_, mpq_class(std::get<mpq_class>(value_) - std::get<mpq_class>(b.value_)));
  }
  return *this + (-b);
}

Scalar Scalar::operator*(const Scalar& b) const {
  require_same_field(b);
  switch (field_.kind()) {
    case FieldKind::prime:
      return Scalar(field_, mul_mod(std::get<std::uint64_t>(value_),
                                    std::get<std::uint64_t>(b.value_), field_.modulus()));
    case FieldKind::gf4:
      return Scalar(field_, static_cast<std::uint64_t>(
                                kGf4Mul[std::get<std::uint64_t>(value_)]
                                       [std::get<std::uint64_t>(b.value_)]));
    case FieldKind::rational:
      return Scalar(field_, mpq_class(std::get<mpq_class>(value_) * std::get<mpq_class>(b.value_)));
    case FieldKind::float64:
      return Scalar(field_, std::get<double>(value_) * std::get<double>(b.value_));
  }
  return {};
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(ErrorCode::DivideByZero, "inverse of zero", field_.to_string());
  switch (field_.kind()) {
    case FieldKind::prime: {
      // Fermat; p is prime by construction.
      const std::uint64_t p = field_.modulus();
      return Scalar(field_, pow_mod(std::get<std::uint64_t>(value_), p - 2, p));
    }
    case FieldKind::gf4:
      return Scalar(field_, static_cast<std::uint64_t>(kGf4Inv[std::get<std::uint64_t>(value_)]));
    case FieldKind::rational:
      return Scalar(field_, mpq_class(1 / std::get<mpq_class>(value_)));
    case FieldKind::float64:
      return Scalar(field_, 1.0 / std::get<double>(value_));
  }
  return {};
}

Scalar Scalar::operator/(const Scalar& b) const {
  require_same_field(b);
  if (field_.kind() == FieldKind::rational) {
    if (b.is_zero()) throw Error(ErrorCode::DivideByZero, "division by zero");
    return Scalar(field_, mpq_class(std::get<mpq_class>(value_) / std::get<mpq_class>(b.value_)));
  }
  return *this * b.inverse();
}

bool Scalar::operator==(const Scalar& b) const {
  if (!(field_ == b.field_)) return false;
  switch (field_.kind()) {
    case FieldKind::prime:
    case FieldKind::gf4:
      return std::get<std::uint64_t>(value_) == std::get<std::uint64_t>(b.value_);
    case FieldKind::rational:
      return std::get<mpq_class>(value_) == std::get<mpq_class>(b.value_);
    case FieldKind::float64:
      return std::get<double>(value_) == std::get<double>(b.value_);
  }
  return false;
}

Scalar field_arith(const Scalar& a, const Scalar& b, ArithOp op) {
  switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
    case ArithOp::div: return a / b;
  }
  return a;
}

std::vector<Scalar> enumerate_elements(const Field& f) {
  const auto q = f.order();
  if (!q) throw Error(ErrorCode::UnsupportedField, "cannot enumerate an infinite field");
  if (*q > (std::uint64_t{1} << 24)) {
    throw Error(ErrorCode::SearchTooLarge, "field too large to enumerate", f.to_string());
  }
  std::vector<Scalar> out;
  out.reserve(*q);
  for (std::uint64_t r = 0; r < *q; ++r) out.push_back(Scalar::from_residue(r, f));
  return out;
}

std::pair<Scalar, Scalar> pick_gh(const Field& f) {
  if (f.order() && *f.order() < 4) {
    throw Error(ErrorCode::FieldTooSmall, "need a field with at least four elements",
                f.to_string());
  }
  // Candidates other than 0 and 1, smallest canonical representative first.
  std::vector<Scalar> candidates;
  const std::uint64_t limit = f.order() ? std::min<std::uint64_t>(*f.order(), 18) : 18;
  for (std::uint64_t r = 2; r < limit; ++r) {
    candidates.push_back(f.is_finite() ? Scalar::from_residue(r, f)
                                       : Scalar::from_int(static_cast<long long>(r), f));
  }
  for (const auto& g : candidates) {
    for (const auto& h : candidates) {
      if (!(g * h).is_one()) return {g, h};
    }
  }
  throw Error(ErrorCode::FieldTooSmall, "no admissible (g, h)", f.to_string());
}

}  // namespace blocktri
