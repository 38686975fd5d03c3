#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "blocktri/error.hpp"

namespace blocktri {

enum class FieldKind { prime, gf4, rational, float64 };

/// Identifies one of the supported scalar fields: GF(p) for a prime p < 2^61,
/// the four-element field GF(4), the rationals, or IEEE doubles.
class Field {
 public:
  static Field prime(std::uint64_t p);
  static Field gf4() { return Field(FieldKind::gf4, 4); }
  static Field rational() { return Field(FieldKind::rational, 0); }
  static Field float64() { return Field(FieldKind::float64, 0); }

  /// Accepts "rational", "f64", "gf:4" and "gf:<p>".
  static Field parse(const std::string& spelling);

  FieldKind kind() const noexcept { return kind_; }
  std::uint64_t modulus() const noexcept { return p_; }
  bool is_exact() const noexcept { return kind_ != FieldKind::float64; }
  bool is_finite() const noexcept {
    return kind_ == FieldKind::prime || kind_ == FieldKind::gf4;
  }
  /// Number of elements for finite fields, nullopt otherwise.
  std::optional<std::uint64_t> order() const noexcept;
  /// Additive order of 1; zero for characteristic zero.
  std::uint64_t characteristic() const noexcept;

  std::string to_string() const;

  friend bool operator==(const Field&, const Field&) = default;

 private:
  Field(FieldKind kind, std::uint64_t p) : kind_(kind), p_(p) {}

  FieldKind kind_;
  std::uint64_t p_;
};

bool is_prime(std::uint64_t n);

/// An element of a Field held in canonical form: least residue for GF(p),
/// the 2-bit symbol (0, 1, w, w+1) for GF(4), a reduced mpq for rationals.
class Scalar {
 public:
  Scalar() : field_(Field::rational()), value_(mpq_class(0)) {}

  static Scalar zero(const Field& f) { return from_int(0, f); }
  static Scalar one(const Field& f) { return from_int(1, f); }
  /// Image of k under the ring map Z -> F.
  static Scalar from_int(long long k, const Field& f);
  static Scalar from_mpz(const mpz_class& k, const Field& f);
  static Scalar from_rational(const mpq_class& q);  // in Q
  static Scalar from_double(double d);              // in f64
  /// GF(4) element from its symbol index 0..3 = {0, 1, w, w+1}.
  static Scalar gf4_symbol(unsigned symbol);
  /// Residue in GF(p), or symbol index for GF(4).
  static Scalar from_residue(std::uint64_t r, const Field& f);

  /// Parses a literal: "w+1" style for GF(4), "a/b" for rationals.
  static Scalar parse(const std::string& text, const Field& f);

  const Field& field() const noexcept { return field_; }
  bool is_zero() const;
  bool is_one() const;

  /// Residue for GF(p), symbol index for GF(4). Finite fields only.
  std::uint64_t residue() const;
  const mpq_class& rational() const;
  double to_double() const;

  std::string to_string() const;

  Scalar operator+(const Scalar& b) const;
  Scalar operator-(const Scalar& b) const;
  Scalar operator*(const Scalar& b) const;
  Scalar operator/(const Scalar& b) const;
  Scalar operator-() const;
  Scalar inverse() const;
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

  /// Structural equality; for f64 this is exact IEEE equality.
  bool operator==(const Scalar& b) const;

 private:
  using Payload = std::variant<std::uint64_t, mpq_class, double>;
  Scalar(const Field& f, Payload v) : field_(f), value_(std::move(v)) {}

  void require_same_field(const Scalar& b) const;

  Field field_;
  Payload value_;
};

enum class ArithOp { add, sub, mul, div };

Scalar field_arith(const Scalar& a, const Scalar& b, ArithOp op);

/// Deterministic g, h with g, h, gh all different from 0 and 1; the smallest
/// candidates in canonical element order. Requires at least four elements.
std::pair<Scalar, Scalar> pick_gh(const Field& f);

/// All elements of a finite field in canonical order (0, 1, 2, ... or
/// 0, 1, w, w+1).
std::vector<Scalar> enumerate_elements(const Field& f);

}  // namespace blocktri
