#pragma once

// Arithmetic in GF(p^a) for the small orders used to build multipools.
//
// Elements are identified by their index in [0, q): the residue polynomial
// of degree < a is read as a base-p number (coefficient of x^k is digit k).
// For a = 1 this is the usual representative in {0, ..., p-1}.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace multipool::gf {

/// q = p^a with p prime and a >= 1.
class PrimePower {
 public:
  /// Throws UnsupportedField when p is not prime, a < 1 or p^a overflows.
  PrimePower(std::uint32_t p, std::uint32_t a);

  /// Factor q as p^a. Throws UnsupportedField when q is not a prime power.
  static PrimePower from_order(std::uint32_t q);

  std::uint32_t p() const noexcept { return p_; }
  std::uint32_t a() const noexcept { return a_; }
  std::uint32_t q() const noexcept { return q_; }

  friend bool operator==(const PrimePower&, const PrimePower&) = default;

 private:
  std::uint32_t p_;
  std::uint32_t a_;
  std::uint32_t q_;
};

bool is_prime(std::uint32_t n) noexcept;

/// Orders for which a built-in modulus exists: all primes <= 64 and
/// 4, 8, 9, 16, 25, 27, 32, 49, 64.
const std::vector<std::uint32_t>& supported_orders();
bool is_supported_order(std::uint32_t q) noexcept;

struct FieldElem {
  std::uint32_t index = 0;
  friend bool operator==(FieldElem, FieldElem) = default;
  friend auto operator<=>(FieldElem, FieldElem) = default;
};

/// Coefficients (constant term first) of the tabulated Conway polynomial for
/// (p, a); for a = 1 this is the polynomial x. Throws UnsupportedField.
std::vector<std::uint32_t> conway_polynomial(const PrimePower& order);

/// Brute-force irreducibility test over F_p: no root and no monic factor of
/// degree 1..deg/2. `coeffs` is constant-term first and must be monic.
bool is_irreducible(std::uint32_t p, std::span<const std::uint32_t> coeffs);

/// Reference polynomial arithmetic on base-p encoded indices. Field uses
/// these to fill its tables; tests compare them against the prime fast path.
namespace poly {
std::vector<std::uint32_t> to_coefficients(const PrimePower& order, std::uint32_t index);
std::uint32_t from_coefficients(const PrimePower& order, std::span<const std::uint32_t> coeffs);
std::uint32_t add(const PrimePower& order, std::uint32_t x, std::uint32_t y);
std::uint32_t mul(const PrimePower& order, std::span<const std::uint32_t> modulus, std::uint32_t x,
                  std::uint32_t y);
}  // namespace poly

class Field {
 public:
  /// The field of the given order with its Conway modulus. Orders outside
  /// supported_orders() raise UnsupportedField naming the order.
  explicit Field(const PrimePower& order);

  /// Build the quotient ring F_p[x]/(modulus) without checking that the
  /// modulus is irreducible. Intended for verify_field() fixtures.
  static Field with_modulus(const PrimePower& order, std::vector<std::uint32_t> modulus);

  const PrimePower& order() const noexcept { return order_; }
  std::uint32_t q() const noexcept { return order_.q(); }
  std::uint32_t characteristic() const noexcept { return order_.p(); }
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

  /// Throws DomainError when index >= q.
  FieldElem elem(std::uint32_t index) const;
  FieldElem zero() const noexcept { return FieldElem{0}; }
  FieldElem one() const noexcept { return FieldElem{1}; }

  FieldElem add(FieldElem x, FieldElem y) const;
  FieldElem neg(FieldElem x) const;
  FieldElem sub(FieldElem x, FieldElem y) const;
  FieldElem mul(FieldElem x, FieldElem y) const;
  /// Throws DomainError for zero (or a zero divisor when the modulus is reducible).
  FieldElem inv(FieldElem x) const;

  std::vector<std::uint32_t> coefficients(FieldElem x) const;

 private:
  Field(const PrimePower& order, std::vector<std::uint32_t> modulus);
  void check(FieldElem x) const;

  PrimePower order_;
  std::vector<std::uint32_t> modulus_;
  // Cayley tables for a > 1; the prime field uses integer arithmetic mod p.
  std::vector<std::uint16_t> add_table_;
  std::vector<std::uint16_t> mul_table_;
};

struct FieldReport {
  bool irreducible = false;
  bool additive_group = false;
  bool multiplicative_group = false;
  bool distributive = false;
  std::vector<std::string> failures;

  bool ok() const noexcept {
    return irreducible && additive_group && multiplicative_group && distributive;
  }
};

/// Exhaustive axiom check (q <= 64): modulus irreducibility, abelian groups
/// under + and under * on the nonzero elements, distributivity.
FieldReport verify_field(const Field& field);

}  // namespace multipool::gf
