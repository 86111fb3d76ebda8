#include "multipool/gf.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "multipool/errors.hpp"

namespace multipool::gf {

namespace {

constexpr std::uint32_t kMaxOrder = 64;

// Conway polynomials C_{p,a}, constant term first.
const std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>>& conway_table() {
  static const std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>> table{
      {{2, 2}, {1, 1, 1}},
      {{2, 3}, {1, 1, 0, 1}},
      {{2, 4}, {1, 1, 0, 0, 1}},
      {{2, 5}, {1, 0, 1, 0, 0, 1}},
      {{2, 6}, {1, 1, 0, 1, 1, 0, 1}},
      {{3, 2}, {2, 2, 1}},
      {{3, 3}, {1, 2, 0, 1}},
      {{5, 2}, {2, 4, 1}},
      {{7, 2}, {3, 6, 1}},
  };
  return table;
}

// Remainder of num modulo the monic polynomial den over F_p (constant term first).
std::vector<std::uint32_t> poly_mod(std::uint32_t p, std::vector<std::uint32_t> num,
                                    std::span<const std::uint32_t> den) {
  const std::size_t dd = den.size() - 1;
  while (num.size() > dd) {
    const std::uint32_t lead = num.back();
    if (lead != 0) {
      const std::size_t shift = num.size() - 1 - dd;
      for (std::size_t k = 0; k <= dd; ++k) {
        num[shift + k] = (num[shift + k] + (p - (lead * den[k]) % p)) % p;
      }
    }
    num.pop_back();
  }
  return num;
}

bool is_zero_poly(const std::vector<std::uint32_t>& v) {
  return std::all_of(v.begin(), v.end(), [](std::uint32_t c) { return c == 0; });
}

std::uint32_t ipow(std::uint32_t base, std::uint32_t exp) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    r *= base;
    if (r > (1ULL << 31)) throw UnsupportedField("field order overflows: " + std::to_string(base) + "^" +
                                                 std::to_string(exp));
  }
  return static_cast<std::uint32_t>(r);
}

}  // namespace

bool is_prime(std::uint32_t n) noexcept {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

PrimePower::PrimePower(std::uint32_t p, std::uint32_t a) : p_(p), a_(a), q_(0) {
  if (!is_prime(p)) throw UnsupportedField("field characteristic " + std::to_string(p) + " is not prime");
  if (a < 1) throw UnsupportedField("field degree must be at least 1");
  q_ = ipow(p, a);
}

PrimePower PrimePower::from_order(std::uint32_t q) {
  if (q < 2) throw UnsupportedField("order " + std::to_string(q) + " is not a prime power");
  std::uint32_t p = 2;
  while (q % p != 0) ++p;
  std::uint32_t a = 0;
  std::uint32_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++a;
  }
  if (rest != 1) throw UnsupportedField("order " + std::to_string(q) + " is not a prime power");
  return PrimePower(p, a);
}

const std::vector<std::uint32_t>& supported_orders() {
  static const std::vector<std::uint32_t> orders = [] {
    std::vector<std::uint32_t> v;
    for (std::uint32_t q = 2; q <= kMaxOrder; ++q) {
      if (is_prime(q)) v.push_back(q);
    }
    for (const auto& [key, _] : conway_table()) v.push_back(ipow(key.first, key.second));
    std::sort(v.begin(), v.end());
    return v;
  }();
  return orders;
}

bool is_supported_order(std::uint32_t q) noexcept {
  const auto& v = supported_orders();
  return std::binary_search(v.begin(), v.end(), q);
}

std::vector<std::uint32_t> conway_polynomial(const PrimePower& order) {
  if (!is_supported_order(order.q())) {
    throw UnsupportedField("unsupported field order " + std::to_string(order.q()));
  }
  if (order.a() == 1) return {0, 1};
  return conway_table().at({order.p(), order.a()});
}

bool is_irreducible(std::uint32_t p, std::span<const std::uint32_t> coeffs) {
  if (coeffs.size() < 2 || coeffs.back() != 1) return false;
  const std::size_t deg = coeffs.size() - 1;
  if (deg == 1) return true;
  // Enumerate monic divisors of degree d by their lower coefficients in base p.
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t k = 0; k < d; ++k) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      std::vector<std::uint32_t> divisor(d + 1);
      std::uint64_t c = code;
      for (std::size_t k = 0; k < d; ++k) {
        divisor[k] = static_cast<std::uint32_t>(c % p);
        c /= p;
      }
      divisor[d] = 1;
      const auto rem = poly_mod(p, std::vector<std::uint32_t>(coeffs.begin(), coeffs.end()), divisor);
      if (is_zero_poly(rem)) return false;
    }
  }
  return true;
}

namespace poly {

std::vector<std::uint32_t> to_coefficients(const PrimePower& order, std::uint32_t index) {
  std::vector<std::uint32_t> c(order.a());
  for (auto& digit : c) {
    digit = index % order.p();
    index /= order.p();
  }
  return c;
}

std::uint32_t from_coefficients(const PrimePower& order, std::span<const std::uint32_t> coeffs) {
  std::uint32_t index = 0;
  for (std::size_t k = coeffs.size(); k-- > 0;) index = index * order.p() + coeffs[k];
  return index;
}

std::uint32_t add(const PrimePower& order, std::uint32_t x, std::uint32_t y) {
  auto cx = to_coefficients(order, x);
  const auto cy = to_coefficients(order, y);
  for (std::size_t k = 0; k < cx.size(); ++k) cx[k] = (cx[k] + cy[k]) % order.p();
  return from_coefficients(order, cx);
}

std::uint32_t mul(const PrimePower& order, std::span<const std::uint32_t> modulus, std::uint32_t x,
                  std::uint32_t y) {
  const std::uint32_t p = order.p();
  const auto cx = to_coefficients(order, x);
  const auto cy = to_coefficients(order, y);
  std::vector<std::uint32_t> prod(cx.size() + cy.size() - 1, 0);
  for (std::size_t i = 0; i < cx.size(); ++i) {
    for (std::size_t j = 0; j < cy.size(); ++j) prod[i + j] = (prod[i + j] + cx[i] * cy[j]) % p;
  }
  auto rem = poly_mod(p, std::move(prod), modulus);
  rem.resize(order.a(), 0);
  return from_coefficients(order, rem);
}

}  // namespace poly

Field::Field(const PrimePower& order) : Field(order, conway_polynomial(order)) {}

Field Field::with_modulus(const PrimePower& order, std::vector<std::uint32_t> modulus) {
  if (order.q() > kMaxOrder) {
    throw UnsupportedField("unsupported field order " + std::to_string(order.q()));
  }
  if (modulus.size() != order.a() + 1 || modulus.back() != 1) {
    throw DomainError("modulus must be monic of degree " + std::to_string(order.a()));
  }
  for (auto c : modulus) {
    if (c >= order.p()) throw DomainError("modulus coefficient out of range");
  }
  return Field(order, std::move(modulus));
}

Field::Field(const PrimePower& order, std::vector<std::uint32_t> modulus)
    : order_(order), modulus_(std::move(modulus)) {
  if (order_.a() == 1) return;
  const std::uint32_t q = order_.q();
  add_table_.resize(static_cast<std::size_t>(q) * q);
  mul_table_.resize(static_cast<std::size_t>(q) * q);
  for (std::uint32_t x = 0; x < q; ++x) {
    for (std::uint32_t y = 0; y < q; ++y) {
      add_table_[x * q + y] = static_cast<std::uint16_t>(poly::add(order_, x, y));
      mul_table_[x * q + y] = static_cast<std::uint16_t>(poly::mul(order_, modulus_, x, y));
    }
  }
}

void Field::check(FieldElem x) const {
  if (x.index >= q()) {
    throw DomainError("field element index " + std::to_string(x.index) + " out of range for GF(" +
                      std::to_string(q()) + ")");
  }
}

FieldElem Field::elem(std::uint32_t index) const {
  FieldElem e{index};
  check(e);
  return e;
}

FieldElem Field::add(FieldElem x, FieldElem y) const {
  check(x);
  check(y);
  if (order_.a() == 1) return FieldElem{(x.index + y.index) % q()};
  return FieldElem{add_table_[x.index * q() + y.index]};
}

FieldElem Field::neg(FieldElem x) const {
  check(x);
  const std::uint32_t p = order_.p();
  auto c = poly::to_coefficients(order_, x.index);
  for (auto& digit : c) digit = (p - digit) % p;
  return FieldElem{poly::from_coefficients(order_, c)};
}

FieldElem Field::sub(FieldElem x, FieldElem y) const { return add(x, neg(y)); }

FieldElem Field::mul(FieldElem x, FieldElem y) const {
  check(x);
  check(y);
  if (order_.a() == 1) return FieldElem{static_cast<std::uint32_t>((std::uint64_t{x.index} * y.index) % q())};
  return FieldElem{mul_table_[x.index * q() + y.index]};
}

FieldElem Field::inv(FieldElem x) const {
  check(x);
  for (std::uint32_t y = 1; y < q(); ++y) {
    if (mul(x, FieldElem{y}) == one()) return FieldElem{y};
  }
  throw DomainError("element " + std::to_string(x.index) + " has no multiplicative inverse");
}

std::vector<std::uint32_t> Field::coefficients(FieldElem x) const {
  check(x);
  return poly::to_coefficients(order_, x.index);
}

FieldReport verify_field(const Field& field) {
  FieldReport r;
  const std::uint32_t q = field.q();
  if (q > kMaxOrder) {
    r.failures.push_back("order too large for exhaustive verification");
    return r;
  }
  r.irreducible = is_irreducible(field.characteristic(), field.modulus());
  if (!r.irreducible) r.failures.push_back("modulus is reducible over F_" + std::to_string(field.characteristic()));

  auto fail = [&](bool& flag, const std::string& msg) {
    if (flag) r.failures.push_back(msg);
    flag = false;
  };

  r.additive_group = true;
  r.multiplicative_group = true;
  r.distributive = true;
  for (std::uint32_t a = 0; a < q; ++a) {
    const FieldElem x{a};
    if (field.add(x, field.zero()) != x) fail(r.additive_group, "0 is not an additive identity");
    if (field.add(x, field.neg(x)) != field.zero()) fail(r.additive_group, "missing additive inverse");
    if (a != 0) {
      if (field.mul(x, field.one()) != x) fail(r.multiplicative_group, "1 is not a multiplicative identity");
      bool has_inverse = false;
      for (std::uint32_t b = 1; b < q && !has_inverse; ++b) has_inverse = field.mul(x, FieldElem{b}) == field.one();
      if (!has_inverse) fail(r.multiplicative_group, "element " + std::to_string(a) + " has no inverse");
    }
    for (std::uint32_t b = 0; b < q; ++b) {
      const FieldElem y{b};
      if (field.add(x, y) != field.add(y, x)) fail(r.additive_group, "addition is not commutative");
      if (field.mul(x, y) != field.mul(y, x)) fail(r.multiplicative_group, "multiplication is not commutative");
      if (a != 0 && b != 0 && field.mul(x, y) == field.zero()) {
        fail(r.multiplicative_group, "zero divisors exist");
      }
      for (std::uint32_t c = 0; c < q; ++c) {
        const FieldElem z{c};
        if (field.add(field.add(x, y), z) != field.add(x, field.add(y, z))) {
          fail(r.additive_group, "addition is not associative");
        }
        if (field.mul(field.mul(x, y), z) != field.mul(x, field.mul(y, z))) {
          fail(r.multiplicative_group, "multiplication is not associative");
        }
        if (field.mul(x, field.add(y, z)) != field.add(field.mul(x, y), field.mul(x, z))) {
          fail(r.distributive, "multiplication does not distribute over addition");
        }
      }
    }
  }
  return r;
}

}  // namespace multipool::gf
