#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "homsphere/error.hpp"

namespace homsphere {

class FieldCtx;

/// Element of GF(p^k) in the polynomial basis: k residues mod p, always
/// reduced modulo the context modulus. Equality is coefficient-wise.
class FieldElem {
 public:
  FieldElem() = default;

  const FieldCtx& ctx() const { return *ctx_; }
  std::uint32_t coeff(unsigned i) const { return c_[i]; }

  /// Integer encoding sum coeff[i] * p^i in [0, q). Total order used for
  /// canonical (lexicographically least) representative selection.
  std::uint32_t value() const;

  bool is_zero() const;

  friend bool operator==(const FieldElem& a, const FieldElem& b) {
    return a.ctx_ == b.ctx_ && a.c_ == b.c_;
  }
  friend bool operator!=(const FieldElem& a, const FieldElem& b) { return !(a == b); }
  friend bool operator<(const FieldElem& a, const FieldElem& b) {
    return a.value() < b.value();
  }

 private:
  friend class FieldCtx;
  const FieldCtx* ctx_ = nullptr;
  std::array<std::uint32_t, 8> c_{};  // first k entries used
};

/// Arithmetic context for GF(p^k). Immutable after creation; instances are
/// interned so contexts can be shared freely across threads.
///
/// The modulus is the lexicographically smallest monic irreducible degree-k
/// polynomial over Z_p (coefficient tuple read from the x^{k-1} coefficient
/// down to the constant), so every run picks the same field presentation.
class FieldCtx {
 public:
  /// Interned accessor. Throws NonPrime / DegreeOutOfRange / OverflowBound.
  /// Requires p prime, 1 <= k <= 8, p^k <= 2^31.
  static const FieldCtx& get(std::uint32_t p, std::uint32_t k);

  std::uint32_t p() const { return p_; }
  std::uint32_t k() const { return k_; }
  std::uint64_t q() const { return q_; }

  /// Coefficients of x^0..x^{k-1}; the leading x^k term is implicit.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  FieldElem zero() const { return element(0); }
  FieldElem one() const { return element(1); }

  /// Decode a base-p integer encoding (inverse of FieldElem::value()).
  FieldElem element(std::uint64_t value) const;
  FieldElem from_coeffs(const std::vector<std::uint32_t>& coeffs) const;

  FieldElem add(const FieldElem& a, const FieldElem& b) const;
  FieldElem sub(const FieldElem& a, const FieldElem& b) const;
  FieldElem mul(const FieldElem& a, const FieldElem& b) const;
  FieldElem neg(const FieldElem& a) const;
  FieldElem inv(const FieldElem& a) const;  ///< throws DivisionByZero on 0
  FieldElem pow(const FieldElem& a, std::uint64_t e) const;

  /// True iff a is a square in GF(q); 0 counts as a square. Implemented by
  /// the a^((q-1)/2) test for odd q; in characteristic 2 every element is one.
  bool is_square(const FieldElem& a) const;

  /// Multiplicative order of a nonzero element; divides q - 1.
  std::uint64_t element_order(const FieldElem& a) const;  ///< throws ZeroElement

 private:
  FieldCtx(std::uint32_t p, std::uint32_t k);
  FieldCtx(const FieldCtx&) = delete;
  FieldCtx& operator=(const FieldCtx&) = delete;

  std::uint32_t p_ = 0;
  std::uint32_t k_ = 0;
  std::uint64_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint64_t> order_prime_factors_;  // distinct primes of q-1
};

inline FieldElem operator+(const FieldElem& a, const FieldElem& b) { return a.ctx().add(a, b); }
inline FieldElem operator-(const FieldElem& a, const FieldElem& b) { return a.ctx().sub(a, b); }
inline FieldElem operator*(const FieldElem& a, const FieldElem& b) { return a.ctx().mul(a, b); }
inline FieldElem operator-(const FieldElem& a) { return a.ctx().neg(a); }

/// Deterministic primality test (trial division; inputs stay below 2^31).
bool is_prime_u64(std::uint64_t n);

/// Distinct prime factors by trial division, ascending.
std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n);

}  // namespace homsphere
