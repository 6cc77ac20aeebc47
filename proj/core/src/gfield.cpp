#include "homsphere/gfield.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace homsphere {

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

namespace {

// Dense polynomials over Z_p, coefficients low-to-high. Divisors in poly_rem
// are monic.
std::vector<std::uint32_t> poly_rem(std::vector<std::uint32_t> a,
                                    const std::vector<std::uint32_t>& m,
                                    std::uint32_t p) {
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const std::uint64_t lead = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    if (lead != 0) {
      for (std::size_t i = 0; i <= dm; ++i) {
        std::uint64_t cur = a[shift + i];
        std::uint64_t s = (lead * m[i]) % p;
        a[shift + i] = static_cast<std::uint32_t>((cur + p - s) % p);
      }
    }
    a.pop_back();
  }
  return a;
}

bool poly_is_zero(const std::vector<std::uint32_t>& a) {
  for (auto c : a)
    if (c != 0) return false;
  return true;
}

// f is monic of degree >= 2, given as x^deg + lower coefficients. Trial
// factorization: f is reducible iff some monic polynomial of degree
// 1..deg/2 divides it.
bool is_irreducible(const std::vector<std::uint32_t>& f_low, std::uint32_t deg,
                    std::uint32_t p) {
  std::vector<std::uint32_t> f(f_low.begin(), f_low.begin() + deg);
  f.push_back(1);
  for (std::uint32_t d = 1; 2 * d <= deg; ++d) {
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<std::uint32_t> g(d + 1);
      std::uint64_t t = idx;
      for (std::uint32_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      g[d] = 1;
      if (poly_is_zero(poly_rem(f, g, p))) return false;
    }
  }
  return true;
}

}  // namespace

FieldCtx::FieldCtx(std::uint32_t p, std::uint32_t k) : p_(p), k_(k) {
  if (!is_prime_u64(p)) raise(ErrorCode::NonPrime, "p is not prime", p);
  if (k < 1 || k > 8) raise(ErrorCode::DegreeOutOfRange, "extension degree out of range", k);
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    q *= p;
    if (q > (1ull << 31)) raise(ErrorCode::OverflowBound, "p^k exceeds 2^31", 0);
  }
  q_ = q;

  if (k == 1) {
    modulus_ = {0};  // x + 0: reduction collapses to arithmetic mod p
  } else {
    // Candidate index, read as the coefficient tuple (a_{k-1},...,a_0) in
    // increasing integer order, gives the lexicographic scan.
    std::uint64_t pk = 1;
    for (std::uint32_t i = 0; i < k; ++i) pk *= p;
    for (std::uint64_t c = 0; c < pk; ++c) {
      std::vector<std::uint32_t> low(k);
      std::uint64_t t = c;
      for (std::uint32_t i = 0; i < k; ++i) {
        low[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      if (is_irreducible(low, k, p)) {
        modulus_ = low;
        break;
      }
    }
  }
  order_prime_factors_ = distinct_prime_factors(q_ - 1);
}

const FieldCtx& FieldCtx::get(std::uint32_t p, std::uint32_t k) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, std::unique_ptr<FieldCtx>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, k);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::unique_ptr<FieldCtx>(new FieldCtx(p, k))).first;
  }
  return *it->second;
}

std::uint32_t FieldElem::value() const {
  std::uint64_t v = 0;
  std::uint64_t pw = 1;
  for (std::uint32_t i = 0; i < ctx_->k(); ++i) {
    v += c_[i] * pw;
    pw *= ctx_->p();
  }
  return static_cast<std::uint32_t>(v);
}

bool FieldElem::is_zero() const {
  for (std::uint32_t i = 0; i < ctx_->k(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

FieldElem FieldCtx::element(std::uint64_t value) const {
  FieldElem e;
  e.ctx_ = this;
  for (std::uint32_t i = 0; i < k_; ++i) {
    e.c_[i] = static_cast<std::uint32_t>(value % p_);
    value /= p_;
  }
  return e;
}

FieldElem FieldCtx::from_coeffs(const std::vector<std::uint32_t>& coeffs) const {
  FieldElem e;
  e.ctx_ = this;
  for (std::uint32_t i = 0; i < k_ && i < coeffs.size(); ++i) e.c_[i] = coeffs[i] % p_;
  return e;
}

FieldElem FieldCtx::add(const FieldElem& a, const FieldElem& b) const {
  FieldElem r;
  r.ctx_ = this;
  for (std::uint32_t i = 0; i < k_; ++i) r.c_[i] = (a.c_[i] + b.c_[i]) % p_;
  return r;
}

FieldElem FieldCtx::sub(const FieldElem& a, const FieldElem& b) const {
  FieldElem r;
  r.ctx_ = this;
  for (std::uint32_t i = 0; i < k_; ++i) r.c_[i] = (a.c_[i] + p_ - b.c_[i]) % p_;
  return r;
}

FieldElem FieldCtx::neg(const FieldElem& a) const {
  FieldElem r;
  r.ctx_ = this;
  for (std::uint32_t i = 0; i < k_; ++i) r.c_[i] = (p_ - a.c_[i]) % p_;
  return r;
}

FieldElem FieldCtx::mul(const FieldElem& a, const FieldElem& b) const {
  std::array<std::uint64_t, 15> prod{};
  for (std::uint32_t i = 0; i < k_; ++i) {
    if (a.c_[i] == 0) continue;
    for (std::uint32_t j = 0; j < k_; ++j) {
      prod[i + j] += static_cast<std::uint64_t>(a.c_[i]) * b.c_[j];
    }
  }
  // Reduce degree >= k terms: x^k = -modulus (mod f).
  for (std::int32_t d = 2 * static_cast<std::int32_t>(k_) - 2; d >= static_cast<std::int32_t>(k_); --d) {
    std::uint64_t lead = prod[d] % p_;
    prod[d] = 0;
    if (lead == 0) continue;
    for (std::uint32_t j = 0; j < k_; ++j) {
      std::uint64_t s = (lead * modulus_[j]) % p_;
      prod[d - k_ + j] += p_ - s;
    }
  }
  FieldElem r;
  r.ctx_ = this;
  for (std::uint32_t i = 0; i < k_; ++i) r.c_[i] = static_cast<std::uint32_t>(prod[i] % p_);
  return r;
}

FieldElem FieldCtx::pow(const FieldElem& a, std::uint64_t e) const {
  FieldElem base = a;
  FieldElem r = one();
  while (e > 0) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

FieldElem FieldCtx::inv(const FieldElem& a) const {
  if (a.is_zero()) raise(ErrorCode::DivisionByZero, "inverse of zero field element");
  return pow(a, q_ - 2);
}

bool FieldCtx::is_square(const FieldElem& a) const {
  if (a.is_zero()) return true;
  if (p_ == 2) return true;  // Frobenius is an automorphism
  return pow(a, (q_ - 1) / 2) == one();
}

std::uint64_t FieldCtx::element_order(const FieldElem& a) const {
  if (a.is_zero()) raise(ErrorCode::ZeroElement, "order of zero element");
  std::uint64_t e = q_ - 1;
  for (std::uint64_t f : order_prime_factors_) {
    while (e % f == 0 && pow(a, e / f) == one()) e /= f;
  }
  return e;
}

}  // namespace homsphere
