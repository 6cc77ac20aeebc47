#include "homsphere/dimbounds.hpp"

#include "homsphere/gfield.hpp"

namespace homsphere {

std::int64_t ipow(std::int64_t base, std::uint32_t exp) {
  std::int64_t r = 1;
  for (std::uint32_t i = 0; i < exp; ++i) r *= base;
  return r;
}

std::optional<std::pair<std::uint32_t, std::uint32_t>> prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  for (std::uint64_t p = 2; p * p <= q; ++p) {
    if (q % p != 0) continue;
    std::uint32_t k = 0;
    std::uint64_t t = q;
    while (t % p == 0) {
      t /= p;
      ++k;
    }
    if (t != 1) return std::nullopt;
    return std::make_pair(static_cast<std::uint32_t>(p), k);
  }
  return std::make_pair(static_cast<std::uint32_t>(q), 1u);  // q itself prime
}

int min_dim_elem_abelian(std::uint32_t p, std::uint32_t k) {
  if (!is_prime_u64(p)) raise(ErrorCode::NonPrime, "p is not prime", p);
  if (k < 1) raise(ErrorCode::BadArgument, "rank must be >= 1", k);
  return p == 2 ? static_cast<int>(k) : static_cast<int>(2 * k - 1);
}

int min_dim_psl2(std::uint32_t p) {
  if (!is_prime_u64(p)) raise(ErrorCode::NonPrime, "p is not prime", p);
  if (p < 5) raise(ErrorCode::PrimeTooSmall, "need p >= 5", p);
  return p % 4 == 1 ? static_cast<int>((p - 1) / 2) : static_cast<int>(p - 2);
}

int sl2_linear_min_dim(std::uint32_t p) {
  if (!is_prime_u64(p)) raise(ErrorCode::NonPrime, "p is not prime", p);
  if (p < 5) raise(ErrorCode::PrimeTooSmall, "need p >= 5", p);
  return p % 4 == 1 ? static_cast<int>(p - 2) : static_cast<int>(p);
}

int min_dim_metacyclic(std::uint32_t p, std::uint32_t q) {
  if (!is_prime_u64(p)) raise(ErrorCode::NonPrime, "p is not prime", p);
  if (p < 5) raise(ErrorCode::PrimeTooSmall, "need p >= 5", p);
  if (q < 2 || (p - 1) % q != 0)
    raise(ErrorCode::NoEffectiveAction, "q must divide p - 1", q);
  return q % 2 == 1 ? static_cast<int>(2 * q - 1) : static_cast<int>(q);
}

int min_dim_from_lemma2(std::uint32_t p, std::uint32_t q_ord) {
  if (!is_prime_u64(p)) raise(ErrorCode::NonPrime, "p is not prime", p);
  if (p < 5) raise(ErrorCode::PrimeTooSmall, "need p >= 5", p);
  if (q_ord < 2 || (p - 1) % q_ord != 0)
    raise(ErrorCode::NoEffectiveAction, "multiplier order must divide p - 1", q_ord);
  for (int n = 1;; ++n) {
    // Free case needs an odd sphere and an orientation-preserving multiplier.
    if (n % 2 == 1 && ((n + 1) / 2) % q_ord == 0) return n;
    for (int d = 0; d <= n - 2; ++d) {
      if ((n - d) % 2 != 0) continue;
      int half = (n - d) / 2;  // = (m+1)/2 for m = n-d-1
      if (half % q_ord == 0) return n;
      if (q_ord % 2 == 0 &&
          half % static_cast<int>(q_ord) == static_cast<int>(q_ord / 2))
        return n;
    }
  }
}

bool sl2_dim5_admissible(std::uint64_t q) {
  if (!prime_power(q)) raise(ErrorCode::BadArgument, "q must be a prime power", q);
  return q <= 5;
}

namespace {

FilterFail fail_thm4(std::uint32_t p, std::uint32_t rank, int n) {
  FilterFail f;
  f.filter = "Thm4Rank";
  f.params = {{"p", p}, {"k", rank}, {"n", n}};
  f.lhs = min_dim_elem_abelian(p, rank);
  f.rel = ">";
  f.rhs = n;
  return f;
}

}  // namespace

FilterOutcome psl2_family_filter(std::uint32_t p, std::uint32_t k, int n) {
  const std::int64_t q = ipow(p, k);
  if (q < 4) raise(ErrorCode::NotSimple, "PSL(2,q) requires q >= 4", q);

  if (min_dim_elem_abelian(p, k) > n) return fail_thm4(p, k, n);

  if (p == 2) {
    if (ipow(2, k) > n + 2) {
      FilterFail f;
      f.filter = "Sec31";
      f.params = {{"p", p}, {"k", k}, {"n", n}};
      f.lhs = ipow(2, k);
      f.rel = ">";
      f.rhs = n + 2;
      return f;
    }
  } else if (k % 2 == 1) {
    std::int64_t count = (q - 1) / (p - 1);
    if (2 * count > n + 1) {
      FilterFail f;
      f.filter = "Sec31";
      f.params = {{"p", p}, {"k", k}, {"n", n}};
      f.lhs = 2 * count;
      f.rel = ">";
      f.rhs = n + 1;
      return f;
    }
  } else {
    if (static_cast<std::int64_t>(p) > n) {
      FilterFail f;
      f.filter = "Sec31";
      f.params = {{"p", p}, {"k", k}, {"n", n}};
      f.lhs = p;
      f.rel = ">";
      f.rhs = n;
      return f;
    }
  }

  if (k == 1 && p >= 5 && min_dim_psl2(p) > n) {
    FilterFail f;
    f.filter = "Thm3";
    f.params = {{"p", p}, {"n", n}};
    f.lhs = min_dim_psl2(p);
    f.rel = ">";
    f.rhs = n;
    return f;
  }
  return std::nullopt;
}

std::optional<BorelPatternResult> psl2_borel_pattern(std::uint32_t p, int n) {
  if (p == 2) return std::nullopt;
  Lattice l = Lattice::build(p, 2);
  ClassPartition classes = ClassPartition::psl2_square_split(l);
  BorelPatternResult r;
  r.p = p;
  r.n = n;
  std::size_t sq = 0, nsq = 0;
  for (std::size_t i = 0; i < l.subgroups.size(); ++i) {
    if (l.subgroups[i].rank != 1) continue;
    (classes.block_of[i] == 0 ? sq : nsq) += 1;
  }
  r.block_sizes = {sq, nsq};
  r.solutions = borel_solve(l, n, classes);
  if (r.solutions.empty()) {
    r.infeasible = true;
    return r;
  }
  // Circle obstruction: every assignment leaves the full group fixed-point
  // free while some class of cyclic subgroups fixes a circle; the stabilizer
  // torus then acts on that circle through Z_p : Z_{p-1}, faithfully.
  bool pattern = true;
  std::size_t full = l.full_index();
  for (const auto& a : r.solutions) {
    bool has_circle = false;
    for (std::size_t i = 0; i < l.subgroups.size(); ++i) {
      if (l.subgroups[i].rank == 1 && a[i] == 1) has_circle = true;
    }
    if (!(a[full] == -1 && has_circle)) {
      pattern = false;
      break;
    }
  }
  if (!pattern) return std::nullopt;
  r.quotient_p = p;
  r.quotient_t = p - 1;
  // Faithful Z_p : Z_{p-1} acts on the circle only when cyclic or dihedral,
  // i.e. p - 1 <= 2.
  if (p - 1 <= 2) return std::nullopt;
  r.circle_obstruction = true;
  return r;
}

FilterOutcome psl2_full_filter(std::uint32_t p, std::uint32_t k, int n) {
  if (auto f = psl2_family_filter(p, k, n)) return f;
  if (k == 2 && p % 2 == 1) {
    if (auto pat = psl2_borel_pattern(p, n)) {
      FilterFail f;
      f.filter = "BorelRefutation";
      f.params = {{"p", p}, {"k", k}, {"n", n}};
      f.borel = std::make_shared<BorelPatternResult>(std::move(*pat));
      return f;
    }
  }
  return std::nullopt;
}

FilterOutcome pslm_family_filter(std::uint32_t m, std::uint32_t p, std::uint32_t k, int n) {
  if (m < 3) raise(ErrorCode::BadArgument, "pslm filter needs degree >= 3", m);
  const std::uint32_t rank = (m - 1) * k;
  if (min_dim_elem_abelian(p, rank) > n) return fail_thm4(p, rank, n);

  if (p == 2) {
    if (ipow(2, m - 1) > n + 2) {
      FilterFail f;
      f.filter = "Sec32";
      f.params = {{"m", m}, {"p", p}, {"k", k}, {"n", n}};
      f.lhs = ipow(2, m - 1);
      f.rel = ">";
      f.rhs = n + 2;
      return f;
    }
  } else {
    std::int64_t count = (ipow(p, m - 1) - 1) / (p - 1);
    if (2 * count > n + 1) {
      FilterFail f;
      f.filter = "Sec32";
      f.params = {{"m", m}, {"p", p}, {"k", k}, {"n", n}};
      f.lhs = 2 * count;
      f.rel = ">";
      f.rhs = n + 1;
      return f;
    }
  }
  return std::nullopt;
}

FilterOutcome alternating_filter(std::uint32_t m, int n) {
  if (m < 5) raise(ErrorCode::NotSimple, "alternating groups are simple from degree 5", m);
  const std::uint32_t rank = m / 2 - 1;
  if (rank >= 1 && min_dim_elem_abelian(2, rank) > n) return fail_thm4(2, rank, n);

  if (m >= 8) {
    // Degree >= 8 contains the degree-8 group, identified with PSL_4(2).
    if (auto via = pslm_family_filter(4, 2, 1, n)) {
      FilterFail f;
      f.filter = "SubgroupChain";
      f.params = {{"m", m}, {"n", n}};
      f.contained = "PSL(4,2)";
      f.via = std::make_shared<FilterFail>(std::move(*via));
      return f;
    }
  }

  // Metacyclic witnesses p : (p-1)/2 made of even permutations.
  for (std::uint32_t p = 5; p <= m; ++p) {
    if (!is_prime_u64(p)) continue;
    std::uint32_t q = (p - 1) / 2;
    if (q < 2) continue;
    int need = min_dim_metacyclic(p, q);
    if (need > n) {
      FilterFail f;
      f.filter = "Prop2";
      f.params = {{"m", m}, {"p", p}, {"q", q}, {"n", n}};
      f.lhs = need;
      f.rel = ">";
      f.rhs = n;
      return f;
    }
  }
  return std::nullopt;
}

FilterOutcome psp_family_filter(std::uint32_t m, std::uint32_t p, std::uint32_t k, int n) {
  if (m < 2) raise(ErrorCode::BadArgument, "psp filter needs rank >= 2", m);
  const std::int64_t q = ipow(p, k);
  if (m == 2 && q == 2) raise(ErrorCode::NotSimple, "PSp(4,2) is not simple", q);

  const std::uint32_t rank = (m - 1) * k;
  if (min_dim_elem_abelian(p, rank) > n) return fail_thm4(p, rank, n);

  if (p == 2) {
    if (ipow(2, m - 1) > n + 2) {
      FilterFail f;
      f.filter = "Sec33";
      f.params = {{"m", m}, {"p", p}, {"k", k}, {"n", n}};
      f.lhs = ipow(2, m - 1);
      f.rel = ">";
      f.rhs = n + 2;
      return f;
    }
  } else {
    std::int64_t count = (ipow(p, m - 1) - 1) / (p - 1);
    if (2 * count > n + 1) {
      FilterFail f;
      f.filter = "Sec33";
      f.params = {{"m", m}, {"p", p}, {"k", k}, {"n", n}};
      f.lhs = 2 * count;
      f.rel = ">";
      f.rhs = n + 1;
      return f;
    }
  }

  // The embedded Sp_2(q) = SL_2(q).
  if (n == 5) {
    if (!sl2_dim5_admissible(q)) {
      FilterFail f;
      f.filter = "Prop1";
      f.params = {{"m", m}, {"p", p}, {"k", k}, {"q", q}, {"n", n}};
      f.lhs = q;
      f.rel = ">";
      f.rhs = 5;
      return f;
    }
  } else if (p >= 5 && min_dim_psl2(p) > n) {
    FilterFail f;
    f.filter = "Thm3";
    f.params = {{"m", m}, {"p", p}, {"k", k}, {"n", n}};
    f.lhs = min_dim_psl2(p);
    f.rel = ">";
    f.rhs = n;
    return f;
  }

  // Subgroup chains: the field-extension PSL_2(q^2) inside PSp_4(q), and the
  // natural alternating subgroup of the even symplectic groups.
  if (m == 2) {
    if (auto via = psl2_full_filter(p, 2 * k, n)) {
      FilterFail f;
      f.filter = "SubgroupChain";
      f.params = {{"m", m}, {"p", p}, {"k", k}, {"n", n}};
      f.contained = "PSL(2," + std::to_string(q * q) + ")";
      f.via = std::make_shared<FilterFail>(std::move(*via));
      return f;
    }
  }
  if (m >= 3 && q >= 3) {
    // Sp_4(q) x Sp_{2m-4}(q) sits inside Sp_2m(q).
    if (auto via = psp_family_filter(2, p, k, n)) {
      FilterFail f;
      f.filter = "SubgroupChain";
      f.params = {{"m", m}, {"p", p}, {"k", k}, {"n", n}};
      f.contained = "PSp(4," + std::to_string(q) + ")";
      f.via = std::make_shared<FilterFail>(std::move(*via));
      return f;
    }
  }
  if (p == 2 && k == 1) {
    if (auto via = alternating_filter(2 * m + 2, n)) {
      FilterFail f;
      f.filter = "SubgroupChain";
      f.params = {{"m", m}, {"p", p}, {"k", k}, {"n", n}};
      f.contained = "Alt(" + std::to_string(2 * m + 2) + ")";
      f.via = std::make_shared<FilterFail>(std::move(*via));
      return f;
    }
  }
  return std::nullopt;
}

}  // namespace homsphere
