#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "homsphere/borelsolve.hpp"

namespace homsphere {

/// Solver transcript for the PSL_2(p^2) refutation pattern: the square /
/// non-square class split at dimension n, the full solution set, and the
/// resulting circle obstruction (the normalizer quotient Z_p : Z_{p-1} has no
/// faithful circle action once p >= 5).
struct BorelPatternResult {
  std::uint32_t p = 0;
  int n = 0;
  std::vector<std::size_t> block_sizes;
  std::vector<FixAssignment> solutions;
  bool infeasible = false;
  bool circle_obstruction = false;
  std::uint32_t quotient_p = 0;
  std::uint32_t quotient_t = 0;  // order of the acting cyclic group
};

/// Reason a group fails a filter; absent means the filter passes.
struct FilterFail {
  std::string filter;  // Thm4Rank | Thm3 | Lemma1 | Prop1 | Prop2 | Sec31 | Sec32 | Sec33 | BorelRefutation | SubgroupChain
  std::map<std::string, std::int64_t> params;
  std::int64_t lhs = 0;
  std::string rel;
  std::int64_t rhs = 0;
  std::string contained;                    // chain target, e.g. "PSL(2,25)"
  std::shared_ptr<FilterFail> via;          // terminal reason for chains
  std::shared_ptr<BorelPatternResult> borel;
};
using FilterOutcome = std::optional<FilterFail>;

std::int64_t ipow(std::int64_t base, std::uint32_t exp);

/// (p, k) with q = p^k, or nullopt when q is not a prime power >= 2.
std::optional<std::pair<std::uint32_t, std::uint32_t>> prime_power(std::uint64_t q);

/// Minimal dimension of a faithful orientation-preserving action of (Z_p)^k
/// on a mod p homology sphere: k for p = 2, 2k - 1 for odd p.
int min_dim_elem_abelian(std::uint32_t p, std::uint32_t k);

/// Minimal dimension of a PSL_2(p) action on a mod p homology sphere:
/// (p-1)/2 for p = 1 mod 4, p - 2 for p = 3 mod 4. Requires prime p >= 5.
int min_dim_psl2(std::uint32_t p);

/// Minimal dimension of a linear SL_2(p) sphere action (p - 2 for p = 1 mod 4,
/// p for p = 3 mod 4); with min_dim_psl2 this brackets the open SL_2(p) case.
int sl2_linear_min_dim(std::uint32_t p);

/// Minimal dimension for the metacyclic group Z_p : Z_q with an effective
/// action (q divides p - 1): 2q - 1 for odd q, q for even q. Requires p >= 5.
int min_dim_metacyclic(std::uint32_t p, std::uint32_t q);

/// Independent re-derivation of the two closed forms above from the
/// multiplier-power constraint: smallest n admitting a consistent instance
/// (free case: n odd with q_ord dividing (n+1)/2; nonempty fixed set of
/// dimension d: sign +1 forces q_ord | (n-d)/2, sign -1 forces q_ord even
/// with (n-d)/2 = q_ord/2 mod q_ord).
int min_dim_from_lemma2(std::uint32_t p, std::uint32_t q_ord);

/// SL_2(q) on a homology 5-sphere forces q <= 5.
bool sl2_dim5_admissible(std::uint64_t q);

/// Closed-form family filters. Pass = nullopt; a fail carries the violated
/// inequality (integer cleared of fractions) and its parameters.
FilterOutcome psl2_family_filter(std::uint32_t p, std::uint32_t k, int n);
FilterOutcome pslm_family_filter(std::uint32_t m, std::uint32_t p, std::uint32_t k, int n);
FilterOutcome psp_family_filter(std::uint32_t m, std::uint32_t p, std::uint32_t k, int n);
FilterOutcome alternating_filter(std::uint32_t m, int n);

/// The k = 2 solver refutation: engaged when the two-class Borel analysis
/// excludes PSL_2(p^2) at dimension n (either no assignment exists, or every
/// assignment forces an empty full fixed set together with a circle class,
/// and Z_p : Z_{p-1} admits no faithful circle action).
std::optional<BorelPatternResult> psl2_borel_pattern(std::uint32_t p, int n);

/// Full PSL_2(q) evaluation: closed forms, then the k = 2 pattern.
FilterOutcome psl2_full_filter(std::uint32_t p, std::uint32_t k, int n);

}  // namespace homsphere
