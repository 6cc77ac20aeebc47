#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "homsphere/error.hpp"

namespace homsphere {

/// Complete subgroup lattice of (Z_p)^k, k <= 4. Subgroups are subspaces,
/// indexed canonically by (rank, row-reduced basis) with the trivial subgroup
/// at index 0 and the full group last.
struct Lattice {
  std::uint32_t p = 0;
  std::uint32_t k = 0;

  struct Subgroup {
    std::uint32_t rank;
    std::vector<std::vector<std::uint32_t>> basis;  // RREF rows, each of length k
  };
  std::vector<Subgroup> subgroups;
  std::vector<std::vector<std::size_t>> covers;   // index-p subgroups of each subgroup
  std::vector<std::vector<std::size_t>> parents;  // inverse of covers

  static Lattice build(std::uint32_t p, std::uint32_t k);  ///< RankTooLarge if k > 4

  std::size_t full_index() const { return subgroups.size() - 1; }
  std::vector<std::size_t> of_rank(std::uint32_t r) const;
  std::string label(std::size_t idx) const;
};

/// Partition of same-rank subgroups into conjugacy-forced equality classes.
struct ClassPartition {
  std::vector<std::size_t> block_of;  // block id per subgroup index

  static ClassPartition trivial(const Lattice& l);            ///< singletons
  static ClassPartition single_block_per_rank(const Lattice& l);
  /// k = 2 split of the rank-1 subgroups by squareness of a line
  /// representative in GF(p^2); rank-0 and rank-2 are singletons.
  static ClassPartition psl2_square_split(const Lattice& l);

  std::size_t block_count() const;
};

struct SolverOptions {
  bool orientation_preserving = true;
  bool strict_faithful = true;
  bool euler_rule = true;
};

/// r value per subgroup index; -1 denotes an empty fixed-point set.
using FixAssignment = std::vector<int>;

/// Exhaustive enumeration of all assignments satisfying, at every subgroup B
/// of rank >= 2, the identity n - r(B) = sum over index-p subgroups K of B of
/// (r(K) - r(B)), plus faithfulness, parity, the Euler rule, class constancy
/// and monotonicity. Results in lexicographic order of the assignment vector.
std::vector<FixAssignment> borel_solve(const Lattice& l, int n,
                                       const ClassPartition& classes,
                                       const SolverOptions& opts = {});

/// Independent validator: re-evaluates every constraint from scratch.
bool check_assignment(const Lattice& l, int n, const ClassPartition& classes,
                      const SolverOptions& opts, const FixAssignment& a);

enum class PartitionKind { Trivial, SingleBlockPerRank };

/// Smallest n (searched from 1) with a nonempty solution set.
int min_feasible_dim(std::uint32_t p, std::uint32_t k,
                     PartitionKind kind = PartitionKind::Trivial,
                     const SolverOptions& opts = {}, int n_limit = 64);

/// Oracle for the solver: the rotation action with c coordinate characters on
/// the sphere of dimension 2c - 1 assigns r(B) = 2 #(columns vanishing on B) - 1;
/// returns whether every rank >= 2 identity holds (always true).
/// `characters` is a k x c matrix mod p, stored column-major.
bool linear_model_check(std::uint32_t p, std::uint32_t k,
                        const std::vector<std::vector<std::uint32_t>>& characters);

/// Smallest n admitted by the conjugate-subgroup inequality:
/// (p^k-1)/(p-1) <= (n+1)/2 for odd p, 2^k <= n+2 for p = 2.
int lemma1_bound(std::uint32_t p, std::uint32_t k);

}  // namespace homsphere
