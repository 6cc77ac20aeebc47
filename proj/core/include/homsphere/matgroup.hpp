#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "homsphere/gfield.hpp"

namespace homsphere {

/// Square matrix over a finite field, exact arithmetic throughout.
class Mat {
 public:
  Mat(const FieldCtx& ctx, std::uint32_t dim);
  static Mat identity(const FieldCtx& ctx, std::uint32_t dim);

  std::uint32_t dim() const { return dim_; }
  const FieldCtx& ctx() const { return *ctx_; }

  FieldElem& at(std::uint32_t r, std::uint32_t c) { return e_[r * dim_ + c]; }
  const FieldElem& at(std::uint32_t r, std::uint32_t c) const { return e_[r * dim_ + c]; }

  Mat operator*(const Mat& o) const;
  Mat transpose() const;
  FieldElem det() const;
  Mat inverse() const;  ///< Gaussian elimination; throws NotUnimodular-adjacent on singular
  friend bool operator==(const Mat& a, const Mat& b) { return a.e_ == b.e_; }

  std::vector<std::uint32_t> encode() const;  ///< entry values, row-major
  static Mat decode(const FieldCtx& ctx, std::uint32_t dim,
                    const std::vector<std::uint32_t>& words);

 private:
  const FieldCtx* ctx_;
  std::uint32_t dim_;
  std::vector<FieldElem> e_;
};

/// Canonical representative of the projective class of m: lexicographically
/// least entry sequence among all scalar multiples c*m with c^dim = 1.
Mat projective_canonical(const Mat& m);

class GroupTable;
using GroupPtr = std::shared_ptr<const GroupTable>;

/// Fully enumerated finite group: indexed elements (opaque canonical
/// encodings), multiplication by index, identity at index 0. Immutable after
/// construction; lookups are read-only and safe to share.
class GroupTable {
 public:
  using Element = std::vector<std::uint32_t>;
  using Op = std::function<Element(const Element&, const Element&)>;

  /// Breadth-first closure of the generators under `op`, deterministic
  /// element order (identity first, then insertion order of the BFS seeded
  /// with the sorted generator list). Throws CapExceeded past `cap`.
  static GroupPtr closure(const Element& identity, std::vector<Element> generators,
                          Op op, std::size_t cap);

  std::size_t size() const { return elems_.size(); }
  std::size_t mul(std::size_t i, std::size_t j) const;
  std::size_t inverse(std::size_t i) const { return inv_[i]; }
  std::size_t order_of(std::size_t i) const;
  const Element& element(std::size_t i) const { return elems_[i]; }
  std::optional<std::size_t> index_of(const Element& e) const;
  const std::vector<std::size_t>& generator_indices() const { return gens_; }

 private:
  GroupTable() = default;

  struct ElemHash {
    std::size_t operator()(const Element& e) const noexcept;
  };

  std::vector<Element> elems_;
  Op op_;
  std::unordered_map<Element, std::size_t, ElemHash> index_;
  std::vector<std::size_t> inv_;
  std::vector<std::size_t> gens_;
};

/// Subset of a parent group closed under its multiplication.
struct SubgroupHandle {
  GroupPtr parent;
  std::vector<std::size_t> members;  // sorted parent indices

  std::size_t size() const { return members.size(); }
  /// Standalone table of this subgroup (same element encodings).
  GroupPtr induced() const;
};

inline constexpr std::size_t kClosureCap = 1000000;
inline constexpr std::size_t kSearchCap = 100000;
inline constexpr std::size_t kEmbedCap = 1000;
inline constexpr std::size_t kCyclicDihedralCap = 10000;

/// Closure cap honoring the HOMSPHERE_CLOSURE_CAP environment override.
std::size_t effective_closure_cap();

// ---- group factories -------------------------------------------------------

GroupPtr matrix_group(const FieldCtx& ctx, std::uint32_t dim,
                      const std::vector<Mat>& gens, std::size_t cap = kClosureCap);
GroupPtr projective_matrix_group(const FieldCtx& ctx, std::uint32_t dim,
                                 const std::vector<Mat>& gens,
                                 std::size_t cap = kClosureCap);

/// SL_m(q) from elementary transvections E_ij(alpha^t).
GroupPtr sl_group(const FieldCtx& ctx, std::uint32_t m, std::size_t cap = kClosureCap);
/// PSL_m(q): same generators, elements stored as projective canonical forms.
GroupPtr psl_group(const FieldCtx& ctx, std::uint32_t m, std::size_t cap = kClosureCap);

/// Permutations act on {0..n-1}; elements encoded as image vectors.
GroupPtr permutation_group(const std::vector<std::vector<std::uint32_t>>& gens,
                           std::size_t cap = kClosureCap);
GroupPtr alternating_group(std::uint32_t m, std::size_t cap = kClosureCap);
GroupPtr cyclic_group(std::uint32_t n);
GroupPtr dihedral_group(std::uint32_t n);  ///< order 2n; n = 1, 2 degenerate cases included
GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b);

/// Q8 as the quaternion subgroup of SL_2(3).
GroupPtr quaternion_group();
/// Z_p : Z_t inside the affine maps x -> ax + b over GF(p); t must divide p-1.
GroupPtr metacyclic_group(std::uint32_t p, std::uint32_t t);

// ---- structure computations ------------------------------------------------

/// Conjugacy classes by generator-orbit search; classes ordered by least
/// member index, members sorted.
std::vector<std::vector<std::size_t>> conjugacy_classes(const GroupTable& g);

/// Subgroup generated by the given elements, as sorted parent indices.
std::vector<std::size_t> subgroup_closure(const GroupTable& g,
                                          std::vector<std::size_t> seed);

/// All normal subgroups (as sorted index vectors), found by closing unions of
/// conjugacy classes; deterministic order.
std::vector<std::vector<std::size_t>> normal_subgroups(const GroupTable& g);

/// G/N for N normal; elements are canonical coset representatives.
GroupPtr quotient_group(const GroupPtr& g, const std::vector<std::size_t>& normal);

/// Cyclic, or dihedral in the inversion sense: a cyclic index-2 subgroup
/// inverted by an outside involution. Exactly the finite groups acting
/// faithfully on the circle.
bool is_cyclic_or_dihedral(const GroupTable& g);

/// Decided by enumerating pairs of normal subgroups (K3, K2) with trivial
/// intersection and matching G/K3 against the finite O(3) subgroup
/// isomorphism types and G/K2 against the O(2) catalogue.
bool embeds_in_O3xO2(const GroupTable& g);

/// Search for x, y of order 4 with x^2 = y^2 central and y x y^-1 = x^-1;
/// returns the generated order-8 subgroup if present.
std::optional<SubgroupHandle> find_quaternion_subgroup(const GroupPtr& g);

// ---- the concrete groups of the matrix-group analysis ----------------------

/// Upper-triangular subgroup of PSL_2(q): (Z_p)^k : Z_r with r = (q-1)/2 for
/// odd p and r = q-1 for p = 2. Order is verified during construction.
SubgroupHandle borel_subgroup(const FieldCtx& ctx, std::size_t cap = kClosureCap);

/// Conjugacy classes of order-p elements inside the Borel subgroup, as
/// (class size, how many classes of that size), sorted by size.
std::vector<std::pair<std::size_t, std::size_t>> order_p_class_structure(
    const SubgroupHandle& borel);

/// Number of PSL_2(q)-conjugacy classes among the (q-1)/(p-1) order-p cyclic
/// subgroups of the translation part of the Borel subgroup.
std::size_t cyclic_subgroup_conjugacy(const SubgroupHandle& borel);

/// Verifies diag(w, w^-1) U(s) diag(w^-1, w) = U(w^2 s) over all w in GF(q)*,
/// s in GF(q).
bool check_omega_conjugation(const FieldCtx& ctx);

/// The block-unipotent translation subgroup {M(v)} of PSL_m(q), elementary
/// abelian of rank (m-1)k. Additivity M(v)M(w) = M(v+w) is verified on all
/// pairs during construction.
SubgroupHandle translation_group(const FieldCtx& ctx, std::uint32_t m,
                                 std::size_t cap = kClosureCap);

/// Verifies diag(A^-1, 1) M(v) diag(A, 1) = M(A^-1 v) for all A in
/// SL_{m-1}(q) and all vectors v.
bool asl_conjugation_check(const FieldCtx& ctx, std::uint32_t m,
                           std::size_t cap = kClosureCap);

/// All hyperplanes of the translation space are conjugate under SL_{m-1}(q).
bool hyperplane_conjugacy_check(const FieldCtx& ctx, std::uint32_t m,
                                std::size_t cap = kClosureCap);

/// M(A) = diag(A, transpose-inverse(A)) in Sp_{2m}(q). Throws NotUnimodular.
Mat symplectic_embed(const Mat& a);

/// t M J M = J for the standard form J = antidiag(I_m, -I_m).
bool preserves_standard_symplectic_form(const Mat& m2m);

}  // namespace homsphere
