#include "homsphere/borelsolve.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "homsphere/gfield.hpp"

namespace homsphere {

namespace {

using Vec = std::vector<std::uint32_t>;

Vec scale_add(const Vec& a, std::uint32_t c, const Vec& b, std::uint32_t p) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + c * b[i]) % p;
  return r;
}

/// Row-reduce to a canonical RREF basis (rows sorted by pivot position).
std::vector<Vec> rref(std::vector<Vec> rows, std::uint32_t p) {
  const FieldCtx& f = FieldCtx::get(p, 1);
  std::size_t lead = 0;
  std::vector<Vec> out;
  const std::size_t k = rows.empty() ? 0 : rows[0].size();
  for (std::size_t col = 0; col < k && lead < rows.size(); ++col) {
    std::size_t piv = lead;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[lead], rows[piv]);
    std::uint32_t inv = f.inv(f.element(rows[lead][col])).value();
    for (std::size_t j = 0; j < k; ++j) rows[lead][j] = (rows[lead][j] * inv) % p;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == lead || rows[r][col] == 0) continue;
      std::uint32_t c = (p - rows[r][col]) % p;
      rows[r] = scale_add(rows[r], c, rows[lead], p);
    }
    ++lead;
  }
  for (const auto& r : rows) {
    if (std::any_of(r.begin(), r.end(), [](std::uint32_t x) { return x != 0; }))
      out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Vec> span_vectors(const std::vector<Vec>& basis, std::uint32_t p,
                              std::uint32_t k) {
  std::vector<Vec> out;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < basis.size(); ++i) total *= p;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    Vec v(k, 0);
    std::uint64_t t = idx;
    for (const auto& b : basis) {
      std::uint32_t c = static_cast<std::uint32_t>(t % p);
      t /= p;
      v = scale_add(v, c, b, p);
    }
    out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

Lattice Lattice::build(std::uint32_t p, std::uint32_t k) {
  if (!is_prime_u64(p)) raise(ErrorCode::NonPrime, "p is not prime", p);
  if (k < 1 || k > 4) raise(ErrorCode::RankTooLarge, "lattice rank limited to k <= 4", k);
  Lattice l;
  l.p = p;
  l.k = k;

  // Enumerate all subspaces: grow spans one vector at a time from {0}.
  std::vector<Vec> points;
  {
    std::uint64_t total = 1;
    for (std::uint32_t i = 0; i < k; ++i) total *= p;
    for (std::uint64_t idx = 1; idx < total; ++idx) {
      Vec v(k);
      std::uint64_t t = idx;
      for (std::uint32_t i = 0; i < k; ++i) {
        v[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      points.push_back(std::move(v));
    }
  }
  std::set<std::vector<Vec>> seen;
  std::vector<std::vector<Vec>> queue;
  seen.insert({});
  queue.push_back({});
  for (std::size_t pos = 0; pos < queue.size(); ++pos) {
    auto basis = queue[pos];
    if (basis.size() == k) continue;
    for (const auto& v : points) {
      auto grown = basis;
      grown.push_back(v);
      auto canon = rref(std::move(grown), p);
      if (canon.size() == basis.size()) continue;  // v already in span
      if (seen.insert(canon).second) queue.push_back(std::move(canon));
    }
  }

  std::vector<std::vector<Vec>> all(seen.begin(), seen.end());
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  for (auto& basis : all) {
    Subgroup s;
    s.rank = static_cast<std::uint32_t>(basis.size());
    s.basis = basis;
    l.subgroups.push_back(std::move(s));
  }

  // Covers: hyperplanes of each subgroup, found as kernels of nonzero
  // functionals on the coordinates of the basis.
  std::map<std::vector<Vec>, std::size_t> index;
  for (std::size_t i = 0; i < l.subgroups.size(); ++i) index[l.subgroups[i].basis] = i;
  l.covers.assign(l.subgroups.size(), {});
  l.parents.assign(l.subgroups.size(), {});
  for (std::size_t i = 0; i < l.subgroups.size(); ++i) {
    const auto& s = l.subgroups[i];
    if (s.rank == 0) continue;
    std::set<std::size_t> covers;
    std::uint64_t total = 1;
    for (std::uint32_t t = 0; t < s.rank; ++t) total *= p;
    for (std::uint64_t fidx = 1; fidx < total; ++fidx) {
      Vec f(s.rank);
      std::uint64_t t = fidx;
      for (std::uint32_t j = 0; j < s.rank; ++j) {
        f[j] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      // Kernel of f on the span, expressed in ambient coordinates.
      std::vector<Vec> kernel_basis;
      auto coeff_vectors = span_vectors(
          [&] {
            std::vector<Vec> unit;
            for (std::uint32_t j = 0; j < s.rank; ++j) {
              Vec e(s.rank, 0);
              e[j] = 1;
              unit.push_back(e);
            }
            return unit;
          }(),
          p, s.rank);
      for (const auto& c : coeff_vectors) {
        std::uint32_t dot = 0;
        for (std::uint32_t j = 0; j < s.rank; ++j) dot = (dot + c[j] * f[j]) % p;
        if (dot != 0) continue;
        Vec ambient(k, 0);
        for (std::uint32_t j = 0; j < s.rank; ++j)
          ambient = scale_add(ambient, c[j], s.basis[j], p);
        kernel_basis.push_back(std::move(ambient));
      }
      covers.insert(index.at(rref(std::move(kernel_basis), p)));
    }
    l.covers[i] = std::vector<std::size_t>(covers.begin(), covers.end());
    for (std::size_t c : l.covers[i]) l.parents[c].push_back(i);
  }
  return l;
}

std::vector<std::size_t> Lattice::of_rank(std::uint32_t r) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < subgroups.size(); ++i)
    if (subgroups[i].rank == r) out.push_back(i);
  return out;
}

std::string Lattice::label(std::size_t idx) const {
  const auto& s = subgroups[idx];
  std::string out = "r" + std::to_string(s.rank) + ":[";
  for (std::size_t b = 0; b < s.basis.size(); ++b) {
    if (b) out += ",";
    out += "(";
    for (std::size_t j = 0; j < s.basis[b].size(); ++j) {
      if (j) out += ",";
      out += std::to_string(s.basis[b][j]);
    }
    out += ")";
  }
  out += "]";
  return out;
}

ClassPartition ClassPartition::trivial(const Lattice& l) {
  ClassPartition c;
  c.block_of.resize(l.subgroups.size());
  std::iota(c.block_of.begin(), c.block_of.end(), 0);
  return c;
}

ClassPartition ClassPartition::single_block_per_rank(const Lattice& l) {
  ClassPartition c;
  c.block_of.resize(l.subgroups.size());
  for (std::size_t i = 0; i < l.subgroups.size(); ++i) c.block_of[i] = l.subgroups[i].rank;
  return c;
}

ClassPartition ClassPartition::psl2_square_split(const Lattice& l) {
  if (l.k != 2) raise(ErrorCode::BadArgument, "square split needs k = 2", l.k);
  const FieldCtx& f = FieldCtx::get(l.p, 2);
  ClassPartition c;
  c.block_of.assign(l.subgroups.size(), 0);
  std::size_t next = 2;
  for (std::size_t i = 0; i < l.subgroups.size(); ++i) {
    const auto& s = l.subgroups[i];
    if (s.rank != 1) {
      c.block_of[i] = next++;
      continue;
    }
    // Line representative (a, b) corresponds to a + b*alpha in GF(p^2);
    // squareness is invariant under prime-field scaling since k is even.
    FieldElem sigma = f.add(f.element(s.basis[0][0]),
                            f.mul(f.element(s.basis[0][1]), f.element(f.p())));
    c.block_of[i] = f.is_square(sigma) ? 0 : 1;
  }
  return c;
}

std::size_t ClassPartition::block_count() const {
  return block_of.empty() ? 0 : *std::max_element(block_of.begin(), block_of.end()) + 1;
}

namespace {

constexpr int kUnset = -1000000;

struct Constraint {
  std::size_t b_block;                                    // block of the subgroup B
  std::vector<std::pair<std::size_t, int>> cover_mult;    // (cover block, multiplicity)
  int cover_count;                                        // total covers incl. multiplicity
  // live state
  int sum = 0;         // sum of assigned cover values (with multiplicity)
  int unassigned = 0;  // cover slots not yet assigned
};

struct SolverState {
  const Lattice* l;
  int n;
  const ClassPartition* classes;
  SolverOptions opts;

  std::vector<std::vector<std::size_t>> block_members;
  std::vector<std::uint32_t> block_rank;
  std::vector<std::size_t> order;  // block ids: rank descending, constraint-grouped
  std::vector<int> value;
  std::vector<Constraint> constraints;
  std::vector<std::vector<std::pair<std::size_t, int>>> cover_roles;  // block -> (constraint, mult)
  std::vector<std::vector<std::size_t>> b_roles;                      // block -> constraints where it is B

  std::vector<FixAssignment> solutions;
};

bool value_allowed_base(const SolverState& st, std::uint32_t rank, int v) {
  const int n = st.n;
  if (v < -1 || v > n) return false;
  if (rank == 0) return v == n;
  if (st.opts.strict_faithful && v == n) return false;  // r(B) = n iff B trivial
  if (v == -1) {
    // Euler rule: odd p on an even sphere leaves no empty fixed sets.
    if (st.opts.euler_rule && st.l->p % 2 == 1 && n % 2 == 0) return false;
    return true;
  }
  if (st.opts.orientation_preserving) {
    // Even codimension for nonempty fixed sets: all ranks for odd p, single
    // elements (rank 1) for p = 2.
    bool parity_applies = st.l->p % 2 == 1 || rank == 1;
    if (parity_applies && (n - v) % 2 != 0) return false;
  }
  return true;
}

/// Lower bound from monotonicity: r(block) >= max over assigned supergroups.
int monotone_lower_bound(const SolverState& st, std::size_t block) {
  int lb = -1;
  for (std::size_t sub : st.block_members[block]) {
    for (std::size_t par : st.l->parents[sub]) {
      int pv = st.value[st.classes->block_of[par]];
      if (pv != kUnset) lb = std::max(lb, pv);
    }
  }
  return lb;
}

bool constraint_feasible(const SolverState& st, const Constraint& c) {
  int rb = st.value[c.b_block];
  if (rb == kUnset) return true;  // B assigned before its covers by rank order
  int target = st.n + (c.cover_count - 1) * rb;
  if (c.unassigned == 0) return c.sum == target;
  // Unassigned covers lie in [max(rb, -1), n]; rb is a sound floor by
  // monotonicity.
  int lo = std::max(rb, -1);
  if (c.sum + c.unassigned * lo > target) return false;
  if (c.sum + c.unassigned * st.n < target) return false;
  return true;
}

bool apply_assignment(SolverState& st, std::size_t block, int v) {
  st.value[block] = v;
  bool ok = true;
  for (const auto& [ci, mult] : st.cover_roles[block]) {
    auto& c = st.constraints[ci];
    c.sum += v * mult;
    c.unassigned -= mult;
    if (ok && !constraint_feasible(st, c)) ok = false;
  }
  if (ok) {
    for (std::size_t ci : st.b_roles[block]) {
      if (!constraint_feasible(st, st.constraints[ci])) {
        ok = false;
        break;
      }
    }
  }
  return ok;
}

void undo_assignment(SolverState& st, std::size_t block, int v) {
  for (const auto& [ci, mult] : st.cover_roles[block]) {
    auto& c = st.constraints[ci];
    c.sum -= v * mult;
    c.unassigned += mult;
  }
  st.value[block] = kUnset;
}

void dfs(SolverState& st, std::size_t pos) {
  if (pos == st.order.size()) {
    FixAssignment a(st.l->subgroups.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = st.value[st.classes->block_of[i]];
    st.solutions.push_back(std::move(a));
    return;
  }
  std::size_t block = st.order[pos];
  std::uint32_t rank = st.block_rank[block];
  int lb = rank == 0 ? st.n : monotone_lower_bound(st, block);
  for (int v = std::max(lb, -1); v <= st.n; ++v) {
    if (!value_allowed_base(st, rank, v)) continue;
    if (apply_assignment(st, block, v)) dfs(st, pos + 1);
    undo_assignment(st, block, v);
  }
}

}  // namespace

std::vector<FixAssignment> borel_solve(const Lattice& l, int n,
                                       const ClassPartition& classes,
                                       const SolverOptions& opts) {
  if (n < 0 || n > 64) raise(ErrorCode::BadArgument, "ambient dimension out of range", n);
  SolverState st;
  st.l = &l;
  st.n = n;
  st.classes = &classes;
  st.opts = opts;

  const std::size_t nblocks = classes.block_count();
  st.block_members.assign(nblocks, {});
  st.block_rank.assign(nblocks, 0);
  for (std::size_t i = 0; i < l.subgroups.size(); ++i) {
    std::size_t b = classes.block_of[i];
    if (!st.block_members[b].empty() && st.block_rank[b] != l.subgroups[i].rank)
      raise(ErrorCode::BadArgument, "class partition mixes ranks");
    st.block_members[b].push_back(i);
    st.block_rank[b] = l.subgroups[i].rank;
  }

  // Rank-descending order; within a rank, follow the cover lists of the
  // rank-above subgroups so each identity completes early in the search.
  {
    std::vector<char> placed(nblocks, 0);
    std::uint32_t top = l.k;
    for (std::uint32_t rank = top + 1; rank-- > 0;) {
      if (rank < top) {
        for (std::size_t above : l.of_rank(rank + 1)) {
          for (std::size_t cov : l.covers[above]) {
            std::size_t b = classes.block_of[cov];
            if (!placed[b]) {
              placed[b] = 1;
              st.order.push_back(b);
            }
          }
        }
      }
      for (std::size_t sub : l.of_rank(rank)) {
        std::size_t b = classes.block_of[sub];
        if (!placed[b]) {
          placed[b] = 1;
          st.order.push_back(b);
        }
      }
    }
  }

  st.cover_roles.assign(nblocks, {});
  st.b_roles.assign(nblocks, {});
  for (std::size_t i = 0; i < l.subgroups.size(); ++i) {
    if (l.subgroups[i].rank < 2) continue;
    Constraint c;
    c.b_block = classes.block_of[i];
    std::map<std::size_t, int> mult;
    for (std::size_t cov : l.covers[i]) mult[classes.block_of[cov]] += 1;
    for (const auto& [b, m] : mult) c.cover_mult.emplace_back(b, m);
    c.cover_count = static_cast<int>(l.covers[i].size());
    c.unassigned = c.cover_count;
    std::size_t ci = st.constraints.size();
    for (const auto& [b, m] : c.cover_mult) st.cover_roles[b].emplace_back(ci, m);
    st.b_roles[c.b_block].push_back(ci);
    st.constraints.push_back(std::move(c));
  }

  st.value.assign(nblocks, kUnset);
  dfs(st, 0);

  std::sort(st.solutions.begin(), st.solutions.end());
  // Belt and braces: every emitted assignment re-validates independently.
  for (const auto& a : st.solutions) {
    if (!check_assignment(l, n, classes, opts, a))
      raise(ErrorCode::BadArgument, "solver produced an invalid assignment");
  }
  return st.solutions;
}

bool check_assignment(const Lattice& l, int n, const ClassPartition& classes,
                      const SolverOptions& opts, const FixAssignment& a) {
  if (a.size() != l.subgroups.size()) return false;
  for (std::size_t i = 0; i < l.subgroups.size(); ++i) {
    const auto rank = l.subgroups[i].rank;
    int v = a[i];
    if (rank == 0 && v != n) return false;
    if (rank > 0 && opts.strict_faithful && v == n) return false;
    if (v < -1 || v > n) return false;
    if (v == -1 && opts.euler_rule && l.p % 2 == 1 && n % 2 == 0) return false;
    if (v >= 0 && opts.orientation_preserving && (l.p % 2 == 1 || rank == 1) &&
        (n - v) % 2 != 0)
      return false;
    for (std::size_t j = 0; j < l.subgroups.size(); ++j) {
      if (classes.block_of[i] == classes.block_of[j] && a[i] != a[j]) return false;
    }
  }
  // Monotonicity along covers.
  for (std::size_t i = 0; i < l.subgroups.size(); ++i) {
    for (std::size_t c : l.covers[i]) {
      if (a[c] < a[i]) return false;
    }
  }
  // Borel identity at every subgroup of rank >= 2.
  for (std::size_t i = 0; i < l.subgroups.size(); ++i) {
    if (l.subgroups[i].rank < 2) continue;
    long long sum = 0;
    for (std::size_t c : l.covers[i]) sum += a[c] - a[i];
    if (sum != n - a[i]) return false;
  }
  return true;
}

int min_feasible_dim(std::uint32_t p, std::uint32_t k, PartitionKind kind,
                     const SolverOptions& opts, int n_limit) {
  Lattice l = Lattice::build(p, k);
  ClassPartition classes = kind == PartitionKind::Trivial
                               ? ClassPartition::trivial(l)
                               : ClassPartition::single_block_per_rank(l);
  for (int n = 1; n <= n_limit; ++n) {
    if (!borel_solve(l, n, classes, opts).empty()) return n;
  }
  raise(ErrorCode::BadArgument, "no feasible dimension within limit", n_limit);
}

bool linear_model_check(std::uint32_t p, std::uint32_t k,
                        const std::vector<std::vector<std::uint32_t>>& characters) {
  for (const auto& col : characters) {
    if (col.size() != k) raise(ErrorCode::BadArgument, "character column has wrong length");
  }
  // Faithfulness: the joint kernel of the columns must be trivial, i.e. the
  // k x c matrix has rank k.
  {
    std::vector<std::vector<std::uint32_t>> rows(k, std::vector<std::uint32_t>(characters.size()));
    for (std::size_t c = 0; c < characters.size(); ++c)
      for (std::uint32_t r = 0; r < k; ++r) rows[r][c] = characters[c][r] % p;
    auto reduced = rref(std::move(rows), p);
    if (reduced.size() != k)
      raise(ErrorCode::NotFaithful, "character columns have a common kernel");
  }

  Lattice l = Lattice::build(p, k);
  const int n = 2 * static_cast<int>(characters.size()) - 1;
  std::vector<int> r(l.subgroups.size());
  for (std::size_t i = 0; i < l.subgroups.size(); ++i) {
    int vanish = 0;
    for (const auto& col : characters) {
      bool zero = true;
      for (const auto& row : l.subgroups[i].basis) {
        std::uint32_t dot = 0;
        for (std::uint32_t j = 0; j < k; ++j) dot = (dot + row[j] * col[j]) % p;
        if (dot != 0) {
          zero = false;
          break;
        }
      }
      if (zero) ++vanish;
    }
    r[i] = 2 * vanish - 1;
  }
  for (std::size_t i = 0; i < l.subgroups.size(); ++i) {
    if (l.subgroups[i].rank < 2) continue;
    long long sum = 0;
    for (std::size_t c : l.covers[i]) sum += r[c] - r[i];
    if (sum != n - r[i]) return false;
  }
  return true;
}

int lemma1_bound(std::uint32_t p, std::uint32_t k) {
  if (p == 2) {
    std::int64_t pk = 1;
    for (std::uint32_t i = 0; i < k; ++i) pk *= 2;
    return static_cast<int>(pk - 2);
  }
  std::int64_t count = 0, pw = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    count += pw;
    pw *= p;
  }
  // (p^k-1)/(p-1) <= (n+1)/2  <=>  n >= 2*count - 1
  return static_cast<int>(2 * count - 1);
}

}  // namespace homsphere
