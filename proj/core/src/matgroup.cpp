#include "homsphere/matgroup.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <string>

namespace homsphere {

Mat::Mat(const FieldCtx& ctx, std::uint32_t dim)
    : ctx_(&ctx), dim_(dim), e_(dim * dim, ctx.zero()) {}

Mat Mat::identity(const FieldCtx& ctx, std::uint32_t dim) {
  Mat m(ctx, dim);
  for (std::uint32_t i = 0; i < dim; ++i) m.at(i, i) = ctx.one();
  return m;
}

Mat Mat::operator*(const Mat& o) const {
  Mat r(*ctx_, dim_);
  for (std::uint32_t i = 0; i < dim_; ++i) {
    for (std::uint32_t k = 0; k < dim_; ++k) {
      const FieldElem& aik = at(i, k);
      if (aik.is_zero()) continue;
      for (std::uint32_t j = 0; j < dim_; ++j) {
        r.at(i, j) = ctx_->add(r.at(i, j), ctx_->mul(aik, o.at(k, j)));
      }
    }
  }
  return r;
}

Mat Mat::transpose() const {
  Mat r(*ctx_, dim_);
  for (std::uint32_t i = 0; i < dim_; ++i)
    for (std::uint32_t j = 0; j < dim_; ++j) r.at(j, i) = at(i, j);
  return r;
}

FieldElem Mat::det() const {
  Mat a = *this;
  FieldElem d = ctx_->one();
  for (std::uint32_t col = 0; col < dim_; ++col) {
    std::uint32_t pivot = col;
    while (pivot < dim_ && a.at(pivot, col).is_zero()) ++pivot;
    if (pivot == dim_) return ctx_->zero();
    if (pivot != col) {
      for (std::uint32_t j = 0; j < dim_; ++j) std::swap(a.at(pivot, j), a.at(col, j));
      d = ctx_->neg(d);
    }
    d = ctx_->mul(d, a.at(col, col));
    FieldElem ipiv = ctx_->inv(a.at(col, col));
    for (std::uint32_t r = col + 1; r < dim_; ++r) {
      if (a.at(r, col).is_zero()) continue;
      FieldElem f = ctx_->mul(a.at(r, col), ipiv);
      for (std::uint32_t j = col; j < dim_; ++j) {
        a.at(r, j) = ctx_->sub(a.at(r, j), ctx_->mul(f, a.at(col, j)));
      }
    }
  }
  return d;
}

Mat Mat::inverse() const {
  Mat a = *this;
  Mat inv = Mat::identity(*ctx_, dim_);
  for (std::uint32_t col = 0; col < dim_; ++col) {
    std::uint32_t pivot = col;
    while (pivot < dim_ && a.at(pivot, col).is_zero()) ++pivot;
    if (pivot == dim_) raise(ErrorCode::NotUnimodular, "matrix is singular");
    if (pivot != col) {
      for (std::uint32_t j = 0; j < dim_; ++j) {
        std::swap(a.at(pivot, j), a.at(col, j));
        std::swap(inv.at(pivot, j), inv.at(col, j));
      }
    }
    FieldElem ipiv = ctx_->inv(a.at(col, col));
    for (std::uint32_t j = 0; j < dim_; ++j) {
      a.at(col, j) = ctx_->mul(a.at(col, j), ipiv);
      inv.at(col, j) = ctx_->mul(inv.at(col, j), ipiv);
    }
    for (std::uint32_t r = 0; r < dim_; ++r) {
      if (r == col || a.at(r, col).is_zero()) continue;
      FieldElem f = a.at(r, col);
      for (std::uint32_t j = 0; j < dim_; ++j) {
        a.at(r, j) = ctx_->sub(a.at(r, j), ctx_->mul(f, a.at(col, j)));
        inv.at(r, j) = ctx_->sub(inv.at(r, j), ctx_->mul(f, inv.at(col, j)));
      }
    }
  }
  return inv;
}

std::vector<std::uint32_t> Mat::encode() const {
  std::vector<std::uint32_t> w(e_.size());
  for (std::size_t i = 0; i < e_.size(); ++i) w[i] = e_[i].value();
  return w;
}

Mat Mat::decode(const FieldCtx& ctx, std::uint32_t dim,
                const std::vector<std::uint32_t>& words) {
  Mat m(ctx, dim);
  for (std::uint32_t i = 0; i < dim * dim; ++i) m.e_[i] = ctx.element(words[i]);
  return m;
}

Mat projective_canonical(const Mat& m) {
  const FieldCtx& f = m.ctx();
  Mat best = m;
  std::vector<std::uint32_t> bestw = m.encode();
  for (std::uint64_t v = 1; v < f.q(); ++v) {
    FieldElem c = f.element(v);
    if (f.pow(c, m.dim()) != f.one()) continue;
    Mat cand(f, m.dim());
    for (std::uint32_t i = 0; i < m.dim(); ++i)
      for (std::uint32_t j = 0; j < m.dim(); ++j)
        cand.at(i, j) = f.mul(c, m.at(i, j));
    std::vector<std::uint32_t> w = cand.encode();
    if (w < bestw) {
      bestw = std::move(w);
      best = cand;
    }
  }
  return best;
}

// ---- GroupTable -------------------------------------------------------------

std::size_t GroupTable::ElemHash::operator()(const Element& e) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint32_t w : e) {
    h ^= w;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

std::size_t effective_closure_cap() {
  if (const char* s = std::getenv("HOMSPHERE_CLOSURE_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kClosureCap;
}

GroupPtr GroupTable::closure(const Element& identity, std::vector<Element> generators,
                             Op op, std::size_t cap) {
  auto g = std::shared_ptr<GroupTable>(new GroupTable());
  g->op_ = std::move(op);

  std::sort(generators.begin(), generators.end());
  generators.erase(std::unique(generators.begin(), generators.end()), generators.end());

  g->elems_.push_back(identity);
  g->index_.emplace(identity, 0);
  std::deque<std::size_t> todo;
  for (auto& gen : generators) {
    if (g->index_.count(gen)) continue;
    g->index_.emplace(gen, g->elems_.size());
    g->elems_.push_back(gen);
  }
  for (std::size_t i = 0; i < g->elems_.size(); ++i) todo.push_back(i);

  const std::size_t ngen = g->elems_.size();  // identity + generators
  while (!todo.empty()) {
    std::size_t cur = todo.front();
    todo.pop_front();
    for (std::size_t gi = 1; gi < ngen; ++gi) {
      Element prod = g->op_(g->elems_[cur], g->elems_[gi]);
      auto it = g->index_.find(prod);
      if (it == g->index_.end()) {
        if (g->elems_.size() >= cap)
          raise(ErrorCode::CapExceeded, "group closure exceeds cap " + std::to_string(cap),
                static_cast<std::int64_t>(cap));
        g->index_.emplace(prod, g->elems_.size());
        todo.push_back(g->elems_.size());
        g->elems_.push_back(std::move(prod));
      }
    }
  }

  g->gens_.clear();
  for (std::size_t i = 1; i < ngen; ++i) g->gens_.push_back(i);

  // Inverse of e: walk powers until the identity reappears.
  g->inv_.assign(g->elems_.size(), 0);
  for (std::size_t i = 1; i < g->elems_.size(); ++i) {
    std::size_t prev = i, cur2 = g->mul(i, i);
    while (cur2 != 0) {
      prev = cur2;
      cur2 = g->mul(cur2, i);
    }
    g->inv_[i] = prev;
  }
  return g;
}

std::size_t GroupTable::mul(std::size_t i, std::size_t j) const {
  Element prod = op_(elems_[i], elems_[j]);
  auto it = index_.find(prod);
  return it->second;
}

std::size_t GroupTable::order_of(std::size_t i) const {
  std::size_t ord = 1, cur = i;
  while (cur != 0) {
    cur = mul(cur, i);
    ++ord;
  }
  return ord;
}

std::optional<std::size_t> GroupTable::index_of(const Element& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

GroupPtr SubgroupHandle::induced() const {
  GroupPtr p = parent;
  std::vector<GroupTable::Element> gens;
  for (std::size_t idx : members) {
    if (idx != 0) gens.push_back(p->element(idx));
  }
  auto op = [p](const GroupTable::Element& a, const GroupTable::Element& b) {
    std::size_t ia = *p->index_of(a);
    std::size_t ib = *p->index_of(b);
    return p->element(p->mul(ia, ib));
  };
  auto tbl = GroupTable::closure(p->element(0), std::move(gens), op, members.size() + 1);
  return tbl;
}

// ---- factories --------------------------------------------------------------

GroupPtr matrix_group(const FieldCtx& ctx, std::uint32_t dim,
                      const std::vector<Mat>& gens, std::size_t cap) {
  std::vector<GroupTable::Element> enc;
  enc.reserve(gens.size());
  for (const Mat& m : gens) enc.push_back(m.encode());
  const FieldCtx* f = &ctx;
  auto op = [f, dim](const GroupTable::Element& a, const GroupTable::Element& b) {
    return (Mat::decode(*f, dim, a) * Mat::decode(*f, dim, b)).encode();
  };
  return GroupTable::closure(Mat::identity(ctx, dim).encode(), std::move(enc), op, cap);
}

GroupPtr projective_matrix_group(const FieldCtx& ctx, std::uint32_t dim,
                                 const std::vector<Mat>& gens, std::size_t cap) {
  std::vector<GroupTable::Element> enc;
  for (const Mat& m : gens) enc.push_back(projective_canonical(m).encode());
  const FieldCtx* f = &ctx;
  auto op = [f, dim](const GroupTable::Element& a, const GroupTable::Element& b) {
    Mat prod = Mat::decode(*f, dim, a) * Mat::decode(*f, dim, b);
    return projective_canonical(prod).encode();
  };
  Mat id = Mat::identity(ctx, dim);
  return GroupTable::closure(projective_canonical(id).encode(), std::move(enc), op, cap);
}

namespace {

std::vector<Mat> sl_generators(const FieldCtx& ctx, std::uint32_t m) {
  // Transvections E_ij(alpha^t), t < k, span all elementary matrices.
  std::vector<Mat> gens;
  FieldElem alpha = ctx.k() == 1 ? ctx.one() : ctx.element(ctx.p());  // class of x
  FieldElem pw = ctx.one();
  for (std::uint32_t t = 0; t < ctx.k(); ++t) {
    for (std::uint32_t i = 0; i < m; ++i) {
      for (std::uint32_t j = 0; j < m; ++j) {
        if (i == j) continue;
        Mat e = Mat::identity(ctx, m);
        e.at(i, j) = pw;
        gens.push_back(e);
      }
    }
    pw = ctx.mul(pw, alpha);
  }
  return gens;
}

}  // namespace

GroupPtr sl_group(const FieldCtx& ctx, std::uint32_t m, std::size_t cap) {
  return matrix_group(ctx, m, sl_generators(ctx, m), cap);
}

GroupPtr psl_group(const FieldCtx& ctx, std::uint32_t m, std::size_t cap) {
  return projective_matrix_group(ctx, m, sl_generators(ctx, m), cap);
}

GroupPtr permutation_group(const std::vector<std::vector<std::uint32_t>>& gens,
                           std::size_t cap) {
  std::size_t n = gens.empty() ? 1 : gens[0].size();
  GroupTable::Element id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = static_cast<std::uint32_t>(i);
  std::vector<GroupTable::Element> enc(gens.begin(), gens.end());
  auto op = [](const GroupTable::Element& a, const GroupTable::Element& b) {
    GroupTable::Element r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
    return r;
  };
  return GroupTable::closure(id, std::move(enc), op, cap);
}

GroupPtr alternating_group(std::uint32_t m, std::size_t cap) {
  if (m < 3) return permutation_group({}, cap);
  std::vector<std::uint32_t> three(m), cyc(m);
  for (std::uint32_t i = 0; i < m; ++i) three[i] = cyc[i] = i;
  three[0] = 1; three[1] = 2; three[2] = 0;
  if (m % 2 == 1) {
    for (std::uint32_t i = 0; i < m; ++i) cyc[i] = (i + 1) % m;
  } else {
    for (std::uint32_t i = 1; i < m; ++i) cyc[i] = 1 + (i % (m - 1));
  }
  return permutation_group({three, cyc}, cap);
}

GroupPtr cyclic_group(std::uint32_t n) {
  GroupTable::Element id = {0};
  std::vector<GroupTable::Element> gens;
  if (n > 1) gens.push_back({1});
  auto op = [n](const GroupTable::Element& a, const GroupTable::Element& b) {
    return GroupTable::Element{(a[0] + b[0]) % n};
  };
  return GroupTable::closure(id, std::move(gens), op, n + 1);
}

GroupPtr dihedral_group(std::uint32_t n) {
  // Elements (rotation i, flag s); degenerate n = 1, 2 come out as Z_2 and
  // Z_2 x Z_2 which is what the geometric picture gives.
  GroupTable::Element id = {0, 0};
  std::vector<GroupTable::Element> gens = {{1 % n, 0}, {0, 1}};
  auto op = [n](const GroupTable::Element& a, const GroupTable::Element& b) {
    std::uint32_t i = a[0], s = a[1], j = b[0], r = b[1];
    std::uint32_t rot = s == 0 ? (i + j) % n : (i + n - j % n) % n;
    return GroupTable::Element{rot, s ^ r};
  };
  return GroupTable::closure(id, std::move(gens), op, 2 * n + 1);
}

GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b) {
  GroupPtr pa = a, pb = b;
  GroupTable::Element id = {0, 0};
  std::vector<GroupTable::Element> gens;
  for (std::size_t i = 1; i < pa->size(); ++i) gens.push_back({static_cast<std::uint32_t>(i), 0});
  for (std::size_t j = 1; j < pb->size(); ++j) gens.push_back({0, static_cast<std::uint32_t>(j)});
  auto op = [pa, pb](const GroupTable::Element& x, const GroupTable::Element& y) {
    return GroupTable::Element{
        static_cast<std::uint32_t>(pa->mul(x[0], y[0])),
        static_cast<std::uint32_t>(pb->mul(x[1], y[1]))};
  };
  return GroupTable::closure(id, std::move(gens), op, pa->size() * pb->size() + 1);
}

GroupPtr quaternion_group() {
  const FieldCtx& f3 = FieldCtx::get(3, 1);
  Mat i(f3, 2), j(f3, 2);
  // i = [[0,-1],[1,0]], j = [[1,1],[1,-1]]; both det 1, i^2 = j^2 = -E.
  i.at(0, 1) = f3.element(2);
  i.at(1, 0) = f3.one();
  j.at(0, 0) = f3.one();
  j.at(0, 1) = f3.one();
  j.at(1, 0) = f3.one();
  j.at(1, 1) = f3.element(2);
  return matrix_group(f3, 2, {i, j}, 16);
}

GroupPtr metacyclic_group(std::uint32_t p, std::uint32_t t) {
  if (t == 0 || (p - 1) % t != 0)
    raise(ErrorCode::NoEffectiveAction, "t must divide p-1", t);
  const FieldCtx& f = FieldCtx::get(p, 1);
  // Multiplier of order exactly t: power of a generator of GF(p)*.
  FieldElem y = f.one();
  for (std::uint64_t v = 2; v < f.q(); ++v) {
    FieldElem g = f.element(v);
    if (f.element_order(g) == p - 1) {
      y = f.pow(g, (p - 1) / t);
      break;
    }
  }
  Mat trans(f, 2), mult(f, 2);
  trans.at(0, 0) = f.one(); trans.at(0, 1) = f.one(); trans.at(1, 1) = f.one();
  mult.at(0, 0) = y; mult.at(1, 1) = f.one();
  return matrix_group(f, 2, {trans, mult}, p * t + 1);
}

}  // namespace homsphere
