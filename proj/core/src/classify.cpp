#include "homsphere/classify.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "homsphere/default_config.hpp"
#include "homsphere/gfield.hpp"
#include "homsphere/matgroup.hpp"

namespace homsphere {

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const std::string& default_config_text() {
  static const std::string text = detail::kDefaultConfig;
  return text;
}

WitnessConfig WitnessConfig::from_text(const std::string& text, const std::string& source) {
  WitnessConfig c;
  std::istringstream in(text);
  c.entries = load_witness_config(in);
  c.digest = fnv1a64_hex(text);
  c.source = source;
  return c;
}

WitnessConfig WitnessConfig::builtin() {
  return from_text(default_config_text(), "builtin");
}

WitnessConfig WitnessConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::ConfigMissing, "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str(), path);
}

namespace {

constexpr std::size_t kInvolutionBruteCap = 1000000;

// ---- brute-force replay of the degree-2 refutation --------------------------

/// Group-table verification of the circle obstruction behind a
/// BorelRefutation: the two-class split, the subgroup C = (Z_p)^2 : Z_{p-1},
/// and the faithfulness of the quotient C/H on the circle class.
bool replay_borel_brute(const BorelTranscript& t) {
  const std::uint32_t p = t.p;
  const std::uint64_t q = static_cast<std::uint64_t>(p) * p;
  if (q > 32) return false;
  const FieldCtx& ctx = FieldCtx::get(p, 2);

  SubgroupHandle borel = borel_subgroup(ctx);
  if (cyclic_subgroup_conjugacy(borel) != 2) return false;
  const GroupPtr& g = borel.parent;

  // Translations [1, s, 0, 1] and the diagonal torus.
  std::vector<std::size_t> trans = {0};
  for (std::size_t i = 1; i < g->size(); ++i) {
    const auto& e = g->element(i);
    if (e[0] == 1 && e[2] == 0 && e[3] == 1) trans.push_back(i);
  }
  std::size_t torus_gen = g->size();
  const std::size_t torus_order = (q - 1) / 2;
  for (std::size_t i = 1; i < g->size(); ++i) {
    const auto& e = g->element(i);
    if (e[1] == 0 && e[2] == 0 && g->order_of(i) == torus_order) {
      torus_gen = i;
      break;
    }
  }
  if (torus_gen == g->size()) return false;
  std::size_t t_elem = torus_gen;
  {
    const std::size_t power = torus_order / (p - 1);
    t_elem = 0;
    for (std::size_t i = 0; i < power; ++i) t_elem = g->mul(t_elem, torus_gen);
  }
  if (g->order_of(t_elem) != p - 1) return false;

  std::vector<std::size_t> c_seed = trans;
  c_seed.push_back(t_elem);
  auto c_members = subgroup_closure(*g, std::move(c_seed));
  if (c_members.size() != q * (p - 1)) return false;
  auto c_table = SubgroupHandle{g, c_members}.induced();

  // A cyclic translation subgroup in the class the solver pins at r = 1.
  if (t.solutions.empty()) return t.infeasible;
  Lattice l = Lattice::build(p, 2);
  ClassPartition classes = ClassPartition::psl2_square_split(l);
  std::size_t line_sub = l.subgroups.size();
  for (std::size_t i = 0; i < l.subgroups.size(); ++i) {
    if (l.subgroups[i].rank == 1 && t.solutions.front()[i] == 1) {
      line_sub = i;
      break;
    }
  }
  if (line_sub == l.subgroups.size()) return false;
  const auto& basis = l.subgroups[line_sub].basis[0];
  FieldElem sigma = ctx.add(ctx.element(basis[0]),
                            ctx.mul(ctx.element(basis[1]), ctx.element(ctx.p())));
  std::vector<std::size_t> h_in_c;
  for (std::uint32_t y = 0; y < p; ++y) {
    FieldElem ys = ctx.mul(ctx.element(y), sigma);
    Mat u = Mat::identity(ctx, 2);
    u.at(0, 1) = ys;
    auto gi = g->index_of(projective_canonical(u).encode());
    if (!gi) return false;
    auto ci = c_table->index_of(g->element(*gi));
    if (!ci) return false;
    h_in_c.push_back(*ci);
  }
  std::sort(h_in_c.begin(), h_in_c.end());

  auto quotient = quotient_group(c_table, h_in_c);
  if (quotient->size() != p * (p - 1)) return false;
  if (static_cast<std::uint32_t>(quotient->size()) != t.quotient_p * t.quotient_t)
    return false;

  // Image of the translation group in the quotient.
  auto rep_of = [&](std::size_t x) {
    std::size_t best = c_table->size();
    for (std::size_t h : h_in_c) best = std::min(best, c_table->mul(x, h));
    return best;
  };
  std::set<std::size_t> im_t;
  for (std::size_t tr : trans) {
    auto ci = c_table->index_of(g->element(tr));
    if (!ci) return false;
    auto qi = quotient->index_of({static_cast<std::uint32_t>(rep_of(*ci))});
    if (!qi) return false;
    im_t.insert(*qi);
  }
  // Only the trivial normal subgroup meets the translation image trivially,
  // so the kernel of the circle action is exactly H.
  for (const auto& nrm : normal_subgroups(*quotient)) {
    if (nrm.size() == 1) continue;
    std::size_t inter = 0;
    for (std::size_t x : nrm)
      if (im_t.count(x)) ++inter;
    if (inter == 1) return false;
  }
  if (is_cyclic_or_dihedral(*quotient)) return false;
  return true;
}

BorelTranscript transcript_from(const BorelPatternResult& r) {
  BorelTranscript t;
  t.p = r.p;
  t.k = 2;
  t.n = r.n;
  t.block_sizes = r.block_sizes;
  t.solutions = r.solutions;
  t.infeasible = r.infeasible;
  t.circle_obstruction = r.circle_obstruction;
  t.quotient_p = r.quotient_p;
  t.quotient_t = r.quotient_t;
  return t;
}

Certificate from_fail(const GroupId& g, const FilterFail& f);

Certificate chain_from(const GroupId& g, const FilterFail& f) {
  Certificate c;
  c.group = g;
  c.filter = "SubgroupChain";
  c.params = f.params;
  GroupId target = normalize_id(GroupId::parse(f.contained));
  Certificate sub = from_fail(target, *f.via);
  if (sub.filter == "SubgroupChain") {
    c.chain.push_back(g);
    c.chain.insert(c.chain.end(), sub.chain.begin(), sub.chain.end());
    c.terminal = sub.terminal;
  } else {
    c.chain = {g, target};
    c.terminal = std::make_shared<Certificate>(std::move(sub));
  }
  return c;
}

Certificate from_fail(const GroupId& g, const FilterFail& f) {
  if (f.filter == "SubgroupChain") return chain_from(g, f);
  Certificate c;
  c.group = g;
  c.filter = f.filter;
  c.params = f.params;
  if (f.filter == "BorelRefutation") {
    BorelTranscript t = transcript_from(*f.borel);
    const std::uint64_t q = static_cast<std::uint64_t>(t.p) * t.p;
    if (q <= 32 && replay_borel_brute(t)) t.quotient_verified_brute = true;
    c.solver = std::move(t);
  } else {
    c.ineq = Inequality{f.lhs, f.rel, f.rhs};
  }
  return c;
}

/// Translation-subgroup refinement for even-characteristic linear groups
/// passing the closed forms: when the whole group has a single conjugacy
/// class of involutions (verified on the multiplication table), every cyclic
/// subgroup of the rank-(m-1)k elementary abelian subgroup is conjugate and
/// the conjugate-subgroup bound applies at full rank.
std::optional<Certificate> psl_involution_refinement(const GroupId& g, int n) {
  auto pk = prime_power(g.b);
  if (!pk || pk->first != 2 || pk->second < 2) return std::nullopt;
  const std::uint32_t m = g.a;
  const std::uint32_t rank = (m - 1) * pk->second;
  if (ipow(2, rank) <= n + 2) return std::nullopt;
  std::uint64_t order = group_order(g);
  if (order > kInvolutionBruteCap) return std::nullopt;

  const FieldCtx& ctx = FieldCtx::get(2, pk->second);
  GroupPtr table = psl_group(ctx, m);
  if (table->size() != order) return std::nullopt;
  std::size_t invol_classes = 0;
  for (const auto& cls : conjugacy_classes(*table)) {
    if (table->order_of(cls[0]) == 2) ++invol_classes;
  }
  if (invol_classes != 1) return std::nullopt;

  Certificate c;
  c.group = g;
  c.filter = "Lemma1";
  c.params = {{"m", m},
              {"p", 2},
              {"k", pk->second},
              {"rank", rank},
              {"n", n},
              {"involution_classes", 1},
              {"group_order", static_cast<std::int64_t>(order)}};
  c.ineq = Inequality{ipow(2, rank), ">", n + 2};
  return c;
}

struct Outcome {
  enum class Kind { Candidate, Excluded, Undecided };
  Kind kind = Kind::Candidate;
  std::optional<Certificate> cert;
  std::string reason;
};

class Evaluator {
 public:
  Evaluator(int n, const std::optional<WitnessConfig>& config) : n_(n), config_(config) {
    if (config_) {
      for (const auto& e : config_->entries) witness_index_[e.group].push_back(&e);
    }
  }

  const Outcome& eval(const GroupId& g) {
    auto it = memo_.find(g);
    if (it != memo_.end()) return it->second;
    if (in_progress_.count(g)) {
      static Outcome cycle{Outcome::Kind::Undecided, std::nullopt,
                           "cyclic containment witness"};
      return cycle;
    }
    in_progress_.insert(g);
    Outcome out = eval_uncached(g);
    in_progress_.erase(g);
    return memo_.emplace(g, std::move(out)).first->second;
  }

  bool has_witness_data(const GroupId& g) const { return witness_index_.count(g) > 0; }

 private:
  Outcome eval_uncached(const GroupId& g) {
    Outcome out = eval_builtin(g);
    if (out.kind != Outcome::Kind::Excluded) {
      if (auto cert = eval_witnesses(g)) {
        out.kind = Outcome::Kind::Excluded;
        out.cert = std::move(cert);
      }
    }
    if (out.kind != Outcome::Kind::Excluded &&
        (g.family == GroupId::Family::PSU || g.family == GroupId::Family::Sporadic)) {
      // These families carry no built-in filters; candidacy needs data.
      if (!config_) {
        out.kind = Outcome::Kind::Undecided;
        out.reason = "witness config missing";
      } else if (!has_witness_data(g)) {
        out.kind = Outcome::Kind::Undecided;
        out.reason = "no witness data in config";
      }
    }
    return out;
  }

  Outcome eval_builtin(const GroupId& g) {
    Outcome out;
    switch (g.family) {
      case GroupId::Family::Alt: {
        if (auto f = alternating_filter(g.a, n_)) {
          out.kind = Outcome::Kind::Excluded;
          out.cert = from_fail(g, *f);
        }
        break;
      }
      case GroupId::Family::PSL: {
        auto pk = prime_power(g.b);
        if (g.a == 2) {
          if (auto f = psl2_full_filter(pk->first, pk->second, n_)) {
            out.kind = Outcome::Kind::Excluded;
            out.cert = from_fail(g, *f);
          }
        } else {
          if (auto f = pslm_family_filter(g.a, pk->first, pk->second, n_)) {
            out.kind = Outcome::Kind::Excluded;
            out.cert = from_fail(g, *f);
          } else if (auto cert = psl_involution_refinement(g, n_)) {
            out.kind = Outcome::Kind::Excluded;
            out.cert = std::move(cert);
          }
        }
        break;
      }
      case GroupId::Family::PSp: {
        auto pk = prime_power(g.b);
        if (auto f = psp_family_filter(g.a / 2, pk->first, pk->second, n_)) {
          out.kind = Outcome::Kind::Excluded;
          out.cert = from_fail(g, *f);
        }
        break;
      }
      case GroupId::Family::PSU:
      case GroupId::Family::Sporadic:
        break;  // witness-driven only
    }
    return out;
  }

  std::optional<Certificate> eval_witnesses(const GroupId& g) {
    auto it = witness_index_.find(g);
    if (it == witness_index_.end()) return std::nullopt;
    for (const WitnessEntry* w : it->second) {
      switch (w->kind) {
        case WitnessEntry::Kind::ElemAbelian: {
          int need = min_dim_elem_abelian(w->p, w->k);
          if (need > n_) {
            Certificate c;
            c.group = g;
            c.filter = "CatalogWitness";
            c.params = {{"p", w->p}, {"k", w->k}, {"n", n_}};
            c.ineq = Inequality{need, ">", n_};
            c.witness = w->witness_str();
            c.provenance = w->provenance;
            return c;
          }
          break;
        }
        case WitnessEntry::Kind::Metacyclic: {
          int need = min_dim_metacyclic(w->p, w->q);
          if (need > n_) {
            Certificate c;
            c.group = g;
            c.filter = "CatalogWitness";
            c.params = {{"p", w->p}, {"q", w->q}, {"n", n_}};
            c.ineq = Inequality{need, ">", n_};
            c.witness = w->witness_str();
            c.provenance = w->provenance;
            return c;
          }
          break;
        }
        case WitnessEntry::Kind::ContainsGroup: {
          const Outcome& child = eval(w->contained);
          if (child.kind == Outcome::Kind::Excluded) {
            Certificate c;
            c.group = g;
            c.filter = "SubgroupChain";
            c.witness = w->witness_str();
            c.provenance = w->provenance;
            const Certificate& sub = *child.cert;
            if (sub.filter == "SubgroupChain") {
              c.chain.push_back(g);
              c.chain.insert(c.chain.end(), sub.chain.begin(), sub.chain.end());
              c.terminal = sub.terminal;
            } else {
              c.chain = {g, w->contained};
              c.terminal = std::make_shared<Certificate>(sub);
            }
            return c;
          }
          break;
        }
        case WitnessEntry::Kind::OrderInfo:
          break;
      }
    }
    return std::nullopt;
  }

  int n_;
  const std::optional<WitnessConfig>& config_;
  std::map<GroupId, Outcome> memo_;
  std::set<GroupId> in_progress_;
  std::map<GroupId, std::vector<const WitnessEntry*>> witness_index_;
};

std::string family_tag(GroupId::Family f) {
  switch (f) {
    case GroupId::Family::Alt: return "alt";
    case GroupId::Family::PSL: return "psl";
    case GroupId::Family::PSp: return "psp";
    case GroupId::Family::PSU: return "psu";
    case GroupId::Family::Sporadic: return "sporadic";
  }
  return "?";
}

}  // namespace

CandidateReport classify(int n, const std::optional<WitnessConfig>& config,
                         const std::vector<GroupId::Family>& families) {
  if (n < 3 || n > 32) raise(ErrorCode::BadArgument, "dimension must be in [3, 32]", n);

  CandidateReport report;
  report.n = n;
  report.config_digest = config ? config->digest : "";
  report.config_source = config ? config->source : "missing";
  for (auto f : families) report.families.push_back(family_tag(f));

  std::set<GroupId> ids;
  for (auto fam : families) {
    for (const auto& raw : family_iter(fam, n)) ids.insert(normalize_id(raw));
    if (fam == GroupId::Family::PSU && config) {
      for (const auto& e : config->entries) {
        if (e.group.family == GroupId::Family::PSU) ids.insert(e.group);
      }
    }
  }

  Evaluator ev(n, config);
  for (const auto& id : ids) {
    const Outcome& out = ev.eval(id);
    switch (out.kind) {
      case Outcome::Kind::Candidate: {
        CandidateRow row{id, ""};
        if (n == 5 && id == GroupId::psu(3, 3)) row.note = "open per paper";
        report.candidates.push_back(std::move(row));
        break;
      }
      case Outcome::Kind::Excluded:
        report.excluded.emplace_back(id, *out.cert);
        break;
      case Outcome::Kind::Undecided:
        report.undecided.push_back({id, out.reason});
        break;
    }
  }
  return report;
}

// ---- certificate verification -----------------------------------------------

namespace {

bool same_ineq(const std::optional<Inequality>& a, const Inequality& b) {
  return a && *a == b;
}

std::int64_t param(const Certificate& c, const std::string& key) {
  auto it = c.params.find(key);
  if (it == c.params.end())
    raise(ErrorCode::UnknownFilter, "certificate missing parameter " + key);
  return it->second;
}

}  // namespace

bool verify_certificate(const Certificate& c) {
  const std::string& f = c.filter;
  try {
    if (f == "Thm4Rank") {
      auto p = static_cast<std::uint32_t>(param(c, "p"));
      auto k = static_cast<std::uint32_t>(param(c, "k"));
      int n = static_cast<int>(param(c, "n"));
      int need = min_dim_elem_abelian(p, k);
      return same_ineq(c.ineq, Inequality{need, ">", n}) && need > n;
    }
    if (f == "Thm3") {
      auto p = static_cast<std::uint32_t>(param(c, "p"));
      int n = static_cast<int>(param(c, "n"));
      int need = min_dim_psl2(p);
      return same_ineq(c.ineq, Inequality{need, ">", n}) && need > n;
    }
    if (f == "Prop1") {
      auto q = param(c, "q");
      int n = static_cast<int>(param(c, "n"));
      return n == 5 && !sl2_dim5_admissible(static_cast<std::uint64_t>(q)) &&
             same_ineq(c.ineq, Inequality{q, ">", 5});
    }
    if (f == "Prop2") {
      auto p = static_cast<std::uint32_t>(param(c, "p"));
      auto q = static_cast<std::uint32_t>(param(c, "q"));
      int n = static_cast<int>(param(c, "n"));
      int need = min_dim_metacyclic(p, q);
      return same_ineq(c.ineq, Inequality{need, ">", n}) && need > n;
    }
    if (f == "Sec31" || f == "Sec32" || f == "Sec33") {
      auto p = static_cast<std::uint32_t>(param(c, "p"));
      auto k = static_cast<std::uint32_t>(param(c, "k"));
      int n = static_cast<int>(param(c, "n"));
      FilterOutcome rerun;
      if (f == "Sec31") {
        rerun = psl2_family_filter(p, k, n);
      } else {
        auto m = static_cast<std::uint32_t>(param(c, "m"));
        rerun = f == "Sec32" ? pslm_family_filter(m, p, k, n)
                             : psp_family_filter(m, p, k, n);
      }
      return rerun && rerun->filter == f &&
             same_ineq(c.ineq, Inequality{rerun->lhs, rerun->rel, rerun->rhs});
    }
    if (f == "Lemma1") {
      auto m = static_cast<std::uint32_t>(param(c, "m"));
      auto k = static_cast<std::uint32_t>(param(c, "k"));
      int n = static_cast<int>(param(c, "n"));
      GroupId g = GroupId::psl(m, static_cast<std::uint64_t>(ipow(2, k)));
      auto rerun = psl_involution_refinement(g, n);
      return rerun && rerun->params == c.params && rerun->ineq == c.ineq;
    }
    if (f == "BorelRefutation") {
      if (!c.solver) return false;
      const BorelTranscript& t = *c.solver;
      auto pattern = psl2_borel_pattern(t.p, t.n);
      if (!pattern) return false;
      BorelTranscript fresh = transcript_from(*pattern);
      fresh.quotient_verified_brute = t.quotient_verified_brute;
      if (!(fresh == t)) return false;
      if (t.quotient_verified_brute && !replay_borel_brute(t)) return false;
      return true;
    }
    if (f == "CatalogWitness") {
      int n = static_cast<int>(param(c, "n"));
      int need = 0;
      if (c.witness.rfind("elemab", 0) == 0) {
        need = min_dim_elem_abelian(static_cast<std::uint32_t>(param(c, "p")),
                                    static_cast<std::uint32_t>(param(c, "k")));
      } else if (c.witness.rfind("metacyclic", 0) == 0) {
        need = min_dim_metacyclic(static_cast<std::uint32_t>(param(c, "p")),
                                  static_cast<std::uint32_t>(param(c, "q")));
      } else {
        return false;
      }
      return same_ineq(c.ineq, Inequality{need, ">", n}) && need > n;
    }
    if (f == "SubgroupChain") {
      if (c.chain.size() < 2 || !c.terminal) return false;
      if (!(c.chain.front() == c.group)) return false;
      if (!(c.terminal->group == c.chain.back())) return false;
      if (c.terminal->filter == "SubgroupChain") return false;
      return verify_certificate(*c.terminal);
    }
    if (f == "CircleAction") {
      // Folded into BorelRefutation transcripts; standalone certificates of
      // this type are not emitted.
      return false;
    }
  } catch (const Error&) {
    return false;
  }
  raise(ErrorCode::UnknownFilter, "unknown certificate filter: " + f);
}

// ---- explain ------------------------------------------------------------------

namespace {

std::string ineq_text(const Certificate& c) {
  if (!c.ineq) return "";
  return std::to_string(c.ineq->lhs) + " " + c.ineq->rel + " " + std::to_string(c.ineq->rhs);
}

std::string cert_text(const Certificate& c) {
  std::ostringstream os;
  if (c.filter == "SubgroupChain") {
    for (std::size_t i = 0; i < c.chain.size(); ++i) {
      if (i) os << " > ";
      os << c.chain[i].str();
    }
    os << ": " << cert_text(*c.terminal);
    return os.str();
  }
  os << c.filter;
  if (c.ineq) os << " [" << ineq_text(c) << "]";
  if (c.filter == "BorelRefutation" && c.solver) {
    const auto& t = *c.solver;
    if (t.infeasible) {
      os << " [no admissible fixed-point data at n=" << t.n << "]";
    } else {
      os << " [every admissible assignment pins an empty full fixed set and a circle "
            "class; Z_" << t.quotient_p << ":Z_" << t.quotient_t
         << " has no faithful circle action]";
    }
  }
  if (!c.witness.empty()) os << " via " << c.witness;
  if (!c.provenance.empty()) os << " (" << c.provenance << ")";
  return os.str();
}

}  // namespace

std::string explain(const CandidateReport& report, const GroupId& group) {
  GroupId g = normalize_id(group);
  for (const auto& row : report.candidates) {
    if (row.group == g) {
      std::string s = g.str() + ": candidate";
      if (!row.note.empty()) s += " (" + row.note + ")";
      return s;
    }
  }
  for (const auto& [id, cert] : report.excluded) {
    if (id == g) return g.str() + ": excluded, " + cert_text(cert);
  }
  for (const auto& row : report.undecided) {
    if (row.group == g) return g.str() + ": undecided, " + row.reason;
  }
  raise(ErrorCode::GroupNotInReport, g.str() + " does not appear in the report");
}

}  // namespace homsphere
