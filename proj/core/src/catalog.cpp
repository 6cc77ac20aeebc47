#include "homsphere/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "homsphere/dimbounds.hpp"
#include "homsphere/gfield.hpp"

namespace homsphere {

GroupId GroupId::alt(std::uint32_t m) { return {Family::Alt, m, 0, ""}; }
GroupId GroupId::psl(std::uint32_t m, std::uint64_t q) { return {Family::PSL, m, q, ""}; }
GroupId GroupId::psp(std::uint32_t two_m, std::uint64_t q) { return {Family::PSp, two_m, q, ""}; }
GroupId GroupId::psu(std::uint32_t m, std::uint64_t q) { return {Family::PSU, m, q, ""}; }
GroupId GroupId::sporadic(const std::string& name) { return {Family::Sporadic, 0, 0, name}; }

const std::vector<std::string>& sporadic_names() {
  static const std::vector<std::string> names = {
      "M11", "M12", "J1",  "M22", "J2",  "M23",  "HS",  "J3",  "M24",
      "McL", "He",  "Ru",  "Suz", "ON",  "Co3",  "Co2", "Fi22", "HN",
      "Ly",  "Th",  "Fi23", "Co1", "J4", "Fi24'", "B",   "M"};
  return names;
}

namespace {

int sporadic_rank(const std::string& name) {
  const auto& names = sporadic_names();
  auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

}  // namespace

std::string GroupId::str() const {
  switch (family) {
    case Family::Alt:
      return "Alt(" + std::to_string(a) + ")";
    case Family::PSL:
      return "PSL(" + std::to_string(a) + "," + std::to_string(b) + ")";
    case Family::PSp:
      return "PSp(" + std::to_string(a) + "," + std::to_string(b) + ")";
    case Family::PSU:
      return "PSU(" + std::to_string(a) + "," + std::to_string(b) + ")";
    case Family::Sporadic:
      return name;
  }
  return "?";
}

GroupId GroupId::parse(const std::string& s) {
  auto strip = [](std::string t) {
    t.erase(0, t.find_first_not_of(" \t"));
    auto e = t.find_last_not_of(" \t");
    if (e != std::string::npos) t.erase(e + 1);
    return t;
  };
  std::string t = strip(s);
  auto paren = t.find('(');
  if (paren == std::string::npos) {
    if (sporadic_rank(t) < 0) raise(ErrorCode::UnknownGroup, "unknown group name: " + t);
    return sporadic(t);
  }
  if (t.back() != ')') raise(ErrorCode::UnknownGroup, "unbalanced group spec: " + t);
  std::string head = strip(t.substr(0, paren));
  std::string args = t.substr(paren + 1, t.size() - paren - 2);
  std::vector<std::uint64_t> nums;
  std::stringstream ss(args);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    piece = strip(piece);
    if (piece.empty() || piece.find_first_not_of("0123456789") != std::string::npos)
      raise(ErrorCode::UnknownGroup, "bad group parameters: " + t);
    nums.push_back(std::stoull(piece));
  }
  if (head == "Alt" && nums.size() == 1) return alt(static_cast<std::uint32_t>(nums[0]));
  if (head == "PSL" && nums.size() == 2)
    return psl(static_cast<std::uint32_t>(nums[0]), nums[1]);
  if (head == "PSp" && nums.size() == 2)
    return psp(static_cast<std::uint32_t>(nums[0]), nums[1]);
  if (head == "PSU" && nums.size() == 2)
    return psu(static_cast<std::uint32_t>(nums[0]), nums[1]);
  raise(ErrorCode::UnknownGroup, "unknown group spec: " + t);
}

std::strong_ordering operator<=>(const GroupId& x, const GroupId& y) {
  if (x.family != y.family) return x.family <=> y.family;
  if (x.family == GroupId::Family::Sporadic)
    return sporadic_rank(x.name) <=> sporadic_rank(y.name);
  if (x.a != y.a) return x.a <=> y.a;
  return x.b <=> y.b;
}

GroupId normalize_id(const GroupId& g) {
  switch (g.family) {
    case GroupId::Family::Alt:
      if (g.a < 5) raise(ErrorCode::NotSimple, g.str() + " is not simple");
      if (g.a == 8) return GroupId::psl(4, 2);
      return g;
    case GroupId::Family::PSL: {
      if (g.a < 2) raise(ErrorCode::NotSimple, g.str() + " is not simple");
      auto pk = prime_power(g.b);
      if (!pk) raise(ErrorCode::UnknownGroup, g.str() + ": field size is not a prime power");
      if (g.a == 2) {
        if (g.b < 4) raise(ErrorCode::NotSimple, g.str() + " is not simple");
        if (g.b == 4 || g.b == 5) return GroupId::alt(5);
        if (g.b == 9) return GroupId::alt(6);
        return g;
      }
      if (g.a == 3 && g.b == 2) return GroupId::psl(2, 7);
      if (g.a == 4 && g.b == 2) return g;  // canonical home of the degree-8 alternating group
      return g;
    }
    case GroupId::Family::PSp: {
      auto pk = prime_power(g.b);
      if (!pk) raise(ErrorCode::UnknownGroup, g.str() + ": field size is not a prime power");
      if (g.a % 2 != 0 || g.a < 2) raise(ErrorCode::NotSimple, g.str() + " is not a symplectic group");
      if (g.a == 2) return normalize_id(GroupId::psl(2, g.b));
      if (g.a == 4 && g.b == 2) raise(ErrorCode::NotSimple, "PSp(4,2) is not simple");
      if (g.a == 4 && g.b == 3) return GroupId::psu(4, 2);
      return g;
    }
    case GroupId::Family::PSU: {
      auto pk = prime_power(g.b);
      if (!pk) raise(ErrorCode::UnknownGroup, g.str() + ": field size is not a prime power");
      if (g.a < 3) raise(ErrorCode::NotSimple, g.str() + " is not simple");
      if (g.a == 3 && g.b == 2) raise(ErrorCode::NotSimple, "PSU(3,2) is not simple");
      return g;
    }
    case GroupId::Family::Sporadic:
      if (sporadic_rank(g.name) < 0) raise(ErrorCode::UnknownGroup, "unknown group: " + g.name);
      return g;
  }
  raise(ErrorCode::UnknownGroup, "bad group id");
}

namespace {

std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > (1ull << 63) / b)
    raise(ErrorCode::OverflowBound, "group order exceeds 2^63");
  return a * b;
}

}  // namespace

std::uint64_t group_order(const GroupId& g) {
  switch (g.family) {
    case GroupId::Family::Alt: {
      std::uint64_t f = 1;
      for (std::uint64_t i = 2; i <= g.a; ++i) f = mul_checked(f, i);
      return f / 2;
    }
    case GroupId::Family::PSL: {
      const std::uint64_t q = g.b;
      const std::uint32_t m = g.a;
      std::uint64_t order = 1;
      for (std::uint32_t i = 0; i < m * (m - 1) / 2; ++i) order = mul_checked(order, q);
      for (std::uint32_t i = 2; i <= m; ++i) {
        std::uint64_t qi = 1;
        for (std::uint32_t j = 0; j < i; ++j) qi = mul_checked(qi, q);
        order = mul_checked(order, qi - 1);
      }
      return order / std::gcd<std::uint64_t>(m, q - 1);
    }
    case GroupId::Family::PSp: {
      const std::uint64_t q = g.b;
      const std::uint32_t m = g.a / 2;
      std::uint64_t order = 1;
      for (std::uint32_t i = 0; i < m * m; ++i) order = mul_checked(order, q);
      for (std::uint32_t i = 1; i <= m; ++i) {
        std::uint64_t qi = 1;
        for (std::uint32_t j = 0; j < 2 * i; ++j) qi = mul_checked(qi, q);
        order = mul_checked(order, qi - 1);
      }
      return order / std::gcd<std::uint64_t>(2, q - 1);
    }
    case GroupId::Family::PSU: {
      const std::uint64_t q = g.b;
      const std::uint32_t m = g.a;
      std::uint64_t order = 1;
      for (std::uint32_t i = 0; i < m * (m - 1) / 2; ++i) order = mul_checked(order, q);
      for (std::uint32_t i = 2; i <= m; ++i) {
        std::uint64_t qi = 1;
        for (std::uint32_t j = 0; j < i; ++j) qi = mul_checked(qi, q);
        order = mul_checked(order, i % 2 == 0 ? qi - 1 : qi + 1);
      }
      return order / std::gcd<std::uint64_t>(m, q + 1);
    }
    case GroupId::Family::Sporadic:
      raise(ErrorCode::BadArgument, "no order formula wired for sporadic groups");
  }
  raise(ErrorCode::BadArgument, "bad group id");
}

std::string WitnessEntry::witness_str() const {
  switch (kind) {
    case Kind::ElemAbelian:
      return "elemab(" + std::to_string(p) + "," + std::to_string(k) + ")";
    case Kind::Metacyclic:
      return "metacyclic(" + std::to_string(p) + "," + std::to_string(q) + ")";
    case Kind::ContainsGroup:
      return "contains " + contained.str();
    case Kind::OrderInfo:
      return "order " + std::to_string(order);
  }
  return "?";
}

namespace {

std::string strip(std::string t) {
  t.erase(0, t.find_first_not_of(" \t\r"));
  auto e = t.find_last_not_of(" \t\r");
  if (e == std::string::npos) return "";
  t.erase(e + 1);
  return t;
}

WitnessEntry parse_witness_line(const std::string& raw, int lineno) {
  WitnessEntry w;
  std::string line = raw;
  if (auto at = line.find('@'); at != std::string::npos) {
    w.provenance = strip(line.substr(at + 1));
    line = line.substr(0, at);
  }
  auto colon = line.find(':');
  if (colon == std::string::npos)
    raise(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": missing ':'", lineno);
  w.group = normalize_id(GroupId::parse(strip(line.substr(0, colon))));
  std::string rhs = strip(line.substr(colon + 1));
  if (rhs.rfind("elemab(", 0) == 0 && rhs.back() == ')') {
    std::uint32_t p = 0, k = 0;
    if (std::sscanf(rhs.c_str(), "elemab(%u,%u)", &p, &k) != 2 || !is_prime_u64(p) || k < 1)
      raise(ErrorCode::InvalidWitness,
            "line " + std::to_string(lineno) + ": bad elemab witness", lineno);
    w.kind = WitnessEntry::Kind::ElemAbelian;
    w.p = p;
    w.k = k;
  } else if (rhs.rfind("metacyclic(", 0) == 0 && rhs.back() == ')') {
    std::uint32_t p = 0, q = 0;
    if (std::sscanf(rhs.c_str(), "metacyclic(%u,%u)", &p, &q) != 2 || !is_prime_u64(p) ||
        p < 5 || q < 2 || (p - 1) % q != 0)
      raise(ErrorCode::InvalidWitness,
            "line " + std::to_string(lineno) + ": bad metacyclic witness", lineno);
    w.kind = WitnessEntry::Kind::Metacyclic;
    w.p = p;
    w.q = q;
  } else if (rhs.rfind("contains ", 0) == 0) {
    w.kind = WitnessEntry::Kind::ContainsGroup;
    w.contained = normalize_id(GroupId::parse(strip(rhs.substr(9))));
  } else if (rhs.rfind("order ", 0) == 0) {
    std::string num = strip(rhs.substr(6));
    if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
      raise(ErrorCode::InvalidWitness,
            "line " + std::to_string(lineno) + ": bad order value", lineno);
    w.kind = WitnessEntry::Kind::OrderInfo;
    w.order = std::stoull(num);
  } else {
    raise(ErrorCode::ParseError,
          "line " + std::to_string(lineno) + ": unrecognized witness '" + rhs + "'", lineno);
  }
  return w;
}

}  // namespace

std::vector<WitnessEntry> load_witness_config(std::istream& in) {
  std::vector<WitnessEntry> out;
  std::map<std::pair<std::string, std::string>, bool> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    if (strip(line).empty()) continue;
    WitnessEntry w = parse_witness_line(line, lineno);
    auto key = std::make_pair(w.group.str(), w.witness_str());
    if (seen.count(key)) continue;  // duplicates collapse
    seen[key] = true;
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<WitnessEntry> load_witness_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::ConfigMissing, "cannot open config file: " + path);
  return load_witness_config(in);
}

// ---- family enumeration ------------------------------------------------------

namespace {

bool monotone_fail_kind(const FilterFail& f) {
  return f.filter == "Thm4Rank" || f.filter == "Sec31" || f.filter == "Sec32" ||
         f.filter == "Sec33" || f.filter == "Prop1";
}

std::vector<std::uint32_t> primes_upto(std::uint32_t bound) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t p = 2; p <= bound; ++p)
    if (is_prime_u64(p)) out.push_back(p);
  return out;
}

}  // namespace

std::vector<GroupId> family_iter(GroupId::Family family, int n) {
  if (n < 1 || n > 32) raise(ErrorCode::BadArgument, "dimension out of range", n);
  std::vector<GroupId> out;
  switch (family) {
    case GroupId::Family::Alt: {
      for (std::uint32_t m = 5; m <= 2 * static_cast<std::uint32_t>(n) + 4; ++m)
        out.push_back(GroupId::alt(m));
      break;
    }
    case GroupId::Family::PSL: {
      // Degree 2. The prime-field minimal dimension is not monotone in p, so
      // the k = 1 line sweeps the full bound with no early stop.
      for (std::uint32_t p : primes_upto(2 * static_cast<std::uint32_t>(n) + 3)) {
        if (p >= 5) out.push_back(GroupId::psl(2, p));
      }
      const std::uint32_t kmax = static_cast<std::uint32_t>((n + 1) / 2 + 1);
      for (std::uint32_t k = 2; k <= kmax; ++k) {
        for (std::uint32_t p : primes_upto(2 * static_cast<std::uint32_t>(n) + 3)) {
          if (ipow(p, k) > (1ll << 31)) break;
          out.push_back(GroupId::psl(2, static_cast<std::uint64_t>(ipow(p, k))));
          if (psl2_family_filter(p, k, n)) break;  // monotone in p for k >= 2
        }
      }
      // Degree >= 3.
      for (std::uint32_t m = 3;; ++m) {
        bool m_minimal_failed = static_cast<bool>(pslm_family_filter(m, 2, 1, n));
        for (std::uint32_t k = 1;; ++k) {
          bool k_minimal_failed = static_cast<bool>(pslm_family_filter(m, 2, k, n));
          for (std::uint32_t p : primes_upto(2 * static_cast<std::uint32_t>(n) + 3)) {
            if (ipow(p, k) > (1ll << 31)) break;
            out.push_back(GroupId::psl(m, static_cast<std::uint64_t>(ipow(p, k))));
            if (pslm_family_filter(m, p, k, n)) break;
          }
          if (k_minimal_failed) break;
        }
        if (m_minimal_failed) break;
      }
      break;
    }
    case GroupId::Family::PSp: {
      bool stop_m = false;
      for (std::uint32_t m = 2; m <= static_cast<std::uint32_t>(n) + 2 && !stop_m; ++m) {
        bool stop_k = false;
        for (std::uint32_t k = 1; k <= static_cast<std::uint32_t>(n) + 1 && !stop_k; ++k) {
          bool first = true;
          for (std::uint32_t p : primes_upto(2 * static_cast<std::uint32_t>(n) + 3)) {
            const std::int64_t q = ipow(p, k);
            if (q > (1ll << 31)) break;
            if (m == 2 && q == 2) continue;  // PSp(4,2) is not simple
            out.push_back(GroupId::psp(2 * m, static_cast<std::uint64_t>(q)));
            auto f = psp_family_filter(m, p, k, n);
            bool mono = f && monotone_fail_kind(*f);
            if (first) {
              // Rank and conjugacy bounds only tighten deeper in the sweep.
              if (mono) stop_k = true;
              if (mono && k == 1) stop_m = true;
              first = false;
            }
            if (mono) break;
          }
        }
      }
      break;
    }
    case GroupId::Family::PSU: {
      out.push_back(GroupId::psu(3, 3));
      out.push_back(GroupId::psu(4, 2));
      break;
    }
    case GroupId::Family::Sporadic: {
      for (const auto& name : sporadic_names()) out.push_back(GroupId::sporadic(name));
      break;
    }
  }
  return out;
}

}  // namespace homsphere
