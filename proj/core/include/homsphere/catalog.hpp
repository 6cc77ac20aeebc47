#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "homsphere/error.hpp"

namespace homsphere {

/// Canonical identifier of a finite simple group.
struct GroupId {
  enum class Family { Alt, PSL, PSp, PSU, Sporadic };
  Family family = Family::Alt;
  std::uint32_t a = 0;   // Alt: degree; PSL/PSU: dimension; PSp: 2m
  std::uint64_t b = 0;   // field size q
  std::string name;      // sporadic name

  static GroupId alt(std::uint32_t m);
  static GroupId psl(std::uint32_t m, std::uint64_t q);
  static GroupId psp(std::uint32_t two_m, std::uint64_t q);
  static GroupId psu(std::uint32_t m, std::uint64_t q);
  static GroupId sporadic(const std::string& name);

  std::string str() const;  ///< "Alt(7)", "PSL(2,7)", "PSp(4,5)", "PSU(4,2)", "M11"
  static GroupId parse(const std::string& s);  ///< throws UnknownGroup

  friend bool operator==(const GroupId&, const GroupId&) = default;
  /// Family order Alt < PSL < PSp < PSU < Sporadic, then parameters
  /// (sporadics by ATLAS order).
  friend std::strong_ordering operator<=>(const GroupId& x, const GroupId& y);
};

/// The 26 sporadic group names in ATLAS order.
const std::vector<std::string>& sporadic_names();

/// Validates simplicity constraints and folds the exceptional isomorphisms
/// onto fixed canonical representatives:
///   PSL(2,4), PSL(2,5) -> Alt(5);  PSL(2,9) -> Alt(6);  PSL(3,2) -> PSL(2,7);
///   Alt(8) -> PSL(4,2);            PSp(4,3) -> PSU(4,2); PSp(2,q) -> PSL(2,q).
/// Throws NotSimple.
GroupId normalize_id(const GroupId& g);

/// Exact order for Alt / PSL / PSp / PSU members (throws on overflow past 2^63).
std::uint64_t group_order(const GroupId& g);

/// Subgroup-witness record ingested from the config file.
struct WitnessEntry {
  enum class Kind { ElemAbelian, Metacyclic, ContainsGroup, OrderInfo };
  GroupId group;
  Kind kind = Kind::OrderInfo;
  std::uint32_t p = 0;   // elemab(p,k) / metacyclic(p,q)
  std::uint32_t k = 0;
  std::uint32_t q = 0;
  GroupId contained;     // ContainsGroup
  std::uint64_t order = 0;
  std::string provenance;

  std::string witness_str() const;  ///< "elemab(3,5)", "contains PSL(2,11)", ...
};

/// Parse the line-oriented witness config: `GROUP ":" WITNESS [@ provenance]`,
/// `#` comments. Throws ParseError (with line in detail), UnknownGroup,
/// InvalidWitness. Duplicate (group, witness) pairs collapse.
std::vector<WitnessEntry> load_witness_config(std::istream& in);
std::vector<WitnessEntry> load_witness_config_file(const std::string& path);

/// The witness data shipped with the tool.
const std::string& default_config_text();

/// Finite, deterministic enumeration of the family members that survive the
/// closed-form filters at dimension n, plus boundary entries one parameter
/// step past the survivors. PSU yields the built-in members (config entries
/// extend the list at classification time); Sporadic yields the 26 names.
std::vector<GroupId> family_iter(GroupId::Family family, int n);

}  // namespace homsphere
