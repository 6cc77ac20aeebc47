#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "homsphere/borelsolve.hpp"
#include "homsphere/catalog.hpp"
#include "homsphere/dimbounds.hpp"

namespace homsphere {

struct Inequality {
  std::int64_t lhs = 0;
  std::string rel;
  std::int64_t rhs = 0;
  friend bool operator==(const Inequality&, const Inequality&) = default;
};

/// Solver transcript embedded in a BorelRefutation certificate. Solutions are
/// full assignment vectors over the canonical lattice order.
struct BorelTranscript {
  std::uint32_t p = 0;
  std::uint32_t k = 2;
  int n = 0;
  std::vector<std::size_t> block_sizes;
  std::vector<FixAssignment> solutions;
  bool infeasible = false;
  bool circle_obstruction = false;
  std::uint32_t quotient_p = 0;
  std::uint32_t quotient_t = 0;
  bool quotient_verified_brute = false;
  friend bool operator==(const BorelTranscript&, const BorelTranscript&) = default;
};

/// Replayable record of which rule excluded a group: re-evaluating `filter`
/// with `params` must reproduce the stored inequality / transcript exactly.
struct Certificate {
  GroupId group;
  std::string filter;  // Thm4Rank | Thm3 | Lemma1 | Prop1 | Prop2 | Sec31 |
                       // Sec32 | Sec33 | BorelRefutation | CircleAction |
                       // SubgroupChain | CatalogWitness
  std::map<std::string, std::int64_t> params;
  std::optional<Inequality> ineq;
  std::vector<GroupId> chain;                 // containment path, excluded group first
  std::shared_ptr<Certificate> terminal;      // non-chain certificate ending a chain
  std::optional<BorelTranscript> solver;
  std::string witness;     // catalog witness text, e.g. "elemab(2,11)"
  std::string provenance;  // catalog citation
};

struct CandidateRow {
  GroupId group;
  std::string note;  // e.g. "open per paper" for the undecided unitary case
};

struct UndecidedRow {
  GroupId group;
  std::string reason;
};

struct CandidateReport {
  int n = 0;
  std::string config_digest;
  std::string config_source;
  std::vector<std::string> families;  // family tags included in this run
  std::vector<CandidateRow> candidates;
  std::vector<std::pair<GroupId, Certificate>> excluded;
  std::vector<UndecidedRow> undecided;
};

/// Parsed witness config plus its identity (digest of the raw bytes).
struct WitnessConfig {
  std::vector<WitnessEntry> entries;
  std::string digest;
  std::string source;

  static WitnessConfig builtin();
  static WitnessConfig from_file(const std::string& path);
  static WitnessConfig from_text(const std::string& text, const std::string& source);
};

std::string fnv1a64_hex(const std::string& bytes);

/// The pipeline. Filters run cheapest first per group: rank bound, family
/// closed forms, the degree-2 solver refutation, subgroup chains, catalog
/// witnesses. A missing config downgrades sporadic and unitary entries to
/// undecided; it never silently excludes.
CandidateReport classify(int n, const std::optional<WitnessConfig>& config,
                         const std::vector<GroupId::Family>& families = {
                             GroupId::Family::Alt, GroupId::Family::PSL,
                             GroupId::Family::PSp, GroupId::Family::PSU,
                             GroupId::Family::Sporadic});

/// Re-runs the named filter with the stored parameters; true iff the
/// exclusion reproduces exactly. Throws UnknownFilter on a bad filter tag.
bool verify_certificate(const Certificate& c);

/// Human-readable exclusion trace for one group of the report.
/// Throws GroupNotInReport.
std::string explain(const CandidateReport& report, const GroupId& group);

}  // namespace homsphere
