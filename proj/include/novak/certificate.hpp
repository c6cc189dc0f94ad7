#pragma once

// Self-contained certificates and the independent checkers behind them.
// Nothing here uses the searchers; a verifier-only build links novak_core.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "novak/design.hpp"
#include "novak/families.hpp"

namespace novak {

enum class CertificateKind {
  design_valid,
  cdf,
  ddf,
  symmetric_ddf,
  representatives,
  infeasible,
  pipeline,
};

std::string to_string(CertificateKind kind);
/// InputError on an unknown name.
CertificateKind certificate_kind_from_string(const std::string& name);

struct Certificate {
  CertificateKind kind = CertificateKind::design_valid;
  std::string subject_hash;  ///< fnv1a of the subject's canonical text
  nlohmann::json subject;    ///< design or family
  nlohmann::json payload;
  std::string version;
  nlohmann::json config = nlohmann::json::object();
};

nlohmann::json to_json(const Certificate& cert);
/// InputError on missing or mistyped fields.
Certificate certificate_from_json(const nlohmann::json& j);

const char* toolkit_version() noexcept;

/// Pairwise disjointness of base_i + translates[i], checked block against
/// block; in symmetric mode the representatives must also form a symmetric
/// DDF.
bool verify_representatives(const CyclicDesign& design, const std::vector<Residue>& translates,
                            bool symmetric = false);

struct InfeasibilityRecheck {
  bool infeasible = false;  ///< search space exhausted with no system found
  bool complete = false;    ///< false when the node cap was hit
  std::uint64_t nodes = 0;
};

/// Plain chronological backtracking over orbits in list order, independent
/// of the main search engine.
InfeasibilityRecheck recheck_infeasible(const CyclicDesign& design, bool symmetric = false,
                                        std::uint64_t max_nodes = 100'000'000);

Certificate make_design_certificate(const CyclicDesign& design);
/// kind must be cdf, ddf or symmetric_ddf; the predicate must pass
/// (PreconditionError otherwise).
Certificate make_family_certificate(const DifferenceFamily& family, CertificateKind kind);
Certificate make_representatives_certificate(const CyclicDesign& design,
                                             const std::vector<Residue>& translates,
                                             bool symmetric);
Certificate make_infeasible_certificate(const CyclicDesign& design, bool symmetric,
                                        std::uint64_t search_nodes);

/// Class blocks as (orbit, translate).
using ClassList = std::vector<std::pair<std::size_t, Residue>>;

/// Records P' and P'' with the claimed tau_{s-1}(P'') and bound.
Certificate make_pipeline_certificate(const CyclicDesign& design, const ClassList& start,
                                      const ClassList& repaired, const nlohmann::json& config);

struct RecheckResult {
  bool ok = false;
  std::string detail;
  explicit operator bool() const noexcept { return ok; }
};

/// Re-derives the claim from subject and payload alone.
RecheckResult recheck_certificate(const Certificate& cert);

std::string subject_hash(const CyclicDesign& design);
std::string subject_hash(const DifferenceFamily& family);

}  // namespace novak
