#pragma once

// Exact search for pairwise disjoint orbit representatives, translate-
// restricted search, and the Karasev-Petrov hypothesis check.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "novak/design.hpp"
#include "novak/families.hpp"

namespace novak {

enum class SearchMode { plain, symmetric };

/// One translate per orbit: orbit i contributes base_i + translates[i].
struct RepresentativeSystem {
  std::vector<Residue> translates;

  friend bool operator==(const RepresentativeSystem&,
                         const RepresentativeSystem&) = default;
};

enum class SearchStatus { feasible, infeasible, timeout };

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint32_t max_depth = 0;
  std::uint64_t prunes = 0;  ///< dead ends: a variable with no candidate left
};

struct SearchBudget {
  std::uint64_t max_nodes = std::numeric_limits<std::uint64_t>::max();
};

struct SearchOutcome {
  SearchStatus status = SearchStatus::timeout;
  std::optional<RepresentativeSystem> witness;
  SearchStats stats;
  /// Tie-break order of the variables; the branching order itself is
  /// most-constrained-first.
  std::vector<std::size_t> orbit_order;
  /// Set by prime_case_driver: the Karasev-Petrov hypotheses held and the
  /// translate-restricted search was used.
  bool used_translate_search = false;
};

std::string to_string(SearchStatus status);

/// One block per orbit, pairwise disjoint. Symmetric mode (k=3, lambda=1,
/// v = 1 mod 6 only) also forbids 0 and any x with v-x already used.
/// INFEASIBLE only after the whole space is exhausted; TIMEOUT otherwise.
SearchOutcome find_disjoint_representatives(const CyclicDesign& design,
                                            SearchMode mode = SearchMode::plain,
                                            const SearchBudget& budget = {});

/// Choose t_i in translate_sets[i] so the sets X_i + t_i are pairwise
/// disjoint. The sets may have different sizes. The witness holds t_i.
SearchOutcome find_translate_representatives(const std::vector<Block>& sets,
                                             Modulus v,
                                             const std::vector<std::vector<Residue>>& translate_sets,
                                             const SearchBudget& budget = {});

SearchOutcome find_translate_representatives(const DifferenceFamily& family,
                                             const std::vector<std::vector<Residue>>& translate_sets,
                                             const SearchBudget& budget = {});

/// Field prime p, sets X_1..X_m, translate sets T_1..T_m and the half
/// diameter bound d.
struct KPInstance {
  std::uint32_t p = 2;
  std::uint64_t d = 1;
  std::vector<Block> sets;
  std::vector<std::vector<Residue>> translates;

  std::size_t m() const noexcept { return sets.size(); }
};

struct KPReport {
  bool multinomial_nonzero = false;
  bool diameter_ok = false;
  bool translate_size_ok = false;
  bool all = false;
  std::uint64_t multinomial_valuation = 0;  ///< p-adic valuation of (md)!/(d!)^m
};

/// p-adic valuation of (md)!/(d!)^m: the number of carries when d is added
/// to itself m times in base p.
std::uint64_t multinomial_valuation(std::uint64_t d, std::uint64_t m, std::uint64_t p);

/// Checks (md)!/(d!)^m != 0 mod p, |X_i - X_j| <= 2d for i < j and
/// |T_i| >= (m-1)d + 1. DomainError if p is not prime; InputError on
/// malformed sets.
KPReport kp_hypothesis_check(const KPInstance& instance);

/// Translate-first search for a prime-order design with lambda = 1: builds the
/// instance X_i = base_i, d = ceil(k^2/2), T_i = Z_p, and if the hypotheses
/// hold runs the translate-restricted search; otherwise falls through to
/// find_disjoint_representatives. DomainError unless v is prime and
/// lambda = 1.
SearchOutcome prime_case_driver(const CyclicDesign& design,
                                const SearchBudget& budget = {});

KPInstance prime_case_instance(const CyclicDesign& design);

}  // namespace novak
