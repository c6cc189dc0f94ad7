#pragma once

// End-to-end construction of a large partial parallel class:
// auxiliary hypergraph -> nibble colouring -> largest colour class ->
// R/Q filtering -> greedy repair.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "novak/hypergraph.hpp"
#include "novak/parallel_class.hpp"

namespace novak {

struct ExtractedClass {
  PartialParallelClass cls;
  std::uint32_t colour = 0;
  std::size_t class_size = 0;
  std::vector<std::size_t> matched;  ///< design orbit indices in M
  std::size_t target_orbits = 0;     ///< ceil((1 - eps*) m)
  bool target_met = false;
};

/// Largest colour class (ties to the lowest colour), orbits with at least s
/// matched slots, s blocks kept per such orbit (lowest slots first).
/// `eps_star` only sets the reported target.
ExtractedClass extract_class(const AuxiliaryHypergraph& g, const Colouring& colouring,
                             const CyclicDesign& design, double eps_star = 0.0);

/// P-bad block count of every orbit.
std::vector<std::size_t> count_bad_blocks(const PartialParallelClass& cls,
                                          Execution exec = Execution::parallel);

enum class PreconditionPolicy {
  stop,      ///< a failed repair precondition ends the run
  continue_  ///< record it, then repair with per-step checks only
};

struct PipelineParams {
  double epsilon = 0.01;
  double eta = 0.2;
  std::uint64_t seed = 1;
  double batch_fraction = 0.1;
  std::uint32_t retry_cap = 20;
  PreconditionPolicy on_precondition_failure = PreconditionPolicy::stop;
  Execution exec = Execution::parallel;

  /// eps / (2 (k+1) s)
  double eps_star(std::uint32_t k, std::uint32_t s) const noexcept {
    return epsilon / (2.0 * (k + 1) * s);
  }
  /// DomainError unless 0 < eps < 1/(4k^2), eta >= 0 and the batch fraction
  /// lies in (0, 1].
  void check(std::uint32_t k) const;
};

struct ColouringAttempt {
  std::uint32_t colours = 0;
  bool success = false;
};

struct PipelineReport {
  bool completed = false;
  std::string failed_stage;  ///< empty when completed
  std::string failure;
  std::optional<std::size_t> failed_orbit;

  std::uint32_t v = 0, k = 0, lambda = 0, s = 0;
  std::size_t t = 0;  ///< orbits
  std::size_t m = 0;  ///< full orbits
  std::uint32_t w = 0;
  double epsilon = 0, eps_star = 0, eta = 0;
  std::uint64_t seed = 0;

  std::size_t edges = 0;
  std::uint32_t max_degree = 0;
  std::uint32_t max_v_codegree = 0;
  std::vector<ColouringAttempt> colourings;
  std::uint32_t colour = 0;
  std::size_t class_size = 0;
  std::vector<std::size_t> matched;  ///< M
  bool class_target_met = false;

  std::vector<std::size_t> r_orbits;  ///< R
  std::size_t r_bound = 0;            ///< k^2 s lambda
  std::vector<std::size_t> q_orbits;  ///< Q

  std::int64_t d_start = 0;     ///< d(P')
  std::uint64_t tau_start = 0;  ///< tau_{s-1}(P')
  bool precondition_met = false;
  std::vector<RepairStep> steps;
  std::uint64_t tau_final = 0;  ///< tau_{s-1}(P'')
  std::int64_t bound = 0;       ///< (k+1) d(P') + tau_{s-1}(P')
  bool bound_holds = false;
  double tau_ratio = 0;         ///< tau_{s-1}(P'') / t
  bool epsilon_target_met = false;
  std::size_t points_used = 0;
};

struct PipelineResult {
  std::optional<PartialParallelClass> cls;    ///< P''
  std::optional<PartialParallelClass> start;  ///< P', input to the repair
  PipelineReport report;
};

/// Runs every stage on a valid design with k >= 2 lambda + 1 (DomainError
/// otherwise). A stage that cannot proceed ends the run with
/// report.completed == false and the stage named.
PipelineResult full_pipeline(const CyclicDesign& design, const PipelineParams& params = {});

nlohmann::json to_json(const PipelineReport& report);
/// Orbit index -> translates.
nlohmann::json class_to_json(const PartialParallelClass& cls);

}  // namespace novak
