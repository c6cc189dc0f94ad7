#include "novak/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "novak/errors.hpp"

namespace novak {

void PipelineParams::check(std::uint32_t k) const {
  const double cap = 1.0 / (4.0 * k * k);
  if (!(epsilon > 0.0 && epsilon < cap))
    throw DomainError("epsilon must lie in (0, 1/(4k^2)) = (0, " + std::to_string(cap) + ")");
  if (!(eta >= 0.0)) throw DomainError("eta must be non-negative");
  if (!(batch_fraction > 0.0 && batch_fraction <= 1.0))
    throw DomainError("batch fraction must lie in (0, 1]");
  if (retry_cap == 0) throw DomainError("retry cap must be positive");
}

ExtractedClass extract_class(const AuxiliaryHypergraph& g, const Colouring& colouring,
                             const CyclicDesign& design, double eps_star) {
  ExtractedClass out{PartialParallelClass(design), 0, 0, {}, 0, false};
  std::vector<std::size_t> sizes(colouring.colours, 0);
  for (std::uint32_t c : colouring.colour_of) ++sizes[c];
  out.colour = static_cast<std::uint32_t>(std::max_element(sizes.begin(), sizes.end()) -
                                          sizes.begin());
  out.class_size = sizes.empty() ? 0 : sizes[out.colour];

  // edge of the class at each slot
  std::vector<std::optional<std::size_t>> at_slot(g.w);
  for (std::size_t e = 0; e < colouring.colour_of.size(); ++e)
    if (colouring.colour_of[e] == out.colour) at_slot[g.edge_info(e).slot] = e;

  for (std::size_t pos = 0; pos < g.full_orbits.size(); ++pos) {
    std::vector<Residue> picks;
    for (std::uint32_t j = 0; j < g.slots[pos]; ++j)
      if (const auto e = at_slot[g.slot_offset[pos] + j]) picks.push_back(g.edge_info(*e).translate);
    if (picks.size() < g.s) continue;
    picks.resize(g.s);
    out.matched.push_back(g.full_orbits[pos]);
    for (Residue t : picks) out.cls.insert(g.full_orbits[pos], t);
  }
  const double m = static_cast<double>(g.full_orbits.size());
  out.target_orbits = static_cast<std::size_t>(std::ceil((1.0 - eps_star) * m - 1e-9));
  out.target_met = out.matched.size() >= out.target_orbits;
  return out;
}

namespace {

std::vector<std::size_t> count_bad_serial(const PartialParallelClass& cls) {
  const auto& design = cls.design();
  std::vector<std::size_t> bad(design.orbit_count(), 0);
  for (std::size_t i = 0; i < design.orbit_count(); ++i)
    for (Residue t = 0; t < design.orbits()[i].length; ++t)
      if (classify_block(cls, design.block(i, t), i) == BlockQuality::bad) ++bad[i];
  return bad;
}

std::vector<std::size_t> count_bad_parallel(const PartialParallelClass& cls) {
  const auto& design = cls.design();
  const auto n = static_cast<std::int64_t>(design.orbit_count());
  std::vector<std::size_t> bad(design.orbit_count(), 0);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < n; ++i) {
    std::size_t count = 0;
    for (Residue t = 0; t < design.orbits()[i].length; ++t)
      if (classify_block(cls, design.block(i, t), i) == BlockQuality::bad) ++count;
    bad[i] = count;
  }
  return bad;
}

}  // namespace

std::vector<std::size_t> count_bad_blocks(const PartialParallelClass& cls, Execution exec) {
  return exec == Execution::parallel ? count_bad_parallel(cls) : count_bad_serial(cls);
}

PipelineResult full_pipeline(const CyclicDesign& design, const PipelineParams& params) {
  const std::uint32_t k = design.k(), lambda = design.lambda();
  if (k < 2 * lambda + 1) throw DomainError("pipeline needs k >= 2 lambda + 1");
  params.check(k);
  if (!validate_design(design)) throw DomainError("pipeline needs a valid design");

  PipelineResult result;
  auto& rep = result.report;
  rep.v = design.v().value();
  rep.k = k;
  rep.lambda = lambda;
  rep.s = class_parameter_s(design);
  rep.t = design.orbit_count();
  rep.epsilon = params.epsilon;
  rep.eps_star = params.eps_star(k, rep.s);
  rep.eta = params.eta;
  rep.seed = params.seed;
  const std::uint32_t s = rep.s;

  auto fail = [&](std::string stage, std::string why,
                  std::optional<std::size_t> orbit = std::nullopt) {
    rep.failed_stage = std::move(stage);
    rep.failure = std::move(why);
    rep.failed_orbit = orbit;
    return result;
  };

  AuxiliaryHypergraph g;
  try {
    g = build_auxiliary_hypergraph(design);
  } catch (const DomainError& e) {
    return fail("auxiliary-hypergraph", e.what());
  }
  rep.m = g.full_orbits.size();
  rep.w = g.w;
  rep.edges = g.graph.edge_count();
  rep.max_degree = std::max(g.v_degree, g.w_degree);
  rep.max_v_codegree = g.max_v_codegree;

  const std::uint64_t delta = rep.max_degree;
  const std::uint64_t trivial = (g.graph.uniformity()) * (delta - 1) + 1;
  auto colours = static_cast<std::uint64_t>(std::ceil((1.0 + params.eta) * delta - 1e-9));
  colours = std::clamp<std::uint64_t>(colours, 1, trivial);
  std::optional<Colouring> colouring;
  NibbleParams np;
  np.batch_fraction = params.batch_fraction;
  for (std::uint32_t attempt = 0; attempt < params.retry_cap; ++attempt) {
    colouring = nibble_edge_colouring(g.graph, static_cast<std::uint32_t>(colours),
                                      params.seed + attempt, np, params.exec);
    rep.colourings.push_back({static_cast<std::uint32_t>(colours), colouring.has_value()});
    if (colouring) break;
    if (colours == trivial) break;
    colours = std::min(colours * 2, trivial);
  }
  if (!colouring) return fail("nibble-colouring", "no proper colouring within the retry cap");
  if (!is_proper_colouring(g.graph, *colouring))
    throw InconsistencyError("nibble produced an improper colouring");

  ExtractedClass ex = extract_class(g, *colouring, design, rep.eps_star);
  rep.colour = ex.colour;
  rep.class_size = ex.class_size;
  rep.matched = ex.matched;
  rep.class_target_met = ex.target_met;
  const PartialParallelClass& p = ex.cls;

  const auto bad = count_bad_blocks(p, params.exec);
  for (std::size_t i = 0; i < rep.t; ++i)
    if (2 * bad[i] >= static_cast<std::size_t>(s) * rep.t) rep.r_orbits.push_back(i);
  rep.r_bound = static_cast<std::size_t>(k) * k * s * lambda;
  if (rep.r_orbits.size() > rep.r_bound)
    throw InconsistencyError("|R| = " + std::to_string(rep.r_orbits.size()) +
                             " exceeds k^2 s lambda");

  PointSet taken(rep.v);
  std::vector<std::pair<std::size_t, Residue>> r_class;
  for (std::size_t i : rep.r_orbits) {
    std::uint32_t picked = 0;
    for (Residue t = 0; t < design.orbits()[i].length && picked < s; ++t) {
      const Block b = design.block(i, t);
      if (taken.intersects(b.elements())) continue;
      taken.insert(b.elements());
      r_class.emplace_back(i, t);
      ++picked;
    }
    if (picked < s)
      return fail("R-class", "orbit " + std::to_string(i) + " has no room for s blocks", i);
  }

  std::vector<char> in_r(rep.t, 0), in_q(rep.t, 0);
  for (std::size_t i : rep.r_orbits) in_r[i] = 1;
  for (const auto& b : p.blocks())
    if (!in_r[b.orbit] && taken.intersects(b.block.elements())) in_q[b.orbit] = 1;
  for (std::size_t i = 0; i < rep.t; ++i)
    if (in_q[i]) rep.q_orbits.push_back(i);

  PartialParallelClass start(design);
  for (const auto& [i, t] : r_class) start.insert(i, t);
  for (const auto& b : p.blocks())
    if (!in_r[b.orbit] && !in_q[b.orbit]) start.insert(b.orbit, b.translate);
  rep.d_start = start.potential();
  rep.tau_start = start.tau(s - 1);

  std::optional<RepairResult> repaired;
  try {
    repaired = greedy_repair(start, {true});
    rep.precondition_met = true;
  } catch (const PreconditionError& e) {
    if (params.on_precondition_failure == PreconditionPolicy::stop)
      return fail("greedy-repair", e.what(),
                  e.orbit() == PreconditionError::kNoOrbit ? std::nullopt
                                                           : std::optional(e.orbit()));
    rep.failure = e.what();
    if (e.orbit() != PreconditionError::kNoOrbit) rep.failed_orbit = e.orbit();
  }
  if (!repaired) {
    try {
      repaired = greedy_repair(start, {false});
    } catch (const PreconditionError& e) {
      return fail("greedy-repair", e.what(),
                  e.orbit() == PreconditionError::kNoOrbit ? std::nullopt
                                                           : std::optional(e.orbit()));
    }
  }

  rep.steps = repaired->steps;
  rep.tau_final = repaired->final_tau;
  rep.bound = repaired->bound;
  rep.bound_holds = static_cast<std::int64_t>(rep.tau_final) <= rep.bound;
  rep.tau_ratio = rep.t ? static_cast<double>(rep.tau_final) / static_cast<double>(rep.t) : 0.0;
  rep.epsilon_target_met = static_cast<double>(rep.tau_final) <= params.epsilon * rep.t;
  rep.points_used = repaired->repaired.points_used();
  rep.completed = true;
  result.cls = std::move(repaired->repaired);
  result.start = std::move(start);
  return result;
}

nlohmann::json to_json(const PipelineReport& r) {
  nlohmann::json colourings = nlohmann::json::array();
  for (const auto& a : r.colourings)
    colourings.push_back({{"colours", a.colours}, {"success", a.success}});
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& st : r.steps)
    steps.push_back({{"orbit", st.orbit},
                     {"translate", st.translate},
                     {"removed", st.removed},
                     {"d_before", st.potential_before},
                     {"d_after", st.potential_after},
                     {"tau_before", st.tau_before},
                     {"tau_after", st.tau_after}});
  nlohmann::json j = {
      {"completed", r.completed},
      {"parameters",
       {{"v", r.v}, {"k", r.k}, {"lambda", r.lambda}, {"s", r.s}, {"t", r.t},
        {"epsilon", r.epsilon}, {"eps_star", r.eps_star}, {"eta", r.eta}, {"seed", r.seed}}},
      {"auxiliary_hypergraph",
       {{"full_orbits", r.m}, {"w", r.w}, {"edges", r.edges}, {"max_degree", r.max_degree},
        {"max_point_codegree", r.max_v_codegree}}},
      {"colouring",
       {{"attempts", colourings}, {"class_colour", r.colour}, {"class_size", r.class_size},
        {"M", r.matched}, {"target_met", r.class_target_met}}},
      {"filtering",
       {{"R", r.r_orbits}, {"R_bound", r.r_bound}, {"Q", r.q_orbits}}},
      {"repair",
       {{"d_start", r.d_start}, {"tau_start", r.tau_start},
        {"precondition_met", r.precondition_met}, {"steps", steps},
        {"tau_final", r.tau_final}, {"bound", r.bound}, {"bound_holds", r.bound_holds}}},
      {"tau_ratio", r.tau_ratio},
      {"epsilon_target_met", r.epsilon_target_met},
      {"points_used", r.points_used}};
  if (!r.failed_stage.empty()) j["failed_stage"] = r.failed_stage;
  if (!r.failure.empty()) j["failure"] = r.failure;
  if (r.failed_orbit) j["failed_orbit"] = *r.failed_orbit;
  return j;
}

nlohmann::json class_to_json(const PartialParallelClass& cls) {
  std::map<std::size_t, std::vector<Residue>> by_orbit;
  for (const auto& b : cls.blocks()) by_orbit[b.orbit].push_back(b.translate);
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [orbit, ts] : by_orbit) j[std::to_string(orbit)] = ts;
  return j;
}

}  // namespace novak
