#include <doctest.h>

#include <cmath>

#include "novak/certificate.hpp"
#include "novak/errors.hpp"
#include "novak/generators.hpp"
#include "novak/pipeline.hpp"
#include "support.hpp"

using namespace novak;

namespace {

ClassList listing(const PartialParallelClass& p) {
  ClassList out;
  for (const auto& b : p.blocks()) out.emplace_back(b.orbit, b.translate);
  return out;
}

}  // namespace

TEST_CASE("pipeline parameter checks") {
  PipelineParams p;
  CHECK_NOTHROW(p.check(3));
  p.epsilon = 1.0 / 36;
  CHECK_THROWS_AS(p.check(3), DomainError);
  p.epsilon = 0;
  CHECK_THROWS_AS(p.check(3), DomainError);
  p = {};
  p.batch_fraction = 0;
  CHECK_THROWS_AS(p.check(3), DomainError);
  CHECK_THROWS_AS(full_pipeline(superimposed_counterexample(3, 2)), DomainError);
}

TEST_CASE("bad block counts: serial, parallel and by definition") {
  const auto d = cdf_design_roundtrip(construct_sts_cdf(73, 2));
  PartialParallelClass p(d);
  for (std::size_t i = 0; i < d.orbit_count(); ++i)
    for (Residue t = 0; t < 73 && p.count(i) < 2; t += 5)
      if (p.fits(d.block(i, t))) p.insert(i, t);
  const auto a = count_bad_blocks(p, Execution::serial);
  const auto b = count_bad_blocks(p, Execution::parallel);
  CHECK(a == b);
  const auto classes = p.blocks();
  for (std::size_t i = 0; i < d.orbit_count(); ++i) {
    std::size_t bad = 0;
    for (Residue t = 0; t < 73; ++t) {
      const auto blk = support::to_set(d.block(i, t));
      std::vector<std::uint32_t> hits(d.orbit_count(), 0);
      for (const auto& c : classes)
        if (!oracle::disjoint(support::to_set(c.block), blk)) ++hits[c.orbit];
      bool is_bad = false;
      for (std::size_t j = 0; j < hits.size(); ++j)
        is_bad = is_bad || hits[j] > 1 || (hits[j] == 1 && p.count(j) < 2);
      bad += is_bad;
    }
    CHECK(a[i] == bad);
  }
}

TEST_CASE("class extraction keeps s disjoint blocks per matched orbit") {
  const auto d = cdf_design_roundtrip(construct_sts_cdf(121, 3));
  const auto aux = build_auxiliary_hypergraph(d);
  auto col = nibble_edge_colouring(aux.graph, 2 * aux.graph.max_degree(), 8);
  REQUIRE(col);
  const auto ex = extract_class(aux, *col, d, 0.01);
  CHECK(ex.cls.check_invariants());
  CHECK(ex.cls.size() == ex.matched.size() * aux.s);
  for (auto i : ex.matched) CHECK(ex.cls.count(i) == aux.s);
  std::size_t largest = 0;
  std::vector<std::size_t> sizes(col->colours, 0);
  for (auto c : col->colour_of) largest = std::max(largest, ++sizes[c]);
  CHECK(ex.class_size == largest);
  CHECK(sizes[ex.colour] == largest);
}

TEST_CASE("full pipeline on a mid-sized system") {
  const auto d = cdf_design_roundtrip(construct_sts_cdf(301, 1));
  PipelineParams params;
  params.seed = 3;
  params.on_precondition_failure = PreconditionPolicy::continue_;
  params.exec = Execution::serial;
  const auto res = full_pipeline(d, params);
  const auto& r = res.report;
  REQUIRE(r.completed);
  REQUIRE(res.cls);
  REQUIRE(res.start);
  CHECK(r.s == 2);
  CHECK(r.r_orbits.size() <= r.r_bound);
  CHECK(r.steps.size() == static_cast<std::size_t>(r.d_start));
  std::int64_t dprev = r.d_start;
  for (const auto& s : r.steps) {
    CHECK(s.potential_before == dprev);
    CHECK(s.potential_after == dprev - 1);
    dprev = s.potential_after;
  }
  CHECK(res.cls->potential() == 0);
  CHECK(r.bound == (d.k() + 1) * r.d_start + static_cast<std::int64_t>(r.tau_start));
  CHECK(static_cast<std::int64_t>(r.tau_final) <= r.bound);
  CHECK(r.bound_holds);
  CHECK(std::isfinite(r.tau_ratio));
  CHECK(res.cls->tau(1) == r.tau_final);

  auto cert = make_pipeline_certificate(d, listing(*res.start), listing(*res.cls),
                                        nlohmann::json::object());
  CHECK(recheck_certificate(cert).ok);
  auto j = to_json(cert);
  j["payload"]["tau_final"] = r.tau_final + 1;
  CHECK_FALSE(recheck_certificate(certificate_from_json(j)).ok);

  params.exec = Execution::parallel;
  const auto again = full_pipeline(d, params);
  CHECK(to_json(again.report) == to_json(r));
}

TEST_CASE("strict precondition stops the run by default") {
  const auto d = cdf_design_roundtrip(construct_sts_cdf(97, 1));
  PipelineParams params;
  params.exec = Execution::serial;
  const auto res = full_pipeline(d, params);
  if (!res.report.precondition_met) {
    CHECK_FALSE(res.report.completed);
    CHECK(res.report.failed_stage == "greedy-repair");
    CHECK_FALSE(res.cls);
  }
}
