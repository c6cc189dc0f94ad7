#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "novak/design.hpp"
#include "novak/errors.hpp"
#include "novak/generators.hpp"
#include "support.hpp"

using namespace novak;
using support::block;

namespace {

CyclicDesign single(std::uint32_t v, std::uint32_t k, std::uint32_t lambda,
                    std::initializer_list<Residue> b) {
  return CyclicDesign::from_base_blocks(Modulus(v), k, lambda, {block(b, v)});
}

}  // namespace

TEST_CASE("develop") {
  CHECK(develop(single(7, 3, 1, {0, 1, 3})).size() == 7);
  auto d9 = develop(single(9, 3, 3, {0, 3, 6}));
  CHECK(d9 == std::vector<Block>{block({0, 3, 6}, 9), block({1, 4, 7}, 9), block({2, 5, 8}, 9)});
  auto d3 = develop(single(3, 3, 1, {0, 1, 2}));
  CHECK(d3.size() == 1);
}

TEST_CASE("validate design") {
  for (auto m : {CoverageMethod::automatic, CoverageMethod::differences, CoverageMethod::pair_count})
    CHECK(validate_design(single(7, 3, 1, {0, 1, 3}), m).pass);

  auto bad = validate_design(single(7, 3, 1, {0, 1, 2}), CoverageMethod::pair_count);
  CHECK_FALSE(bad.pass);
  CHECK(bad.witness == std::pair<Residue, Residue>{0, 1});
  CHECK(bad.observed == 2);
  CHECK_FALSE(validate_design(single(7, 3, 1, {0, 1, 2}), CoverageMethod::differences).pass);

  CHECK(validate_design(single(3, 3, 1, {0, 1, 2})).pass);
}

TEST_CASE("structural errors come before coverage") {
  CyclicDesign d(Modulus(7), 3, 1, {Orbit{block({0, 1, 2}, 7), 3}});
  CHECK_THROWS_AS(validate_design(d), StructuralError);
}

TEST_CASE("domain rules") {
  CHECK_THROWS_AS(single(7, 1, 1, {0}), DomainError);
  CHECK_THROWS_AS(CyclicDesign::from_base_blocks(Modulus(7), 3, 0, {block({0, 1, 3}, 7)}),
                  DomainError);
  CHECK_THROWS_AS(CyclicDesign::from_base_blocks(Modulus(7), 3, 1, {block({0, 1}, 7)}),
                  DomainError);
}

TEST_CASE("short orbit analysis") {
  auto sts15 = collect_cyclic_sts(15, {});
  REQUIRE_FALSE(sts15.empty());
  for (const auto& d : sts15) {
    auto r = short_orbit_analysis(d);
    CHECK(r.short_count == 1);
    CHECK(r.full_count == 2);
    CHECK(r.short_orbits.at(0).length == 5);
    CHECK(r.short_orbits.at(0).cosets.size() == 1);
    CHECK(14.0 / 6 - 2 * std::sqrt(3.0) <= r.full_count);
    CHECK(r.full_count <= 14.0 / 6);
    CHECK(14.0 / 6 <= r.full_count + r.short_count);
  }

  auto fano = short_orbit_analysis(single(7, 3, 1, {0, 1, 3}));
  CHECK(fano.short_count == 0);
  CHECK(fano.full_count == 1);

  auto info = analyze_short_orbit(make_orbit(block({0, 3, 6}, 9), Modulus(9)), Modulus(9));
  CHECK(info.stabilizer == std::vector<Residue>{0, 3, 6});
  CHECK(info.cosets.size() == 1);

  CyclicDesign broken(Modulus(9), 3, 1, {make_orbit(block({0, 3, 6}, 9), Modulus(9)),
                                         make_orbit(block({0, 3, 6}, 9), Modulus(9))});
  CHECK_THROWS_AS(short_orbit_analysis(broken), InconsistencyError);
}

TEST_CASE("design invariants on enumerated systems") {
  for (std::uint32_t v : {7u, 9u, 13u, 15u, 19u, 21u}) {
    for (const auto& d : collect_cyclic_sts(v, {})) {
      std::uint64_t total = 0;
      for (const auto& o : d.orbits()) total += o.length;
      CHECK(total == std::uint64_t{v} * (v - 1) / 6);
      CHECK(validate_design(d, CoverageMethod::pair_count).pass);
      CHECK(oracle::covers_pairs(support::to_sets(develop(d)), v, 1));
      if (gcd(v, 3) == 1) CHECK(d.all_full());

      auto blocks = develop(d);
      std::vector<Block> reps;
      for (const auto& b : blocks) reps.push_back(canonical_base_block(b, d.v()));
      std::sort(reps.begin(), reps.end());
      reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
      std::vector<Block> orig;
      for (const auto& o : d.orbits()) orig.push_back(o.base);
      std::sort(orig.begin(), orig.end());
      CHECK(reps == orig);
    }
  }
}
