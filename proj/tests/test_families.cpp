#include <doctest.h>

#include <random>
#include <set>

#include "novak/errors.hpp"
#include "novak/families.hpp"
#include "novak/generators.hpp"
#include "support.hpp"

using namespace novak;
using support::block;

namespace {

DifferenceFamily fam(std::uint32_t v, std::uint32_t k, std::uint32_t lambda,
                     std::vector<std::vector<Residue>> blocks) {
  DifferenceFamily f;
  f.v = Modulus(v);
  f.k = k;
  f.lambda = lambda;
  for (auto& b : blocks) f.base_blocks.emplace_back(b, f.v);
  return f;
}

std::set<std::vector<oracle::Set>> keys(const std::vector<DifferenceFamily>& fs) {
  std::set<std::vector<oracle::Set>> out;
  for (const auto& f : fs) {
    std::vector<oracle::Set> k;
    for (const auto& b : f.base_blocks)
      k.push_back(oracle::least_translate(support::to_set(b), f.v.value()));
    std::sort(k.begin(), k.end());
    out.insert(k);
  }
  return out;
}

}  // namespace

TEST_CASE("is_cdf") {
  CHECK(is_cdf(fam(7, 3, 1, {{0, 1, 3}})).pass);
  CHECK(is_cdf(fam(13, 3, 1, {{0, 1, 4}, {0, 2, 7}})).pass);
  auto bad = is_cdf(fam(7, 3, 1, {{0, 1, 2}}));
  CHECK_FALSE(bad.pass);
  CHECK(bad.residue == 3);
  CHECK(bad.observed == 0);
}

TEST_CASE("is_ddf") {
  CHECK(is_ddf(fam(13, 3, 1, {{0, 1, 4}, {5, 7, 12}})).pass());
  auto bad = is_ddf(fam(13, 3, 1, {{0, 1, 4}, {0, 2, 7}}));
  CHECK(bad.failure == DdfCheck::Failure::overlap);
  CHECK(bad.point == 0);
  CHECK(bad.first == 0);
  CHECK(bad.second == 1);
  CHECK(is_ddf(fam(7, 3, 1, {{0, 1, 3}})).pass());
}

TEST_CASE("is_symmetric_ddf") {
  CHECK(is_symmetric_ddf(fam(7, 3, 1, {{1, 2, 4}})).pass());
  CHECK(is_symmetric_ddf(fam(7, 3, 1, {{0, 1, 3}})).failure ==
        SymmetricCheck::Failure::contains_zero);
  auto pair = is_symmetric_ddf(fam(7, 3, 1, {{1, 2, 4}, {3, 5, 6}}));
  CHECK(pair.failure == SymmetricCheck::Failure::complement_pair);
  CHECK(pair.x == 1);
  CHECK(pair.complement == 6);
  CHECK_THROWS_AS(is_symmetric_ddf(fam(9, 3, 1, {{1, 2, 4}})), DomainError);
  CHECK_THROWS_AS(is_symmetric_ddf(fam(13, 4, 1, {{1, 2, 4, 10}})), DomainError);
}

TEST_CASE("cdf design roundtrip") {
  auto fano = cdf_design_roundtrip(fam(7, 3, 1, {{0, 1, 3}}));
  CHECK(fano.orbit_count() == 1);
  CHECK(validate_design(fano).pass);
  CHECK_FALSE(validate_design(cdf_design_roundtrip(fam(7, 3, 1, {{0, 1, 2}})),
                              CoverageMethod::pair_count)
                  .pass);
  auto pg = cdf_design_roundtrip(fam(13, 4, 1, {{0, 1, 3, 9}}));
  CHECK(pg.orbit_count() == 1);
  CHECK(validate_design(pg, CoverageMethod::pair_count).pass);
  CHECK_THROWS_AS(cdf_design_roundtrip(fam(9, 3, 1, {{0, 1, 3}})), DomainError);
}

TEST_CASE("translation invariance") {
  std::mt19937_64 rng(3);
  auto fs = collect_cdfs(Modulus(19), 3, 1, {});
  REQUIRE_FALSE(fs.empty());
  for (auto f : fs) {
    CHECK(f.base_blocks.size() == f.expected_size());
    auto g = f;
    for (auto& b : g.base_blocks) b = translate(b, rng() % 19, f.v);
    CHECK(is_cdf(g).pass);
    const Residue t = rng() % 19;
    auto ddf_before = is_ddf(g).pass();
    for (auto& b : g.base_blocks) b = translate(b, t, f.v);
    CHECK(is_ddf(g).pass() == ddf_before);
  }
}

TEST_CASE("enumeration matches brute force") {
  struct P {
    std::uint32_t v, k, lambda;
  };
  for (P p : {P{7, 3, 1}, P{13, 3, 1}, P{19, 3, 1}, P{13, 4, 1}, P{7, 3, 2}, P{10, 3, 2},
              P{16, 3, 2}}) {
    CAPTURE(p.v);
    CAPTURE(p.lambda);
    const auto want = oracle::cdf_census(p.v, p.k, p.lambda);
    const auto got = collect_cdfs(Modulus(p.v), p.k, p.lambda, {});
    CHECK(got.size() == want.size());
    CHECK(keys(got) == want);
    for (const auto& f : got) CHECK(is_cdf(f).pass);
  }
}

TEST_CASE("parallel enumeration equals serial") {
  for (auto [v, k] : {std::pair{19u, 3u}, std::pair{25u, 3u}, std::pair{37u, 4u}}) {
    std::vector<DifferenceFamily> a, b;
    enumerate_cdfs(Modulus(v), k, 1, {}, [&](const DifferenceFamily& f) {
      a.push_back(f);
      return true;
    });
    enumerate_cdfs_parallel(Modulus(v), k, 1, {}, [&](const DifferenceFamily& f) {
      b.push_back(f);
      return true;
    });
    CHECK(a == b);
  }
}
