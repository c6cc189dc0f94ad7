#include <doctest.h>

#include <random>

#include "novak/certificate.hpp"
#include "novak/errors.hpp"
#include "novak/generators.hpp"
#include "novak/search.hpp"
#include "support.hpp"

using namespace novak;
using support::block;

namespace {

CyclicDesign design(std::uint32_t v, std::uint32_t k, std::vector<std::vector<Residue>> bs) {
  std::vector<Block> blocks;
  for (auto& b : bs) blocks.emplace_back(b, Modulus(v));
  return CyclicDesign::from_base_blocks(Modulus(v), k, 1, blocks);
}

bool witness_disjoint(const CyclicDesign& d, const RepresentativeSystem& w) {
  std::vector<oracle::Set> picked;
  for (std::size_t i = 0; i < d.orbit_count(); ++i)
    picked.push_back(oracle::shift(support::to_set(d.orbits()[i].base), w.translates[i],
                                   d.v().value()));
  for (std::size_t a = 0; a < picked.size(); ++a)
    for (std::size_t b = a + 1; b < picked.size(); ++b)
      if (!oracle::disjoint(picked[a], picked[b])) return false;
  return true;
}

}  // namespace

TEST_CASE("find_disjoint_representatives") {
  auto fano = design(7, 3, {{0, 1, 3}});
  auto r = find_disjoint_representatives(fano);
  CHECK(r.status == SearchStatus::feasible);

  auto doubled = superimposed_counterexample(3, 2);
  auto x = find_disjoint_representatives(doubled);
  CHECK(x.status == SearchStatus::infeasible);
  CHECK_FALSE(x.witness);
  auto again = find_disjoint_representatives(doubled);
  CHECK(again.stats.nodes == x.stats.nodes);
  CHECK(again.orbit_order == x.orbit_order);

  auto sts13 = design(13, 3, {{0, 1, 4}, {0, 2, 7}});
  auto f = find_disjoint_representatives(sts13);
  REQUIRE(f.status == SearchStatus::feasible);
  CHECK(witness_disjoint(sts13, *f.witness));
  CHECK(verify_representatives(sts13, f.witness->translates));
}

TEST_CASE("search timeouts are never infeasible") {
  auto big = superimposed_counterexample(4, 3);
  auto r = find_disjoint_representatives(big, SearchMode::plain, SearchBudget{3});
  CHECK(r.status == SearchStatus::timeout);
}

TEST_CASE("symmetric mode") {
  auto fano = design(7, 3, {{0, 1, 3}});
  auto r = find_disjoint_representatives(fano, SearchMode::symmetric);
  REQUIRE(r.status == SearchStatus::feasible);
  DifferenceFamily fam{Modulus(7), 3, 1, {translate(fano.orbits()[0].base, r.witness->translates[0], Modulus(7))}};
  CHECK(is_symmetric_ddf(fam).pass());
  CHECK_THROWS_AS(find_disjoint_representatives(collect_cyclic_sts(15, {}).at(0),
                                                SearchMode::symmetric),
                  DomainError);
}

TEST_CASE("search agrees with brute force on small designs") {
  for (std::uint32_t v : {7u, 9u, 13u, 15u, 19u}) {
    for (const auto& d : collect_cyclic_sts(v, {})) {
      auto r = find_disjoint_representatives(d);
      const bool expect = oracle::has_disjoint_translates(support::bases(d), v);
      CHECK((r.status == SearchStatus::feasible) == expect);
      if (r.witness) CHECK(witness_disjoint(d, *r.witness));
    }
  }
  for (auto [k, c] : {std::pair{3u, 2u}, std::pair{3u, 3u}, std::pair{4u, 2u}}) {
    auto d = superimposed_counterexample(k, c);
    CHECK_FALSE(oracle::has_disjoint_translates(support::bases(d), d.v().value()));
    CHECK(find_disjoint_representatives(d).status == SearchStatus::infeasible);
  }
}

TEST_CASE("find_translate_representatives") {
  DifferenceFamily f{Modulus(13), 3, 1, {block({0, 1, 4}, 13), block({0, 2, 7}, 13)}};
  std::vector<Residue> z13(13);
  for (Residue i = 0; i < 13; ++i) z13[i] = i;
  auto r = find_translate_representatives(f, {z13, z13});
  REQUIRE(r.status == SearchStatus::feasible);
  CHECK(!translate(f.base_blocks[0], r.witness->translates[0], f.v)
             .intersects(translate(f.base_blocks[1], r.witness->translates[1], f.v)));

  DifferenceFamily one{Modulus(7), 3, 1, {block({0, 1, 3}, 7)}};
  auto s = find_translate_representatives(one, {{0}});
  REQUIRE(s.status == SearchStatus::feasible);
  CHECK(s.witness->translates == std::vector<Residue>{0});

  std::vector<Residue> z7{0, 1, 2, 3, 4, 5, 6};
  DifferenceFamily two{Modulus(7), 3, 2, {block({0, 1, 3}, 7), block({0, 1, 3}, 7)}};
  CHECK(find_translate_representatives(two, {z7, z7}).status == SearchStatus::infeasible);
}

TEST_CASE("multinomial valuation against Legendre and exact residues") {
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u})
    for (std::uint64_t d = 1; d <= 6; ++d)
      for (std::uint64_t m = 1; m <= 6; ++m) {
        const auto val = multinomial_valuation(d, m, p);
        CHECK(val == oracle::multinomial_valuation(d, m, p));
        CHECK((val == 0) == (oracle::multinomial_mod(d, m, p) != 0));
      }
  CHECK(oracle::multinomial_mod(5, 2, 13) == 5);
}

TEST_CASE("kp_hypothesis_check") {
  KPInstance a;
  a.p = 13;
  a.d = 5;
  a.sets = {block({0, 1, 4}, 13), block({0, 2, 7}, 13)};
  std::vector<Residue> z13(13);
  for (Residue i = 0; i < 13; ++i) z13[i] = i;
  a.translates = {z13, z13};
  auto ra = kp_hypothesis_check(a);
  CHECK(ra.multinomial_nonzero);
  CHECK(ra.translate_size_ok);
  CHECK(ra.diameter_ok);
  CHECK(ra.all);

  KPInstance b;
  b.p = 7;
  b.d = 5;
  b.sets = {block({0, 1, 3}, 7)};
  b.translates = {{0, 1, 2, 3, 4, 5, 6}};
  CHECK(kp_hypothesis_check(b).all);

  KPInstance c = a;
  c.sets.push_back(block({0, 3, 5}, 13));
  c.translates.push_back(z13);
  auto rc = kp_hypothesis_check(c);
  CHECK_FALSE(rc.multinomial_nonzero);
  CHECK_FALSE(rc.all);

  KPInstance np = a;
  np.p = 15;
  CHECK_THROWS_AS(kp_hypothesis_check(np), DomainError);
}

TEST_CASE("prime case driver") {
  auto fano = design(7, 3, {{0, 1, 3}});
  CHECK(prime_case_driver(fano).status == SearchStatus::feasible);
  auto sts13 = design(13, 3, {{0, 1, 4}, {0, 2, 7}});
  auto r = prime_case_driver(sts13);
  CHECK(r.status == SearchStatus::feasible);
  CHECK(r.used_translate_search);
  CHECK(verify_representatives(sts13, r.witness->translates));
  auto pg = design(13, 4, {{0, 1, 3, 9}});
  CHECK(prime_case_driver(pg).status == SearchStatus::feasible);
  CHECK(prime_case_instance(sts13).d == 5);
  CHECK_THROWS_AS(prime_case_driver(collect_cyclic_sts(15, {}).at(0)), DomainError);
}
