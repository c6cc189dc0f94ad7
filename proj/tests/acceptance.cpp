// Acceptance run: one PASS/FAIL line per criterion, exit 1 on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "novak/certificate.hpp"
#include "novak/errors.hpp"
#include "novak/generators.hpp"
#include "novak/hypergraph.hpp"
#include "novak/parallel_class.hpp"
#include "novak/pipeline.hpp"
#include "novak/search.hpp"
#include "support.hpp"

using namespace novak;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (pass) detail << "first failure: " << why << "; ";
    pass = false;
  }
};

std::vector<CyclicDesign> corpus;

bool disjoint_system(const CyclicDesign& d, const std::vector<Residue>& ts) {
  if (ts.size() != d.orbit_count()) return false;
  std::vector<oracle::Set> picked;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] >= d.orbits()[i].length) return false;
    picked.push_back(oracle::shift(support::to_set(d.orbits()[i].base), ts[i], d.v().value()));
  }
  for (std::size_t a = 0; a < picked.size(); ++a)
    for (std::size_t b = a + 1; b < picked.size(); ++b)
      if (!oracle::disjoint(picked[a], picked[b])) return false;
  return true;
}

void sts_desk(Verdict& out) {
  const auto t0 = Clock::now();
  for (std::uint32_t v : {7u, 13u, 19u, 25u, 31u, 37u}) {
    EnumerationSummary summary;
    const auto designs = collect_cyclic_sts(v, {}, &summary);
    if (!summary.exhaustive()) out.fail("enumeration capped at v=" + std::to_string(v));
    if (v <= 19 && designs.size() != oracle::sts_census(v))
      out.fail("census mismatch at v=" + std::to_string(v));
    std::size_t feasible = 0;
    for (const auto& d : designs) {
      const auto r = find_disjoint_representatives(d);
      if (r.status == SearchStatus::feasible && verify_representatives(d, r.witness->translates) &&
          disjoint_system(d, r.witness->translates))
        ++feasible;
      if (v <= 25) corpus.push_back(d);
    }
    if (feasible != designs.size()) out.fail("non-feasible design at v=" + std::to_string(v));
    out.detail << "v=" << v << ":" << feasible << "/" << designs.size() << " ";
  }
  const double secs = seconds_since(t0);
  if (secs > 1800) out.fail("over 30 minutes");
  out.detail << "census v<=19 matches brute force; " << secs << " s";
}

void prime_suite(Verdict& out) {
  const auto t0 = Clock::now();
  std::size_t designs = 0, feasible = 0, translate = 0, cases = 0;
  for (std::uint32_t k : {3u, 4u, 5u}) {
    for (std::uint32_t v = k + 1; v <= 199; ++v) {
      if (!is_prime(v) || (v - 1) % (k * (k - 1)) != 0) continue;
      ++cases;
      EnumerationBudget budget;
      budget.max_solutions = 50;
      budget.max_nodes = 10'000'000;
      for (const auto& f : collect_cdfs(Modulus(v), k, 1, budget)) {
        const auto d = cdf_design_roundtrip(f);
        ++designs;
        const auto r = prime_case_driver(d, SearchBudget{20'000'000});
        translate += r.used_translate_search;
        if (r.status == SearchStatus::feasible && disjoint_system(d, r.witness->translates))
          ++feasible;
        else
          out.fail("(" + std::to_string(v) + "," + std::to_string(k) + ",1) " +
                   to_string(r.status));
        if (v <= 61) corpus.push_back(d);
      }
    }
  }
  out.detail << cases << " (v,k) cases, " << feasible << "/" << designs
             << " designs FEASIBLE, translate search used on " << translate << "; "
             << seconds_since(t0) << " s";
}

void counterexamples(Verdict& out) {
  std::vector<std::pair<std::string, DifferenceFamily>> subjects{
      {"Fano", DifferenceFamily{Modulus(7), 3, 1, {Block({0, 1, 3}, Modulus(7))}}},
      {"{0,1,3,9}/Z13", DifferenceFamily{Modulus(13), 4, 1, {Block({0, 1, 3, 9}, Modulus(13))}}}};
  for (const auto& [name, f] : subjects) {
    const auto t0 = Clock::now();
    const auto d = superimpose(f, 2);
    corpus.push_back(d);
    const bool valid = validate_design(d, CoverageMethod::pair_count).pass &&
                       oracle::covers_pairs(oracle::develop(support::bases(d), d.v().value()),
                                            d.v().value(), 2);
    const auto r = find_disjoint_representatives(d);
    const auto cert = make_infeasible_certificate(d, false, r.stats.nodes);
    const auto back = certificate_from_json(nlohmann::json::parse(to_json(cert).dump()));
    const bool rechecked = recheck_certificate(back).ok;
    const bool brute = !oracle::has_disjoint_translates(support::bases(d), d.v().value());
    const double secs = seconds_since(t0);
    if (!valid) out.fail(name + " x2 does not validate");
    if (r.status != SearchStatus::infeasible) out.fail(name + " x2 not INFEASIBLE");
    if (!rechecked || !brute) out.fail(name + " x2 certificate not confirmed");
    if (secs >= 1.0) out.fail(name + " x2 took " + std::to_string(secs) + " s");
    out.detail << name << " x2: valid, INFEASIBLE in " << r.stats.nodes
               << " nodes, certificate rechecked, " << secs << " s; ";
  }
}

// sigma_0 and the bounds recomputed from the orbit lengths alone.
bool short_orbit_bounds(const CyclicDesign& d, std::uint32_t& h_out, std::uint32_t& m_out) {
  const std::int64_t v = d.v().value(), k = d.k(), lambda = d.lambda();
  std::int64_t h = 0, m = 0;
  std::vector<std::int64_t> per_length(v + 1, 0);
  for (const auto& o : d.orbits()) {
    const std::int64_t l = oracle::period(support::to_set(o.base), d.v().value());
    if (l == v) {
      ++m;
    } else {
      ++h;
      if (k % (v / l) != 0) return false;
      if (++per_length[l] > lambda) return false;
    }
  }
  std::int64_t sigma = 0;
  for (std::int64_t x = 1; x <= k; ++x) sigma += k % x == 0;
  const std::int64_t kk = k * (k - 1), num = lambda * (v - 1);
  const bool ok = h <= lambda * sigma && h * h <= 4 * lambda * lambda * k && m * kk <= num &&
                  num <= (m + h) * kk &&
                  (num - m * kk) * (num - m * kk) <= 4 * lambda * lambda * k * kk * kk;
  h_out = static_cast<std::uint32_t>(h);
  m_out = static_cast<std::uint32_t>(m);
  return ok;
}

void short_orbits(Verdict& out) {
  for (std::uint32_t v : {9u, 15u, 21u, 27u, 33u})
    for (const auto& d : collect_cyclic_sts(v, EnumerationBudget{200})) corpus.push_back(d);
  for (auto [v, lambda] : {std::pair{10u, 2u}, std::pair{16u, 2u}, std::pair{19u, 3u}})
    for (const auto& f : collect_cdfs(Modulus(v), 3, lambda, EnumerationBudget{50}))
      corpus.push_back(cdf_design_roundtrip(f));
  for (std::uint32_t c = 2; c <= 4; ++c) corpus.push_back(superimposed_counterexample(3, c));
  std::size_t with_short = 0;
  for (const auto& d : corpus) {
    std::uint32_t h = 0, m = 0;
    const bool ours = short_orbit_bounds(d, h, m);
    try {
      const auto r = short_orbit_analysis(d);
      if (!ours || r.short_count != h || r.full_count != m)
        out.fail("report disagrees at v=" + std::to_string(d.v().value()));
    } catch (const InconsistencyError& e) {
      out.fail(e.what());
    }
    with_short += h > 0;
  }
  out.detail << corpus.size() << " designs, " << with_short << " with short orbits";
}

struct ClassStats {
  std::int64_t d = 0;
  std::uint64_t tau = 0;
  bool disjoint = true;
};

ClassStats class_stats(const CyclicDesign& d, const ClassList& blocks) {
  ClassStats out;
  const std::uint32_t s = (d.k() - 1) / d.lambda();
  std::vector<std::uint32_t> per(d.orbit_count(), 0);
  std::vector<char> used(d.v().value(), 0);
  for (const auto& [i, t] : blocks) {
    ++per[i];
    for (auto x : oracle::shift(support::to_set(d.orbits()[i].base), t, d.v().value())) {
      if (used[x]) out.disjoint = false;
      used[x] = 1;
    }
  }
  for (auto c : per) {
    if (c + 2 <= s) out.d += s - 1 - c;
    if (c == s - 1) ++out.tau;
  }
  return out;
}

ClassList listing(const PartialParallelClass& p) {
  ClassList out;
  for (const auto& b : p.blocks()) out.emplace_back(b.orbit, b.translate);
  return out;
}

void pipeline_runs(Verdict& out) {
  const auto t0 = Clock::now();
  std::size_t runs = 0, strict = 0, nonempty_r = 0;
  double worst_ratio = 0;
  for (auto [v, count] : {std::pair{601u, 34}, std::pair{1201u, 33}, std::pair{3001u, 33}}) {
    const auto design = cdf_design_roundtrip(construct_sts_cdf(v, 1));
    for (int i = 0; i < count; ++i) {
      PipelineParams params;
      params.seed = 1000 + runs;
      params.on_precondition_failure = PreconditionPolicy::continue_;
      const auto res = full_pipeline(design, params);
      const auto& r = res.report;
      ++runs;
      const std::string tag = "v=" + std::to_string(v) + " seed=" + std::to_string(params.seed);
      if (!r.completed || !res.cls || !res.start) {
        out.fail(tag + " stopped at " + r.failed_stage);
        continue;
      }
      strict += r.precondition_met;
      nonempty_r += !r.r_orbits.empty();
      const auto start = class_stats(design, listing(*res.start));
      const auto end = class_stats(design, listing(*res.cls));
      if (!start.disjoint || !end.disjoint) out.fail(tag + " class not disjoint");
      if (start.d != r.d_start || start.tau != r.tau_start || end.tau != r.tau_final || end.d != 0)
        out.fail(tag + " reported d/tau differ from recount");
      if (static_cast<std::int64_t>(end.tau) > (design.k() + 1) * start.d +
                                                    static_cast<std::int64_t>(start.tau))
        out.fail(tag + " bound violated");
      std::int64_t expect = start.d;
      for (const auto& s : r.steps) {
        if (s.potential_before != expect || s.potential_after != expect - 1)
          out.fail(tag + " step did not lower d by one");
        expect = s.potential_after;
      }
      if (r.steps.size() != static_cast<std::size_t>(start.d)) out.fail(tag + " step count");
      const double ratio = static_cast<double>(end.tau) / static_cast<double>(r.t);
      if (!std::isfinite(ratio) || !std::isfinite(r.tau_ratio)) out.fail(tag + " ratio");
      worst_ratio = std::max(worst_ratio, ratio);
      const auto cert = make_pipeline_certificate(design, listing(*res.start), listing(*res.cls),
                                                  nlohmann::json::object());
      if (!recheck_certificate(cert).ok) out.fail(tag + " certificate recheck");
    }
  }
  out.detail << runs << " runs; strict repair precondition held in " << strict
             << ", R nonempty in " << nonempty_r << "; max tau/t " << worst_ratio << "; "
             << seconds_since(t0) << " s";
}

void kp_instances(Verdict& out) {
  std::mt19937_64 rng(2024);
  std::vector<std::uint32_t> primes;
  for (std::uint32_t p = 2; p <= 97; ++p)
    if (is_prime(p)) primes.push_back(p);
  std::size_t accepted = 0, tried = 0, feasible = 0;
  while (accepted < 500 && tried < 200000) {
    ++tried;
    const std::uint32_t p = primes[rng() % primes.size()];
    const std::uint32_t d = 1 + rng() % 6;
    if (d >= p) continue;
    const std::uint32_t max_m = (p - 1) / d + 1;
    if (max_m < 1) continue;
    const std::uint32_t m = 1 + rng() % std::min<std::uint32_t>(max_m, 12);
    KPInstance inst;
    inst.p = p;
    inst.d = d;
    std::vector<oracle::Set> xs;
    for (std::uint32_t i = 0; i < m; ++i) {
      const std::uint32_t width = std::min<std::uint32_t>(d, p);
      const std::uint32_t base = rng() % p;
      oracle::Set x;
      for (std::uint32_t j = 0; j < width; ++j)
        if (rng() % 2 || j == 0) x.push_back((base + j) % p);
      std::sort(x.begin(), x.end());
      xs.push_back(x);
      inst.sets.push_back(Block(std::vector<Residue>(x.begin(), x.end()), Modulus(p)));
      const std::uint32_t lo = (m - 1) * d + 1;
      const std::uint32_t size = std::min<std::uint32_t>(p, lo + rng() % 4);
      std::vector<Residue> all(p);
      for (Residue r = 0; r < p; ++r) all[r] = r;
      std::shuffle(all.begin(), all.end(), rng);
      all.resize(size);
      std::sort(all.begin(), all.end());
      inst.translates.push_back(all);
    }
    const auto rep = kp_hypothesis_check(inst);
    bool diam = true;
    for (std::uint32_t i = 0; i < m; ++i)
      for (std::uint32_t j = i + 1; j < m; ++j) {
        std::vector<char> seen(p, 0);
        std::uint32_t n = 0;
        for (auto a : xs[i])
          for (auto b : xs[j]) n += !seen[(a + p - b) % p]++;
        diam = diam && n <= 2 * d;
      }
    bool sizes = true;
    for (const auto& t : inst.translates) sizes = sizes && t.size() >= (m - 1) * d + 1;
    const bool multi = oracle::multinomial_valuation(d, m, p) == 0;
    if (rep.all != (diam && sizes && multi)) out.fail("hypothesis check disagrees with recount");
    if (!rep.all) continue;
    ++accepted;
    const auto r = find_translate_representatives(inst.sets, Modulus(p), inst.translates,
                                                  SearchBudget{50'000'000});
    if (r.status != SearchStatus::feasible) {
      out.fail("p=" + std::to_string(p) + " m=" + std::to_string(m) + " " + to_string(r.status));
      continue;
    }
    bool ok = true;
    std::vector<oracle::Set> moved;
    for (std::uint32_t i = 0; i < m; ++i) {
      const auto& t = inst.translates[i];
      ok = ok && std::binary_search(t.begin(), t.end(), r.witness->translates[i]);
      moved.push_back(oracle::shift(xs[i], r.witness->translates[i], p));
    }
    for (std::uint32_t i = 0; i < m; ++i)
      for (std::uint32_t j = i + 1; j < m; ++j) ok = ok && oracle::disjoint(moved[i], moved[j]);
    if (ok) ++feasible;
    else out.fail("witness fails recheck");
  }
  if (accepted < 500) out.fail("only " + std::to_string(accepted) + " instances generated");
  out.detail << feasible << "/" << accepted << " instances FEASIBLE (" << tried << " drawn)";
}

void cdf_equivalence(Verdict& out) {
  std::mt19937_64 rng(77);
  struct Pool {
    std::uint32_t v, k, lambda;
  };
  std::vector<DifferenceFamily> pool;
  for (Pool p : {Pool{7, 3, 1}, Pool{13, 3, 1}, Pool{19, 3, 1}, Pool{25, 3, 1}, Pool{13, 4, 1},
                 Pool{21, 5, 1}, Pool{16, 3, 2}, Pool{10, 3, 2}, Pool{37, 4, 1}, Pool{41, 5, 1}})
    for (auto& f : collect_cdfs(Modulus(p.v), p.k, p.lambda, EnumerationBudget{30}))
      pool.push_back(f);
  std::size_t positive = 0, agree = 0;
  for (int n = 0; n < 1000; ++n) {
    DifferenceFamily f;
    const int kind = rng() % 3;
    if (kind == 0) {
      f = pool[rng() % pool.size()];
      for (auto& b : f.base_blocks) b = translate(b, rng() % f.v.value(), f.v);
    } else if (kind == 1) {
      f = pool[rng() % pool.size()];
      auto& b = f.base_blocks[rng() % f.base_blocks.size()];
      std::vector<Residue> xs(b.begin(), b.end());
      Residue y;
      do y = rng() % f.v.value();
      while (std::find(xs.begin(), xs.end(), y) != xs.end());
      xs[rng() % xs.size()] = y;
      b = Block(xs, f.v);
    } else {
      std::uint32_t v, k;
      do {
        k = 3 + rng() % 3;
        v = k + 1 + rng() % (60 - k);
      } while (gcd(v, k) != 1);
      f.v = Modulus(v);
      f.k = k;
      f.lambda = 1 + rng() % 2;
      const std::size_t size = 1 + rng() % 4;
      for (std::size_t i = 0; i < size; ++i) {
        std::vector<Residue> all(v);
        for (Residue r = 0; r < v; ++r) all[r] = r;
        std::shuffle(all.begin(), all.end(), rng);
        f.base_blocks.emplace_back(std::vector<Residue>(all.begin(), all.begin() + k), f.v);
      }
    }
    const bool cdf = is_cdf(f).pass;
    const auto design = cdf_design_roundtrip(f);
    const bool valid = validate_design(design, CoverageMethod::pair_count).pass;
    const bool brute = oracle::covers_pairs(support::to_sets(develop(design)), f.v.value(), f.lambda);
    positive += cdf;
    if (cdf == valid && valid == brute) ++agree;
    else out.fail("disagreement at v=" + std::to_string(f.v.value()));
  }
  out.detail << "(a) " << agree << "/1000 agree, " << positive << " CDFs; ";
}

void potential_mutations(Verdict& out) {
  const auto f = collect_cdfs(Modulus(41), 5, 1, EnumerationBudget{1}).at(0);
  const auto d = cdf_design_roundtrip(f);
  PartialParallelClass p(d);
  std::mt19937_64 rng(99);
  std::size_t mutations = 0, mismatches = 0;
  while (mutations < 10000) {
    const auto blocks = p.blocks();
    if (!blocks.empty() && rng() % 3 == 0) {
      const auto& b = blocks[rng() % blocks.size()];
      p.erase(b.orbit, b.translate);
    } else {
      const std::size_t i = rng() % d.orbit_count();
      const Residue t = rng() % 41;
      if (!p.fits(d.block(i, t))) continue;
      p.insert(i, t);
    }
    ++mutations;
    const auto ref = class_stats(d, listing(p));
    if (p.potential() != p.recompute_potential() || p.potential() != ref.d) ++mismatches;
  }
  if (mismatches) out.fail(std::to_string(mismatches) + " potential mismatches");
  out.detail << "(b) " << mutations << " mutations, " << mismatches << " mismatches; ";
}

void nibble_runs(Verdict& out) {
  std::size_t proper = 0, retries = 0;
  for (int run = 0; run < 100; ++run) {
    const std::uint32_t v = 31 + 6 * (run % 6);
    const auto d = cdf_design_roundtrip(construct_sts_cdf(v, 1 + run / 6));
    const auto aux = build_auxiliary_hypergraph(d);
    const auto delta = aux.graph.max_degree();
    const auto trivial = (d.k() + 1) * (delta - 1) + 1;
    const NibbleParams params{0.05 + 0.01 * (run % 10), 400};
    std::uint32_t colours = 2 * delta;
    auto c = nibble_edge_colouring(aux.graph, colours, run, params);
    while (!c && colours < trivial) {
      ++retries;
      colours = std::min(2 * colours, trivial);
      c = nibble_edge_colouring(aux.graph, colours, run, params);
    }
    if (!c) {
      out.fail("run " + std::to_string(run) + " left an edge uncoloured");
      continue;
    }
    std::vector<oracle::Set> edges;
    for (std::size_t e = 0; e < aux.graph.edge_count(); ++e) {
      auto s = aux.graph.edge(e);
      edges.emplace_back(s.begin(), s.end());
    }
    if (is_proper_colouring(aux.graph, *c) && oracle::proper(edges, c->colour_of)) ++proper;
    else out.fail("run " + std::to_string(run) + " not proper");
  }
  out.detail << "(c) " << proper << "/100 colourings proper, " << retries
             << " colour-budget doublings";
}

void sts13_hypergraph(Verdict& out) {
  const auto d = CyclicDesign::from_base_blocks(
      Modulus(13), 3, 1, {Block({0, 1, 4}, Modulus(13)), Block({0, 2, 7}, Modulus(13))});
  const auto aux = build_auxiliary_hypergraph(d);
  std::vector<oracle::Set> edges;
  for (std::size_t e = 0; e < aux.graph.edge_count(); ++e) {
    auto s = aux.graph.edge(e);
    edges.emplace_back(s.begin(), s.end());
  }
  const auto ref = oracle::degrees(edges, aux.graph.vertex_count());
  if (edges.size() != 52 || aux.graph.edge_count() != 52) out.fail("edge count");
  for (std::uint32_t x = 0; x < 13; ++x)
    if (ref.degree[x] != 12 || aux.v_degree != 12) out.fail("V degree");
  for (std::uint32_t x = 13; x < aux.graph.vertex_count(); ++x)
    if (ref.degree[x] != 13 || aux.w_degree != 13) out.fail("W degree");
  std::uint32_t ww = 0;
  for (const auto& [pair, c] : ref.codegree)
    if (pair.first >= 13) ww = std::max(ww, c);
  if (ww != 0 || aux.max_w_codegree != 0) out.fail("W codegree");
  out.detail << edges.size() << " edges, V-degree 12, W-degree 13, W-pair codegree " << ww
             << ", matching brute force";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Verdict&)> run;
  };
  const std::vector<Criterion> criteria{
      {"cyclic-sts-desk", sts_desk},
      {"prime-order-suite", prime_suite},
      {"superimposed-counterexamples", counterexamples},
      {"short-orbit-bounds", short_orbits},
      {"pipeline-repair-bound", pipeline_runs},
      {"karasev-petrov-instances", kp_instances},
      {"oracle-equivalences",
       [](Verdict& v) {
         cdf_equivalence(v);
         potential_mutations(v);
         nibble_runs(v);
       }},
      {"sts13-auxiliary-hypergraph", sts13_hypergraph},
  };
  bool all = true;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    all = all && v.pass;
    std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", c.name, v.detail.str().c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
