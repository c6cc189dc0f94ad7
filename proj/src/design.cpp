#include "novak/design.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "novak/errors.hpp"

namespace novak {

Orbit make_orbit(const Block& block, Modulus v) {
  return Orbit{canonical_base_block(block, v), orbit_length(block, v)};
}

CyclicDesign::CyclicDesign(Modulus v, std::uint32_t k, std::uint32_t lambda,
                           std::vector<Orbit> orbits)
    : v_(v), k_(k), lambda_(lambda), orbits_(std::move(orbits)) {
  if (k_ < 2) throw DomainError("design block size must be at least 2");
  if (v_.value() < k_) throw DomainError("design needs v >= k");
  if (lambda_ < 1) throw DomainError("design index lambda must be at least 1");
  for (auto& o : orbits_) {
    if (o.base.size() != k_)
      throw DomainError("base block " + format_block(o.base) + " is not a " +
                        std::to_string(k_) + "-subset");
    if (!o.base.empty() && o.base[o.base.size() - 1] >= v_.value())
      throw InputError("base block " + format_block(o.base) + " outside Z_" +
                       std::to_string(v_.value()));
    o.base = canonical_base_block(o.base, v_);
  }
}

CyclicDesign CyclicDesign::from_base_blocks(Modulus v, std::uint32_t k,
                                            std::uint32_t lambda,
                                            const std::vector<Block>& bases) {
  std::vector<Orbit> orbits;
  orbits.reserve(bases.size());
  for (const auto& b : bases) orbits.push_back(make_orbit(b, v));
  return CyclicDesign(v, k, lambda, std::move(orbits));
}

Block CyclicDesign::block(std::size_t orbit, Residue t) const {
  return translate(orbits_.at(orbit).base, t, v_);
}

bool CyclicDesign::all_full() const noexcept {
  return std::all_of(orbits_.begin(), orbits_.end(),
                     [&](const Orbit& o) { return o.full(v_); });
}

std::vector<Block> develop(const CyclicDesign& design) {
  std::vector<Block> out;
  for (const auto& o : design.orbits())
    for (Residue t = 0; t < o.length; ++t)
      out.push_back(translate(o.base, t, design.v()));
  return out;
}

void check_structure(const CyclicDesign& design) {
  for (std::size_t i = 0; i < design.orbit_count(); ++i) {
    const auto& o = design.orbits()[i];
    const auto actual = orbit_length(o.base, design.v());
    if (o.length != actual)
      throw StructuralError("orbit " + std::to_string(i) + " of " +
                            format_block(o.base) + " has length field " +
                            std::to_string(o.length) + " but true length " +
                            std::to_string(actual));
  }
}

namespace {

ValidationResult validate_by_differences(const CyclicDesign& design) {
  // With every orbit full, the number of blocks through {x, x+d} equals the
  // multiplicity of d in the difference multiset of the base blocks.
  DifferenceMultiset dm(design.v());
  for (const auto& o : design.orbits()) dm.add_block(o.base);
  for (Residue d = 1; d < design.v().value(); ++d)
    if (dm[d] != design.lambda()) return {false, {0, d}, dm[d]};
  return {};
}

ValidationResult validate_by_pairs(const CyclicDesign& design) {
  const std::uint64_t v = design.v().value();
  std::vector<std::uint32_t> count(v * (v - 1) / 2, 0);
  // Row-major index of pair x < y.
  auto index = [v](std::uint64_t x, std::uint64_t y) {
    return x * (2 * v - x - 1) / 2 + (y - x - 1);
  };
  for (const auto& o : design.orbits()) {
    for (Residue t = 0; t < o.length; ++t) {
      const Block b = translate(o.base, t, design.v());
      for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j) ++count[index(b[i], b[j])];
    }
  }
  for (std::uint64_t x = 0; x < v; ++x)
    for (std::uint64_t y = x + 1; y < v; ++y) {
      const auto c = count[index(x, y)];
      if (c != design.lambda())
        return {false, {static_cast<Residue>(x), static_cast<Residue>(y)}, c};
    }
  return {};
}

}  // namespace

ValidationResult validate_design(const CyclicDesign& design, CoverageMethod method) {
  check_structure(design);
  switch (method) {
    case CoverageMethod::automatic:
      return design.all_full() ? validate_by_differences(design)
                               : validate_by_pairs(design);
    case CoverageMethod::differences:
      if (!design.all_full())
        throw DomainError("difference counting requires every orbit to be full");
      return validate_by_differences(design);
    case CoverageMethod::pair_count:
      return validate_by_pairs(design);
  }
  return validate_by_pairs(design);
}

std::uint32_t divisor_count(std::uint32_t n) {
  return static_cast<std::uint32_t>(divisors(n).size());
}

ShortOrbitInfo analyze_short_orbit(const Orbit& orbit, Modulus v,
                                   std::size_t orbit_index) {
  const std::uint32_t len = orbit.length;
  if (len == 0 || v.value() % len != 0)
    throw InconsistencyError("orbit length " + std::to_string(len) +
                             " does not divide " + std::to_string(v.value()));
  ShortOrbitInfo info;
  info.orbit_index = orbit_index;
  info.length = len;
  for (Residue x = 0; x < v.value(); x += len) info.stabilizer.push_back(x);

  const Block& base = orbit.base;
  if (!base.contains(0))
    throw InconsistencyError("base block " + format_block(base) + " misses 0");
  // Group base elements by residue mod l; each group must be a full coset.
  std::map<Residue, std::vector<Residue>> by_rep;
  for (Residue x : base) by_rep[x % len].push_back(x);
  for (auto& [rep, members] : by_rep) {
    if (members.size() != info.stabilizer.size())
      throw InconsistencyError("base block " + format_block(base) +
                               " is not a union of cosets of the subgroup of order " +
                               std::to_string(info.stabilizer.size()));
    info.cosets.push_back(std::move(members));
  }
  return info;
}

namespace {

// a <= b * sqrt(c) for nonnegative b, c, exactly.
bool le_times_sqrt(std::int64_t a, std::int64_t b, std::int64_t c) {
  if (a <= 0) return true;
  return static_cast<__int128>(a) * a <= static_cast<__int128>(b) * b * c;
}

}  // namespace

ShortOrbitReport short_orbit_analysis(const CyclicDesign& design) {
  const std::int64_t v = design.v().value();
  const std::int64_t k = design.k();
  const std::int64_t lambda = design.lambda();

  ShortOrbitReport report;
  report.divisor_count = divisor_count(design.k());
  std::map<std::uint32_t, std::uint32_t> per_length;
  std::int64_t total_blocks = 0;

  for (std::size_t i = 0; i < design.orbit_count(); ++i) {
    const auto& o = design.orbits()[i];
    total_blocks += o.length;
    if (o.full(design.v())) {
      ++report.full_count;
      continue;
    }
    ++report.short_count;
    if (k % (v / o.length) != 0)
      throw InconsistencyError("short orbit " + std::to_string(i) + ": v/l = " +
                               std::to_string(v / o.length) + " does not divide k");
    if (++per_length[o.length] > design.lambda())
      throw InconsistencyError("more than lambda short orbits of length " +
                               std::to_string(o.length));
    report.short_orbits.push_back(analyze_short_orbit(o, design.v(), i));
  }

  const std::int64_t h = report.short_count;
  const std::int64_t m = report.full_count;
  const std::int64_t kk = k * (k - 1);
  const std::int64_t target = lambda * (v - 1);

  auto fail = [&](const std::string& what) {
    throw InconsistencyError("short-orbit bound violated: " + what + " (h=" +
                             std::to_string(h) + ", m=" + std::to_string(m) + ")");
  };
  if (total_blocks * kk != lambda * v * (v - 1)) fail("block count identity");
  if (h > lambda * report.divisor_count) fail("h <= lambda*sigma0(k)");
  if (!le_times_sqrt(h, 2 * lambda, k)) fail("h <= 2*lambda*sqrt(k)");
  // Scale the m-bounds by k(k-1) to stay in integers.
  if (!le_times_sqrt(target - m * kk, 2 * lambda * kk, k))
    fail("lambda(v-1)/(k(k-1)) - 2*lambda*sqrt(k) <= m");
  if (m * kk > target) fail("m <= lambda(v-1)/(k(k-1))");
  if ((m + h) * kk < target) fail("lambda(v-1)/(k(k-1)) <= m + h");
  if (!le_times_sqrt((m + h) * kk - target, 2 * lambda * kk, k))
    fail("m + h <= lambda(v-1)/(k(k-1)) + 2*lambda*sqrt(k)");
  return report;
}

}  // namespace novak
