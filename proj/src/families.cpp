#include "novak/families.hpp"

#include "novak/errors.hpp"

namespace novak {

std::size_t DifferenceFamily::expected_size() const noexcept {
  const std::uint64_t num = static_cast<std::uint64_t>(lambda) * (v.value() - 1);
  const std::uint64_t den = static_cast<std::uint64_t>(k) * (k - 1);
  if (den == 0 || num % den != 0) return 0;
  return static_cast<std::size_t>(num / den);
}

void check_family_shape(const DifferenceFamily& family) {
  for (std::size_t i = 0; i < family.base_blocks.size(); ++i) {
    const auto& b = family.base_blocks[i];
    if (b.size() != family.k)
      throw InputError("base block " + std::to_string(i) + " " + format_block(b) +
                       " is not a " + std::to_string(family.k) + "-subset");
    if (!b.empty() && b[b.size() - 1] >= family.v.value())
      throw InputError("base block " + std::to_string(i) + " outside Z_" +
                       std::to_string(family.v.value()));
  }
}

CdfCheck is_cdf(const DifferenceFamily& family) {
  check_family_shape(family);
  const auto dm = difference_multiset(family.base_blocks, family.v);
  for (Residue d = 1; d < family.v.value(); ++d)
    if (dm[d] < family.lambda) return {false, d, dm[d]};
  for (Residue d = 1; d < family.v.value(); ++d)
    if (dm[d] > family.lambda) return {false, d, dm[d]};
  return {};
}

DdfCheck is_ddf(const DifferenceFamily& family) {
  if (family.lambda >= family.k)
    throw DomainError("disjoint difference families need lambda <= k-1");
  DdfCheck out;
  out.cdf = is_cdf(family);
  if (!out.cdf) {
    out.failure = DdfCheck::Failure::not_cdf;
    return out;
  }
  // Point owner table; the first repeated point names the two blocks.
  std::vector<std::size_t> owner(family.v.value(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < family.base_blocks.size(); ++i) {
    for (Residue x : family.base_blocks[i]) {
      if (owner[x] != static_cast<std::size_t>(-1)) {
        out.failure = DdfCheck::Failure::overlap;
        out.point = x;
        out.first = owner[x];
        out.second = i;
        return out;
      }
      owner[x] = i;
    }
  }
  return out;
}

std::string SymmetricCheck::reason() const {
  switch (failure) {
    case Failure::none:
      return "symmetric DDF";
    case Failure::contains_zero:
      return "base block " + std::to_string(block) + " contains zero";
    case Failure::complement_pair:
      return "both " + std::to_string(x) + " and " + std::to_string(complement) +
             " occur in the base blocks";
    case Failure::not_ddf:
      if (ddf.failure == DdfCheck::Failure::not_cdf)
        return "not a CDF: residue " + std::to_string(ddf.cdf.residue) +
               " occurs " + std::to_string(ddf.cdf.observed) + " times";
      return "base blocks " + std::to_string(ddf.first) + " and " +
             std::to_string(ddf.second) + " share point " + std::to_string(ddf.point);
  }
  return {};
}

SymmetricCheck is_symmetric_ddf(const DifferenceFamily& family) {
  if (family.k != 3 || family.lambda != 1 || family.v.value() % 6 != 1)
    throw DomainError("symmetric DDFs are defined for (v,3,1) with v = 1 (mod 6)");
  check_family_shape(family);

  SymmetricCheck out;
  for (std::size_t i = 0; i < family.base_blocks.size(); ++i) {
    if (family.base_blocks[i].contains(0)) {
      out.failure = SymmetricCheck::Failure::contains_zero;
      out.block = i;
      return out;
    }
  }
  PointSet present(family.v.value());
  for (const auto& b : family.base_blocks) present.insert(b.elements());
  for (Residue x = 1; 2 * x < family.v.value(); ++x) {
    if (present.test(x) && present.test(family.v.neg(x))) {
      out.failure = SymmetricCheck::Failure::complement_pair;
      out.x = x;
      out.complement = family.v.neg(x);
      return out;
    }
  }
  out.ddf = is_ddf(family);
  if (!out.ddf) out.failure = SymmetricCheck::Failure::not_ddf;
  return out;
}

CyclicDesign cdf_design_roundtrip(const DifferenceFamily& family) {
  if (gcd(family.v.value(), family.k) != 1)
    throw DomainError(
        "gcd(v,k) != 1: blocks may have short orbits; build the design "
        "from explicit orbits instead");
  check_family_shape(family);
  std::vector<Orbit> orbits;
  orbits.reserve(family.base_blocks.size());
  for (const auto& b : family.base_blocks)
    orbits.push_back({b, family.v.value()});
  return CyclicDesign(family.v, family.k, family.lambda, std::move(orbits));
}

}  // namespace novak
