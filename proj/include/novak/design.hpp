#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "novak/core.hpp"

namespace novak {

/// A Z_v-orbit of blocks, named by its canonical base block.
struct Orbit {
  Block base;
  std::uint32_t length = 0;

  bool full(Modulus v) const noexcept { return length == v.value(); }
  friend bool operator==(const Orbit&, const Orbit&) = default;
};

/// Orbit built from any block of it: base canonicalized, length computed.
Orbit make_orbit(const Block& block, Modulus v);

/// A cyclic (v,k,lambda)-design as an ordered list of orbits. Repeated
/// orbits are allowed and stay distinct by position.
///
/// Construction checks the domain rules (k >= 2, v >= k, lambda >= 1, every
/// base a k-subset of Z_v) and canonicalizes the base blocks. Orbit lengths
/// are stored as given; validate_design() checks them.
class CyclicDesign {
 public:
  CyclicDesign(Modulus v, std::uint32_t k, std::uint32_t lambda,
               std::vector<Orbit> orbits);

  /// Orbits built from base blocks with lengths computed.
  static CyclicDesign from_base_blocks(Modulus v, std::uint32_t k,
                                       std::uint32_t lambda,
                                       const std::vector<Block>& bases);

  Modulus v() const noexcept { return v_; }
  std::uint32_t k() const noexcept { return k_; }
  std::uint32_t lambda() const noexcept { return lambda_; }
  const std::vector<Orbit>& orbits() const noexcept { return orbits_; }
  std::size_t orbit_count() const noexcept { return orbits_.size(); }

  /// Block `t` of orbit `i`, i.e. base_i + t.
  Block block(std::size_t orbit, Residue t) const;

  bool all_full() const noexcept;

  friend bool operator==(const CyclicDesign&, const CyclicDesign&) = default;

 private:
  Modulus v_;
  std::uint32_t k_;
  std::uint32_t lambda_;
  std::vector<Orbit> orbits_;
};

/// All blocks of the design, orbit by orbit, translate by translate.
std::vector<Block> develop(const CyclicDesign& design);

enum class CoverageMethod {
  automatic,     ///< difference counting when every orbit is full
  differences,   ///< difference counting (valid only when every orbit is full)
  pair_count,    ///< explicit count over all developed blocks
};

struct ValidationResult {
  bool pass = true;
  std::pair<Residue, Residue> witness{};  ///< first bad pair, x < y
  std::uint64_t observed = 0;             ///< its coverage count

  explicit operator bool() const noexcept { return pass; }
};

/// Checks that every pair of distinct points lies in exactly lambda developed
/// blocks. Throws StructuralError first if an orbit length does not match its
/// base block.
ValidationResult validate_design(const CyclicDesign& design,
                                 CoverageMethod method = CoverageMethod::automatic);

/// Throws StructuralError if some orbit length disagrees with its base.
void check_structure(const CyclicDesign& design);

/// Coset decomposition of one short base block B = union of (a + S),
/// S = {0, l, 2l, ...}.
struct ShortOrbitInfo {
  std::size_t orbit_index = 0;
  std::uint32_t length = 0;                   ///< l
  std::vector<Residue> stabilizer;            ///< S
  std::vector<std::vector<Residue>> cosets;   ///< each a + S, sorted
};

struct ShortOrbitReport {
  std::uint32_t short_count = 0;  ///< h
  std::uint32_t full_count = 0;   ///< m
  std::uint32_t divisor_count = 0;
  std::vector<ShortOrbitInfo> short_orbits;
};

/// Coset data for a single orbit. Throws InconsistencyError if the base
/// block is not a union of cosets of its stabilizer.
ShortOrbitInfo analyze_short_orbit(const Orbit& orbit, Modulus v,
                                   std::size_t orbit_index = 0);

/// Short/full orbit census with the structural bounds checked exactly:
///   h <= lambda * sigma0(k),  h <= 2 lambda sqrt(k),
///   lambda(v-1)/(k(k-1)) - 2 lambda sqrt(k) <= m <= lambda(v-1)/(k(k-1)) <= m + h
///   m + h <= lambda(v-1)/(k(k-1)) + 2 lambda sqrt(k),
/// at most lambda short orbits per length, v/l | k, and
/// sum of orbit lengths = lambda v(v-1)/(k(k-1)).
/// Any violation throws InconsistencyError.
ShortOrbitReport short_orbit_analysis(const CyclicDesign& design);

std::uint32_t divisor_count(std::uint32_t n);

}  // namespace novak
