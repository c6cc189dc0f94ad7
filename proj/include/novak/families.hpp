#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "novak/core.hpp"
#include "novak/design.hpp"

namespace novak {

/// An ordered list of base blocks in Z_v with a target index.
struct DifferenceFamily {
  Modulus v{1};
  std::uint32_t k = 0;
  std::uint32_t lambda = 1;
  std::vector<Block> base_blocks;

  /// lambda(v-1)/(k(k-1)), the size of any (v,k,lambda)-CDF. Zero when the
  /// divisibility condition fails.
  std::size_t expected_size() const noexcept;

  friend bool operator==(const DifferenceFamily&, const DifferenceFamily&) = default;
};

/// Throws InputError if a base block is not a k-subset of Z_v.
void check_family_shape(const DifferenceFamily& family);

struct CdfCheck {
  bool pass = true;
  Residue residue = 0;       ///< offending residue on failure
  std::uint32_t observed = 0;

  explicit operator bool() const noexcept { return pass; }
};

/// Every nonzero residue occurs exactly lambda times in the difference
/// multiset. On failure reports the least residue seen fewer than lambda
/// times, or if none, the least seen more often.
CdfCheck is_cdf(const DifferenceFamily& family);

struct DdfCheck {
  enum class Failure { none, not_cdf, overlap };
  Failure failure = Failure::none;
  CdfCheck cdf;
  Residue point = 0;           ///< shared point for overlap
  std::size_t first = 0;       ///< 0-based block indices for overlap
  std::size_t second = 0;

  bool pass() const noexcept { return failure == Failure::none; }
  explicit operator bool() const noexcept { return pass(); }
};

/// A CDF whose base blocks are pairwise disjoint. lambda >= k is rejected
/// with DomainError.
DdfCheck is_ddf(const DifferenceFamily& family);

struct SymmetricCheck {
  enum class Failure { none, contains_zero, complement_pair, not_ddf };
  Failure failure = Failure::none;
  std::size_t block = 0;                 ///< block holding 0
  Residue x = 0;                         ///< complement pair (x, v-x)
  Residue complement = 0;
  DdfCheck ddf;

  bool pass() const noexcept { return failure == Failure::none; }
  explicit operator bool() const noexcept { return pass(); }
  std::string reason() const;
};

/// Defined for k=3, lambda=1, v = 1 (mod 6) only (DomainError otherwise).
/// Checks in order: no block contains 0; no x with both x and v-x among the
/// base-block elements; the family is a DDF.
SymmetricCheck is_symmetric_ddf(const DifferenceFamily& family);

/// One full orbit per base block. Requires gcd(v,k) = 1 (DomainError).
CyclicDesign cdf_design_roundtrip(const DifferenceFamily& family);

}  // namespace novak
