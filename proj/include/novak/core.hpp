#pragma once

// Arithmetic over Z_v, blocks, orbits and difference multisets.

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace novak {

using Residue = std::uint32_t;

/// Order of the cyclic group Z_v.
class Modulus {
 public:
  explicit Modulus(std::uint32_t v);

  std::uint32_t value() const noexcept { return v_; }

  Residue reduce(std::int64_t x) const noexcept {
    auto r = x % static_cast<std::int64_t>(v_);
    return static_cast<Residue>(r < 0 ? r + v_ : r);
  }
  Residue add(Residue a, Residue b) const noexcept {
    auto s = static_cast<std::uint64_t>(a) + b;
    return static_cast<Residue>(s >= v_ ? s - v_ : s);
  }
  Residue sub(Residue a, Residue b) const noexcept {
    return a >= b ? a - b : a + v_ - b;
  }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : v_ - a; }

  friend auto operator<=>(const Modulus&, const Modulus&) = default;

 private:
  std::uint32_t v_;
};

/// Width of the bitset mirror kept for blocks whose largest element fits.
inline constexpr Residue kBlockMaskBits = 128;

/// A set of residues stored as a strictly increasing sequence.
///
/// Blocks whose elements are all below kBlockMaskBits also carry a bitset
/// mirror so that intersection tests are two word ANDs.
class Block {
 public:
  Block() = default;

  /// Sorts `elements`; throws InputError on duplicates or residues >= v.
  Block(std::vector<Residue> elements, Modulus v);
  Block(std::initializer_list<Residue> elements, Modulus v)
      : Block(std::vector<Residue>(elements), v) {}

  /// `elements` must already be strictly increasing.
  static Block from_sorted(std::vector<Residue> elements);

  std::span<const Residue> elements() const noexcept { return elems_; }
  std::size_t size() const noexcept { return elems_.size(); }
  bool empty() const noexcept { return elems_.empty(); }
  Residue operator[](std::size_t i) const noexcept { return elems_[i]; }
  auto begin() const noexcept { return elems_.begin(); }
  auto end() const noexcept { return elems_.end(); }

  bool contains(Residue x) const noexcept;
  bool intersects(const Block& other) const noexcept;

  friend bool operator==(const Block& a, const Block& b) noexcept {
    return a.elems_ == b.elems_;
  }
  friend std::strong_ordering operator<=>(const Block& a,
                                          const Block& b) noexcept {
    return a.elems_ <=> b.elems_;
  }

 private:
  void build_mask() noexcept;

  std::vector<Residue> elems_;
  std::array<std::uint64_t, kBlockMaskBits / 64> mask_{};
  bool has_mask_ = false;
};

/// Dense bitset over [0, v).
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::uint32_t universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}

  std::uint32_t universe() const noexcept { return universe_; }

  bool test(Residue x) const noexcept {
    return (words_[x >> 6] >> (x & 63)) & 1U;
  }
  void set(Residue x) noexcept { words_[x >> 6] |= std::uint64_t{1} << (x & 63); }
  void reset(Residue x) noexcept {
    words_[x >> 6] &= ~(std::uint64_t{1} << (x & 63));
  }

  bool intersects(std::span<const Residue> xs) const noexcept {
    for (Residue x : xs)
      if (test(x)) return true;
    return false;
  }
  void insert(std::span<const Residue> xs) noexcept {
    for (Residue x : xs) set(x);
  }
  void erase(std::span<const Residue> xs) noexcept {
    for (Residue x : xs) reset(x);
  }

  std::size_t count() const noexcept;
  void clear() noexcept;

 private:
  std::uint32_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

/// {b + t : b in B}, re-sorted. Throws InputError when t >= v.
Block translate(const Block& block, Residue t, Modulus v);

/// Least t > 0 with B + t = B. Divides v.
std::uint32_t orbit_length(const Block& block, Modulus v);

/// Lexicographically least translate of `block`.
Block canonical_base_block(const Block& block, Modulus v);

/// Multiplicities of nonzero residues in the difference multiset of a family.
class DifferenceMultiset {
 public:
  explicit DifferenceMultiset(Modulus v) : v_(v), counts_(v.value(), 0) {}

  Modulus modulus() const noexcept { return v_; }
  std::uint32_t operator[](Residue d) const noexcept { return counts_[d]; }
  std::span<const std::uint32_t> counts() const noexcept { return counts_; }

  void add_block(const Block& block);
  std::uint64_t total() const noexcept;

  friend bool operator==(const DifferenceMultiset&,
                         const DifferenceMultiset&) = default;

 private:
  Modulus v_;
  std::vector<std::uint32_t> counts_;  // index 0 is always zero
};

DifferenceMultiset difference_multiset(std::span<const Block> family,
                                       Modulus v);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) noexcept;
std::vector<std::uint32_t> divisors(std::uint32_t n);
bool is_prime(std::uint64_t n) noexcept;

/// `{0,1,3}`
std::string format_block(const Block& block);

/// Parses `{a,b,...}` (whitespace tolerated). Throws ParseError carrying
/// the 1-based column within `text`; the line is left 0 for callers to fill.
Block parse_block(std::string_view text, Modulus v);

}  // namespace novak
