#include "novak/core.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <numeric>

#include "novak/errors.hpp"

namespace novak {

Modulus::Modulus(std::uint32_t v) : v_(v) {
  if (v == 0) throw InputError("modulus must be positive");
}

Block::Block(std::vector<Residue> elements, Modulus v) : elems_(std::move(elements)) {
  std::sort(elems_.begin(), elems_.end());
  if (std::adjacent_find(elems_.begin(), elems_.end()) != elems_.end())
    throw InputError("block " + format_block(*this) + " has repeated elements");
  if (!elems_.empty() && elems_.back() >= v.value())
    throw InputError("block " + format_block(*this) + " has a residue outside Z_" +
                     std::to_string(v.value()));
  build_mask();
}

Block Block::from_sorted(std::vector<Residue> elements) {
  Block b;
  b.elems_ = std::move(elements);
  b.build_mask();
  return b;
}

void Block::build_mask() noexcept {
  mask_.fill(0);
  has_mask_ = elems_.empty() || elems_.back() < kBlockMaskBits;
  if (!has_mask_) return;
  for (Residue x : elems_) mask_[x >> 6] |= std::uint64_t{1} << (x & 63);
}

bool Block::contains(Residue x) const noexcept {
  if (has_mask_) return x < kBlockMaskBits && ((mask_[x >> 6] >> (x & 63)) & 1U);
  return std::binary_search(elems_.begin(), elems_.end(), x);
}

bool Block::intersects(const Block& other) const noexcept {
  if (has_mask_ && other.has_mask_) {
    for (std::size_t w = 0; w < mask_.size(); ++w)
      if (mask_[w] & other.mask_[w]) return true;
    return false;
  }
  auto a = elems_.begin(), b = other.elems_.begin();
  while (a != elems_.end() && b != other.elems_.end()) {
    if (*a == *b) return true;
    if (*a < *b)
      ++a;
    else
      ++b;
  }
  return false;
}

std::size_t PointSet::count() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

void PointSet::clear() noexcept { std::fill(words_.begin(), words_.end(), 0); }

Block translate(const Block& block, Residue t, Modulus v) {
  if (t >= v.value())
    throw InputError("translate " + std::to_string(t) + " outside [0, " +
                     std::to_string(v.value()) + ")");
  std::vector<Residue> out;
  out.reserve(block.size());
  for (Residue b : block) out.push_back(v.add(b, t));
  // Elements that wrapped past v now sit at the front; rotate instead of sort.
  auto wrap = std::find_if(out.begin(), out.end(),
                           [&](Residue x) { return x < t; });
  std::rotate(out.begin(), wrap, out.end());
  return Block::from_sorted(std::move(out));
}

std::uint32_t orbit_length(const Block& block, Modulus v) {
  const auto k = block.size();
  for (std::uint32_t t : divisors(v.value())) {
    if (t == v.value()) break;
    if (k % (v.value() / t) != 0) continue;
    if (translate(block, t, v) == block) return t;
  }
  return v.value();
}

Block canonical_base_block(const Block& block, Modulus v) {
  if (block.empty()) return block;
  // The least translate starts with 0, so it is B - b for some b in B.
  Block best;
  bool first = true;
  for (Residue b : block) {
    Block cand = translate(block, v.neg(b), v);
    if (first || cand < best) {
      best = std::move(cand);
      first = false;
    }
  }
  return best;
}

void DifferenceMultiset::add_block(const Block& block) {
  for (Residue x : block)
    for (Residue y : block)
      if (x != y) ++counts_[v_.sub(x, y)];
}

std::uint64_t DifferenceMultiset::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

DifferenceMultiset difference_multiset(std::span<const Block> family, Modulus v) {
  DifferenceMultiset dm(v);
  for (const auto& b : family) dm.add_block(b);
  return dm;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) noexcept { return std::gcd(a, b); }

std::vector<std::uint32_t> divisors(std::uint32_t n) {
  std::vector<std::uint32_t> small, large;
  for (std::uint32_t d = 1; static_cast<std::uint64_t>(d) * d <= n; ++d) {
    if (n % d) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::string format_block(const Block& block) {
  std::string s = "{";
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(block[i]);
  }
  s += '}';
  return s;
}

Block parse_block(std::string_view text, Modulus v) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError(msg, 0, pos + 1);
  };

  skip_ws();
  if (pos >= text.size() || text[pos] != '{') throw fail("expected '{'");
  ++pos;
  std::vector<Residue> elems;
  skip_ws();
  if (pos < text.size() && text[pos] == '}') {
    ++pos;
  } else {
    for (;;) {
      skip_ws();
      Residue x = 0;
      auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), x);
      if (ec != std::errc{}) throw fail("expected a residue");
      const std::size_t start = pos;
      pos = static_cast<std::size_t>(ptr - text.data());
      if (x >= v.value()) {
        pos = start;
        throw fail("residue " + std::to_string(x) + " outside Z_" +
                   std::to_string(v.value()));
      }
      elems.push_back(x);
      skip_ws();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < text.size() && text[pos] == '}') {
        ++pos;
        break;
      }
      throw fail("expected ',' or '}'");
    }
  }
  skip_ws();
  if (pos != text.size()) throw fail("trailing characters after block");
  std::sort(elems.begin(), elems.end());
  if (std::adjacent_find(elems.begin(), elems.end()) != elems.end())
    throw ParseError("block has repeated elements", 0, 1);
  return Block::from_sorted(std::move(elems));
}

}  // namespace novak
