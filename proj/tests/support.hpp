#pragma once

#include <vector>

#include "novak/design.hpp"
#include "oracles.hpp"

namespace support {

inline oracle::Set to_set(const novak::Block& b) { return {b.begin(), b.end()}; }

inline std::vector<oracle::Set> to_sets(const std::vector<novak::Block>& bs) {
  std::vector<oracle::Set> out;
  for (const auto& b : bs) out.push_back(to_set(b));
  return out;
}

inline std::vector<oracle::Set> bases(const novak::CyclicDesign& d) {
  std::vector<oracle::Set> out;
  for (const auto& o : d.orbits()) out.push_back(to_set(o.base));
  return out;
}

inline novak::Block block(std::initializer_list<novak::Residue> xs, std::uint32_t v) {
  return novak::Block(xs, novak::Modulus(v));
}

}  // namespace support
