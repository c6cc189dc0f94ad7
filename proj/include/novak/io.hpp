#pragma once

// Text formats:
//
//   design file           difference-family file
//   -----------           ----------------------
//   v k lambda            v k lambda
//   {0,1,3} 7             {0,1,4}
//   ...                   {0,2,7}
//
// Blank lines and lines starting with '#' are ignored. Parse failures throw
// ParseError with 1-based line and column.

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "novak/design.hpp"
#include "novak/families.hpp"

namespace novak {

CyclicDesign parse_design(std::string_view text);
DifferenceFamily parse_family(std::string_view text);

std::string format_design(const CyclicDesign& design);
std::string format_family(const DifferenceFamily& family);

CyclicDesign read_design_file(const std::string& path);
DifferenceFamily read_family_file(const std::string& path);

/// Writes to `path.tmp` and renames over `path`.
void write_file_atomic(const std::string& path, std::string_view contents);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(std::string_view data);

nlohmann::json to_json(const Block& block);
Block block_from_json(const nlohmann::json& j, Modulus v);

nlohmann::json to_json(const CyclicDesign& design);
CyclicDesign design_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DifferenceFamily& family);
DifferenceFamily family_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ShortOrbitReport& report);

}  // namespace novak
