#include "novak/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "novak/errors.hpp"

namespace novak {

namespace {

struct Header {
  std::uint32_t v = 0, k = 0, lambda = 0;
};

struct Line {
  std::size_t number;
  std::string_view text;
};

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0, start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string_view::npos && line[first] != '#') lines.push_back({number, line});
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

Header parse_header(const Line& line) {
  Header h;
  std::uint32_t* fields[] = {&h.v, &h.k, &h.lambda};
  std::size_t pos = 0;
  for (auto* field : fields) {
    while (pos < line.text.size() && (line.text[pos] == ' ' || line.text[pos] == '\t')) ++pos;
    auto [ptr, ec] =
        std::from_chars(line.text.data() + pos, line.text.data() + line.text.size(), *field);
    if (ec != std::errc{})
      throw ParseError("header must be 'v k lambda'", line.number, pos + 1);
    pos = static_cast<std::size_t>(ptr - line.text.data());
  }
  while (pos < line.text.size() && (line.text[pos] == ' ' || line.text[pos] == '\t')) ++pos;
  if (pos != line.text.size())
    throw ParseError("unexpected text after header", line.number, pos + 1);
  if (h.v == 0) throw ParseError("v must be positive", line.number, 1);
  return h;
}

Block parse_block_at(const Line& line, std::string_view text, std::size_t offset, Modulus v) {
  try {
    return parse_block(text, v);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line.number, offset + e.column());
  }
}

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

CyclicDesign parse_design(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError("empty design file", 1, 1);
  const Header h = parse_header(lines[0]);
  const Modulus v(h.v);
  std::vector<Orbit> orbits;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto close = line.text.find('}');
    if (close == std::string_view::npos)
      throw ParseError("expected '<block> <length>'", line.number, 1);
    Block b = parse_block_at(line, line.text.substr(0, close + 1), 0, v);
    std::size_t pos = close + 1;
    while (pos < line.text.size() && (line.text[pos] == ' ' || line.text[pos] == '\t')) ++pos;
    std::uint32_t length = 0;
    auto [ptr, ec] =
        std::from_chars(line.text.data() + pos, line.text.data() + line.text.size(), length);
    if (ec != std::errc{}) throw ParseError("expected orbit length", line.number, pos + 1);
    pos = static_cast<std::size_t>(ptr - line.text.data());
    while (pos < line.text.size() && (line.text[pos] == ' ' || line.text[pos] == '\t')) ++pos;
    if (pos != line.text.size())
      throw ParseError("unexpected text after orbit length", line.number, pos + 1);
    orbits.push_back({std::move(b), length});
  }
  try {
    return CyclicDesign(v, h.k, h.lambda, std::move(orbits));
  } catch (const DomainError& e) {
    throw ParseError(e.what(), lines[0].number, 1);
  }
}

DifferenceFamily parse_family(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw ParseError("empty family file", 1, 1);
  const Header h = parse_header(lines[0]);
  DifferenceFamily f{Modulus(h.v), h.k, h.lambda, {}};
  for (std::size_t i = 1; i < lines.size(); ++i) {
    Block b = parse_block_at(lines[i], lines[i].text, 0, f.v);
    if (b.size() != h.k)
      throw ParseError("block is not a " + std::to_string(h.k) + "-subset", lines[i].number, 1);
    f.base_blocks.push_back(std::move(b));
  }
  return f;
}

std::string format_design(const CyclicDesign& design) {
  std::string s = std::to_string(design.v().value()) + ' ' + std::to_string(design.k()) +
                  ' ' + std::to_string(design.lambda()) + '\n';
  for (const auto& o : design.orbits())
    s += format_block(o.base) + ' ' + std::to_string(o.length) + '\n';
  return s;
}

std::string format_family(const DifferenceFamily& family) {
  std::string s = std::to_string(family.v.value()) + ' ' + std::to_string(family.k) + ' ' +
                  std::to_string(family.lambda) + '\n';
  for (const auto& b : family.base_blocks) s += format_block(b) + '\n';
  return s;
}

CyclicDesign read_design_file(const std::string& path) { return parse_design(read_all(path)); }

DifferenceFamily read_family_file(const std::string& path) {
  return parse_family(read_all(path));
}

void write_file_atomic(const std::string& path, std::string_view contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw InputError("short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json to_json(const Block& block) {
  return nlohmann::json(std::vector<Residue>(block.begin(), block.end()));
}

Block block_from_json(const nlohmann::json& j, Modulus v) {
  return Block(j.get<std::vector<Residue>>(), v);
}

nlohmann::json to_json(const CyclicDesign& design) {
  nlohmann::json orbits = nlohmann::json::array();
  for (const auto& o : design.orbits())
    orbits.push_back({{"base", to_json(o.base)}, {"length", o.length}});
  return {{"v", design.v().value()},
          {"k", design.k()},
          {"lambda", design.lambda()},
          {"orbits", orbits}};
}

CyclicDesign design_from_json(const nlohmann::json& j) {
  const Modulus v(j.at("v").get<std::uint32_t>());
  std::vector<Orbit> orbits;
  for (const auto& o : j.at("orbits"))
    orbits.push_back({block_from_json(o.at("base"), v), o.at("length").get<std::uint32_t>()});
  return CyclicDesign(v, j.at("k").get<std::uint32_t>(), j.at("lambda").get<std::uint32_t>(),
                      std::move(orbits));
}

nlohmann::json to_json(const DifferenceFamily& family) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : family.base_blocks) blocks.push_back(to_json(b));
  return {{"v", family.v.value()},
          {"k", family.k},
          {"lambda", family.lambda},
          {"base_blocks", blocks}};
}

DifferenceFamily family_from_json(const nlohmann::json& j) {
  DifferenceFamily f{Modulus(j.at("v").get<std::uint32_t>()), j.at("k").get<std::uint32_t>(),
                     j.at("lambda").get<std::uint32_t>(), {}};
  for (const auto& b : j.at("base_blocks")) f.base_blocks.push_back(block_from_json(b, f.v));
  return f;
}

nlohmann::json to_json(const ShortOrbitReport& report) {
  nlohmann::json shorts = nlohmann::json::array();
  for (const auto& s : report.short_orbits)
    shorts.push_back({{"orbit", s.orbit_index},
                      {"length", s.length},
                      {"stabilizer", s.stabilizer},
                      {"cosets", s.cosets}});
  return {{"h", report.short_count},
          {"m", report.full_count},
          {"divisor_count", report.divisor_count},
          {"short_orbits", shorts}};
}

}  // namespace novak
