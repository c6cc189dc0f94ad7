#include "novak/certificate.hpp"

#include <algorithm>
#include <array>

#include "novak/errors.hpp"
#include "novak/io.hpp"

#ifndef NOVAK_VERSION
#define NOVAK_VERSION "unknown"
#endif

namespace novak {

namespace {

constexpr std::array<std::pair<CertificateKind, const char*>, 7> kKindNames{{
    {CertificateKind::design_valid, "design-valid"},
    {CertificateKind::cdf, "cdf"},
    {CertificateKind::ddf, "ddf"},
    {CertificateKind::symmetric_ddf, "symmetric-ddf"},
    {CertificateKind::representatives, "representatives"},
    {CertificateKind::infeasible, "infeasible"},
    {CertificateKind::pipeline, "pipeline"},
}};

bool sorted_intersect(const std::vector<Residue>& a, const std::vector<Residue>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j)
      ++i;
    else
      ++j;
  }
  return false;
}

std::vector<Residue> shifted(const Block& base, Residue t, std::uint32_t v) {
  std::vector<Residue> out;
  for (Residue x : base) out.push_back(static_cast<Residue>((std::uint64_t{x} + t) % v));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Residue> classes_of(const std::vector<Residue>& pts, std::uint32_t v) {
  std::vector<Residue> out;
  for (Residue x : pts) out.push_back(std::min(x, x == 0 ? 0 : v - x));
  std::sort(out.begin(), out.end());
  return out;
}

Certificate base_certificate(CertificateKind kind) {
  Certificate c;
  c.kind = kind;
  c.version = NOVAK_VERSION;
  return c;
}

Certificate design_subject(CertificateKind kind, const CyclicDesign& design) {
  Certificate c = base_certificate(kind);
  c.subject = to_json(design);
  c.subject_hash = subject_hash(design);
  return c;
}

RecheckResult ok(std::string detail = {}) { return {true, std::move(detail)}; }
RecheckResult bad(std::string detail) { return {false, std::move(detail)}; }

ClassList class_from_json(const nlohmann::json& j) {
  ClassList out;
  for (const auto& e : j) out.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<Residue>());
  return out;
}

nlohmann::json class_json(const ClassList& cls) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [orbit, t] : cls) j.push_back({orbit, t});
  return j;
}

// Orbit counts of a class, or an error message.
std::string class_counts(const CyclicDesign& design, const ClassList& cls,
                         std::vector<std::uint32_t>& counts) {
  const std::uint32_t v = design.v().value();
  counts.assign(design.orbit_count(), 0);
  std::vector<char> used(v, 0);
  for (const auto& [orbit, t] : cls) {
    if (orbit >= design.orbit_count()) return "orbit index out of range";
    if (t >= design.orbits()[orbit].length) return "translate outside its orbit";
    for (Residue x : shifted(design.orbits()[orbit].base, t, v)) {
      if (used[x]) return "blocks are not pairwise disjoint";
      used[x] = 1;
    }
    ++counts[orbit];
  }
  return {};
}

}  // namespace

std::string to_string(CertificateKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

CertificateKind certificate_kind_from_string(const std::string& name) {
  for (const auto& [k, n] : kKindNames)
    if (name == n) return k;
  throw InputError("unknown certificate kind '" + name + "'");
}

const char* toolkit_version() noexcept { return NOVAK_VERSION; }

std::string subject_hash(const CyclicDesign& design) { return fnv1a_hex(format_design(design)); }
std::string subject_hash(const DifferenceFamily& family) {
  return fnv1a_hex(format_family(family));
}

nlohmann::json to_json(const Certificate& c) {
  return {{"kind", to_string(c.kind)}, {"version", c.version},
          {"subject_hash", c.subject_hash}, {"subject", c.subject},
          {"payload", c.payload}, {"config", c.config}};
}

Certificate certificate_from_json(const nlohmann::json& j) {
  try {
    Certificate c;
    c.kind = certificate_kind_from_string(j.at("kind").get<std::string>());
    c.version = j.at("version").get<std::string>();
    c.subject_hash = j.at("subject_hash").get<std::string>();
    c.subject = j.at("subject");
    c.payload = j.at("payload");
    c.config = j.value("config", nlohmann::json::object());
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed certificate: ") + e.what());
  }
}

bool verify_representatives(const CyclicDesign& design, const std::vector<Residue>& translates,
                            bool symmetric) {
  if (translates.size() != design.orbit_count()) return false;
  std::vector<Block> reps;
  for (std::size_t i = 0; i < translates.size(); ++i) {
    if (translates[i] >= design.orbits()[i].length) return false;
    reps.push_back(translate(design.orbits()[i].base, translates[i], design.v()));
  }
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = i + 1; j < reps.size(); ++j)
      if (reps[i].intersects(reps[j])) return false;
  if (!symmetric) return true;
  const DifferenceFamily f{design.v(), design.k(), design.lambda(), reps};
  try {
    return is_symmetric_ddf(f).pass();
  } catch (const DomainError&) {
    return false;
  }
}

InfeasibilityRecheck recheck_infeasible(const CyclicDesign& design, bool symmetric,
                                        std::uint64_t max_nodes) {
  const std::uint32_t v = design.v().value();
  struct Option {
    std::vector<Residue> points, classes;
  };
  std::vector<std::vector<Option>> options(design.orbit_count());
  for (std::size_t i = 0; i < design.orbit_count(); ++i) {
    const auto& o = design.orbits()[i];
    for (Residue t = 0; t < o.length; ++t) {
      Option opt{shifted(o.base, t, v), {}};
      if (symmetric) {
        if (opt.points.front() == 0) continue;
        opt.classes = classes_of(opt.points, v);
        if (std::adjacent_find(opt.classes.begin(), opt.classes.end()) != opt.classes.end())
          continue;
      }
      options[i].push_back(std::move(opt));
    }
  }

  InfeasibilityRecheck r;
  std::vector<const Option*> chosen;
  bool found = false, capped = false;
  auto dfs = [&](auto&& self, std::size_t depth) -> void {
    if (depth == options.size()) {
      found = true;
      return;
    }
    for (const auto& opt : options[depth]) {
      bool clash = false;
      for (const Option* c : chosen)
        if (sorted_intersect(c->points, opt.points) ||
            (symmetric && sorted_intersect(c->classes, opt.classes))) {
          clash = true;
          break;
        }
      if (clash) continue;
      if (++r.nodes > max_nodes) {
        capped = true;
        return;
      }
      chosen.push_back(&opt);
      self(self, depth + 1);
      chosen.pop_back();
      if (found || capped) return;
    }
  };
  dfs(dfs, 0);
  r.complete = !capped;
  r.infeasible = !found && !capped;
  return r;
}

Certificate make_design_certificate(const CyclicDesign& design) {
  const auto res = validate_design(design);
  if (!res) throw PreconditionError("design does not validate");
  Certificate c = design_subject(CertificateKind::design_valid, design);
  c.payload = {{"method", design.all_full() ? "differences" : "pair_count"}};
  return c;
}

Certificate make_family_certificate(const DifferenceFamily& family, CertificateKind kind) {
  bool pass = false;
  switch (kind) {
    case CertificateKind::cdf:
      pass = is_cdf(family).pass;
      break;
    case CertificateKind::ddf:
      pass = is_ddf(family).pass();
      break;
    case CertificateKind::symmetric_ddf:
      pass = is_symmetric_ddf(family).pass();
      break;
    default:
      throw InputError("not a family certificate kind");
  }
  if (!pass) throw PreconditionError("family fails the " + to_string(kind) + " predicate");
  Certificate c = base_certificate(kind);
  c.subject = to_json(family);
  c.subject_hash = subject_hash(family);
  c.payload = nlohmann::json::object();
  return c;
}

Certificate make_representatives_certificate(const CyclicDesign& design,
                                             const std::vector<Residue>& translates,
                                             bool symmetric) {
  if (!verify_representatives(design, translates, symmetric))
    throw PreconditionError("representatives do not verify");
  Certificate c = design_subject(CertificateKind::representatives, design);
  c.payload = {{"mode", symmetric ? "symmetric" : "plain"}, {"translates", translates}};
  return c;
}

Certificate make_infeasible_certificate(const CyclicDesign& design, bool symmetric,
                                        std::uint64_t search_nodes) {
  Certificate c = design_subject(CertificateKind::infeasible, design);
  c.payload = {{"mode", symmetric ? "symmetric" : "plain"},
               {"search_nodes", search_nodes},
               {"claim", "no pairwise disjoint system of orbit representatives"}};
  return c;
}

Certificate make_pipeline_certificate(const CyclicDesign& design, const ClassList& start,
                                      const ClassList& repaired, const nlohmann::json& config) {
  Certificate c = design_subject(CertificateKind::pipeline, design);
  const std::uint32_t s = (design.k() - 1) / design.lambda();
  std::vector<std::uint32_t> a, b;
  if (auto e = class_counts(design, start, a); !e.empty()) throw PreconditionError("P': " + e);
  if (auto e = class_counts(design, repaired, b); !e.empty())
    throw PreconditionError("P'': " + e);
  std::int64_t d = 0;
  std::uint64_t tau_start = 0, tau_final = 0;
  for (auto x : a) {
    if (x + 2 <= s) d += s - 1 - x;
    if (x + 1 == s) ++tau_start;
  }
  for (auto x : b)
    if (x + 1 == s) ++tau_final;
  c.payload = {{"start", class_json(start)},
               {"repaired", class_json(repaired)},
               {"d_start", d},
               {"tau_start", tau_start},
               {"tau_final", tau_final},
               {"bound", static_cast<std::int64_t>(design.k() + 1) * d +
                             static_cast<std::int64_t>(tau_start)}};
  c.config = config;
  return c;
}

RecheckResult recheck_certificate(const Certificate& c) {
  try {
    switch (c.kind) {
      case CertificateKind::cdf:
      case CertificateKind::ddf:
      case CertificateKind::symmetric_ddf: {
        const DifferenceFamily f = family_from_json(c.subject);
        if (subject_hash(f) != c.subject_hash) return bad("subject hash mismatch");
        if (c.kind == CertificateKind::cdf) {
          const auto r = is_cdf(f);
          return r.pass ? ok() : bad("residue " + std::to_string(r.residue) + " covered " +
                                     std::to_string(r.observed) + " times");
        }
        if (c.kind == CertificateKind::ddf)
          return is_ddf(f).pass() ? ok() : bad("not a DDF");
        const auto r = is_symmetric_ddf(f);
        return r.pass() ? ok() : bad(r.reason());
      }
      default:
        break;
    }

    const CyclicDesign design = design_from_json(c.subject);
    if (subject_hash(design) != c.subject_hash) return bad("subject hash mismatch");
    switch (c.kind) {
      case CertificateKind::design_valid: {
        const auto r = validate_design(design, CoverageMethod::pair_count);
        if (!r)
          return bad("pair {" + std::to_string(r.witness.first) + "," +
                     std::to_string(r.witness.second) + "} covered " +
                     std::to_string(r.observed) + " times");
        return ok();
      }
      case CertificateKind::representatives: {
        const bool symmetric = c.payload.at("mode").get<std::string>() == "symmetric";
        const auto ts = c.payload.at("translates").get<std::vector<Residue>>();
        return verify_representatives(design, ts, symmetric) ? ok()
                                                              : bad("representatives fail");
      }
      case CertificateKind::infeasible: {
        const bool symmetric = c.payload.at("mode").get<std::string>() == "symmetric";
        const auto r = recheck_infeasible(design, symmetric);
        if (!r.complete) return bad("recheck hit its node cap");
        return r.infeasible ? ok(std::to_string(r.nodes) + " nodes")
                            : bad("a disjoint system exists");
      }
      case CertificateKind::pipeline: {
        if (!validate_design(design, CoverageMethod::pair_count)) return bad("design invalid");
        const std::uint32_t s = (design.k() - 1) / design.lambda();
        const ClassList start = class_from_json(c.payload.at("start"));
        const ClassList repaired = class_from_json(c.payload.at("repaired"));
        std::vector<std::uint32_t> a, b;
        if (auto e = class_counts(design, start, a); !e.empty()) return bad("P': " + e);
        if (auto e = class_counts(design, repaired, b); !e.empty()) return bad("P'': " + e);
        std::int64_t d = 0;
        std::uint64_t tau_start = 0, tau_final = 0;
        for (auto x : a) {
          if (x > s) return bad("P' has more than s blocks in an orbit");
          if (x + 2 <= s) d += s - 1 - x;
          if (x + 1 == s) ++tau_start;
        }
        for (auto x : b) {
          if (x + 1 != s && x != s) return bad("P'' has an orbit outside {s-1, s}");
          if (x + 1 == s) ++tau_final;
        }
        const std::int64_t bound =
            static_cast<std::int64_t>(design.k() + 1) * d + static_cast<std::int64_t>(tau_start);
        if (c.payload.at("d_start").get<std::int64_t>() != d ||
            c.payload.at("tau_start").get<std::uint64_t>() != tau_start ||
            c.payload.at("tau_final").get<std::uint64_t>() != tau_final ||
            c.payload.at("bound").get<std::int64_t>() != bound)
          return bad("recorded quantities disagree with the classes");
        if (static_cast<std::int64_t>(tau_final) > bound) return bad("bound violated");
        return ok("tau " + std::to_string(tau_final) + " <= " + std::to_string(bound));
      }
      default:
        return bad("unhandled kind");
    }
  } catch (const nlohmann::json::exception& e) {
    return bad(std::string("malformed payload: ") + e.what());
  } catch (const std::exception& e) {
    return bad(e.what());
  }
}

}  // namespace novak
