#include "novak/campaign.hpp"

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "novak/certificate.hpp"
#include "novak/errors.hpp"
#include "novak/generators.hpp"
#include "novak/io.hpp"
#include "novak/pipeline.hpp"
#include "novak/search.hpp"

namespace fs = std::filesystem;

namespace novak {

void CampaignSpec::check() const {
  if (vs.empty() && injected.empty()) throw DomainError("campaign has nothing to run");
  if (max_designs && *max_designs == 0) throw DomainError("design cap must be positive");
  if (enumeration_nodes == 0 || search_nodes == 0) throw DomainError("budgets must be positive");
  if (workers < 1) throw DomainError("need at least one worker");
  if (k < 2 || lambda < 1) throw DomainError("bad k or lambda");
}

std::uint64_t CampaignSummary::new_search_nodes() const noexcept {
  std::uint64_t n = 0;
  for (const auto& r : rows) n += r.new_search_nodes;
  return n;
}

std::uint64_t CampaignSummary::new_enumeration_nodes() const noexcept {
  std::uint64_t n = 0;
  for (const auto& r : rows) n += r.new_enumeration_nodes;
  return n;
}

namespace {

std::optional<nlohmann::json> load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

void save_json(const fs::path& path, const nlohmann::json& j) {
  write_file_atomic(path.string(), j.dump(1) + "\n");
}

struct Enumerated {
  std::vector<CyclicDesign> designs;
  bool exhaustive = true;
  std::uint64_t new_nodes = 0;
};

Enumerated enumerate_for(std::uint32_t v, const CampaignSpec& spec, const fs::path& dir) {
  const fs::path file = dir / "designs.json";
  Enumerated out;
  if (auto j = load_json(file)) {
    for (const auto& d : j->at("designs")) out.designs.push_back(design_from_json(d));
    out.exhaustive = j->at("exhaustive").get<bool>();
    return out;
  }
  EnumerationBudget budget;
  budget.max_solutions = spec.max_designs;
  budget.max_nodes = spec.enumeration_nodes;
  EnumerationSummary summary;
  if (spec.k == 3 && spec.lambda == 1) {
    out.designs = collect_cyclic_sts(v, budget, &summary);
  } else if (v > spec.k && gcd(v, spec.k) == 1 &&
             (static_cast<std::uint64_t>(spec.lambda) * (v - 1)) % (spec.k * (spec.k - 1)) == 0) {
    for (const auto& f : collect_cdfs(Modulus(v), spec.k, spec.lambda, budget, &summary))
      out.designs.push_back(cdf_design_roundtrip(f));
  }
  out.exhaustive = summary.exhaustive();
  out.new_nodes = summary.nodes;
  nlohmann::json designs = nlohmann::json::array();
  for (const auto& d : out.designs) designs.push_back(to_json(d));
  save_json(file, {{"v", v},
                   {"k", spec.k},
                   {"lambda", spec.lambda},
                   {"exhaustive", out.exhaustive},
                   {"nodes", summary.nodes},
                   {"designs", designs}});
  return out;
}

bool is_counterexample_regime(const CyclicDesign& d) {
  return d.k() == 3 && d.lambda() == 1 && d.v().value() % 6 == 1;
}

struct Outcome {
  SearchStatus status = SearchStatus::timeout;
  bool reused = false;
  std::uint64_t nodes = 0;
  bool pipeline_completed = false;
};

Outcome process_design(const CyclicDesign& design, const CampaignSpec& spec,
                       const fs::path& dir) {
  Outcome out;
  const std::string hash = subject_hash(design);
  const fs::path cert_file = dir / ("cert-" + hash + ".json");
  if (spec.search) {
    bool have = false;
    if (auto j = load_json(cert_file)) {
      try {
        const Certificate c = certificate_from_json(*j);
        if (c.subject_hash == hash) {
          if (c.kind == CertificateKind::representatives && recheck_certificate(c)) {
            out.status = SearchStatus::feasible;
            have = true;
          } else if (c.kind == CertificateKind::infeasible) {
            out.status = SearchStatus::infeasible;
            have = true;
          }
        }
      } catch (const InputError&) {
      }
    }
    out.reused = have;
    if (!have) {
      SearchBudget budget{spec.search_nodes};
      const auto r = find_disjoint_representatives(design, SearchMode::plain, budget);
      out.status = r.status;
      out.nodes = r.stats.nodes;
      if (r.status == SearchStatus::feasible)
        save_json(cert_file,
                  to_json(make_representatives_certificate(design, r.witness->translates, false)));
      else if (r.status == SearchStatus::infeasible)
        save_json(cert_file, to_json(make_infeasible_certificate(design, false, r.stats.nodes)));
    }
  }
  if (spec.pipeline && design.k() >= 2 * design.lambda() + 1) {
    const fs::path pfile = dir / ("pipeline-" + hash + ".json");
    if (auto j = load_json(pfile)) {
      out.pipeline_completed = j->value("completed", false);
    } else {
      PipelineParams params;
      params.seed = spec.seed;
      params.epsilon = 0.5 / (4.0 * design.k() * design.k());
      params.exec = Execution::serial;
      const auto res = full_pipeline(design, params);
      out.pipeline_completed = res.report.completed;
      save_json(pfile, to_json(res.report));
    }
  }
  return out;
}

CampaignRow run_row(std::string label, const std::vector<CyclicDesign>& designs,
                    const CampaignSpec& spec, const fs::path& dir) {
  CampaignRow row;
  row.label = std::move(label);
  row.designs = designs.size();
  if (!designs.empty()) {
    row.v = designs.front().v().value();
    row.lambda = designs.front().lambda();
  }
  std::vector<Outcome> outcomes(designs.size());
  const auto n = static_cast<std::int64_t>(designs.size());
  std::vector<std::exception_ptr> errors(designs.size());
#pragma omp parallel for schedule(dynamic) num_threads(spec.workers)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      outcomes[i] = process_design(designs[i], spec, dir);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    row.new_search_nodes += o.nodes;
    row.reused += o.reused;
    row.pipeline_completed += o.pipeline_completed;
    if (!spec.search) continue;
    switch (o.status) {
      case SearchStatus::feasible:
        ++row.feasible;
        break;
      case SearchStatus::infeasible:
        ++row.infeasible;
        if (is_counterexample_regime(designs[i])) row.counterexample = true;
        break;
      case SearchStatus::timeout:
        ++row.timeouts;
        break;
    }
  }
  return row;
}

}  // namespace

CampaignSummary run_campaign(const CampaignSpec& spec) {
  spec.check();
  CampaignSummary summary;
  const fs::path root(spec.output_dir);
  for (std::uint32_t v : spec.vs) {
    const fs::path dir = root / ("v" + std::to_string(v) + "-k" + std::to_string(spec.k) +
                                 "-l" + std::to_string(spec.lambda));
    fs::create_directories(dir);
    Enumerated e;
    if (spec.enumerate) e = enumerate_for(v, spec, dir);
    auto row = run_row("v=" + std::to_string(v), e.designs, spec, dir);
    row.v = v;
    row.lambda = spec.lambda;
    row.enumeration_exhaustive = e.exhaustive;
    row.new_enumeration_nodes = e.new_nodes;
    summary.rows.push_back(std::move(row));
  }
  for (const auto& inj : spec.injected) {
    const fs::path dir = root / ("injected-" + inj.label);
    fs::create_directories(dir);
    summary.rows.push_back(run_row(inj.label, {inj.design}, spec, dir));
  }
  return summary;
}

std::string format_summary(const CampaignSummary& summary, bool colour) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-18s %8s %8s %10s %8s %8s\n", "instance", "designs",
                "feasible", "infeasible", "timeouts", "reused");
  out << line;
  for (const auto& r : summary.rows) {
    std::snprintf(line, sizeof line, "%-18s %8zu %8zu %10zu %8zu %8zu", r.label.c_str(),
                  r.designs, r.feasible, r.infeasible, r.timeouts, r.reused);
    out << line;
    if (!r.enumeration_exhaustive) out << "  (enumeration capped)";
    if (r.counterexample)
      out << (colour ? "  \x1b[31mCONJECTURE-COUNTEREXAMPLE\x1b[0m" : "  CONJECTURE-COUNTEREXAMPLE");
    out << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const CampaignSummary& summary) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : summary.rows)
    rows.push_back({{"instance", r.label},
                    {"v", r.v},
                    {"lambda", r.lambda},
                    {"designs", r.designs},
                    {"feasible", r.feasible},
                    {"infeasible", r.infeasible},
                    {"timeouts", r.timeouts},
                    {"enumeration_exhaustive", r.enumeration_exhaustive},
                    {"reused", r.reused},
                    {"new_search_nodes", r.new_search_nodes},
                    {"new_enumeration_nodes", r.new_enumeration_nodes},
                    {"pipeline_completed", r.pipeline_completed},
                    {"counterexample", r.counterexample}});
  return {{"rows", rows},
          {"new_search_nodes", summary.new_search_nodes()},
          {"new_enumeration_nodes", summary.new_enumeration_nodes()}};
}

}  // namespace novak
