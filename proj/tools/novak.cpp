// novak: command-line front end.
//
//   novak verify --file F --kind design|cdf|ddf|symmetric-ddf|certificate
//   novak enumerate --v V --k K --lambda L [--max-solutions N] [--canonical]
//   novak search --design F [--mode plain|symmetric] [--max-nodes N] [--prime-driver]
//   novak pipeline --design F --epsilon E --seed S [--eta H]
//   novak campaign --v-range A:B [--k K] [--lambda L] [--tasks enumerate,search]
//   novak counterexample --k K --lambda L
//
// Exit status: 0 pass/feasible, 1 fail/infeasible, 2 input error, 3 timeout.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "exit_codes.hpp"
#include "novak/campaign.hpp"
#include "novak/certificate.hpp"
#include "novak/errors.hpp"
#include "novak/generators.hpp"
#include "novak/io.hpp"
#include "novak/pipeline.hpp"
#include "novak/search.hpp"

using nlohmann::json;
using namespace novak;
using namespace novak::cli;

namespace {

std::string default_output_dir() {
  if (const char* env = std::getenv("NOVAK_OUTPUT_DIR"); env && *env) return env;
  return "novak-out";
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save_certificate(const Certificate& cert, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::string path =
      (std::filesystem::path(dir) / (to_string(cert.kind) + "-" + cert.subject_hash + ".json"))
          .string();
  write_file_atomic(path, to_json(cert).dump(1) + "\n");
  std::cerr << "certificate written to " << path << "\n";
}

json cdf_json(const CdfCheck& r) {
  json j = {{"pass", r.pass}};
  if (!r.pass) j["witness"] = {{"residue", r.residue}, {"observed", r.observed}};
  return j;
}

json ddf_json(const DdfCheck& r) {
  json j = {{"pass", r.pass()}};
  if (r.failure == DdfCheck::Failure::not_cdf) j["cdf"] = cdf_json(r.cdf);
  if (r.failure == DdfCheck::Failure::overlap)
    j["witness"] = {{"point", r.point}, {"blocks", {r.first, r.second}}};
  return j;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::string file;
  std::string kind = "design";
};

int cmd_verify(const VerifyArgs& a) {
  json out;
  bool pass = false;
  if (a.kind == "design") {
    const CyclicDesign d = read_design_file(a.file);
    out = to_json(d);
    try {
      const auto r = validate_design(d);
      pass = r.pass;
      out["valid"] = r.pass;
      if (!r.pass)
        out["witness"] = {{"pair", {r.witness.first, r.witness.second}},
                          {"observed", r.observed}};
      if (pass) out["short_orbit_report"] = to_json(short_orbit_analysis(d));
    } catch (const StructuralError& e) {
      out["valid"] = false;
      out["error"] = e.what();
    }
  } else if (a.kind == "cdf" || a.kind == "ddf" || a.kind == "symmetric-ddf") {
    const DifferenceFamily f = read_family_file(a.file);
    out = to_json(f);
    if (a.kind == "cdf") {
      const auto r = is_cdf(f);
      pass = r.pass;
      out["cdf"] = cdf_json(r);
    } else if (a.kind == "ddf") {
      const auto r = is_ddf(f);
      pass = r.pass();
      out["ddf"] = ddf_json(r);
    } else {
      const auto r = is_symmetric_ddf(f);
      pass = r.pass();
      out["symmetric_ddf"] = {{"pass", pass}};
      if (!pass) out["symmetric_ddf"]["reason"] = r.reason();
    }
  } else if (a.kind == "certificate") {
    json j;
    try {
      j = json::parse(read_text(a.file));
    } catch (const json::parse_error& e) {
      throw ParseError(e.what(), 0, 0);
    }
    const Certificate c = certificate_from_json(j);
    const auto r = recheck_certificate(c);
    pass = r.ok;
    out = {{"kind", to_string(c.kind)}, {"pass", r.ok}, {"detail", r.detail}};
  } else {
    throw InputError("unknown kind '" + a.kind + "'");
  }
  out["result"] = pass ? "PASS" : "FAIL";
  std::cout << out.dump() << "\n";
  if (!pass) std::cerr << "FAIL " << out.dump() << "\n";
  return pass ? kPass : kFail;
}

// ---- enumerate -------------------------------------------------------------

struct EnumerateArgs {
  std::uint32_t v = 0, k = 3, lambda = 1;
  std::optional<std::uint64_t> max_solutions;
  std::optional<std::uint64_t> max_nodes;
  bool canonical = false;
  bool designs = false;
};

int cmd_enumerate(const EnumerateArgs& a) {
  EnumerationBudget budget;
  budget.max_solutions = a.max_solutions;
  if (a.max_nodes) budget.max_nodes = *a.max_nodes;
  budget.quotient_multipliers = a.canonical;
  budget.check();
  EnumerationSummary summary;
  if (a.designs) {
    if (a.k != 3 || a.lambda != 1) throw DomainError("--designs is for cyclic STS (k=3, lambda=1)");
    summary = enumerate_cyclic_sts(a.v, budget, [](const CyclicDesign& d) {
      std::cout << json{{"design", to_json(d)}, {"certificate", to_json(make_design_certificate(d))}}
                       .dump()
                << "\n";
      return true;
    });
  } else {
    summary = enumerate_cdfs(Modulus(a.v), a.k, a.lambda, budget, [](const DifferenceFamily& f) {
      std::cout << json{{"family", to_json(f)},
                        {"certificate", to_json(make_family_certificate(f, CertificateKind::cdf))}}
                       .dump()
                << "\n";
      return true;
    });
  }
  std::cerr << json{{"solutions", summary.solutions},
                    {"nodes", summary.nodes},
                    {"exhaustive", summary.exhaustive()}}
                   .dump()
            << "\n";
  return summary.hit_node_cap ? kTimeout : kPass;
}

// ---- search ----------------------------------------------------------------

struct SearchArgs {
  std::string design;
  std::string mode = "plain";
  std::optional<std::uint64_t> max_nodes;
  bool prime_driver = false;
  bool save = false;
  std::string out_dir;
};

int cmd_search(const SearchArgs& a) {
  const CyclicDesign d = read_design_file(a.design);
  SearchBudget budget;
  if (a.max_nodes) budget.max_nodes = *a.max_nodes;
  const bool symmetric = a.mode == "symmetric";
  if (!symmetric && a.mode != "plain") throw InputError("mode must be plain or symmetric");
  SearchOutcome r = a.prime_driver ? prime_case_driver(d, budget)
                                   : find_disjoint_representatives(
                                         d, symmetric ? SearchMode::symmetric : SearchMode::plain,
                                         budget);
  json out = {{"status", to_string(r.status)},
              {"mode", a.prime_driver ? "prime-driver" : a.mode},
              {"stats",
               {{"nodes", r.stats.nodes},
                {"max_depth", r.stats.max_depth},
                {"prunes", r.stats.prunes}}}};
  if (a.prime_driver) out["translate_search"] = r.used_translate_search;
  if (r.witness) {
    json w = json::object();
    for (std::size_t i = 0; i < r.witness->translates.size(); ++i)
      w[std::to_string(i)] = r.witness->translates[i];
    out["witness"] = w;
  }
  std::cout << out.dump() << "\n";
  if (a.save) {
    if (r.status == SearchStatus::feasible)
      save_certificate(make_representatives_certificate(d, r.witness->translates, symmetric),
                       a.out_dir);
    else if (r.status == SearchStatus::infeasible)
      save_certificate(make_infeasible_certificate(d, symmetric, r.stats.nodes), a.out_dir);
  }
  switch (r.status) {
    case SearchStatus::feasible:
      return kPass;
    case SearchStatus::infeasible:
      return kFail;
    default:
      return kTimeout;
  }
}

// ---- pipeline --------------------------------------------------------------

struct PipelineArgs {
  std::string design;
  PipelineParams params;
  bool keep_going = false;
  bool save = false;
  std::string out_dir;
};

int cmd_pipeline(PipelineArgs a) {
  const CyclicDesign d = read_design_file(a.design);
  if (a.keep_going) a.params.on_precondition_failure = PreconditionPolicy::continue_;
  const PipelineResult r = full_pipeline(d, a.params);
  json out = {{"report", to_json(r.report)}};
  if (r.cls) out["class"] = class_to_json(*r.cls);
  std::cout << out.dump() << "\n";
  if (!r.report.completed) {
    std::cerr << "stage failed: " << r.report.failed_stage << ": " << r.report.failure << "\n";
    return kFail;
  }
  if (a.save) {
    ClassList start, repaired;
    for (const auto& b : r.start->blocks()) start.emplace_back(b.orbit, b.translate);
    for (const auto& b : r.cls->blocks()) repaired.emplace_back(b.orbit, b.translate);
    const json config = {{"epsilon", a.params.epsilon},
                         {"eta", a.params.eta},
                         {"seed", a.params.seed},
                         {"batch_fraction", a.params.batch_fraction}};
    save_certificate(make_pipeline_certificate(d, start, repaired, config), a.out_dir);
  }
  return r.report.bound_holds ? kPass : kFail;
}

// ---- campaign --------------------------------------------------------------

struct CampaignArgs {
  std::string v_range;
  std::vector<std::uint32_t> vs;
  std::uint32_t k = 3, lambda = 1;
  std::string tasks = "enumerate,search";
  std::optional<std::uint64_t> max_designs;
  std::uint64_t search_nodes = 10'000'000;
  int workers = 1;
  std::string out_dir;
  std::vector<std::string> inject;
  std::uint64_t seed = 1;
  bool json_out = false;
};

int cmd_campaign(const CampaignArgs& a) {
  CampaignSpec spec;
  spec.vs = a.vs;
  if (!a.v_range.empty()) {
    const auto colon = a.v_range.find(':');
    if (colon == std::string::npos) throw InputError("--v-range wants A:B");
    const auto lo = static_cast<std::uint32_t>(std::stoul(a.v_range.substr(0, colon)));
    const auto hi = static_cast<std::uint32_t>(std::stoul(a.v_range.substr(colon + 1)));
    if (lo > hi) throw InputError("empty --v-range");
    for (std::uint32_t v = lo; v <= hi; ++v) spec.vs.push_back(v);
  }
  spec.k = a.k;
  spec.lambda = a.lambda;
  spec.enumerate = a.tasks.find("enumerate") != std::string::npos;
  spec.search = a.tasks.find("search") != std::string::npos;
  spec.pipeline = a.tasks.find("pipeline") != std::string::npos;
  spec.max_designs = a.max_designs;
  spec.search_nodes = a.search_nodes;
  spec.workers = a.workers;
  spec.output_dir = a.out_dir;
  spec.seed = a.seed;
  for (const auto& item : a.inject) {
    // K:COPIES, a superimposed planar difference set design
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw InputError("--inject wants K:COPIES");
    const auto k = static_cast<std::uint32_t>(std::stoul(item.substr(0, colon)));
    const auto copies = static_cast<std::uint32_t>(std::stoul(item.substr(colon + 1)));
    spec.injected.push_back(
        {"superimposed-k" + std::to_string(k) + "x" + std::to_string(copies),
         superimposed_counterexample(k, copies)});
  }
  const CampaignSummary summary = run_campaign(spec);
  if (a.json_out)
    std::cout << to_json(summary).dump() << "\n";
  else
    std::cout << format_summary(summary, isatty(STDOUT_FILENO));
  bool counterexample = false, timeout = false;
  for (const auto& r : summary.rows) {
    counterexample |= r.counterexample;
    timeout |= r.timeouts > 0;
  }
  if (counterexample) return kFail;
  return timeout ? kTimeout : kPass;
}

// ---- counterexample ----------------------------------------------------------

int cmd_counterexample(std::uint32_t k, std::uint32_t copies, bool as_json) {
  const CyclicDesign d = superimposed_counterexample(k, copies);
  if (as_json)
    std::cout << to_json(d).dump() << "\n";
  else
    std::cout << format_design(d);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyclic design toolkit: difference families, disjoint representatives, "
               "partial parallel classes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(toolkit_version()));

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check a design, family or certificate");
  verify->add_option("--file,file", va.file, "Input file")->required();
  verify->add_option("--kind", va.kind, "design|cdf|ddf|symmetric-ddf|certificate")
      ->check(CLI::IsMember({"design", "cdf", "ddf", "symmetric-ddf", "certificate"}));

  EnumerateArgs ea;
  auto* enumerate = app.add_subcommand("enumerate", "Stream every CDF as JSON lines");
  enumerate->add_option("--v", ea.v)->required();
  enumerate->add_option("--k", ea.k);
  enumerate->add_option("--lambda", ea.lambda);
  enumerate->add_option("--max-solutions", ea.max_solutions);
  enumerate->add_option("--max-nodes", ea.max_nodes);
  enumerate->add_flag("--canonical", ea.canonical, "Identify families under multipliers");
  enumerate->add_flag("--designs", ea.designs, "Cyclic STS(v) including short orbits");

  SearchArgs sa;
  sa.out_dir = default_output_dir();
  auto* search = app.add_subcommand("search", "Find disjoint orbit representatives");
  search->add_option("--design", sa.design)->required();
  search->add_option("--mode", sa.mode)->check(CLI::IsMember({"plain", "symmetric"}));
  search->add_option("--max-nodes", sa.max_nodes);
  search->add_flag("--prime-driver", sa.prime_driver);
  search->add_flag("--certificate", sa.save, "Write a certificate");
  search->add_option("--out", sa.out_dir, "Certificate directory ($NOVAK_OUTPUT_DIR)");

  PipelineArgs pa;
  pa.out_dir = default_output_dir();
  auto* pipeline = app.add_subcommand("pipeline", "Build a large partial parallel class");
  pipeline->add_option("--design", pa.design)->required();
  pipeline->add_option("--epsilon", pa.params.epsilon);
  pipeline->add_option("--seed", pa.params.seed);
  pipeline->add_option("--eta", pa.params.eta);
  pipeline->add_option("--batch-fraction", pa.params.batch_fraction);
  pipeline->add_option("--retry-cap", pa.params.retry_cap);
  pipeline->add_flag("--keep-going", pa.keep_going,
                     "Repair with per-step checks when the good-block precondition fails");
  pipeline->add_flag("--certificate", pa.save, "Write a certificate");
  pipeline->add_option("--out", pa.out_dir, "Certificate directory ($NOVAK_OUTPUT_DIR)");

  CampaignArgs ca;
  ca.out_dir = default_output_dir();
  auto* campaign = app.add_subcommand("campaign", "Enumerate and search over a range of v");
  campaign->add_option("--v-range", ca.v_range, "A:B inclusive");
  campaign->add_option("--v", ca.vs, "Explicit orders");
  campaign->add_option("--k", ca.k);
  campaign->add_option("--lambda", ca.lambda);
  campaign->add_option("--tasks", ca.tasks, "Comma list of enumerate, search, pipeline");
  campaign->add_option("--max-designs", ca.max_designs);
  campaign->add_option("--search-nodes", ca.search_nodes);
  campaign->add_option("--workers", ca.workers);
  campaign->add_option("--out", ca.out_dir, "Output directory ($NOVAK_OUTPUT_DIR)");
  campaign->add_option("--inject", ca.inject, "Superimposed design K:COPIES");
  campaign->add_option("--seed", ca.seed);
  campaign->add_flag("--json", ca.json_out);

  std::uint32_t ck = 3, clambda = 2;
  bool cjson = false;
  auto* counter = app.add_subcommand("counterexample", "Superimposed planar difference set design");
  counter->add_option("--k", ck);
  counter->add_option("--lambda", clambda, "Number of copies");
  counter->add_flag("--json", cjson);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kInputError;
  }

  try {
    if (*verify) return cmd_verify(va);
    if (*enumerate) return cmd_enumerate(ea);
    if (*search) return cmd_search(sa);
    if (*pipeline) return cmd_pipeline(pa);
    if (*campaign) return cmd_campaign(ca);
    if (*counter) return cmd_counterexample(ck, clambda, cjson);
  } catch (const ParseError& e) {
    std::cerr << "parse error";
    if (e.line()) std::cerr << " at line " << e.line() << ", column " << e.column();
    std::cerr << ": " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kInputError;
  } catch (const StructuralError& e) {
    std::cerr << "structural error: " << e.what() << "\n";
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kInputError;
}
