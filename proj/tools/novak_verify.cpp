// novak-verify: re-checks certificates and input files without any search
// code linked in.
//
//   novak-verify CERT.json...
//   novak-verify --design F | --family F --kind cdf|ddf|symmetric-ddf

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "exit_codes.hpp"
#include "novak/certificate.hpp"
#include "novak/errors.hpp"
#include "novak/io.hpp"

using namespace novak;
using namespace novak::cli;

int main(int argc, char** argv) {
  CLI::App app{"Independent certificate checker"};
  std::vector<std::string> certs;
  std::string design, family, kind = "cdf";
  app.add_option("certificates", certs, "Certificate JSON files");
  app.add_option("--design", design, "Design file to validate");
  app.add_option("--family", family, "Family file");
  app.add_option("--kind", kind)->check(CLI::IsMember({"cdf", "ddf", "symmetric-ddf"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kInputError;
  }

  int status = kPass;
  try {
    for (const auto& path : certs) {
      std::ifstream in(path);
      if (!in) throw InputError("cannot open " + path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw InputError(path + ": " + e.what());
      }
      const Certificate c = certificate_from_json(j);
      const auto r = recheck_certificate(c);
      std::cout << (r.ok ? "PASS " : "FAIL ") << to_string(c.kind) << " " << path;
      if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
      std::cout << "\n";
      if (!r.ok) status = kFail;
    }
    if (!design.empty()) {
      const CyclicDesign d = read_design_file(design);
      const auto r = validate_design(d, CoverageMethod::pair_count);
      std::cout << (r ? "PASS" : "FAIL") << " design " << design << "\n";
      if (!r) status = kFail;
    }
    if (!family.empty()) {
      const DifferenceFamily f = read_family_file(family);
      const CertificateKind k = certificate_kind_from_string(kind);
      Certificate c;
      try {
        c = make_family_certificate(f, k);
      } catch (const PreconditionError&) {
        std::cout << "FAIL " << kind << " " << family << "\n";
        return kFail;
      }
      std::cout << (recheck_certificate(c) ? "PASS " : "FAIL ") << kind << " " << family << "\n";
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error at line " << e.line() << ", column " << e.column() << ": "
              << e.what() << "\n";
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
  }
  return status;
}
