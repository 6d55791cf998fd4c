#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sod/engine.hpp"
#include "sod/generator.hpp"
#include "sod/parser.hpp"
#include "sod/policy.hpp"
#include "sod/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFindings = 1;
constexpr int kExitInputError = 2;

void print_diagnostics(const std::string& path,
                       const std::vector<sod::Diagnostic>& errors) {
  for (const auto& e : errors) {
    std::cerr << path << ':' << e.line << ':' << e.col << ": error: "
              << e.message << '\n';
  }
}

std::optional<sod::Policy> load_policy(const std::string& path) {
  sod::ParseResult parsed = sod::parse_model_file(path);
  if (!parsed.ok()) {
    print_diagnostics(path, parsed.errors);
    return std::nullopt;
  }
  try {
    sod::Policy p = sod::Policy::build(parsed.decls);
    for (const auto& w : p.warnings) {
      std::cerr << path << ": warning: " << w << '\n';
    }
    return p;
  } catch (const sod::Error& e) {
    std::cerr << path << ": error: " << e.what() << '\n';
    return std::nullopt;
  }
}

bool write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return true;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << content;
  if (!out) {
    std::cerr << "error: cannot write " << out_path << '\n';
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"activity-based separation-of-duty analyzer"};
  app.require_subcommand(1);

  // validate
  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "parse and validate a model");
  validate->add_option("model", validate_path, "model file")->required();

  // analyze
  std::string analyze_path, pairs = "both", format = "text", out_path;
  bool effective = true, domains = false, discard_illegal = true;
  bool list_pairs = false;
  unsigned threads = 0;
  auto* analyze = app.add_subcommand("analyze", "full conflict analysis");
  analyze->add_option("model", analyze_path, "model file")->required();
  analyze->add_flag("--effective,!--no-effective", effective,
                    "use hierarchy-extended permission sets (default)");
  analyze->add_flag("--domains", domains,
                    "require a common SoD domain for conflicts");
  analyze->add_option("--pairs", pairs, "which pair kinds to enumerate")
      ->check(CLI::IsMember({"roles", "permissions", "both"}));
  analyze->add_flag("--discard-illegal,!--no-discard-illegal", discard_illegal,
                    "drop pairs containing an illegal entity (default)");
  analyze->add_flag("--list-pairs", list_pairs,
                    "force the full pair listing regardless of size");
  analyze->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "csv"}));
  analyze->add_option("--out", out_path, "write the report to a file");
  analyze->add_option("--threads", threads, "worker thread cap (0: auto)");

  // check-session
  std::string cs_path, cs_session;
  bool cs_effective = true, cs_domains = false;
  auto* check_session =
      app.add_subcommand("check-session", "check one session for conflicts");
  check_session->add_option("model", cs_path, "model file")->required();
  check_session->add_option("session", cs_session, "session id")->required();
  check_session->add_flag("--effective,!--no-effective", cs_effective,
                          "use hierarchy-extended permission sets (default)");
  check_session->add_flag("--domains", cs_domains,
                          "require a common SoD domain for conflicts");

  // whatif
  std::string wi_path, wi_assign;
  bool wi_effective = true, wi_domains = false;
  auto* whatif =
      app.add_subcommand("whatif", "delta check for a hypothetical assignment");
  whatif->add_option("model", wi_path, "model file")->required();
  whatif->add_option("--assign", wi_assign, "user:role to assign")->required();
  whatif->add_flag("--effective,!--no-effective", wi_effective,
                   "use hierarchy-extended permission sets (default)");
  whatif->add_flag("--domains", wi_domains,
                   "require a common SoD domain for conflicts");

  // gen
  sod::testkit::GeneratorParams gp;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate a synthetic model");
  gen->add_option("--seed", gp.seed, "generator seed")->required();
  gen->add_option("--users", gp.users, "user count");
  gen->add_option("--roles", gp.roles, "role count");
  gen->add_option("--perms", gp.perms, "permission count");
  gen->add_option("--activities", gp.activities, "activity count");
  gen->add_option("--groupings", gp.groupings, "grouping count");
  gen->add_option("--domains", gp.domains, "SoD domain count");
  gen->add_option("--constraints", gp.constraints, "SoD constraint count");
  gen->add_option("--sessions", gp.sessions, "session count");
  gen->add_option("--plant-conflicts", gp.plant_conflicts,
                  "planted illegal permissions / conflicting role pairs");
  gen->add_option("--out", gen_out, "output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      return load_policy(validate_path) ? kExitOk : kExitInputError;
    }

    if (*analyze) {
      auto policy = load_policy(analyze_path);
      if (!policy) return kExitInputError;
      sod::Engine engine(*policy);
      sod::AnalyzeOptions opts;
      opts.effective = effective;
      opts.domain_mode = domains;
      opts.discard_illegal = discard_illegal;
      opts.pairs_roles = pairs != "permissions";
      opts.pairs_permissions = pairs != "roles";
      opts.list_pairs = list_pairs;
      opts.threads = threads;
      sod::AnalysisReport rep = engine.analyze(opts);
      std::string rendered =
          format == "csv" ? sod::render_csv(rep) : sod::render_text(rep);
      if (!write_output(out_path, rendered)) return kExitInputError;
      return rep.has_findings() ? kExitFindings : kExitOk;
    }

    if (*check_session) {
      auto policy = load_policy(cs_path);
      if (!policy) return kExitInputError;
      sod::Engine engine(*policy);
      sod::CheckOptions opts;
      opts.effective = cs_effective;
      opts.domain_mode = cs_domains;
      sod::ConflictVerdict v = engine.check_session(cs_session, opts);
      std::cout << sod::render_verdict(*policy, v);
      return v.conflicting ? kExitFindings : kExitOk;
    }

    if (*whatif) {
      auto policy = load_policy(wi_path);
      if (!policy) return kExitInputError;
      auto colon = wi_assign.find(':');
      if (colon == std::string::npos || colon == 0 ||
          colon + 1 == wi_assign.size()) {
        std::cerr << "error: --assign expects <user>:<role>\n";
        return kExitInputError;
      }
      sod::Engine engine(*policy);
      sod::CheckOptions opts;
      opts.effective = wi_effective;
      opts.domain_mode = wi_domains;
      sod::ConflictVerdict v = engine.whatif_assign(
          wi_assign.substr(0, colon), wi_assign.substr(colon + 1), opts);
      std::cout << sod::render_verdict(*policy, v);
      return v.conflicting ? kExitFindings : kExitOk;
    }

    if (*gen) {
      std::string doc = sod::testkit::generate_instance(gp);
      return write_output(gen_out, doc) ? kExitOk : kExitInputError;
    }
  } catch (const sod::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}
