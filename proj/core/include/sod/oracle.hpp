#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sod/declarations.hpp"
#include "sod/error.hpp"

namespace sod::testkit {

/// Hard limits for the exhaustive reference check. Exceeding any of them
/// raises InstanceTooLarge; the oracle never truncates silently.
struct OracleBounds {
  std::size_t max_union_perms = 16;          // permissions in the checked set
  std::size_t max_constraint_activities = 8;  // per constraint
  std::size_t max_domains = 4;                // declared domains
  std::uint64_t max_steps = 50'000'000;       // enumeration step guard
};

struct OracleWitness {
  std::size_t constraint = 0;  // 0-based declaration index
  std::vector<std::string> activities;
  std::vector<std::pair<std::string, std::string>> groupings;  // (act, grp)
  std::optional<std::vector<std::string>> domains;
};

struct OracleVerdict {
  bool conflicting = false;
  std::vector<OracleWitness> witnesses;
};

// Exhaustive reference checks, evaluated literally over the raw
// declarations with independently computed closures. Single-threaded.
OracleVerdict brute_force_check_perms(const Declarations& decls,
                                      const std::vector<std::string>& perms,
                                      bool domain_mode,
                                      const OracleBounds& bounds = {});
OracleVerdict brute_force_check_roles(const Declarations& decls,
                                      const std::vector<std::string>& roles,
                                      bool effective, bool domain_mode,
                                      const OracleBounds& bounds = {});
OracleVerdict brute_force_check_users(const Declarations& decls,
                                      const std::vector<std::string>& users,
                                      bool effective, bool domain_mode,
                                      const OracleBounds& bounds = {});
OracleVerdict brute_force_check_session(const Declarations& decls,
                                        const std::string& session,
                                        bool effective, bool domain_mode,
                                        const OracleBounds& bounds = {});

}  // namespace sod::testkit
