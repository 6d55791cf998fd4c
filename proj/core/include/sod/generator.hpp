#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sod/declarations.hpp"
#include "sod/error.hpp"

namespace sod::testkit {

/// Knobs for the synthetic-instance generator. Identical params and seed
/// give byte-identical output on every platform: the generator draws all
/// randomness from SplitMix64 and uses modulo reduction only.
struct GeneratorParams {
  std::uint64_t seed = 0;
  std::size_t users = 0;
  std::size_t roles = 0;
  std::size_t perms = 0;
  std::size_t activities = 0;
  std::size_t groupings = 0;
  std::size_t domains = 0;
  std::size_t constraints = 0;
  std::size_t sessions = 0;

  std::size_t ua_per_user = 2;
  std::size_t pa_per_role = 4;
  /// Chance (out of 1000) that a role gets a junior edge to an earlier role.
  std::size_t rh_edge_permille = 500;
  std::size_t grouping_size_min = 1;
  std::size_t grouping_size_max = 3;
  /// 0: partition all objects evenly across the domains.
  std::size_t objects_per_domain = 0;
  std::size_t activities_per_constraint = 2;

  /// Inject this many guaranteed illegal permissions and this many
  /// guaranteed conflicting role pairs, consuming part of the entity
  /// budgets above (3 perms, 2 roles, 4 activities, 4 groupings and 2
  /// constraints per planted conflict).
  std::size_t plant_conflicts = 0;
};

struct PlantedConflicts {
  std::vector<std::string> illegal_permissions;
  std::vector<std::pair<std::string, std::string>> role_pairs;
};

/// Builds the declarations for a synthetic instance. Entity counts in the
/// output equal the params exactly. Throws Error(InconsistentParams) when
/// the budgets cannot be met.
Declarations generate_declarations(const GeneratorParams& params,
                                   PlantedConflicts* planted = nullptr);

/// Canonical document text for the generated instance, with a comment
/// header recording the planted conflicts.
std::string generate_instance(const GeneratorParams& params,
                              PlantedConflicts* planted = nullptr);

}  // namespace sod::testkit
