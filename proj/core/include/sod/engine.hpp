#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sod/policy.hpp"

namespace sod {

/// Concrete evidence for a conflict: the constraint, the activity subset A'
/// reaching the threshold, one covered grouping per activity, and (in domain
/// mode) the common domain set D.
struct Witness {
  std::size_t constraint = 0;  // 0-based declaration index
  std::vector<Index> activity_subset;
  std::vector<std::pair<Index, Index>> chosen_groupings;  // (activity, grouping)
  std::optional<std::vector<Index>> domain_witness;
};

struct ConflictVerdict {
  bool conflicting = false;
  std::vector<Witness> witnesses;
};

struct CheckOptions {
  bool effective = true;
  bool domain_mode = false;
  /// When set, all witnesses (every activity subset and grouping choice)
  /// are enumerated up to max_witnesses instead of one per constraint.
  bool exhaustive_witnesses = false;
  std::size_t max_witnesses = 256;
};

enum class PairKind { Roles, Permissions };

struct EnumOptions {
  bool effective = true;
  bool domain_mode = false;
  /// Skip pairs that contain an illegal entity (the count stays exact
  /// either way).
  bool discard_illegal = true;
  /// Materialize the pair listing; with discard_illegal off this includes
  /// the pairs involving illegal entities, which can be very large.
  bool listing = true;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct PairResult {
  std::uint64_t count = 0;
  bool listed = false;
  std::vector<std::pair<Index, Index>> pairs;  // first < second, sorted
};

/// Precomputed per-role coverage: which groupings a role's permission set
/// fully covers, and the activities those unlock. Rebuilding after a model
/// change is the caller's responsibility; models are immutable.
struct CapabilityIndex {
  bool effective = true;
  std::vector<std::vector<Index>> covered_groupings;  // per role, sorted
  std::vector<Bitset> covered_activities;             // per role
  std::vector<Bitset> touched_activities;             // >= 1 perm of a grouping
  std::vector<std::vector<Index>> activity_constraints;  // per activity

  /// All (activity, grouping) coverage pairs of one role.
  std::vector<std::pair<Index, Index>> coverage(Index role,
                                                const ActivityModel& am) const;
};

struct AnalyzeOptions {
  bool effective = true;
  bool domain_mode = false;
  bool discard_illegal = true;
  bool pairs_roles = true;
  bool pairs_permissions = true;
  bool list_pairs = false;       // force a full pair listing
  std::size_t list_cap = 100000;  // auto-list only below this many pairs
  unsigned threads = 0;
};

struct Finding {
  enum class Kind {
    IllegalPermission,
    IllegalRole,
    ConflictingUser,
    RolePair,
    PermissionPair,
  };
  Kind kind;
  std::string entity_a;
  std::string entity_b;             // empty for singleton findings
  std::size_t constraint = 0;       // 0-based
  std::vector<std::string> activities;
  std::vector<std::string> domains;
};

struct AnalysisReport {
  AnalyzeOptions settings;
  std::vector<std::string> illegal_permissions;  // sorted ids
  std::vector<std::string> illegal_roles;
  std::vector<std::string> conflicting_users;
  std::optional<std::uint64_t> role_pair_count;
  std::optional<std::uint64_t> permission_pair_count;
  bool role_pairs_listed = false;
  bool permission_pairs_listed = false;
  std::vector<Finding> findings;

  bool has_findings() const {
    return !illegal_permissions.empty() || !illegal_roles.empty() ||
           !conflicting_users.empty() ||
           (role_pair_count && *role_pair_count > 0) ||
           (permission_pair_count && *permission_pair_count > 0);
  }
};

/// Evaluates the conflict equations over a frozen Policy. All checks are
/// pure reads and may run concurrently; pair enumeration may use worker
/// threads internally but its output is order-normalized.
class Engine {
 public:
  explicit Engine(const Policy& policy);

  const Policy& policy() const { return p_; }

  ConflictVerdict check_perm_set(const std::vector<std::string>& perm_ids,
                                 const CheckOptions& opts = {}) const;
  ConflictVerdict check_role_set(const std::vector<std::string>& role_ids,
                                 const CheckOptions& opts = {}) const;
  ConflictVerdict check_user_set(const std::vector<std::string>& user_ids,
                                 const CheckOptions& opts = {}) const;
  ConflictVerdict check_session(std::string_view session_id,
                                const CheckOptions& opts = {}) const;

  /// Bitset entry point the id-based checks reduce to.
  ConflictVerdict check_perm_bits(const Bitset& perms,
                                  const CheckOptions& opts = {}) const;

  /// Witness-free boolean check; the optimized path.
  bool conflicts_fast(const Bitset& perms, bool domain_mode) const;

  std::vector<std::string> illegal_permissions(
      const CheckOptions& opts = {}) const;
  std::vector<std::string> illegal_roles(const CheckOptions& opts = {}) const;
  /// Users whose own permission set already satisfies a constraint.
  std::vector<std::string> conflicting_users(
      const CheckOptions& opts = {}) const;

  std::vector<Index> illegal_permission_indices(const CheckOptions& opts = {}) const;
  std::vector<Index> illegal_role_indices(const CheckOptions& opts = {}) const;
  std::vector<Index> conflicting_user_indices(const CheckOptions& opts = {}) const;

  /// Built on first use per effective flag, then cached.
  const CapabilityIndex& capability_index(bool effective) const;

  PairResult enumerate_conflicting_pairs(PairKind kind,
                                         const EnumOptions& opts = {}) const;

  /// Delta verdict for a hypothetical UA row: witnesses on constraints that
  /// were not conflicting for the user before the assignment. An assignment
  /// already in force yields an empty delta.
  ConflictVerdict whatif_assign(std::string_view user, std::string_view role,
                                const CheckOptions& opts = {}) const;
  /// Delta verdict for activating one more role in a session.
  ConflictVerdict whatif_activate(std::string_view session,
                                  std::string_view role,
                                  const CheckOptions& opts = {}) const;

  AnalysisReport analyze(const AnalyzeOptions& opts = {}) const;

 private:
  const Policy& p_;

  mutable std::mutex index_mu_;
  mutable std::unique_ptr<CapabilityIndex> index_[2];

  std::vector<Index> covered_groupings_of(const Bitset& perms) const;
  bool conflicts_from_covered(const std::vector<Index>& covered,
                              bool domain_mode) const;
  void append_witnesses(std::size_t ci, const Bitset& perms,
                        const CheckOptions& opts, ConflictVerdict& out) const;
  ConflictVerdict delta_verdict(const Bitset& before, const Bitset& after,
                                const CheckOptions& opts) const;
  PairResult enum_role_pairs(const EnumOptions& opts) const;
  PairResult enum_perm_pairs(const EnumOptions& opts) const;
};

}  // namespace sod
