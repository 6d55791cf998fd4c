#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sod/bitset.hpp"
#include "sod/declarations.hpp"
#include "sod/error.hpp"
#include "sod/rbac.hpp"
#include "sod/symbols.hpp"

namespace sod {

/// Reserved id of the virtual root inserted when the declared activity
/// forest has more than one top-level activity.
inline constexpr std::string_view kSyntheticRootId = "__root__";

enum class TreeDirection { Ancestors, Descendants };

struct SodConstraint {
  std::vector<Index> activities;  // sorted, unique
  int threshold = 0;              // >= 2, <= activities.size()
};

/// The activity generalization tree plus permission groupings, SoD domains
/// and SoD constraints. Immutable after build(); safe for concurrent reads.
class ActivityModel {
 public:
  static ActivityModel build(const Declarations& decls, const RbacModel& rbac,
                             std::vector<std::string>* warnings = nullptr);

  const SymbolTable& activities() const { return activities_; }
  const SymbolTable& groupings() const { return groupings_; }
  const SymbolTable& domains() const { return domains_; }

  bool has_activities() const { return activities_.size() > 0; }
  Index root() const { return root_; }
  bool is_synthetic_root(Index a) const {
    return synthetic_root_ && a == root_;
  }
  std::optional<Index> parent(Index a) const { return parent_[a]; }

  /// Reflexive closure along parent links (Ancestors) or child links
  /// (Descendants), over activity indices.
  const Bitset& tree_closure(Index a, TreeDirection dir) const {
    return dir == TreeDirection::Ancestors ? ancestors_[a] : descendants_[a];
  }

  /// Groupings attached directly to `a` (actvtgrps).
  std::span<const Index> groupings_of(Index a) const {
    return direct_groupings_[a];
  }
  /// Groupings attached to `a` or any of its descendants (actvtgrps*).
  std::span<const Index> groupings_star(Index a) const {
    return star_groupings_[a];
  }

  Index grouping_activity(Index g) const { return grouping_activity_[g]; }
  std::span<const Index> grouping_permissions(Index g) const {
    return grouping_perms_[g];
  }
  /// Activities the grouping unlocks: its activity and all ancestors.
  const Bitset& grouping_unlocks(Index g) const { return grouping_unlocks_[g]; }
  /// Intersection of perm_domains over the grouping's permissions.
  const Bitset& grouping_domains(Index g) const { return grouping_domains_[g]; }

  std::span<const Index> domain_objects(Index d) const {
    return domain_objects_[d];
  }
  /// Domains whose object set contains the permission's object.
  const Bitset& perm_domains(Index p) const { return perm_domains_[p]; }

  std::span<const SodConstraint> constraints() const { return constraints_; }
  const Bitset& constraint_mask(std::size_t c) const {
    return constraint_masks_[c];
  }

  /// True when every permission of `g` is in `perms`.
  bool grouping_covered(Index g, const Bitset& perms) const {
    for (Index p : grouping_perms_[g]) {
      if (!perms.test(p)) return false;
    }
    return true;
  }

  /// Activities performable with `perms`, each with its witness groupings
  /// from actvtgrps*. Keys are ancestor-closed by construction.
  std::map<Index, std::vector<Index>> performed_activities(
      const Bitset& perms) const;

  // Identifier-based wrappers; results sorted by identifier.
  std::vector<std::string> activity_closure(std::string_view activity,
                                            TreeDirection dir) const;
  std::vector<std::string> groupings_of(std::string_view activity) const;
  std::vector<std::string> groupings_star(std::string_view activity) const;
  std::vector<std::string> perm_domains_of(const RbacModel& rbac,
                                           std::string_view perm) const;
  std::map<std::string, std::vector<std::string>> performed_activities(
      const RbacModel& rbac, const std::vector<std::string>& perm_ids) const;

  Index require_activity(std::string_view id) const;

 private:
  SymbolTable activities_, groupings_, domains_;
  std::vector<std::optional<Index>> parent_;
  std::vector<std::vector<Index>> children_;
  Index root_ = 0;
  bool synthetic_root_ = false;

  std::vector<Bitset> ancestors_, descendants_;
  std::vector<std::vector<Index>> direct_groupings_, star_groupings_;
  std::vector<Index> grouping_activity_;
  std::vector<std::vector<Index>> grouping_perms_;
  std::vector<Bitset> grouping_unlocks_, grouping_domains_;
  std::vector<std::vector<Index>> domain_objects_;
  std::vector<Bitset> perm_domains_;
  std::vector<SodConstraint> constraints_;
  std::vector<Bitset> constraint_masks_;
};

}  // namespace sod
