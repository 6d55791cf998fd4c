#include "sod/activity.hpp"

#include <algorithm>
#include <sstream>

namespace sod {

ActivityModel ActivityModel::build(const Declarations& decls,
                                   const RbacModel& rbac,
                                   std::vector<std::string>* warnings) {
  ActivityModel m;

  for (const auto& d : decls.activities) {
    if (d.id == kSyntheticRootId) {
      throw Error(ErrorKind::DuplicateId,
                  "activity id " + std::string(kSyntheticRootId) +
                      " is reserved");
    }
    if (m.activities_.find(d.id)) {
      throw Error(ErrorKind::DuplicateId, "duplicate activity id: " + d.id);
    }
    m.activities_.intern(d.id);
  }
  m.parent_.assign(m.activities_.size(), std::nullopt);
  std::vector<Index> top_level;
  for (const auto& d : decls.activities) {
    Index a = *m.activities_.find(d.id);
    if (d.parent.empty()) {
      top_level.push_back(a);
      continue;
    }
    auto p = m.activities_.find(d.parent);
    if (!p) {
      throw Error(ErrorKind::UnknownParent, "activity " + d.id +
                                                " references unknown parent " +
                                                d.parent);
    }
    m.parent_[a] = *p;
  }

  if (!top_level.empty()) {
    if (top_level.size() == 1) {
      m.root_ = top_level[0];
    } else {
      // Several top-level activities: insert the virtual collecting root.
      m.root_ = m.activities_.intern(kSyntheticRootId);
      m.synthetic_root_ = true;
      m.parent_.push_back(std::nullopt);
      for (Index a : top_level) m.parent_[a] = m.root_;
    }
  } else if (m.activities_.size() > 0) {
    // Activities exist but none is parentless: the parent links must cycle.
    throw Error(ErrorKind::CycleInActivities,
                "activity parent links contain a cycle");
  }

  const std::size_t nact = m.activities_.size();
  m.children_.assign(nact, {});
  for (Index a = 0; a < nact; ++a) {
    if (m.parent_[a]) m.children_[*m.parent_[a]].push_back(a);
  }

  // Depth-first numbering also detects parent cycles (unreached nodes).
  std::vector<Index> order;
  if (nact > 0) {
    order.reserve(nact);
    std::vector<Index> stack{m.root_};
    std::vector<bool> seen(nact, false);
    seen[m.root_] = true;
    while (!stack.empty()) {
      Index a = stack.back();
      stack.pop_back();
      order.push_back(a);
      for (Index c : m.children_[a]) {
        seen[c] = true;
        stack.push_back(c);
      }
    }
    if (order.size() != nact) {
      std::ostringstream os;
      os << "activity parent links contain a cycle involving:";
      for (Index a = 0; a < nact; ++a) {
        if (!seen[a]) os << ' ' << m.activities_.name(a);
      }
      throw Error(ErrorKind::CycleInActivities, os.str());
    }
  }

  m.ancestors_.assign(nact, Bitset(nact));
  m.descendants_.assign(nact, Bitset(nact));
  for (Index a : order) {  // parents first
    m.ancestors_[a].set(a);
    if (m.parent_[a]) m.ancestors_[a] |= m.ancestors_[*m.parent_[a]];
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {  // leaves first
    Index a = *it;
    m.descendants_[a].set(a);
    for (Index c : m.children_[a]) m.descendants_[a] |= m.descendants_[c];
  }

  // Groupings.
  m.direct_groupings_.assign(nact, {});
  for (const auto& d : decls.groupings) {
    if (m.groupings_.find(d.id)) {
      throw Error(ErrorKind::DuplicateId, "duplicate grouping id: " + d.id);
    }
    auto a = m.activities_.find(d.activity);
    if (!a) {
      throw Error(ErrorKind::UnknownActivity,
                  "grouping " + d.id + " attached to unknown activity " +
                      d.activity);
    }
    if (d.perms.empty()) {
      throw Error(ErrorKind::DanglingReference,
                  "grouping " + d.id + " has an empty permission set");
    }
    Index g = m.groupings_.intern(d.id);
    m.grouping_activity_.push_back(*a);
    std::vector<Index> ps;
    for (const auto& pid : d.perms) {
      auto p = rbac.permissions().find(pid);
      if (!p) {
        throw Error(ErrorKind::UnknownPermission,
                    "grouping " + d.id + " references unknown permission " +
                        pid);
      }
      ps.push_back(*p);
    }
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    m.grouping_perms_.push_back(std::move(ps));
    m.direct_groupings_[*a].push_back(g);
    m.grouping_unlocks_.push_back(m.ancestors_[*a]);
  }

  m.star_groupings_.assign(nact, {});
  for (Index a = 0; a < nact; ++a) {
    const Bitset& desc = m.descendants_[a];
    for (auto d = desc.find_first(); d != Bitset::npos;
         d = desc.find_next(d)) {
      for (Index g : m.direct_groupings_[static_cast<Index>(d)]) {
        m.star_groupings_[a].push_back(g);
      }
    }
    std::sort(m.star_groupings_[a].begin(), m.star_groupings_[a].end());
  }

  // SoD domains and the derived permdomains map.
  for (const auto& d : decls.domains) {
    if (m.domains_.find(d.id)) {
      throw Error(ErrorKind::DuplicateId, "duplicate domain id: " + d.id);
    }
    Index dom = m.domains_.intern(d.id);
    (void)dom;
    std::vector<Index> objs;
    for (const auto& oid : d.objects) {
      auto o = rbac.objects().find(oid);
      if (!o) {
        if (warnings) {
          warnings->push_back("domain " + d.id + " lists object " + oid +
                              " that no permission uses");
        }
        continue;
      }
      objs.push_back(*o);
    }
    std::sort(objs.begin(), objs.end());
    objs.erase(std::unique(objs.begin(), objs.end()), objs.end());
    m.domain_objects_.push_back(std::move(objs));
  }
  if (warnings && m.domains_.size() == 0 && !decls.sods.empty()) {
    warnings->push_back(
        "no SoD domains declared; domain-mode analysis will report no "
        "conflicts");
  }

  const std::size_t nperms = rbac.permissions().size();
  const std::size_t ndoms = m.domains_.size();
  m.perm_domains_.assign(nperms, Bitset(ndoms));
  for (Index p = 0; p < nperms; ++p) {
    Index obj = rbac.permission_object(p);
    for (Index d = 0; d < ndoms; ++d) {
      if (std::binary_search(m.domain_objects_[d].begin(),
                             m.domain_objects_[d].end(), obj)) {
        m.perm_domains_[p].set(d);
      }
    }
  }
  for (std::size_t g = 0; g < m.groupings_.size(); ++g) {
    Bitset doms(ndoms);
    doms.set();
    for (Index p : m.grouping_perms_[g]) doms &= m.perm_domains_[p];
    m.grouping_domains_.push_back(std::move(doms));
  }

  // SoD constraints.
  for (std::size_t i = 0; i < decls.sods.size(); ++i) {
    const auto& d = decls.sods[i];
    SodConstraint c;
    for (const auto& aid : d.activities) {
      auto a = m.activities_.find(aid);
      if (!a) {
        throw Error(ErrorKind::UnknownActivity,
                    "sod constraint " + std::to_string(i + 1) +
                        " references unknown activity " + aid);
      }
      c.activities.push_back(*a);
    }
    std::sort(c.activities.begin(), c.activities.end());
    c.activities.erase(std::unique(c.activities.begin(), c.activities.end()),
                       c.activities.end());
    c.threshold = d.threshold;
    if (c.threshold < 2) {
      throw Error(ErrorKind::InvalidConstraint,
                  "sod constraint " + std::to_string(i + 1) +
                      " has threshold below 2");
    }
    if (c.activities.size() < 2) {
      throw Error(ErrorKind::InvalidConstraint,
                  "sod constraint " + std::to_string(i + 1) +
                      " needs at least 2 distinct activities");
    }
    if (c.threshold > static_cast<int>(c.activities.size())) {
      throw Error(ErrorKind::InvalidConstraint,
                  "sod constraint " + std::to_string(i + 1) +
                      " is unsatisfiable: threshold exceeds activity count");
    }
    Bitset mask(nact);
    for (Index a : c.activities) mask.set(a);
    m.constraint_masks_.push_back(std::move(mask));
    m.constraints_.push_back(std::move(c));
  }

  return m;
}

std::map<Index, std::vector<Index>> ActivityModel::performed_activities(
    const Bitset& perms) const {
  std::map<Index, std::vector<Index>> out;
  for (Index a = 0; a < activities_.size(); ++a) {
    std::vector<Index> witnesses;
    for (Index g : star_groupings_[a]) {
      if (grouping_covered(g, perms)) witnesses.push_back(g);
    }
    if (!witnesses.empty()) out.emplace(a, std::move(witnesses));
  }
  return out;
}

Index ActivityModel::require_activity(std::string_view id) const {
  if (auto a = activities_.find(id)) return *a;
  throw Error(ErrorKind::UnknownActivity,
              "unknown activity: " + std::string(id));
}

std::vector<std::string> ActivityModel::activity_closure(
    std::string_view activity, TreeDirection dir) const {
  Index a = require_activity(activity);
  std::vector<std::string> out;
  const Bitset& b = tree_closure(a, dir);
  for (auto i = b.find_first(); i != Bitset::npos; i = b.find_next(i)) {
    out.push_back(activities_.name(static_cast<Index>(i)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> ActivityModel::groupings_of(
    std::string_view activity) const {
  std::vector<std::string> out;
  for (Index g : direct_groupings_[require_activity(activity)]) {
    out.push_back(groupings_.name(g));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> ActivityModel::groupings_star(
    std::string_view activity) const {
  std::vector<std::string> out;
  for (Index g : star_groupings_[require_activity(activity)]) {
    out.push_back(groupings_.name(g));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> ActivityModel::perm_domains_of(
    const RbacModel& rbac, std::string_view perm) const {
  Index p = rbac.require_permission(perm);
  std::vector<std::string> out;
  const Bitset& b = perm_domains_[p];
  for (auto i = b.find_first(); i != Bitset::npos; i = b.find_next(i)) {
    out.push_back(domains_.name(static_cast<Index>(i)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::map<std::string, std::vector<std::string>>
ActivityModel::performed_activities(
    const RbacModel& rbac, const std::vector<std::string>& perm_ids) const {
  Bitset perms(rbac.permissions().size());
  for (const auto& pid : perm_ids) perms.set(rbac.require_permission(pid));
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& [a, gs] : performed_activities(perms)) {
    std::vector<std::string> names;
    for (Index g : gs) names.push_back(groupings_.name(g));
    std::sort(names.begin(), names.end());
    out.emplace(activities_.name(a), std::move(names));
  }
  return out;
}

}  // namespace sod
