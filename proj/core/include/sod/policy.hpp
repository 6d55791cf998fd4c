#pragma once

#include <string>
#include <vector>

#include "sod/activity.hpp"
#include "sod/declarations.hpp"
#include "sod/rbac.hpp"

namespace sod {

/// A fully validated, immutable policy snapshot: RBAC entities plus the
/// activity model. All analysis reads this frozen state.
struct Policy {
  RbacModel rbac;
  ActivityModel acts;
  std::vector<std::string> warnings;

  static Policy build(const Declarations& decls);
};

}  // namespace sod
