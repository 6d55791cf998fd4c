#include "sod/policy.hpp"

namespace sod {

Policy Policy::build(const Declarations& decls) {
  Policy p;
  p.rbac = RbacModel::build(decls);
  p.acts = ActivityModel::build(decls, p.rbac, &p.warnings);
  return p;
}

}  // namespace sod
