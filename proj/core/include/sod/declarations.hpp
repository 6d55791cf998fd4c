#pragma once

#include <string>
#include <vector>

namespace sod {

// Raw statements as read from a policy document, before any semantic
// validation. Field names follow the statement grammar.

struct PermDecl {
  std::string id, object, operation;
  int line = 0;
};

struct UserDecl {
  std::string id;
  int line = 0;
};

struct RoleDecl {
  std::string id;
  int line = 0;
};

struct UaDecl {
  std::string user, role;
  int line = 0;
};

struct PaDecl {
  std::string role, perm;
  int line = 0;
};

struct RhDecl {
  std::string senior, junior;
  int line = 0;
};

struct ActivityDecl {
  std::string id;
  std::string parent;  // empty: top-level activity
  int line = 0;
};

struct GroupingDecl {
  std::string id, activity;
  std::vector<std::string> perms;
  int line = 0;
};

struct DomainDecl {
  std::string id;
  std::vector<std::string> objects;
  int line = 0;
};

struct SodDecl {
  int threshold = 0;
  std::vector<std::string> activities;
  int line = 0;
};

struct SessionDecl {
  std::string id, user;
  std::vector<std::string> roles;
  int line = 0;
};

struct Declarations {
  std::vector<PermDecl> perms;
  std::vector<UserDecl> users;
  std::vector<RoleDecl> roles;
  std::vector<UaDecl> ua;
  std::vector<PaDecl> pa;
  std::vector<RhDecl> rh;
  std::vector<ActivityDecl> activities;
  std::vector<GroupingDecl> groupings;
  std::vector<DomainDecl> domains;
  std::vector<SodDecl> sods;
  std::vector<SessionDecl> sessions;

  bool empty() const {
    return perms.empty() && users.empty() && roles.empty() && ua.empty() &&
           pa.empty() && rh.empty() && activities.empty() &&
           groupings.empty() && domains.empty() && sods.empty() &&
           sessions.empty();
  }
};

}  // namespace sod
