#pragma once

#include <string>

#include "sod/declarations.hpp"
#include "sod/policy.hpp"

namespace sod {

/// Canonical text form: statements grouped by kind in grammar order, each
/// group sorted by identifier, lists sorted and deduplicated. Two models are
/// equivalent at the declaration level iff their canonical forms are equal.
std::string serialize_model(const Declarations& decls);

/// Reconstructs declarations from a built policy. The virtual activity root
/// (and parent links to it) is omitted.
Declarations to_declarations(const Policy& policy);

}  // namespace sod
