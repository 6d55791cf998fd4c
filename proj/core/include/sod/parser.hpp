#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sod/declarations.hpp"
#include "sod/error.hpp"

namespace sod {

/// Outcome of parsing a model document. All-or-nothing: when `errors` is
/// non-empty the declarations must not be used.
struct ParseResult {
  Declarations decls;
  std::vector<Diagnostic> errors;

  bool ok() const { return errors.empty(); }
};

/// Parses the line-oriented model grammar. Collects every syntax error
/// instead of stopping at the first one.
ParseResult parse_model(std::string_view text);

/// Reads and parses a file; an unreadable file yields a single diagnostic
/// on line 0.
ParseResult parse_model_file(const std::string& path);

}  // namespace sod
