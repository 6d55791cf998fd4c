#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sod {

using Index = std::uint32_t;

/// Interns identifiers of one entity kind to dense indices.
class SymbolTable {
 public:
  /// Returns the index of `name`, adding it if absent.
  Index intern(std::string_view name);

  std::optional<Index> find(std::string_view name) const;

  const std::string& name(Index i) const { return names_[i]; }

  std::size_t size() const { return names_.size(); }

  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Index> index_;
};

}  // namespace sod
