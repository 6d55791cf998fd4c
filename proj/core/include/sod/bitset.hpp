#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <vector>

#include "sod/symbols.hpp"

namespace sod {

using Bitset = boost::dynamic_bitset<std::uint64_t>;

inline std::vector<Index> bits_to_indices(const Bitset& b) {
  std::vector<Index> out;
  out.reserve(b.count());
  for (auto i = b.find_first(); i != Bitset::npos; i = b.find_next(i)) {
    out.push_back(static_cast<Index>(i));
  }
  return out;
}

}  // namespace sod
