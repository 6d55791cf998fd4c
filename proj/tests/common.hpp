#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sod/generator.hpp"
#include "sod/parser.hpp"
#include "sod/policy.hpp"

namespace testutil {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string fig1_path() {
  return std::string(TEST_DATA_DIR) + "/fig1.model";
}

inline std::string fig1_text() { return read_file(fig1_path()); }

inline sod::Declarations parse_ok(const std::string& text) {
  sod::ParseResult r = sod::parse_model(text);
  if (!r.ok()) {
    std::ostringstream os;
    os << "unexpected parse errors:";
    for (const auto& e : r.errors) os << ' ' << e.line << ':' << e.message;
    throw std::runtime_error(os.str());
  }
  return std::move(r.decls);
}

inline sod::Policy build_ok(const std::string& text) {
  return sod::Policy::build(parse_ok(text));
}

/// FIG1 text with its constraint line replaced (or extended when the
/// replacement keeps the original line).
inline std::string fig1_with_sod(const std::string& sod_lines) {
  std::string text = fig1_text();
  const std::string original = "sod 3 a2,a4,a10\n";
  auto pos = text.find(original);
  if (pos == std::string::npos) throw std::runtime_error("fixture changed");
  text.replace(pos, original.size(), sod_lines);
  return text;
}

// Same deterministic generator as the production code, reused for test-side
// randomization so runs are reproducible everywhere.
struct Rng {
  std::uint64_t state;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
};

/// Random small instance that always fits the oracle bounds
/// (<= 16 permissions total, 2-activity constraints, <= 4 domains).
inline sod::testkit::GeneratorParams small_params(std::uint64_t seed) {
  Rng rng{seed * 0x9e3779b97f4a7c15ULL + 1};
  sod::testkit::GeneratorParams gp;
  gp.seed = seed;
  bool plant = rng.below(4) == 0;
  gp.plant_conflicts = plant ? 1 : 0;
  gp.perms = 6 + rng.below(11 - (plant ? 3 : 0));  // total stays <= 16
  gp.roles = (plant ? 2 : 0) + 3 + rng.below(8);
  gp.users = 4 + rng.below(10);
  gp.activities = (plant ? 4 : 0) + 3 + rng.below(5);
  gp.groupings = (plant ? 4 : 0) + 3 + rng.below(6);
  gp.domains = rng.below(5);
  gp.constraints = (plant ? 2 : 0) + 1 + rng.below(3);
  gp.sessions = 1 + rng.below(3);
  gp.ua_per_user = 1 + rng.below(2);
  gp.pa_per_role = 1 + rng.below(3);
  gp.grouping_size_min = 1;
  gp.grouping_size_max = 2;
  gp.activities_per_constraint = 2;
  gp.rh_edge_permille = 400;
  return gp;
}

inline std::vector<std::string> pick_ids(Rng& rng, char prefix,
                                         std::size_t total,
                                         std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count && total > 0; ++i) {
    out.push_back(prefix + std::to_string(1 + rng.below(total)));
  }
  return out;
}

}  // namespace testutil
