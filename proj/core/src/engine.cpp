#include "sod/engine.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <functional>
#include <set>
#include <thread>
#include <unordered_set>

namespace sod {

namespace {

std::uint64_t pack_pair(Index a, Index b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::pair<Index, Index> unpack_pair(std::uint64_t k) {
  return {static_cast<Index>(k >> 32), static_cast<Index>(k & 0xffffffffu)};
}

unsigned effective_threads(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Runs fn(i) for i in [0, n) across worker threads. fn must only touch
/// slot i of shared output; the result is independent of scheduling.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  threads = effective_threads(threads);
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) break;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  unsigned count = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

std::uint64_t pairs_among(std::uint64_t n) { return n * (n - 1) / 2; }

}  // namespace

std::vector<std::pair<Index, Index>> CapabilityIndex::coverage(
    Index role, const ActivityModel& am) const {
  std::vector<std::pair<Index, Index>> out;
  for (Index g : covered_groupings[role]) {
    const Bitset& up = am.grouping_unlocks(g);
    for (auto a = up.find_first(); a != Bitset::npos; a = up.find_next(a)) {
      out.emplace_back(static_cast<Index>(a), g);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Engine::Engine(const Policy& policy) : p_(policy) {}

std::vector<Index> Engine::covered_groupings_of(const Bitset& perms) const {
  const auto& am = p_.acts;
  std::vector<Index> out;
  for (Index g = 0; g < am.groupings().size(); ++g) {
    if (am.grouping_covered(g, perms)) out.push_back(g);
  }
  return out;
}

bool Engine::conflicts_from_covered(const std::vector<Index>& covered,
                                    bool domain_mode) const {
  const auto& am = p_.acts;
  const std::size_t nact = am.activities().size();
  if (nact == 0 || am.constraints().empty() || covered.empty()) return false;

  auto fires = [&](const Bitset& cov) {
    for (const auto& c : am.constraints()) {
      int cnt = 0;
      for (Index a : c.activities) {
        if (cov.test(a) && ++cnt >= c.threshold) return true;
      }
    }
    return false;
  };

  if (!domain_mode) {
    Bitset cov(nact);
    for (Index g : covered) cov |= am.grouping_unlocks(g);
    return fires(cov);
  }

  const std::size_t ndoms = am.domains().size();
  Bitset cov(nact);
  for (Index d = 0; d < ndoms; ++d) {
    cov.reset();
    bool any = false;
    for (Index g : covered) {
      if (am.grouping_domains(g).test(d)) {
        cov |= am.grouping_unlocks(g);
        any = true;
      }
    }
    if (any && fires(cov)) return true;
  }
  return false;
}

bool Engine::conflicts_fast(const Bitset& perms, bool domain_mode) const {
  return conflicts_from_covered(covered_groupings_of(perms), domain_mode);
}

void Engine::append_witnesses(std::size_t ci, const Bitset& perms,
                              const CheckOptions& opts,
                              ConflictVerdict& out) const {
  const auto& am = p_.acts;
  const auto& c = am.constraints()[ci];
  const auto& names = am.activities();
  const auto n = static_cast<std::size_t>(c.threshold);

  auto by_name = [&](Index a, Index b) {
    return names.name(a) < names.name(b);
  };
  auto least_grouping = [&](Index a, std::optional<Index> domain) {
    std::optional<Index> best;
    for (Index g : am.groupings_star(a)) {
      if (!am.grouping_covered(g, perms)) continue;
      if (domain && !am.grouping_domains(g).test(*domain)) continue;
      if (!best ||
          am.groupings().name(g) < am.groupings().name(*best)) {
        best = g;
      }
    }
    return best;
  };
  auto make_witness = [&](std::vector<Index> qual,
                          std::optional<Index> domain) {
    std::sort(qual.begin(), qual.end(), by_name);
    qual.resize(n);
    std::sort(qual.begin(), qual.end());
    Witness w;
    w.constraint = ci;
    w.activity_subset = qual;
    const std::size_t ndoms = am.domains().size();
    Bitset common(ndoms);
    if (domain) common.set();
    for (Index a : qual) {
      Index g = *least_grouping(a, domain);
      w.chosen_groupings.emplace_back(a, g);
      if (domain) common &= am.grouping_domains(g);
    }
    if (domain) w.domain_witness = bits_to_indices(common);
    return w;
  };

  if (opts.exhaustive_witnesses) {
    // Enumerate every activity subset and grouping choice, capped.
    std::vector<std::pair<Index, std::vector<Index>>> options;
    for (Index a : c.activities) {
      std::vector<Index> gs;
      for (Index g : am.groupings_star(a)) {
        if (am.grouping_covered(g, perms)) gs.push_back(g);
      }
      if (!gs.empty()) options.emplace_back(a, std::move(gs));
    }
    if (options.size() < n) return;
    const std::size_t q = options.size();
    if (q >= 24) return;  // subset space too large to enumerate
    const std::size_t ndoms = am.domains().size();
    for (std::uint32_t subset = 1; subset < (1u << q); ++subset) {
      if (static_cast<std::size_t>(std::popcount(subset)) < n) continue;
      std::vector<std::size_t> picked;
      for (std::size_t i = 0; i < q; ++i) {
        if (subset & (1u << i)) picked.push_back(i);
      }
      // Product over grouping choices for the picked activities.
      std::vector<std::size_t> choice(picked.size(), 0);
      for (;;) {
        if (out.witnesses.size() >= opts.max_witnesses) return;
        Bitset common(ndoms);
        common.set();
        Witness w;
        w.constraint = ci;
        for (std::size_t i = 0; i < picked.size(); ++i) {
          const auto& [a, gs] = options[picked[i]];
          Index g = gs[choice[i]];
          w.activity_subset.push_back(a);
          w.chosen_groupings.emplace_back(a, g);
          common &= am.grouping_domains(g);
        }
        bool ok = !opts.domain_mode || common.any();
        if (ok) {
          if (opts.domain_mode) w.domain_witness = bits_to_indices(common);
          out.conflicting = true;
          out.witnesses.push_back(std::move(w));
        }
        std::size_t i = 0;
        while (i < choice.size()) {
          if (++choice[i] < options[picked[i]].second.size()) break;
          choice[i++] = 0;
        }
        if (i == choice.size()) break;
      }
    }
    return;
  }

  if (!opts.domain_mode) {
    std::vector<Index> qual;
    for (Index a : c.activities) {
      if (least_grouping(a, std::nullopt)) qual.push_back(a);
    }
    if (qual.size() >= n) {
      out.conflicting = true;
      out.witnesses.push_back(make_witness(std::move(qual), std::nullopt));
    }
    return;
  }

  // Domain mode: one witness per distinct maximal common domain set.
  std::set<std::vector<Index>> seen;
  for (Index d = 0; d < am.domains().size(); ++d) {
    std::vector<Index> qual;
    for (Index a : c.activities) {
      if (least_grouping(a, d)) qual.push_back(a);
    }
    if (qual.size() < n) continue;
    Witness w = make_witness(std::move(qual), d);
    if (seen.insert(*w.domain_witness).second) {
      out.conflicting = true;
      out.witnesses.push_back(std::move(w));
    }
  }
}

ConflictVerdict Engine::check_perm_bits(const Bitset& perms,
                                        const CheckOptions& opts) const {
  ConflictVerdict v;
  for (std::size_t ci = 0; ci < p_.acts.constraints().size(); ++ci) {
    append_witnesses(ci, perms, opts, v);
    if (v.witnesses.size() >= opts.max_witnesses) break;
  }
  return v;
}

ConflictVerdict Engine::check_perm_set(
    const std::vector<std::string>& perm_ids, const CheckOptions& opts) const {
  Bitset perms(p_.rbac.permissions().size());
  for (const auto& id : perm_ids) perms.set(p_.rbac.require_permission(id));
  return check_perm_bits(perms, opts);
}

ConflictVerdict Engine::check_role_set(
    const std::vector<std::string>& role_ids, const CheckOptions& opts) const {
  Bitset perms(p_.rbac.permissions().size());
  for (const auto& id : role_ids) {
    perms |= p_.rbac.role_permissions(p_.rbac.require_role(id),
                                      opts.effective);
  }
  return check_perm_bits(perms, opts);
}

ConflictVerdict Engine::check_user_set(
    const std::vector<std::string>& user_ids, const CheckOptions& opts) const {
  Bitset perms(p_.rbac.permissions().size());
  for (const auto& id : user_ids) {
    perms |= p_.rbac.user_permissions(p_.rbac.require_user(id),
                                      opts.effective);
  }
  return check_perm_bits(perms, opts);
}

ConflictVerdict Engine::check_session(std::string_view session_id,
                                      const CheckOptions& opts) const {
  Index s = p_.rbac.require_session(session_id);
  return check_perm_bits(p_.rbac.session_permissions(s, opts.effective),
                         opts);
}

std::vector<Index> Engine::illegal_permission_indices(
    const CheckOptions& opts) const {
  const std::size_t nperms = p_.rbac.permissions().size();
  std::vector<Index> out;
  Bitset single(nperms);
  for (Index p = 0; p < nperms; ++p) {
    single.set(p);
    if (conflicts_fast(single, opts.domain_mode)) out.push_back(p);
    single.reset(p);
  }
  return out;
}

std::vector<Index> Engine::illegal_role_indices(
    const CheckOptions& opts) const {
  const auto& idx = capability_index(opts.effective);
  const std::size_t nroles = p_.rbac.roles().size();
  std::vector<Index> out;
  for (Index r = 0; r < nroles; ++r) {
    if (conflicts_from_covered(idx.covered_groupings[r], opts.domain_mode)) {
      out.push_back(r);
    }
  }
  return out;
}

std::vector<Index> Engine::conflicting_user_indices(
    const CheckOptions& opts) const {
  const std::size_t nusers = p_.rbac.users().size();
  std::vector<char> hit(nusers, 0);
  parallel_for(nusers, 0, [&](std::size_t u) {
    Bitset perms =
        p_.rbac.user_permissions(static_cast<Index>(u), opts.effective);
    if (conflicts_fast(perms, opts.domain_mode)) hit[u] = 1;
  });
  std::vector<Index> out;
  for (Index u = 0; u < nusers; ++u) {
    if (hit[u]) out.push_back(u);
  }
  return out;
}

namespace {

std::vector<std::string> sorted_names(const SymbolTable& tab,
                                      const std::vector<Index>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (Index i : ids) out.push_back(tab.name(i));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<std::string> Engine::illegal_permissions(
    const CheckOptions& opts) const {
  return sorted_names(p_.rbac.permissions(), illegal_permission_indices(opts));
}

std::vector<std::string> Engine::illegal_roles(
    const CheckOptions& opts) const {
  return sorted_names(p_.rbac.roles(), illegal_role_indices(opts));
}

std::vector<std::string> Engine::conflicting_users(
    const CheckOptions& opts) const {
  return sorted_names(p_.rbac.users(), conflicting_user_indices(opts));
}

const CapabilityIndex& Engine::capability_index(bool effective) const {
  const int slot = effective ? 1 : 0;
  std::lock_guard<std::mutex> lock(index_mu_);
  if (!index_[slot]) {
    auto idx = std::make_unique<CapabilityIndex>();
    idx->effective = effective;
    const auto& am = p_.acts;
    const std::size_t nroles = p_.rbac.roles().size();
    const std::size_t nact = am.activities().size();
    idx->covered_groupings.resize(nroles);
    idx->covered_activities.assign(nroles, Bitset(nact));
    idx->touched_activities.assign(nroles, Bitset(nact));
    for (Index r = 0; r < nroles; ++r) {
      const Bitset& perms = p_.rbac.role_permissions(r, effective);
      for (Index g = 0; g < am.groupings().size(); ++g) {
        bool all = true, any = false;
        for (Index p : am.grouping_permissions(g)) {
          if (perms.test(p)) {
            any = true;
          } else {
            all = false;
          }
        }
        if (all) {
          idx->covered_groupings[r].push_back(g);
          idx->covered_activities[r] |= am.grouping_unlocks(g);
        }
        if (any) idx->touched_activities[r] |= am.grouping_unlocks(g);
      }
    }
    idx->activity_constraints.resize(nact);
    for (std::size_t ci = 0; ci < am.constraints().size(); ++ci) {
      for (Index a : am.constraints()[ci].activities) {
        idx->activity_constraints[a].push_back(static_cast<Index>(ci));
      }
    }
    index_[slot] = std::move(idx);
  }
  return *index_[slot];
}

PairResult Engine::enumerate_conflicting_pairs(PairKind kind,
                                               const EnumOptions& opts) const {
  return kind == PairKind::Roles ? enum_role_pairs(opts)
                                 : enum_perm_pairs(opts);
}

namespace {

/// Dedup, sort, and fold in the combinatorics of illegal-entity pairs.
PairResult assemble_pairs(std::vector<std::uint64_t> found,
                          const std::vector<Index>& illegal,
                          const std::vector<char>& is_illegal,
                          std::size_t total_entities, const EnumOptions& o) {
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());

  PairResult res;
  res.count = found.size();
  if (!o.discard_illegal) {
    const std::uint64_t legal = total_entities - illegal.size();
    res.count += pairs_among(total_entities) - pairs_among(legal);
  }
  if (!o.listing) return res;

  res.listed = true;
  if (!o.discard_illegal) {
    for (Index i : illegal) {
      for (Index j = 0; j < total_entities; ++j) {
        if (j == i || (is_illegal[j] && j < i)) continue;
        found.push_back(pack_pair(i, j));
      }
    }
    std::sort(found.begin(), found.end());
  }
  res.pairs.reserve(found.size());
  for (std::uint64_t k : found) res.pairs.push_back(unpack_pair(k));
  return res;
}

}  // namespace

PairResult Engine::enum_role_pairs(const EnumOptions& o) const {
  const auto& am = p_.acts;
  const auto& rb = p_.rbac;
  const std::size_t nroles = rb.roles().size();
  const std::size_t nact = am.activities().size();
  const std::size_t ngroup = am.groupings().size();
  const std::size_t ncons = am.constraints().size();

  CheckOptions co;
  co.effective = o.effective;
  co.domain_mode = o.domain_mode;
  std::vector<Index> illegal = illegal_role_indices(co);
  std::vector<char> is_illegal(nroles, 0);
  for (Index r : illegal) is_illegal[r] = 1;

  if (ncons == 0 || nact == 0) {
    return assemble_pairs({}, illegal, is_illegal, nroles, o);
  }

  const auto& idx = capability_index(o.effective);

  // Per activity: legal roles whose permission set covers it outright.
  std::vector<std::vector<Index>> covers(nact);
  for (Index r = 0; r < nroles; ++r) {
    if (is_illegal[r]) continue;
    const Bitset& cov = idx.covered_activities[r];
    for (auto a = cov.find_first(); a != Bitset::npos; a = cov.find_next(a)) {
      covers[a].push_back(r);
    }
  }

  // Joint coverage machinery: inverted holder lists for permissions that
  // appear in multi-permission groupings, then per-grouping pair lists of
  // legal roles that cover the grouping together but not alone.
  std::vector<char> multi_perm(rb.permissions().size(), 0);
  std::vector<char> g_needed(ngroup, 0);
  for (const auto& c : am.constraints()) {
    for (Index a : c.activities) {
      for (Index g : am.groupings_star(a)) {
        if (am.grouping_permissions(g).size() >= 2) {
          g_needed[g] = 1;
          for (Index p : am.grouping_permissions(g)) multi_perm[p] = 1;
        }
      }
    }
  }
  std::vector<std::vector<Index>> holders(rb.permissions().size());
  for (Index r = 0; r < nroles; ++r) {
    if (is_illegal[r]) continue;
    const Bitset& perms = rb.role_permissions(r, o.effective);
    for (auto p = perms.find_first(); p != Bitset::npos;
         p = perms.find_next(p)) {
      if (multi_perm[p]) holders[p].push_back(r);
    }
  }

  std::vector<std::vector<std::uint64_t>> joint(ngroup);
  parallel_for(ngroup, o.threads, [&](std::size_t gi) {
    if (!g_needed[gi]) return;
    Index g = static_cast<Index>(gi);
    auto gp = am.grouping_permissions(g);
    Index pivot = gp[0];
    for (Index p : gp) {
      if (holders[p].size() < holders[pivot].size()) pivot = p;
    }
    std::vector<std::uint64_t> out;
    for (Index x : holders[pivot]) {
      const Bitset& px = rb.role_permissions(x, o.effective);
      std::vector<Index> missing;
      for (Index p : gp) {
        if (!px.test(p)) missing.push_back(p);
      }
      if (missing.empty()) continue;  // x covers the grouping alone
      for (Index y : holders[missing[0]]) {
        if (y == x) continue;
        const Bitset& py = rb.role_permissions(y, o.effective);
        bool fills = true;
        for (Index p : missing) {
          if (!py.test(p)) {
            fills = false;
            break;
          }
        }
        if (!fills) continue;
        bool y_alone = true;
        for (Index p : gp) {
          if (!py.test(p)) {
            y_alone = false;
            break;
          }
        }
        if (y_alone) continue;  // single coverage is handled via covers[]
        out.push_back(pack_pair(x, y));
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    joint[gi] = std::move(out);
  });

  auto joint_union = [&](Index a) {
    std::vector<std::uint64_t> out;
    for (Index g : am.groupings_star(a)) {
      out.insert(out.end(), joint[g].begin(), joint[g].end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  auto pair_covers = [&](Index a, Index x, Index y) {
    if (idx.covered_activities[x].test(a) ||
        idx.covered_activities[y].test(a)) {
      return true;
    }
    const Bitset& px = rb.role_permissions(x, o.effective);
    const Bitset& py = rb.role_permissions(y, o.effective);
    for (Index g : am.groupings_star(a)) {
      bool all = true;
      for (Index p : am.grouping_permissions(g)) {
        if (!px.test(p) && !py.test(p)) {
          all = false;
          break;
        }
      }
      if (all) return true;
    }
    return false;
  };

  auto domain_ok = [&](Index x, Index y) {
    if (!o.domain_mode) return true;
    Bitset perms = rb.role_permissions(x, o.effective);
    perms |= rb.role_permissions(y, o.effective);
    return conflicts_fast(perms, true);
  };

  std::vector<std::vector<std::uint64_t>> found(ncons);
  parallel_for(ncons, o.threads, [&](std::size_t ci) {
    const auto& c = am.constraints()[ci];
    std::vector<std::uint64_t> out;
    if (c.activities.size() == 2) {
      // Threshold is necessarily 2: both activities must be covered.
      Index a = c.activities[0], b = c.activities[1];
      for (Index x : covers[a]) {
        for (Index y : covers[b]) {
          if (x != y && domain_ok(x, y)) out.push_back(pack_pair(x, y));
        }
      }
      for (std::uint64_t k : joint_union(a)) {
        auto [x, y] = unpack_pair(k);
        if (pair_covers(b, x, y) && domain_ok(x, y)) out.push_back(k);
      }
      for (std::uint64_t k : joint_union(b)) {
        auto [x, y] = unpack_pair(k);
        if (pair_covers(a, x, y) && domain_ok(x, y)) out.push_back(k);
      }
    } else {
      // General constraint: pairwise scan over roles touching it.
      std::vector<Index> cand;
      for (Index r = 0; r < nroles; ++r) {
        if (is_illegal[r]) continue;
        bool touches = false;
        for (Index a : c.activities) {
          if (idx.touched_activities[r].test(a) ||
              idx.covered_activities[r].test(a)) {
            touches = true;
            break;
          }
        }
        if (touches) cand.push_back(r);
      }
      const auto n = c.threshold;
      for (std::size_t i = 0; i < cand.size(); ++i) {
        for (std::size_t j = i + 1; j < cand.size(); ++j) {
          Index x = cand[i], y = cand[j];
          int cnt = 0;
          int remaining = static_cast<int>(c.activities.size());
          for (Index a : c.activities) {
            --remaining;
            if (idx.covered_activities[x].test(a) ||
                idx.covered_activities[y].test(a) || pair_covers(a, x, y)) {
              ++cnt;
              if (cnt >= n) break;
            }
            if (cnt + remaining < n) break;
          }
          if (cnt >= n && domain_ok(x, y)) out.push_back(pack_pair(x, y));
        }
      }
    }
    found[ci] = std::move(out);
  });

  std::vector<std::uint64_t> all;
  for (auto& v : found) all.insert(all.end(), v.begin(), v.end());
  return assemble_pairs(std::move(all), illegal, is_illegal, nroles, o);
}

PairResult Engine::enum_perm_pairs(const EnumOptions& o) const {
  const auto& am = p_.acts;
  const auto& rb = p_.rbac;
  const std::size_t nperms = rb.permissions().size();
  const std::size_t nact = am.activities().size();
  const std::size_t ncons = am.constraints().size();

  CheckOptions co;
  co.effective = o.effective;
  co.domain_mode = o.domain_mode;
  std::vector<Index> illegal = illegal_permission_indices(co);
  std::vector<char> is_illegal(nperms, 0);
  for (Index p : illegal) is_illegal[p] = 1;

  if (ncons == 0 || nact == 0) {
    return assemble_pairs({}, illegal, is_illegal, nperms, o);
  }

  // A permission covers an activity on its own only through a singleton
  // grouping; a pair can add coverage only through a two-perm grouping.
  std::vector<Bitset> full(nperms, Bitset(nact));
  std::vector<std::vector<std::uint64_t>> pairs2(nact);
  for (Index g = 0; g < am.groupings().size(); ++g) {
    auto gp = am.grouping_permissions(g);
    if (gp.size() == 1) {
      full[gp[0]] |= am.grouping_unlocks(g);
    } else if (gp.size() == 2) {
      const Bitset& up = am.grouping_unlocks(g);
      for (auto a = up.find_first(); a != Bitset::npos; a = up.find_next(a)) {
        pairs2[a].push_back(pack_pair(gp[0], gp[1]));
      }
    }
  }
  for (auto& v : pairs2) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  std::vector<std::vector<Index>> covers(nact);
  for (Index p = 0; p < nperms; ++p) {
    if (is_illegal[p]) continue;
    for (auto a = full[p].find_first(); a != Bitset::npos;
         a = full[p].find_next(a)) {
      covers[a].push_back(p);
    }
  }

  auto pair_covers = [&](Index a, Index p, Index q) {
    return full[p].test(a) || full[q].test(a) ||
           std::binary_search(pairs2[a].begin(), pairs2[a].end(),
                              pack_pair(p, q));
  };
  auto domain_ok = [&](Index p, Index q) {
    if (!o.domain_mode) return true;
    Bitset perms(nperms);
    perms.set(p);
    perms.set(q);
    return conflicts_fast(perms, true);
  };

  std::vector<std::vector<std::uint64_t>> found(ncons);
  parallel_for(ncons, o.threads, [&](std::size_t ci) {
    const auto& c = am.constraints()[ci];
    std::vector<std::uint64_t> out;
    if (c.activities.size() == 2) {
      Index a = c.activities[0], b = c.activities[1];
      for (Index p : covers[a]) {
        for (Index q : covers[b]) {
          if (p != q && domain_ok(p, q)) out.push_back(pack_pair(p, q));
        }
      }
      auto from_joint = [&](Index src, Index other) {
        for (std::uint64_t k : pairs2[src]) {
          auto [p, q] = unpack_pair(k);
          if (is_illegal[p] || is_illegal[q]) continue;
          if (pair_covers(other, p, q) && domain_ok(p, q)) out.push_back(k);
        }
      };
      from_joint(a, b);
      from_joint(b, a);
    } else {
      std::vector<Index> cand;
      {
        std::set<Index> cs;
        for (Index a : c.activities) {
          for (Index p : covers[a]) cs.insert(p);
          for (std::uint64_t k : pairs2[a]) {
            auto [p, q] = unpack_pair(k);
            if (!is_illegal[p]) cs.insert(p);
            if (!is_illegal[q]) cs.insert(q);
          }
        }
        cand.assign(cs.begin(), cs.end());
      }
      const auto n = c.threshold;
      for (std::size_t i = 0; i < cand.size(); ++i) {
        for (std::size_t j = i + 1; j < cand.size(); ++j) {
          Index p = cand[i], q = cand[j];
          int cnt = 0;
          for (Index a : c.activities) {
            if (pair_covers(a, p, q) && ++cnt >= n) break;
          }
          if (cnt >= n && domain_ok(p, q)) out.push_back(pack_pair(p, q));
        }
      }
    }
    found[ci] = std::move(out);
  });

  std::vector<std::uint64_t> all;
  for (auto& v : found) all.insert(all.end(), v.begin(), v.end());
  return assemble_pairs(std::move(all), illegal, is_illegal, nperms, o);
}

ConflictVerdict Engine::delta_verdict(const Bitset& before,
                                      const Bitset& after,
                                      const CheckOptions& opts) const {
  ConflictVerdict pre = check_perm_bits(before, opts);
  ConflictVerdict post = check_perm_bits(after, opts);
  std::set<std::size_t> already;
  for (const auto& w : pre.witnesses) already.insert(w.constraint);
  ConflictVerdict delta;
  for (auto& w : post.witnesses) {
    if (!already.count(w.constraint)) delta.witnesses.push_back(std::move(w));
  }
  delta.conflicting = !delta.witnesses.empty();
  return delta;
}

ConflictVerdict Engine::whatif_assign(std::string_view user,
                                      std::string_view role,
                                      const CheckOptions& opts) const {
  Index u = p_.rbac.require_user(user);
  Index r = p_.rbac.require_role(role);
  Bitset before = p_.rbac.user_permissions(u, opts.effective);
  Bitset after = before;
  after |= p_.rbac.role_permissions(r, opts.effective);
  return delta_verdict(before, after, opts);
}

ConflictVerdict Engine::whatif_activate(std::string_view session,
                                        std::string_view role,
                                        const CheckOptions& opts) const {
  Index s = p_.rbac.require_session(session);
  Index r = p_.rbac.require_role(role);
  Bitset before = p_.rbac.session_permissions(s, opts.effective);
  Bitset after = before;
  after |= p_.rbac.role_permissions(r, opts.effective);
  return delta_verdict(before, after, opts);
}

AnalysisReport Engine::analyze(const AnalyzeOptions& o) const {
  AnalysisReport rep;
  rep.settings = o;

  CheckOptions co;
  co.effective = o.effective;
  co.domain_mode = o.domain_mode;

  auto ip = illegal_permission_indices(co);
  auto ir = illegal_role_indices(co);
  auto cu = conflicting_user_indices(co);
  rep.illegal_permissions = sorted_names(p_.rbac.permissions(), ip);
  rep.illegal_roles = sorted_names(p_.rbac.roles(), ir);
  rep.conflicting_users = sorted_names(p_.rbac.users(), cu);

  auto first_witness = [&](const Bitset& perms) {
    ConflictVerdict v;
    for (std::size_t ci = 0; ci < p_.acts.constraints().size(); ++ci) {
      append_witnesses(ci, perms, co, v);
      if (v.conflicting) break;
    }
    return v.witnesses.empty() ? Witness{} : std::move(v.witnesses.front());
  };
  auto to_finding = [&](Finding::Kind kind, std::string a, std::string b,
                        const Witness& w) {
    Finding f;
    f.kind = kind;
    f.entity_a = std::move(a);
    f.entity_b = std::move(b);
    f.constraint = w.constraint;
    for (Index act : w.activity_subset) {
      f.activities.push_back(p_.acts.activities().name(act));
    }
    std::sort(f.activities.begin(), f.activities.end());
    if (w.domain_witness) {
      for (Index d : *w.domain_witness) {
        f.domains.push_back(p_.acts.domains().name(d));
      }
      std::sort(f.domains.begin(), f.domains.end());
    }
    return f;
  };

  const std::size_t nperms = p_.rbac.permissions().size();
  for (const auto& id : rep.illegal_permissions) {
    Bitset b(nperms);
    b.set(*p_.rbac.permissions().find(id));
    rep.findings.push_back(to_finding(Finding::Kind::IllegalPermission, id,
                                      "", first_witness(b)));
  }
  for (const auto& id : rep.illegal_roles) {
    rep.findings.push_back(to_finding(
        Finding::Kind::IllegalRole, id, "",
        first_witness(p_.rbac.role_permissions(*p_.rbac.roles().find(id),
                                               o.effective))));
  }
  for (const auto& id : rep.conflicting_users) {
    rep.findings.push_back(to_finding(
        Finding::Kind::ConflictingUser, id, "",
        first_witness(p_.rbac.user_permissions(*p_.rbac.users().find(id),
                                               o.effective))));
  }

  EnumOptions eo;
  eo.effective = o.effective;
  eo.domain_mode = o.domain_mode;
  eo.discard_illegal = o.discard_illegal;
  eo.threads = o.threads;

  auto run_pairs = [&](PairKind kind, bool& listed_flag,
                       std::optional<std::uint64_t>& count_slot) {
    eo.listing = o.discard_illegal;  // legal pairs come for free
    PairResult r = enumerate_conflicting_pairs(kind, eo);
    count_slot = r.count;
    bool want_list = o.list_pairs || r.count <= o.list_cap;
    if (want_list && !r.listed) {
      eo.listing = true;
      r = enumerate_conflicting_pairs(kind, eo);
    }
    if (!want_list) return;
    listed_flag = true;
    const bool roles = kind == PairKind::Roles;
    const SymbolTable& tab = roles ? p_.rbac.roles() : p_.rbac.permissions();
    std::vector<Finding> fs;
    for (auto [x, y] : r.pairs) {
      std::string a = tab.name(x), b = tab.name(y);
      if (b < a) std::swap(a, b);
      Bitset perms = roles ? p_.rbac.role_permissions(x, o.effective)
                           : Bitset(nperms);
      if (roles) {
        perms |= p_.rbac.role_permissions(y, o.effective);
      } else {
        perms.set(x);
        perms.set(y);
      }
      fs.push_back(to_finding(roles ? Finding::Kind::RolePair
                                    : Finding::Kind::PermissionPair,
                              std::move(a), std::move(b),
                              first_witness(perms)));
    }
    std::sort(fs.begin(), fs.end(), [](const Finding& l, const Finding& r2) {
      return std::tie(l.entity_a, l.entity_b) <
             std::tie(r2.entity_a, r2.entity_b);
    });
    for (auto& f : fs) rep.findings.push_back(std::move(f));
  };

  if (o.pairs_roles) {
    run_pairs(PairKind::Roles, rep.role_pairs_listed, rep.role_pair_count);
  }
  if (o.pairs_permissions) {
    run_pairs(PairKind::Permissions, rep.permission_pairs_listed,
              rep.permission_pair_count);
  }
  return rep;
}

}  // namespace sod
