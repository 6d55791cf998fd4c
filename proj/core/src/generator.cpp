#include "sod/generator.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "sod/serialize.hpp"

namespace sod::testkit {

namespace {

// SplitMix64 (Steele, Lea, Flood 2014); fixed so generated instances are
// reproducible across platforms and implementations.
struct SplitMix64 {
  std::uint64_t state;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
};

std::string num_id(char prefix, std::size_t i) {
  return prefix + std::to_string(i);
}

[[noreturn]] void inconsistent(const std::string& detail) {
  throw Error(ErrorKind::InconsistentParams, "inconsistent params: " + detail);
}

std::vector<std::size_t> pick_distinct(SplitMix64& rng, std::size_t k,
                                       std::size_t n) {
  // k distinct values in [1, n], in draw order
  std::vector<std::size_t> out;
  std::set<std::size_t> seen;
  while (out.size() < k) {
    std::size_t v = 1 + static_cast<std::size_t>(rng.below(n));
    if (seen.insert(v).second) out.push_back(v);
  }
  return out;
}

}  // namespace

Declarations generate_declarations(const GeneratorParams& p,
                                   PlantedConflicts* planted) {
  const std::size_t K = p.plant_conflicts;
  if (p.perms < 3 * K) inconsistent("need 3 permissions per planted conflict");
  if (p.roles < 2 * K) inconsistent("need 2 roles per planted conflict");
  if (p.activities < 4 * K) {
    inconsistent("need 4 activities per planted conflict");
  }
  if (p.groupings < 4 * K) {
    inconsistent("need 4 groupings per planted conflict");
  }
  if (p.constraints < 2 * K) {
    inconsistent("need 2 constraints per planted conflict");
  }

  const std::size_t noise_perms = p.perms - 3 * K;
  const std::size_t noise_roles = p.roles - 2 * K;
  const std::size_t noise_acts = p.activities - 4 * K;
  const std::size_t noise_groupings = p.groupings - 4 * K;
  const std::size_t noise_cons = p.constraints - 2 * K;

  if (p.grouping_size_min < 1 || p.grouping_size_min > p.grouping_size_max) {
    inconsistent("grouping size range is empty");
  }
  if (noise_groupings > 0 && noise_perms < p.grouping_size_max) {
    inconsistent("grouping size exceeds the noise permission count");
  }
  if (noise_groupings > 0 && noise_acts == 0) {
    inconsistent("groupings need at least one non-planted activity");
  }
  if (noise_cons > 0) {
    if (p.activities_per_constraint < 2) {
      inconsistent("constraints need at least 2 activities");
    }
    if (noise_acts < p.activities_per_constraint) {
      inconsistent("constraint width exceeds the noise activity count");
    }
  }
  if (p.users > 0 && p.ua_per_user > noise_roles) {
    inconsistent("ua_per_user exceeds the noise role count");
  }
  if (noise_roles > 0 && p.pa_per_role > noise_perms) {
    inconsistent("pa_per_role exceeds the noise permission count");
  }
  if (p.domains > 0 && p.perms < p.domains) {
    inconsistent("more domains than objects to partition");
  }
  if (p.objects_per_domain > 0 &&
      p.domains * p.objects_per_domain > p.perms) {
    inconsistent("objects_per_domain exceeds the object count");
  }
  if (p.sessions > 0 && (p.users == 0 || p.ua_per_user == 0)) {
    inconsistent("sessions need users with assigned roles");
  }

  SplitMix64 rng{p.seed};
  Declarations d;

  // Permissions: one object per permission; domains partition the objects.
  for (std::size_t i = 1; i <= p.perms; ++i) {
    d.perms.push_back({num_id('p', i), num_id('o', i), "op", 0});
  }
  for (std::size_t i = 1; i <= p.users; ++i) {
    d.users.push_back({num_id('u', i), 0});
  }
  for (std::size_t i = 1; i <= p.roles; ++i) {
    d.roles.push_back({num_id('r', i), 0});
  }

  std::vector<std::vector<std::size_t>> user_roles(p.users);
  for (std::size_t i = 1; i <= p.users; ++i) {
    if (p.ua_per_user == 0 || noise_roles == 0) break;
    for (std::size_t r : pick_distinct(rng, p.ua_per_user, noise_roles)) {
      d.ua.push_back({num_id('u', i), num_id('r', r), 0});
      user_roles[i - 1].push_back(r);
    }
  }
  for (std::size_t i = 1; i <= noise_roles; ++i) {
    if (p.pa_per_role == 0 || noise_perms == 0) break;
    for (std::size_t q : pick_distinct(rng, p.pa_per_role, noise_perms)) {
      d.pa.push_back({num_id('r', i), num_id('p', q), 0});
    }
  }
  for (std::size_t i = 2; i <= noise_roles; ++i) {
    if (rng.below(1000) < p.rh_edge_permille) {
      std::size_t junior = 1 + static_cast<std::size_t>(rng.below(i - 1));
      d.rh.push_back({num_id('r', i), num_id('r', junior), 0});
    }
  }

  // Noise activities form one tree rooted at a1; planted activities are
  // separate top-level leaves so planted roles can never become illegal
  // through grouping inheritance.
  for (std::size_t i = 1; i <= noise_acts; ++i) {
    ActivityDecl a;
    a.id = num_id('a', i);
    if (i > 1) a.parent = num_id('a', 1 + rng.below(i - 1));
    d.activities.push_back(std::move(a));
  }
  for (std::size_t i = noise_acts + 1; i <= p.activities; ++i) {
    d.activities.push_back({num_id('a', i), "", 0});
  }

  for (std::size_t i = 1; i <= noise_groupings; ++i) {
    GroupingDecl g;
    g.id = num_id('g', i);
    g.activity = num_id('a', 1 + rng.below(noise_acts));
    std::size_t size =
        p.grouping_size_min +
        rng.below(p.grouping_size_max - p.grouping_size_min + 1);
    for (std::size_t q : pick_distinct(rng, size, noise_perms)) {
      g.perms.push_back(num_id('p', q));
    }
    d.groupings.push_back(std::move(g));
  }

  if (p.domains > 0) {
    std::vector<DomainDecl> doms(p.domains);
    for (std::size_t i = 1; i <= p.domains; ++i) doms[i - 1].id = num_id('d', i);
    if (p.objects_per_domain > 0) {
      for (std::size_t i = 0; i < p.domains; ++i) {
        for (std::size_t j = 1; j <= p.objects_per_domain; ++j) {
          doms[i].objects.push_back(
              num_id('o', i * p.objects_per_domain + j));
        }
      }
    } else {
      for (std::size_t i = 1; i <= p.perms; ++i) {
        doms[(i - 1) * p.domains / p.perms].objects.push_back(num_id('o', i));
      }
    }
    d.domains = std::move(doms);
  }

  for (std::size_t i = 0; i < noise_cons; ++i) {
    SodDecl s;
    s.threshold = 2;
    for (std::size_t a :
         pick_distinct(rng, p.activities_per_constraint, noise_acts)) {
      s.activities.push_back(num_id('a', a));
    }
    d.sods.push_back(std::move(s));
  }

  // Planted conflicts. Per conflict k: permission q is attached alone to
  // two constrained activities (illegal on its own), and permissions p1/p2
  // land in two single-permission roles that only conflict together.
  for (std::size_t k = 0; k < K; ++k) {
    std::size_t q = noise_perms + 3 * k + 1;
    std::size_t p1 = q + 1, p2 = q + 2;
    std::size_t ra = noise_roles + 2 * k + 1, rb = ra + 1;
    std::size_t x1 = noise_acts + 4 * k + 1;
    std::size_t x2 = x1 + 1, y1 = x1 + 2, y2 = x1 + 3;
    std::size_t h1 = noise_groupings + 4 * k + 1;

    d.groupings.push_back({num_id('g', h1), num_id('a', x1),
                           {num_id('p', q)}, 0});
    d.groupings.push_back({num_id('g', h1 + 1), num_id('a', x2),
                           {num_id('p', q)}, 0});
    d.sods.push_back({2, {num_id('a', x1), num_id('a', x2)}, 0});

    d.pa.push_back({num_id('r', ra), num_id('p', p1), 0});
    d.pa.push_back({num_id('r', rb), num_id('p', p2), 0});
    d.groupings.push_back({num_id('g', h1 + 2), num_id('a', y1),
                           {num_id('p', p1)}, 0});
    d.groupings.push_back({num_id('g', h1 + 3), num_id('a', y2),
                           {num_id('p', p2)}, 0});
    d.sods.push_back({2, {num_id('a', y1), num_id('a', y2)}, 0});

    if (planted) {
      planted->illegal_permissions.push_back(num_id('p', q));
      planted->role_pairs.emplace_back(num_id('r', ra), num_id('r', rb));
    }
  }

  for (std::size_t i = 1; i <= p.sessions; ++i) {
    SessionDecl s;
    s.id = num_id('s', i);
    std::size_t u = 1 + static_cast<std::size_t>(rng.below(p.users));
    s.user = num_id('u', u);
    const auto& roles = user_roles[u - 1];
    if (!roles.empty()) {
      std::size_t count = 1 + static_cast<std::size_t>(rng.below(roles.size()));
      std::size_t offset = static_cast<std::size_t>(rng.below(roles.size()));
      for (std::size_t j = 0; j < count; ++j) {
        s.roles.push_back(num_id('r', roles[(offset + j) % roles.size()]));
      }
    }
    d.sessions.push_back(std::move(s));
  }

  return d;
}

std::string generate_instance(const GeneratorParams& p,
                              PlantedConflicts* planted) {
  PlantedConflicts local;
  Declarations d = generate_declarations(p, &local);

  std::ostringstream os;
  os << "# generated instance: seed=" << p.seed << " users=" << p.users
     << " roles=" << p.roles << " perms=" << p.perms
     << " activities=" << p.activities << " groupings=" << p.groupings
     << " domains=" << p.domains << " constraints=" << p.constraints
     << " sessions=" << p.sessions << " plant-conflicts=" << p.plant_conflicts
     << '\n';
  for (const auto& q : local.illegal_permissions) {
    os << "# planted illegal permission: " << q << '\n';
  }
  for (const auto& [a, b] : local.role_pairs) {
    os << "# planted conflicting role pair: " << a << ' ' << b << '\n';
  }
  os << serialize_model(d);

  if (planted) *planted = std::move(local);
  return os.str();
}

}  // namespace sod::testkit
