#include "sod/report.hpp"

#include <sstream>

namespace sod {

namespace {

std::string csv_field(std::string_view s) {
  bool needs_quotes = s.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += v[i];
  }
  return out;
}

void render_finding_suffix(std::ostringstream& os, const Finding& f) {
  os << "  (constraint " << f.constraint + 1 << "; activities "
     << join(f.activities);
  if (!f.domains.empty()) os << "; domains " << join(f.domains);
  os << ")";
}

}  // namespace

std::string_view finding_kind_name(Finding::Kind kind) {
  switch (kind) {
    case Finding::Kind::IllegalPermission:
      return "illegal_permission";
    case Finding::Kind::IllegalRole:
      return "illegal_role";
    case Finding::Kind::ConflictingUser:
      return "conflicting_user";
    case Finding::Kind::RolePair:
      return "conflicting_role_pair";
    case Finding::Kind::PermissionPair:
      return "conflicting_permission_pair";
  }
  return "unknown";
}

std::string render_text(const AnalysisReport& rep) {
  std::ostringstream os;
  const auto& o = rep.settings;
  os << "permissions: " << (o.effective ? "effective" : "direct") << '\n';
  os << "domain mode: " << (o.domain_mode ? "on" : "off") << '\n';

  auto section = [&](std::string_view title,
                     const std::vector<std::string>& ids, Finding::Kind kind) {
    os << title << ": " << ids.size() << '\n';
    for (const auto& f : rep.findings) {
      if (f.kind != kind) continue;
      os << "  " << f.entity_a;
      render_finding_suffix(os, f);
      os << '\n';
    }
  };
  section("illegal permissions", rep.illegal_permissions,
          Finding::Kind::IllegalPermission);
  section("illegal roles", rep.illegal_roles, Finding::Kind::IllegalRole);
  section("conflicting users", rep.conflicting_users,
          Finding::Kind::ConflictingUser);

  auto pair_section = [&](std::string_view title,
                          const std::optional<std::uint64_t>& count,
                          bool listed, Finding::Kind kind) {
    if (!count) return;
    os << title << ": " << *count;
    if (!listed) os << " (not listed)";
    os << '\n';
    if (!listed) return;
    for (const auto& f : rep.findings) {
      if (f.kind != kind) continue;
      os << "  " << f.entity_a << ' ' << f.entity_b;
      render_finding_suffix(os, f);
      os << '\n';
    }
  };
  pair_section("conflicting role pairs", rep.role_pair_count,
               rep.role_pairs_listed, Finding::Kind::RolePair);
  pair_section("conflicting permission pairs", rep.permission_pair_count,
               rep.permission_pairs_listed, Finding::Kind::PermissionPair);

  if (!rep.has_findings()) os << "no conflicts found\n";
  return os.str();
}

std::string render_csv(const AnalysisReport& rep) {
  std::ostringstream os;
  os << "kind,entity_a,entity_b,constraint,activities,domains\n";
  for (const auto& f : rep.findings) {
    os << finding_kind_name(f.kind) << ',' << csv_field(f.entity_a) << ','
       << csv_field(f.entity_b) << ',' << f.constraint + 1 << ','
       << csv_field(join(f.activities)) << ',' << csv_field(join(f.domains))
       << "\n";
  }
  return os.str();
}

std::string render_verdict(const Policy& policy, const ConflictVerdict& v) {
  std::ostringstream os;
  if (!v.conflicting) {
    os << "no conflict\n";
    return os.str();
  }
  const auto& am = policy.acts;
  os << "conflict (" << v.witnesses.size()
     << (v.witnesses.size() == 1 ? " witness)" : " witnesses)") << '\n';
  for (const auto& w : v.witnesses) {
    os << "  constraint " << w.constraint + 1 << ":";
    for (auto [a, g] : w.chosen_groupings) {
      os << ' ' << am.activities().name(a) << '[' << am.groupings().name(g)
         << ']';
    }
    if (w.domain_witness) {
      os << "; domains";
      for (Index d : *w.domain_witness) os << ' ' << am.domains().name(d);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace sod
