#pragma once

#include <string>
#include <string_view>

#include "sod/engine.hpp"

namespace sod {

std::string_view finding_kind_name(Finding::Kind kind);

/// Human-readable rendering of an analysis report. Deterministic bytes for
/// a given report.
std::string render_text(const AnalysisReport& report);

/// CSV rendering, one row per finding. Header:
///   kind,entity_a,entity_b,constraint,activities,domains
/// Constraint indices are 1-based; list fields are comma-joined and quoted.
std::string render_csv(const AnalysisReport& report);

/// Human-readable rendering of a single check verdict (session checks and
/// what-if queries).
std::string render_verdict(const Policy& policy, const ConflictVerdict& v);

}  // namespace sod
