#pragma once

// End-to-end runs of the worked examples and the single-check dispatcher
// behind the command-line front end.

#include <string>
#include <vector>

#include "twistforge/report.hpp"

namespace twistforge {

/// which in {p2, p3, p4, family}. params: {"m"} for p2/p3/p4 (m <= 4; p3 also
/// takes "bound"), {"n", "p", "a", "m"} for family (n <= 4, p in {3, 5}).
/// Hints from an earlier report replace the generator and gamma searches.
RunReport verify_paper_example(const std::string& which, const json& params, const json& hints = json::object());

/// check in {smooth, cocycle, covariance, twist, reduce, norm-obstruction,
/// conditions}; docs are the parsed input files in order, flags the command
/// line options ("b", "d", "n", "field_kind", "rational_point", "seed").
RunReport run_check(const std::string& check, const std::vector<json>& docs, const json& flags);

/// Re-runs a report from its embedded inputs and hints and compares verdicts
/// certificate by certificate.
RunReport recheck(const json& report);

}  // namespace twistforge
