#pragma once

#include <string>

#include "bochner/verification.hpp"

namespace bochner {

/// JSON with shortest round-trip floats; non-finite residuals become null.
std::string report_to_json(const SuiteReport& r, int indent = 2);
SuiteReport report_from_json(const std::string& text);

/// The "scenarios" array alone (no metadata), for byte comparisons.
std::string check_bodies_json(const SuiteReport& r);

std::string report_to_text(const SuiteReport& r);

/// Convention notes recorded in every report header.
std::map<std::string, std::string> convention_notes();

}  // namespace bochner
