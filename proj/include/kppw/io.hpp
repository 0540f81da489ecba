#pragma once

// Serialization of profiles, branches and summaries: CSV at 15 significant
// digits, JSON sidecars embedding the resolved configuration, and an optional
// SVG line plot.  All output is deterministic for a given input.

#include <string>

#include <json.hpp>

#include "kppw/charroots.hpp"
#include "kppw/continuation.hpp"
#include "kppw/mesh.hpp"
#include "kppw/quasilinear.hpp"

namespace kppw {

/// Locale-independent shortest-faithful rendering at 15 significant digits.
std::string format_number(double v);

nlohmann::json spec_to_json(const ProblemSpec& spec);
nlohmann::json catalog_to_json();
nlohmann::json char_summary_to_json(const CharSummary& s);
nlohmann::json bundles_to_json(const BundleSummary& b);
nlohmann::json branch_to_json(const ContinuationBranch& b);

/// CSV with header y,f,f1,...,f{m-1}.
std::string profile_csv(const WaveProfile& p);
/// CSV with header y,F,F1,...,F10.
std::string quasi_csv(const QuasiProfile& p);

nlohmann::json profile_sidecar(const WaveProfile& p, const nlohmann::json& config);
nlohmann::json quasi_sidecar(const QuasiProfile& p, const nlohmann::json& config);

/// Minimal standalone SVG line plot of column 0 against y.
std::string profile_svg(const std::vector<double>& y, const std::vector<double>& f,
                        const std::string& title);

void write_file(const std::string& path, const std::string& contents);

} // namespace kppw
