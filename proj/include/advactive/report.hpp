#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advactive/harness.hpp"

namespace advactive {

/// Fixed notation with six fractional digits, independent of the C locale.
std::string format_fixed(double value, int digits = 6);

std::string config_to_json(const ExperimentConfig& config);
/// Throws ConfigError on missing or malformed fields.
ExperimentConfig config_from_json(std::string_view text);

/// `query,mean_test_error,trial_0,...` plus one row per query index.
std::string curve_csv(const ErrorCurve& curve);
std::string trial_csv(const TrialRecord& record);
std::string metadata_json(const ExperimentResult& result);

/// Writes curve.csv, meta.json and trial_<k>.csv into `dir`, creating it if needed.
/// Throws Error naming the path on I/O failure.
void write_results(const ExperimentResult& result, const std::filesystem::path& dir);

/// Short legend label for a strategy, e.g. "uncertainty" or "mixed-meu p=0.25".
std::string strategy_label(const StrategyConfig& strategy);

struct NamedCurve {
    std::string name;
    std::vector<double> values;
};

/// Static SVG line chart: x = query number, y = mean test error, one polyline per curve.
/// Throws ValidationError on an empty list.
std::string render_svg(std::span<const NamedCurve> curves);

/// Reads curve.csv (and the strategy name from meta.json when present) from a result directory.
NamedCurve load_curve(const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace advactive
