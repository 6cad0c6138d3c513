#pragma once

#include <span>
#include <vector>

#include "optclean/model.hpp"
#include "optclean/outlier_detector.hpp"

namespace optclean {

struct PipelineResult {
    std::vector<OptionQuote> clean;
    CleaningReport report;
    std::vector<RemovalRecord> removals;
    std::vector<GroupOutcome> group_outcomes;  // stage-2 diagnostics, for plot data
};

/// Runs the three stages in their fixed order — arbitrage bounds, per-group
/// outlier detection, duplicate resolution — and reconciles the counts.
/// Calls and puts travel together but never mix within a group computation.
/// Deterministic for fixed inputs; hard-fails only on malformed input.
PipelineResult run_pipeline(std::span<const OptionQuote> quotes,
                            const MarketContext& ctx,
                            const CleaningConfig& config);

/// Tallies removals against the input into a report. input = output +
/// removals holds per type by construction.
CleaningReport make_report(std::span<const OptionQuote> input,
                           std::span<const RemovalRecord> removals,
                           const CleaningConfig& config,
                           std::optional<MarketContext> market = std::nullopt);

}  // namespace optclean
