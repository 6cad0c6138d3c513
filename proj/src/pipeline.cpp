#include "optclean/pipeline.hpp"

#include <string>
#include <unordered_map>
#include <unordered_set>

#include "optclean/arbitrage_filter.hpp"
#include "optclean/dedup.hpp"

namespace optclean {

CleaningReport make_report(std::span<const OptionQuote> input,
                           std::span<const RemovalRecord> removals,
                           const CleaningConfig& config,
                           std::optional<MarketContext> market) {
    CleaningReport report;
    report.config = config;
    report.market = std::move(market);

    std::unordered_map<std::int64_t, OptionType> type_of;
    for (const OptionQuote& quote : input) {
        type_of.emplace(quote.id, quote.option_type);
        report.for_type(quote.option_type).input_count += 1;
    }
    for (const RemovalRecord& record : removals) {
        StageCounts& counts = report.for_type(type_of.at(record.quote_id)).removed;
        switch (record.stage) {
            case RemovalStage::ArbitrageBound: counts.arbitrage += 1; break;
            case RemovalStage::Outlier: counts.outlier += 1; break;
            case RemovalStage::DuplicateMonotonicity: counts.duplicate_monotonicity += 1; break;
            case RemovalStage::DuplicateOpenInterest: counts.duplicate_open_interest += 1; break;
        }
    }
    for (TypeReport* type_report : {&report.calls, &report.puts}) {
        type_report->output_count = type_report->input_count - type_report->removed.total();
        type_report->removed_fraction =
            type_report->input_count == 0
                ? 0.0
                : static_cast<double>(type_report->removed.total()) /
                      static_cast<double>(type_report->input_count);
    }
    return report;
}

PipelineResult run_pipeline(std::span<const OptionQuote> quotes,
                            const MarketContext& ctx, const CleaningConfig& config) {
    validate_config(config);
    {
        std::unordered_set<std::int64_t> seen;
        for (const OptionQuote& quote : quotes) {
            validate_quote(quote);
            if (!seen.insert(quote.id).second)
                throw Error("pipeline: duplicate quote id " + std::to_string(quote.id));
        }
    }

    PipelineResult result;

    ArbitrageFilterResult stage1 = filter_arbitrage(quotes, ctx, config);
    result.removals = std::move(stage1.removed);

    OutlierStageResult stage2 = run_outlier_stage(stage1.kept, config);
    for (RemovalRecord& record : stage2.removed) result.removals.push_back(std::move(record));

    DedupResult stage3 = resolve_duplicates(stage2.kept);
    for (RemovalRecord& record : stage3.removed) result.removals.push_back(std::move(record));

    result.clean = std::move(stage3.kept);
    result.report = make_report(quotes, result.removals, config, ctx);
    for (GroupOutcome& outcome : stage2.outcomes) {
        if (outcome.skip)
            result.report.warnings.push_back(GroupWarning{
                outcome.group.option_type, outcome.group.maturity_days,
                static_cast<std::int64_t>(outcome.group.quotes.size()), *outcome.skip});
        result.group_outcomes.push_back(std::move(outcome));
    }
    return result;
}

}  // namespace optclean
