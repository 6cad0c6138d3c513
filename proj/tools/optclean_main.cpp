#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "optclean/arbitrage_filter.hpp"
#include "optclean/dedup.hpp"
#include "optclean/ingest.hpp"
#include "optclean/outlier_detector.hpp"
#include "optclean/pipeline.hpp"

namespace {

using namespace optclean;

struct CommonArgs {
    std::string input;
    std::string output;
    std::string report;
    std::string plot_dir;
    double spot = 0.0;
    double rate = 0.0;
    double dividend_yield = 0.0;
    CleaningConfig config;
    bool skip_bad_rows = false;
};

void add_io_flags(CLI::App& cmd, CommonArgs& args, bool output_required = true) {
    cmd.add_option("--input", args.input, "Input file")->required();
    auto* output = cmd.add_option("--output", args.output, "Output file");
    if (output_required) output->required();
    cmd.add_flag("--skip-bad-rows", args.skip_bad_rows,
                 "Skip rows failing validation instead of aborting");
}

void add_market_flags(CLI::App& cmd, CommonArgs& args) {
    cmd.add_option("--spot", args.spot, "Underlying spot price")->required();
    cmd.add_option("--rate", args.rate, "Continuously compounded risk-free rate, decimal p.a.")
        ->required();
    cmd.add_option("--dividend-yield", args.dividend_yield,
                   "Dividend yield, decimal p.a. (must be 0)")
        ->default_val(0.0);
    cmd.add_option("--day-count", args.config.day_count, "Days per year for annualizing")
        ->default_val(365.0);
}

void add_outlier_flags(CLI::App& cmd, CommonArgs& args) {
    cmd.add_option("--alpha", args.config.alpha,
                   "Band level: probability a clean group shows any flag")
        ->default_val(0.01);
    cmd.add_option("--min-group-size", args.config.min_group_size,
                   "Smallest maturity group the outlier stage processes")
        ->default_val(5);
    cmd.add_option("--plot-data", args.plot_dir,
                   "Directory for per-group strike/price/fitted/residual files");
}

std::vector<OptionQuote> load_quotes(const CommonArgs& args) {
    ReadOptions options;
    options.collect_errors = args.skip_bad_rows;
    ReadResult result = read_quotes(args.input, options);
    for (const RowIssue& issue : result.skipped)
        std::cerr << args.input << ':' << issue.line << ": skipped: " << issue.message
                  << '\n';
    return std::move(result.quotes);
}

void maybe_write_report(const CommonArgs& args, const CleaningReport& report,
                        std::span<const RemovalRecord> removals) {
    if (!args.report.empty()) write_report(args.report, report, removals);
}

int run_clean(const CommonArgs& args) {
    const MarketContext ctx(args.spot, args.rate, args.dividend_yield);
    const std::vector<OptionQuote> quotes = load_quotes(args);
    PipelineResult result = run_pipeline(quotes, ctx, args.config);
    write_clean(args.output, result.clean);
    maybe_write_report(args, result.report, result.removals);
    if (!args.plot_dir.empty()) write_plot_data(args.plot_dir, result.group_outcomes);
    return 0;
}

int run_bounds(const CommonArgs& args) {
    const MarketContext ctx(args.spot, args.rate, args.dividend_yield);
    const std::vector<OptionQuote> quotes = load_quotes(args);
    ArbitrageFilterResult result = filter_arbitrage(quotes, ctx, args.config);
    write_clean(args.output, result.kept);
    maybe_write_report(args, make_report(quotes, result.removed, args.config, ctx),
                       result.removed);
    return 0;
}

int run_outliers(const CommonArgs& args) {
    const std::vector<OptionQuote> quotes = load_quotes(args);
    OutlierStageResult result = run_outlier_stage(quotes, args.config);
    write_clean(args.output, result.kept);
    if (!args.report.empty()) {
        CleaningReport report = make_report(quotes, result.removed, args.config);
        for (const GroupOutcome& outcome : result.outcomes)
            if (outcome.skip)
                report.warnings.push_back(GroupWarning{
                    outcome.group.option_type, outcome.group.maturity_days,
                    static_cast<std::int64_t>(outcome.group.quotes.size()), *outcome.skip});
        write_report(args.report, report, result.removed);
    }
    if (!args.plot_dir.empty()) write_plot_data(args.plot_dir, result.outcomes);
    return 0;
}

int run_dedup(const CommonArgs& args) {
    const std::vector<OptionQuote> quotes = load_quotes(args);
    DedupResult result = resolve_duplicates(quotes);
    write_clean(args.output, result.kept);
    maybe_write_report(args, make_report(quotes, result.removed, args.config), result.removed);
    return 0;
}

int run_returns(const CommonArgs& args) {
    const std::vector<double> prices = read_price_series(args.input);
    write_log_returns(args.output, compute_log_returns(prices));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cleans recorded option-price datasets: no-arbitrage bound filtering, "
                 "per-maturity regression outlier removal, duplicate resolution."};
    app.require_subcommand(1);

    CommonArgs args;

    CLI::App* clean = app.add_subcommand("clean", "Run all three cleaning stages");
    add_io_flags(*clean, args);
    add_market_flags(*clean, args);
    add_outlier_flags(*clean, args);
    clean->add_option("--report", args.report, "Write a JSON cleaning report");

    CLI::App* bounds = app.add_subcommand("bounds", "Stage 1 only: no-arbitrage bound filter");
    add_io_flags(*bounds, args);
    add_market_flags(*bounds, args);
    bounds->add_option("--report", args.report, "Write a JSON cleaning report");

    CLI::App* outliers = app.add_subcommand("outliers", "Stage 2 only: regression outliers");
    add_io_flags(*outliers, args);
    add_outlier_flags(*outliers, args);
    outliers->add_option("--report", args.report, "Write a JSON cleaning report");

    CLI::App* dedup = app.add_subcommand("dedup", "Stage 3 only: duplicate resolution");
    add_io_flags(*dedup, args);
    dedup->add_option("--report", args.report, "Write a JSON cleaning report");

    CLI::App* returns = app.add_subcommand("returns", "Log returns of a price series");
    add_io_flags(*returns, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 2;
    }

    try {
        if (clean->parsed()) return run_clean(args);
        if (bounds->parsed()) return run_bounds(args);
        if (outliers->parsed()) return run_outliers(args);
        if (dedup->parsed()) return run_dedup(args);
        if (returns->parsed()) return run_returns(args);
    } catch (const optclean::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
