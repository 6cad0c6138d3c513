#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "optclean/model.hpp"
#include "optclean/outlier_detector.hpp"

namespace optclean {

struct ReadOptions {
    char delimiter = ',';
    /// false: throw ValidationError on the first bad row (fail-fast).
    /// true: skip bad rows and return them in ReadResult::skipped.
    bool collect_errors = false;
};

struct ReadResult {
    std::vector<OptionQuote> quotes;
    std::vector<RowIssue> skipped;  // only populated with collect_errors
};

/// Reads a quote table. Expected header:
///   type,strike,maturity_days,price,open_interest
/// `type` is call/put case-insensitive. Data-row indices become quote ids,
/// counting skipped rows, so ids always name file positions.
/// Throws ParseError on structural problems (missing header, bad field count,
/// unparseable numbers) and ValidationError per ReadOptions on invariant
/// violations.
ReadResult read_quotes(const std::filesystem::path& path, const ReadOptions& options = {});

/// Writes quotes in the same schema read_quotes accepts; doubles use
/// shortest round-trip formatting so write-then-read reproduces every field.
void write_clean(const std::filesystem::path& path, std::span<const OptionQuote> quotes,
                 char delimiter = ',');

/// Report document (JSON): config echo, per-type counts, per-stage counts,
/// group warnings and one entry per removal with its diagnostics.
std::string report_to_json(const CleaningReport& report,
                           std::span<const RemovalRecord> removals);

void write_report(const std::filesystem::path& path, const CleaningReport& report,
                  std::span<const RemovalRecord> removals);

/// Per-group plot data under `dir`, one CSV per processed group named
/// <type>_<maturity>d.csv with columns strike,price,fitted,residual,c_hat.
void write_plot_data(const std::filesystem::path& dir,
                     std::span<const GroupOutcome> outcomes);

/// ln(P_t / P_{t-1}) for t = 2..n. Throws TooShort when fewer than two
/// prices, NonPositivePrice when any price <= 0.
std::vector<double> compute_log_returns(std::span<const double> prices);

/// Reads a time-ordered price series: delimited text with a header naming a
/// `price` column (other columns ignored).
std::vector<double> read_price_series(const std::filesystem::path& path,
                                      char delimiter = ',');

/// Writes one `log_return` column.
void write_log_returns(const std::filesystem::path& path, std::span<const double> returns);

}  // namespace optclean
