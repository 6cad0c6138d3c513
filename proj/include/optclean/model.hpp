#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "optclean/errors.hpp"

namespace optclean {

enum class OptionType { Call, Put };

std::string_view to_string(OptionType type) noexcept;

/// Parses "call"/"put" (case-insensitive). Returns nullopt on anything else.
std::optional<OptionType> option_type_from_string(std::string_view text) noexcept;

/// One recorded option row. `id` is the 0-based data-row index assigned at
/// ingestion and is the quote's identity in removal records and reports.
struct OptionQuote {
    std::int64_t id = 0;
    OptionType option_type = OptionType::Call;
    double strike = 0.0;
    int maturity_days = 0;
    double price = 0.0;
    std::int64_t open_interest = 0;
};

/// Checks field invariants: strike >= 0, price >= 0, maturity_days > 0,
/// open_interest >= 0. Returns the quote unchanged on success.
const OptionQuote& validate_quote(const OptionQuote& quote);

/// Spot price and continuously compounded risk-free rate shared by a dataset.
/// The bound filters assume no dividends, so a nonzero yield is rejected here.
class MarketContext {
public:
    MarketContext(double spot, double rate, double dividend_yield = 0.0);

    double spot() const noexcept { return spot_; }
    double rate() const noexcept { return rate_; }
    double dividend_yield() const noexcept { return dividend_yield_; }

private:
    double spot_;
    double rate_;
    double dividend_yield_;
};

/// Knobs of the cleaning procedure. Defaults: alpha 0.01, quadratic fit,
/// groups below 5 quotes skipped, ACT/365 day count.
struct CleaningConfig {
    double alpha = 0.01;
    int poly_degree = 2;
    int min_group_size = 5;
    double day_count = 365.0;
};

/// Throws Error unless 0 < alpha < 1, poly_degree >= 1,
/// min_group_size >= poly_degree + 2 and day_count > 0.
void validate_config(const CleaningConfig& config);

/// Annualizes a maturity recorded in days.
double years_to_maturity(int maturity_days, double day_count);

enum class RemovalStage {
    ArbitrageBound,
    Outlier,
    DuplicateMonotonicity,
    DuplicateOpenInterest,
};

std::string_view to_string(RemovalStage stage) noexcept;

enum class BoundSide { Lower, Upper };

/// Price fell outside the no-arbitrage interval.
struct BoundViolationDetail {
    BoundSide side = BoundSide::Lower;
    double bound_value = 0.0;
    double price = 0.0;
};

/// Residual left the simultaneous confidence band [-c_hat, c_hat].
struct OutlierDetail {
    double residual = 0.0;
    double c_hat = 0.0;
};

/// Duplicated quote broke strike monotonicity against a neighbor strike.
struct MonotonicityDetail {
    std::int64_t neighbor_id = 0;
    double neighbor_strike = 0.0;
    double neighbor_price = 0.0;
    bool against_smaller_strike = false;
};

/// Lost the open-interest tie-break within its duplicate set.
struct OpenInterestDetail {
    std::int64_t kept_id = 0;
    std::int64_t kept_open_interest = 0;
};

using RemovalDetail = std::variant<BoundViolationDetail, OutlierDetail,
                                   MonotonicityDetail, OpenInterestDetail>;

/// Why one quote left the dataset. Every removed quote has exactly one.
struct RemovalRecord {
    std::int64_t quote_id = 0;
    RemovalStage stage = RemovalStage::ArbitrageBound;
    RemovalDetail detail;

    std::string reason() const;
};

struct StageCounts {
    std::int64_t arbitrage = 0;
    std::int64_t outlier = 0;
    std::int64_t duplicate_monotonicity = 0;
    std::int64_t duplicate_open_interest = 0;

    std::int64_t total() const noexcept {
        return arbitrage + outlier + duplicate_monotonicity + duplicate_open_interest;
    }
};

/// Per-option-type accounting. input = output + removed.total() always holds.
struct TypeReport {
    std::int64_t input_count = 0;
    StageCounts removed;
    std::int64_t output_count = 0;
    double removed_fraction = 0.0;  // removed.total() / input_count, 0 on empty input
};

enum class SkipReason { GroupTooSmall, DegenerateResiduals, SingularDesign };

std::string_view to_string(SkipReason reason) noexcept;

/// A maturity group the outlier stage left untouched, and why.
struct GroupWarning {
    OptionType option_type = OptionType::Call;
    int maturity_days = 0;
    std::int64_t group_size = 0;
    SkipReason reason = SkipReason::GroupTooSmall;
};

/// Full accounting of one cleaning run, mirrored into the report file.
struct CleaningReport {
    TypeReport calls;
    TypeReport puts;
    std::vector<GroupWarning> warnings;
    CleaningConfig config;
    std::optional<MarketContext> market;

    const TypeReport& for_type(OptionType type) const noexcept {
        return type == OptionType::Call ? calls : puts;
    }
    TypeReport& for_type(OptionType type) noexcept {
        return type == OptionType::Call ? calls : puts;
    }
};

}  // namespace optclean
