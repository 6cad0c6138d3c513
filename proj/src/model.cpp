#include "optclean/model.hpp"

#include <cctype>
#include <cmath>
#include <string>

namespace optclean {

std::string_view to_string(OptionType type) noexcept {
    return type == OptionType::Call ? "call" : "put";
}

std::optional<OptionType> option_type_from_string(std::string_view text) noexcept {
    std::string lowered;
    lowered.reserve(text.size());
    for (char ch : text) lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (lowered == "call") return OptionType::Call;
    if (lowered == "put") return OptionType::Put;
    return std::nullopt;
}

const OptionQuote& validate_quote(const OptionQuote& quote) {
    auto field_error = [&](const char* field, auto value) {
        return NegativeField("quote " + std::to_string(quote.id) + ": " + field +
                             " must be >= 0, got " + std::to_string(value));
    };
    if (!(quote.strike >= 0.0)) throw field_error("strike", quote.strike);
    if (!(quote.price >= 0.0)) throw field_error("price", quote.price);
    if (quote.open_interest < 0) throw field_error("open_interest", quote.open_interest);
    if (quote.maturity_days <= 0)
        throw ZeroMaturity("quote " + std::to_string(quote.id) +
                           ": maturity_days must be > 0, got " +
                           std::to_string(quote.maturity_days));
    return quote;
}

MarketContext::MarketContext(double spot, double rate, double dividend_yield)
    : spot_(spot), rate_(rate), dividend_yield_(dividend_yield) {
    if (!(spot > 0.0) || !std::isfinite(spot))
        throw Error("market context: spot must be > 0, got " + std::to_string(spot));
    if (!std::isfinite(rate))
        throw Error("market context: rate must be finite");
    if (dividend_yield != 0.0)
        throw Error("market context: the bound filters assume a zero dividend yield, got " +
                    std::to_string(dividend_yield));
}

void validate_config(const CleaningConfig& config) {
    if (!(config.alpha > 0.0 && config.alpha < 1.0))
        throw Error("config: alpha must be in (0, 1), got " + std::to_string(config.alpha));
    if (config.poly_degree < 1)
        throw Error("config: poly_degree must be >= 1, got " + std::to_string(config.poly_degree));
    if (config.min_group_size < config.poly_degree + 2)
        throw Error("config: min_group_size must be >= poly_degree + 2, got " +
                    std::to_string(config.min_group_size));
    if (!(config.day_count > 0.0))
        throw Error("config: day_count must be > 0, got " + std::to_string(config.day_count));
}

double years_to_maturity(int maturity_days, double day_count) {
    if (maturity_days <= 0)
        throw Error("years_to_maturity: maturity_days must be > 0, got " +
                    std::to_string(maturity_days));
    if (!(day_count > 0.0))
        throw Error("years_to_maturity: day_count must be > 0, got " +
                    std::to_string(day_count));
    return static_cast<double>(maturity_days) / day_count;
}

std::string_view to_string(RemovalStage stage) noexcept {
    switch (stage) {
        case RemovalStage::ArbitrageBound: return "arbitrage_bound";
        case RemovalStage::Outlier: return "outlier";
        case RemovalStage::DuplicateMonotonicity: return "duplicate_monotonicity";
        case RemovalStage::DuplicateOpenInterest: return "duplicate_open_interest";
    }
    return "unknown";
}

std::string_view to_string(SkipReason reason) noexcept {
    switch (reason) {
        case SkipReason::GroupTooSmall: return "group_too_small";
        case SkipReason::DegenerateResiduals: return "degenerate_residuals";
        case SkipReason::SingularDesign: return "singular_design";
    }
    return "unknown";
}

std::string RemovalRecord::reason() const {
    struct Visitor {
        std::string operator()(const BoundViolationDetail& d) const {
            return d.side == BoundSide::Upper ? "price above upper no-arbitrage bound"
                                              : "price below lower no-arbitrage bound";
        }
        std::string operator()(const OutlierDetail&) const {
            return "residual outside simultaneous confidence band";
        }
        std::string operator()(const MonotonicityDetail& d) const {
            return d.against_smaller_strike
                       ? "duplicate breaks monotonicity against smaller strike"
                       : "duplicate breaks monotonicity against larger strike";
        }
        std::string operator()(const OpenInterestDetail&) const {
            return "duplicate with smaller open interest";
        }
    };
    return std::visit(Visitor{}, detail);
}

}  // namespace optclean
