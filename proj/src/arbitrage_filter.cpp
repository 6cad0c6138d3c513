#include "optclean/arbitrage_filter.hpp"

#include <cmath>
#include <string>

namespace optclean {

namespace {

void require_positive_years(double years) {
    if (!(years > 0.0))
        throw Error("bounds: time to maturity must be > 0 years, got " +
                    std::to_string(years));
}

}  // namespace

PriceBounds call_bounds(const MarketContext& ctx, double strike, double years) {
    require_positive_years(years);
    const double discounted_strike = strike * std::exp(-ctx.rate() * years);
    return {std::max(ctx.spot() - discounted_strike, 0.0), ctx.spot()};
}

PriceBounds put_bounds(const MarketContext& ctx, double strike, double years) {
    require_positive_years(years);
    const double discounted_strike = strike * std::exp(-ctx.rate() * years);
    return {std::max(discounted_strike - ctx.spot(), 0.0), discounted_strike};
}

PriceBounds bounds_for(const MarketContext& ctx, OptionType type, double strike,
                       double years) {
    return type == OptionType::Call ? call_bounds(ctx, strike, years)
                                    : put_bounds(ctx, strike, years);
}

ArbitrageFilterResult filter_arbitrage(std::span<const OptionQuote> quotes,
                                       const MarketContext& ctx,
                                       const CleaningConfig& config) {
    ArbitrageFilterResult result;
    result.kept.reserve(quotes.size());
    for (const OptionQuote& quote : quotes) {
        const double years = years_to_maturity(quote.maturity_days, config.day_count);
        const PriceBounds bounds = bounds_for(ctx, quote.option_type, quote.strike, years);
        if (bounds.contains(quote.price)) {
            result.kept.push_back(quote);
            continue;
        }
        const bool below = quote.price < bounds.lower;
        result.removed.push_back(RemovalRecord{
            quote.id,
            RemovalStage::ArbitrageBound,
            BoundViolationDetail{below ? BoundSide::Lower : BoundSide::Upper,
                                 below ? bounds.lower : bounds.upper, quote.price}});
    }
    return result;
}

}  // namespace optclean
