#pragma once

#include <span>
#include <vector>

#include "optclean/model.hpp"

namespace optclean {

/// Model-free no-arbitrage interval for one quote.
struct PriceBounds {
    double lower = 0.0;
    double upper = 0.0;

    bool contains(double price) const noexcept {
        return lower <= price && price <= upper;
    }
};

/// European call: max(S0 - K e^{-rT}, 0) <= price <= S0. Requires T > 0.
PriceBounds call_bounds(const MarketContext& ctx, double strike, double years);

/// European put: max(K e^{-rT} - S0, 0) <= price <= K e^{-rT}. Requires T > 0.
PriceBounds put_bounds(const MarketContext& ctx, double strike, double years);

/// Bounds matching the quote's type.
PriceBounds bounds_for(const MarketContext& ctx, OptionType type, double strike,
                       double years);

struct ArbitrageFilterResult {
    std::vector<OptionQuote> kept;
    std::vector<RemovalRecord> removed;
};

/// Stage 1: keeps a quote iff its price lies inside the no-arbitrage interval
/// for its type (inclusive comparisons, no tolerance). Each quote is judged
/// independently; relative order of kept quotes is preserved.
ArbitrageFilterResult filter_arbitrage(std::span<const OptionQuote> quotes,
                                       const MarketContext& ctx,
                                       const CleaningConfig& config);

}  // namespace optclean
