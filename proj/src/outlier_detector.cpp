#include "optclean/outlier_detector.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_set>

namespace optclean {

std::vector<MaturityGroup> group_by_maturity(std::span<const OptionQuote> quotes) {
    std::map<std::pair<int, OptionType>, MaturityGroup> grouped;
    for (const OptionQuote& quote : quotes) {
        auto key = std::make_pair(quote.maturity_days, quote.option_type);
        auto [it, inserted] = grouped.try_emplace(key);
        if (inserted) {
            it->second.option_type = quote.option_type;
            it->second.maturity_days = quote.maturity_days;
        }
        it->second.quotes.push_back(quote);
    }
    std::vector<MaturityGroup> out;
    out.reserve(grouped.size());
    for (auto& [key, group] : grouped) out.push_back(std::move(group));
    return out;
}

double critical_value(double sigma, std::int64_t n, double alpha) {
    if (!(sigma > 0.0))
        throw Error("critical_value: sigma must be > 0, got " + std::to_string(sigma));
    if (n < 1)
        throw Error("critical_value: n must be >= 1, got " + std::to_string(n));
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error("critical_value: alpha must be in (0, 1), got " + std::to_string(alpha));
    const double root = std::pow(1.0 - alpha, 1.0 / static_cast<double>(n));
    return sigma * normal_quantile(0.5 + 0.5 * root);
}

OutlierDetectionResult detect_outliers(const MaturityGroup& group,
                                       const CleaningConfig& config) {
    validate_config(config);
    OutlierDetectionResult result;
    result.outcome.group = group;

    auto skip = [&](SkipReason reason) {
        result.outcome.skip = reason;
        result.kept = group.quotes;
        return result;
    };

    const std::int64_t n = static_cast<std::int64_t>(group.quotes.size());
    if (n < config.min_group_size) return skip(SkipReason::GroupTooSmall);

    std::vector<double> strikes, prices;
    strikes.reserve(group.quotes.size());
    prices.reserve(group.quotes.size());
    double price_scale = 1.0;
    for (const OptionQuote& quote : group.quotes) {
        strikes.push_back(quote.strike);
        prices.push_back(quote.price);
        price_scale = std::max(price_scale, std::abs(quote.price));
    }

    GroupDiagnostics diag;
    try {
        diag.coeffs = fit_polynomial(strikes, prices, config.poly_degree);
    } catch (const SingularDesign&) {
        return skip(SkipReason::SingularDesign);
    }
    diag.residuals = residuals(strikes, prices, diag.coeffs);
    try {
        diag.sigma_hat = residual_sigma(diag.residuals);
    } catch (const DegenerateResiduals&) {
        return skip(SkipReason::DegenerateResiduals);
    }
    // A group lying exactly on the fitted polynomial leaves only rounding
    // noise in the residuals; treat that as zero variance too.
    if (diag.sigma_hat <= 1e-12 * price_scale)
        return skip(SkipReason::DegenerateResiduals);

    diag.c_hat = critical_value(diag.sigma_hat, n, config.alpha);

    // Single pass: flag against the one fit, no refit after removals.
    for (std::size_t i = 0; i < group.quotes.size(); ++i) {
        const OptionQuote& quote = group.quotes[i];
        if (std::abs(diag.residuals[i]) > diag.c_hat) {
            diag.flagged_ids.push_back(quote.id);
            result.removed.push_back(RemovalRecord{
                quote.id, RemovalStage::Outlier,
                OutlierDetail{diag.residuals[i], diag.c_hat}});
        } else {
            result.kept.push_back(quote);
        }
    }
    result.outcome.diagnostics = std::move(diag);
    return result;
}

OutlierStageResult run_outlier_stage(std::span<const OptionQuote> quotes,
                                     const CleaningConfig& config) {
    OutlierStageResult result;
    std::unordered_set<std::int64_t> removed_ids;
    for (const MaturityGroup& group : group_by_maturity(quotes)) {
        OutlierDetectionResult detection = detect_outliers(group, config);
        for (RemovalRecord& record : detection.removed) {
            removed_ids.insert(record.quote_id);
            result.removed.push_back(std::move(record));
        }
        result.outcomes.push_back(std::move(detection.outcome));
    }
    result.kept.reserve(quotes.size() - removed_ids.size());
    for (const OptionQuote& quote : quotes)
        if (!removed_ids.contains(quote.id)) result.kept.push_back(quote);
    return result;
}

}  // namespace optclean
