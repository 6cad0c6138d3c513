#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "optclean/model.hpp"
#include "optclean/numerics.hpp"

namespace optclean {

/// Quotes sharing option type and time to maturity; the unit the outlier
/// detector regresses over.
struct MaturityGroup {
    OptionType option_type = OptionType::Call;
    int maturity_days = 0;
    std::vector<OptionQuote> quotes;
};

/// Partition by (option_type, maturity_days). Within-group order follows the
/// input; groups are ordered by ascending maturity, calls before puts.
std::vector<MaturityGroup> group_by_maturity(std::span<const OptionQuote> quotes);

/// Half-width c of the band [-c, c] that contains all n iid N(0, sigma)
/// residuals with probability 1 - alpha:
///
///   c = sigma * Phi^-1( 1/2 + 1/2 * (1 - alpha)^(1/n) )
///
/// Requires sigma > 0, n >= 1, 0 < alpha < 1.
double critical_value(double sigma, std::int64_t n, double alpha);

/// Everything the detector computed for one processed group. Residuals are
/// aligned with the group's quote order; fitted value = price - residual.
struct GroupDiagnostics {
    PolyCoeffs coeffs;
    double sigma_hat = 0.0;
    double c_hat = 0.0;
    std::vector<double> residuals;
    std::vector<std::int64_t> flagged_ids;
};

/// Outcome of one group: either diagnostics (processed) or a skip reason.
struct GroupOutcome {
    MaturityGroup group;
    std::optional<GroupDiagnostics> diagnostics;
    std::optional<SkipReason> skip;
};

struct OutlierDetectionResult {
    std::vector<OptionQuote> kept;
    std::vector<RemovalRecord> removed;
    GroupOutcome outcome;
};

/// Stage 2 on a single group: fit a poly_degree polynomial of price on strike,
/// estimate sigma from the residuals, compute c_hat and remove quotes with
/// |residual| > c_hat in a single pass (no refit after removal).
///
/// Groups smaller than min_group_size, groups with a singular design and
/// groups whose residual variance vanishes (e.g. quotes exactly on a parabola)
/// are kept whole and marked skipped, never dropped.
OutlierDetectionResult detect_outliers(const MaturityGroup& group,
                                       const CleaningConfig& config);

struct OutlierStageResult {
    std::vector<OptionQuote> kept;
    std::vector<RemovalRecord> removed;
    std::vector<GroupOutcome> outcomes;
};

/// Stage 2 over a whole dataset: group, detect per group, and reassemble the
/// kept quotes in input order. Deterministic for fixed input and config.
OutlierStageResult run_outlier_stage(std::span<const OptionQuote> quotes,
                                     const CleaningConfig& config);

}  // namespace optclean
