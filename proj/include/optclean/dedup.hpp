#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "optclean/model.hpp"
#include "optclean/outlier_detector.hpp"

namespace optclean {

/// Two or more quotes sharing (option_type, strike, maturity_days).
struct DuplicateSet {
    OptionType option_type = OptionType::Call;
    double strike = 0.0;
    int maturity_days = 0;
    std::vector<std::int64_t> quote_ids;  // input order
};

/// Maximal sets of size >= 2 sharing (option_type, strike, maturity_days),
/// ordered by ascending maturity, type, then strike. Singletons excluded.
std::vector<DuplicateSet> find_duplicate_sets(std::span<const OptionQuote> quotes);

struct DedupResult {
    std::vector<OptionQuote> kept;
    std::vector<RemovalRecord> removed;
};

/// Substep 1: prune duplicated quotes that break strike monotonicity.
///
/// For each member of a duplicate set, compare against the reference price at
/// the nearest strictly smaller (K-) and larger (K+) strikes in the group:
/// a call is removed if price > ref(K-) or price < ref(K+); a put if
/// price < ref(K-) or price > ref(K+). Comparisons are strict; a missing
/// neighbor is skipped. The reference at a duplicated neighbor strike is its
/// largest-open-interest member. All decisions are taken against the pre-prune
/// snapshot; only duplicate-set members are ever removed.
DedupResult monotonicity_prune(const MaturityGroup& group,
                               std::span<const DuplicateSet> dup_sets);

/// Substep 2: per surviving set, keep exactly the member with the largest
/// open interest (ties broken by smallest id); remove the rest.
DedupResult open_interest_resolve(std::span<const OptionQuote> quotes,
                                  std::span<const DuplicateSet> dup_sets);

/// Stage 3 over a whole dataset: find duplicate sets per (type, maturity)
/// group, prune by monotonicity, then resolve by open interest. Kept quotes
/// come back in input order.
DedupResult resolve_duplicates(std::span<const OptionQuote> quotes);

}  // namespace optclean
