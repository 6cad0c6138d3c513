#include "optclean/dedup.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace optclean {

namespace {

// Largest open interest wins; ties go to the earliest row.
const OptionQuote* preferred_member(std::vector<const OptionQuote*> members) {
    const OptionQuote* best = nullptr;
    for (const OptionQuote* quote : members) {
        if (best == nullptr || quote->open_interest > best->open_interest ||
            (quote->open_interest == best->open_interest && quote->id < best->id))
            best = quote;
    }
    return best;
}

}  // namespace

std::vector<DuplicateSet> find_duplicate_sets(std::span<const OptionQuote> quotes) {
    std::map<std::tuple<int, OptionType, double>, DuplicateSet> sets;
    for (const OptionQuote& quote : quotes) {
        auto key = std::make_tuple(quote.maturity_days, quote.option_type, quote.strike);
        auto [it, inserted] = sets.try_emplace(key);
        if (inserted) {
            it->second.option_type = quote.option_type;
            it->second.strike = quote.strike;
            it->second.maturity_days = quote.maturity_days;
        }
        it->second.quote_ids.push_back(quote.id);
    }
    std::vector<DuplicateSet> out;
    for (auto& [key, set] : sets)
        if (set.quote_ids.size() >= 2) out.push_back(std::move(set));
    return out;
}

DedupResult monotonicity_prune(const MaturityGroup& group,
                               std::span<const DuplicateSet> dup_sets) {
    std::unordered_set<std::int64_t> duplicated_ids;
    for (const DuplicateSet& set : dup_sets)
        for (std::int64_t id : set.quote_ids) duplicated_ids.insert(id);

    // Reference quote per distinct strike, taken from the pre-prune snapshot.
    std::map<double, std::vector<const OptionQuote*>> by_strike;
    for (const OptionQuote& quote : group.quotes) by_strike[quote.strike].push_back(&quote);
    std::vector<double> strikes;
    std::unordered_map<double, const OptionQuote*> reference;
    strikes.reserve(by_strike.size());
    for (auto& [strike, members] : by_strike) {
        strikes.push_back(strike);
        reference[strike] = preferred_member(members);
    }

    const bool is_call = group.option_type == OptionType::Call;
    DedupResult result;
    for (const OptionQuote& quote : group.quotes) {
        if (!duplicated_ids.contains(quote.id)) {
            result.kept.push_back(quote);
            continue;
        }
        auto pos = std::lower_bound(strikes.begin(), strikes.end(), quote.strike);
        const OptionQuote* smaller = pos == strikes.begin() ? nullptr : reference[*std::prev(pos)];
        const OptionQuote* larger =
            std::next(pos) == strikes.end() ? nullptr : reference[*std::next(pos)];

        // Calls decrease in strike, puts increase; a duplicated quote that
        // breaks the strict ordering against either neighbor goes.
        const OptionQuote* offended = nullptr;
        bool against_smaller = false;
        if (smaller != nullptr &&
            (is_call ? quote.price > smaller->price : quote.price < smaller->price)) {
            offended = smaller;
            against_smaller = true;
        } else if (larger != nullptr &&
                   (is_call ? quote.price < larger->price : quote.price > larger->price)) {
            offended = larger;
        }
        if (offended == nullptr) {
            result.kept.push_back(quote);
            continue;
        }
        result.removed.push_back(RemovalRecord{
            quote.id, RemovalStage::DuplicateMonotonicity,
            MonotonicityDetail{offended->id, offended->strike, offended->price,
                               against_smaller}});
    }
    return result;
}

DedupResult open_interest_resolve(std::span<const OptionQuote> quotes,
                                  std::span<const DuplicateSet> dup_sets) {
    std::unordered_map<std::int64_t, const OptionQuote*> by_id;
    for (const OptionQuote& quote : quotes) by_id.emplace(quote.id, &quote);

    std::unordered_set<std::int64_t> removed_ids;
    DedupResult result;
    for (const DuplicateSet& set : dup_sets) {
        std::vector<const OptionQuote*> members;
        for (std::int64_t id : set.quote_ids)
            if (auto it = by_id.find(id); it != by_id.end()) members.push_back(it->second);
        if (members.size() < 2) continue;
        const OptionQuote* winner = preferred_member(members);
        for (const OptionQuote* member : members) {
            if (member == winner) continue;
            removed_ids.insert(member->id);
            result.removed.push_back(RemovalRecord{
                member->id, RemovalStage::DuplicateOpenInterest,
                OpenInterestDetail{winner->id, winner->open_interest}});
        }
    }
    for (const OptionQuote& quote : quotes)
        if (!removed_ids.contains(quote.id)) result.kept.push_back(quote);
    return result;
}

DedupResult resolve_duplicates(std::span<const OptionQuote> quotes) {
    std::unordered_set<std::int64_t> removed_ids;
    DedupResult result;
    for (const MaturityGroup& group : group_by_maturity(quotes)) {
        const std::vector<DuplicateSet> sets = find_duplicate_sets(group.quotes);
        if (sets.empty()) continue;
        DedupResult pruned = monotonicity_prune(group, sets);
        for (RemovalRecord& record : pruned.removed) {
            removed_ids.insert(record.quote_id);
            result.removed.push_back(std::move(record));
        }
        DedupResult resolved = open_interest_resolve(pruned.kept, sets);
        for (RemovalRecord& record : resolved.removed) {
            removed_ids.insert(record.quote_id);
            result.removed.push_back(std::move(record));
        }
    }
    result.kept.reserve(quotes.size() - removed_ids.size());
    for (const OptionQuote& quote : quotes)
        if (!removed_ids.contains(quote.id)) result.kept.push_back(quote);
    return result;
}

}  // namespace optclean
