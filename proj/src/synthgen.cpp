#include "optclean/synthgen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "optclean/arbitrage_filter.hpp"

namespace optclean::synthgen {

namespace {

double smile_price(const std::array<double, 3>& smile, double strike) {
    return smile[0] + smile[1] * strike + smile[2] * strike * strike;
}

constexpr int kMaxRedraws = 10000;

}  // namespace

double GaussianSampler::uniform() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double GaussianSampler::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::string_view to_string(InjectionKind kind) noexcept {
    switch (kind) {
        case InjectionKind::BoundViolation: return "bound_violation";
        case InjectionKind::Outlier: return "outlier";
        case InjectionKind::Duplicate: return "duplicate";
    }
    return "unknown";
}

MaturityGroup generate_group(const GroupSpec& spec, const MarketContext& ctx,
                             const CleaningConfig& config, std::uint64_t seed,
                             std::int64_t first_id) {
    if (spec.strikes.empty()) throw Error("generate_group: no strikes given");
    if (spec.noise_sigma < 0.0) throw Error("generate_group: negative noise sigma");

    const double years = years_to_maturity(spec.maturity_days, config.day_count);
    GaussianSampler sampler(seed);

    MaturityGroup group;
    group.option_type = spec.option_type;
    group.maturity_days = spec.maturity_days;
    group.quotes.reserve(spec.strikes.size());

    std::int64_t id = first_id;
    for (double strike : spec.strikes) {
        const PriceBounds bounds = bounds_for(ctx, spec.option_type, strike, years);
        const double base = smile_price(spec.smile, strike);
        if (!bounds.contains(base))
            throw SpecInfeasible("smile price " + std::to_string(base) + " at strike " +
                                 std::to_string(strike) + " exits the arbitrage band [" +
                                 std::to_string(bounds.lower) + ", " +
                                 std::to_string(bounds.upper) + "]");
        double price = base;
        if (spec.noise_sigma > 0.0) {
            int tries = 0;
            do {
                if (++tries > kMaxRedraws)
                    throw SpecInfeasible("arbitrage band too narrow for the noise at strike " +
                                         std::to_string(strike));
                price = base + spec.noise_sigma * sampler.normal();
            } while (!bounds.contains(price));
        }
        OptionQuote quote;
        quote.id = id++;
        quote.option_type = spec.option_type;
        quote.strike = strike;
        quote.maturity_days = spec.maturity_days;
        quote.price = price;
        quote.open_interest =
            spec.open_interest_base + static_cast<std::int64_t>(sampler.next_u64() % 900);
        group.quotes.push_back(quote);
    }
    return group;
}

namespace {

struct Injector {
    const MaturityGroup& group;
    const MarketContext& ctx;
    double years;
    double noise_sigma;
    GaussianSampler sampler;

    std::vector<OptionQuote> quotes;          // working copy, corrupted in place
    std::vector<std::size_t> used;            // target indices already claimed
    std::unordered_set<std::size_t> dropped;  // targets stages 1-2 will remove

    bool is_used(std::size_t index) const {
        return std::find(used.begin(), used.end(), index) != used.end();
    }

    // Deterministic: random start, linear probe to the next free index.
    std::size_t claim_target() {
        const std::size_t n = quotes.size();
        std::size_t index = static_cast<std::size_t>(sampler.next_u64() % n);
        for (std::size_t step = 0; step < n; ++step, index = (index + 1) % n)
            if (!is_used(index)) {
                used.push_back(index);
                return index;
            }
        throw TooManyInjections("no uncorrupted quote left in group");
    }

    void release_target(std::size_t index) { std::erase(used, index); }

    PriceBounds bounds_at(double strike) const {
        return bounds_for(ctx, group.option_type, strike, years);
    }

    void inject_bound_violation(std::size_t ordinal, std::vector<InjectionLabel>& labels) {
        const std::size_t index = claim_target();
        OptionQuote& quote = quotes[index];
        const PriceBounds bounds = bounds_at(quote.strike);
        // Alternate sides where possible; a zero lower bound only admits
        // violations from above since prices cannot go negative.
        if (ordinal % 2 == 1 && bounds.lower > 0.0)
            quote.price = bounds.lower * 0.5;
        else
            quote.price = bounds.upper * 1.1 + 1.0;
        dropped.insert(index);
        labels.push_back({quote.id, InjectionKind::BoundViolation});
    }

    void inject_outlier(double scale, std::vector<InjectionLabel>& labels) {
        const std::size_t n = quotes.size();
        for (std::size_t attempt = 0; attempt < n; ++attempt) {
            const std::size_t index = claim_target();
            OptionQuote& quote = quotes[index];
            const PriceBounds bounds = bounds_at(quote.strike);
            const double shift = scale * noise_sigma;
            double sign = (sampler.next_u64() & 1u) ? 1.0 : -1.0;
            if (!bounds.contains(quote.price + sign * shift)) sign = -sign;
            if (bounds.contains(quote.price + sign * shift)) {
                quote.price += sign * shift;
                dropped.insert(index);
                labels.push_back({quote.id, InjectionKind::Outlier});
                return;
            }
            release_target(index);  // band too narrow here, try elsewhere
        }
        throw TooManyInjections("no quote can host a 10-sigma displacement inside its band");
    }

    // Neighbor references the dedup stage will see: survivor prices by strike,
    // excluding targets stages 1-2 remove first.
    std::map<double, double> survivor_prices() const {
        std::map<double, double> prices;
        for (std::size_t i = 0; i < quotes.size(); ++i)
            if (!dropped.contains(i)) prices.emplace(quotes[i].strike, quotes[i].price);
        return prices;
    }

    bool monotone_between(double smaller_ref, double own, double larger_ref,
                          bool has_smaller, bool has_larger) const {
        if (group.option_type == OptionType::Call)
            return (!has_smaller || own < smaller_ref) && (!has_larger || own > larger_ref);
        return (!has_smaller || own > smaller_ref) && (!has_larger || own < larger_ref);
    }

    // Returns the id of the original the copy shadows.
    std::int64_t inject_duplicate(std::int64_t copy_id, std::vector<OptionQuote>& copies,
                                  std::vector<InjectionLabel>& labels) {
        const std::size_t n = quotes.size();
        const auto refs = survivor_prices();
        for (std::size_t attempt = 0; attempt < n; ++attempt) {
            const std::size_t index = claim_target();
            const OptionQuote& original = quotes[index];
            const auto self = refs.find(original.strike);
            const bool has_smaller = self != refs.begin();
            const bool has_larger = std::next(self) != refs.end();
            const double smaller_ref = has_smaller ? std::prev(self)->second : 0.0;
            const double larger_ref = has_larger ? std::next(self)->second : 0.0;

            const double delta = (sampler.uniform() - 0.5) * noise_sigma;
            const double copy_price = original.price + delta;
            const PriceBounds bounds = bounds_at(original.strike);

            // Both members must sit strictly between the neighbor references,
            // so monotonicity pruning leaves the set to the open-interest rule.
            const bool ok = bounds.contains(copy_price) &&
                            monotone_between(smaller_ref, original.price, larger_ref,
                                             has_smaller, has_larger) &&
                            monotone_between(smaller_ref, copy_price, larger_ref,
                                             has_smaller, has_larger);
            if (!ok) {
                release_target(index);
                continue;
            }
            OptionQuote copy = original;
            copy.id = copy_id;
            copy.price = copy_price;
            copy.open_interest = std::max<std::int64_t>(original.open_interest / 2, 1) - 1;
            if (copy.open_interest < 0) copy.open_interest = 0;
            copies.push_back(copy);
            labels.push_back({copy.id, InjectionKind::Duplicate});
            return original.id;
        }
        throw TooManyInjections("no quote satisfies the duplicate-injection constraints");
    }
};

}  // namespace

Fixture inject_errors(const MaturityGroup& group, const MarketContext& ctx,
                      const CleaningConfig& config, const InjectionCounts& counts,
                      double noise_sigma, std::uint64_t seed) {
    const std::size_t wanted = static_cast<std::size_t>(counts.bound_violations) +
                               static_cast<std::size_t>(counts.outliers) +
                               static_cast<std::size_t>(counts.duplicate_sets);
    if (wanted > group.quotes.size())
        throw TooManyInjections(std::to_string(wanted) + " injections into a group of " +
                                std::to_string(group.quotes.size()));
    if (noise_sigma <= 0.0 && counts.outliers > 0)
        throw Error("inject_errors: outlier injection needs a positive noise sigma");

    Injector injector{group, ctx, years_to_maturity(group.maturity_days, config.day_count),
                      noise_sigma, GaussianSampler(seed), group.quotes};

    Fixture fixture;
    for (int i = 0; i < counts.bound_violations; ++i)
        injector.inject_bound_violation(static_cast<std::size_t>(i), fixture.labels);
    for (int i = 0; i < counts.outliers; ++i)
        injector.inject_outlier(counts.outlier_scale, fixture.labels);

    std::int64_t next_id = 0;
    for (const OptionQuote& quote : group.quotes) next_id = std::max(next_id, quote.id + 1);
    std::vector<OptionQuote> copies;
    std::unordered_map<std::int64_t, std::vector<std::size_t>> copies_after;
    for (int i = 0; i < counts.duplicate_sets; ++i) {
        const std::int64_t original_id =
            injector.inject_duplicate(next_id++, copies, fixture.labels);
        copies_after[original_id].push_back(copies.size() - 1);
    }

    // Each copy lands right after its original so groups stay contiguous.
    for (const OptionQuote& quote : injector.quotes) {
        fixture.quotes.push_back(quote);
        if (auto it = copies_after.find(quote.id); it != copies_after.end())
            for (std::size_t copy_index : it->second)
                fixture.quotes.push_back(copies[copy_index]);
    }
    return fixture;
}

Fixture make_fixture(std::span<const GroupSpec> specs, const MarketContext& ctx,
                     const CleaningConfig& config, const InjectionCounts& counts,
                     std::uint64_t seed) {
    if (specs.empty()) throw Error("make_fixture: no group specs");
    const std::size_t n_groups = specs.size();

    // Spread the requested corruption over the groups round-robin, starting
    // from a seed-dependent offset so fixtures differ in which groups host
    // which error kinds.
    std::vector<InjectionCounts> per_group(n_groups);
    auto spread = [&](int total, auto bump) {
        for (int k = 0; k < total; ++k)
            bump(per_group[(seed + static_cast<std::size_t>(k)) % n_groups]);
    };
    spread(counts.bound_violations, [](InjectionCounts& c) { c.bound_violations += 1; });
    spread(counts.outliers, [](InjectionCounts& c) { c.outliers += 1; });
    spread(counts.duplicate_sets, [](InjectionCounts& c) { c.duplicate_sets += 1; });
    for (InjectionCounts& c : per_group) c.outlier_scale = counts.outlier_scale;

    Fixture fixture;
    std::int64_t first_id = 0;
    for (std::size_t g = 0; g < n_groups; ++g) {
        const MaturityGroup group =
            generate_group(specs[g], ctx, config, seed * 1000 + g, first_id);
        first_id += static_cast<std::int64_t>(group.quotes.size()) +
                    per_group[g].duplicate_sets;
        Fixture part = inject_errors(group, ctx, config, per_group[g],
                                     specs[g].noise_sigma, seed * 1000 + 500 + g);
        fixture.quotes.insert(fixture.quotes.end(), part.quotes.begin(), part.quotes.end());
        fixture.labels.insert(fixture.labels.end(), part.labels.begin(), part.labels.end());
    }

    // Renumber to final row order so the fixture survives a write/read
    // round-trip through the ingest schema with identical ids.
    std::unordered_map<std::int64_t, std::int64_t> remap;
    for (std::size_t row = 0; row < fixture.quotes.size(); ++row) {
        remap.emplace(fixture.quotes[row].id, static_cast<std::int64_t>(row));
        fixture.quotes[row].id = static_cast<std::int64_t>(row);
    }
    for (InjectionLabel& label : fixture.labels) label.quote_id = remap.at(label.quote_id);
    std::sort(fixture.labels.begin(), fixture.labels.end(),
              [](const InjectionLabel& a, const InjectionLabel& b) {
                  return a.quote_id < b.quote_id;
              });
    return fixture;
}

void write_labels(const std::filesystem::path& path,
                  std::span<const InjectionLabel> labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "id,kind\n";
    for (const InjectionLabel& label : labels)
        out << label.quote_id << ',' << to_string(label.kind) << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<InjectionLabel> read_labels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty label file", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "id,kind") throw ParseError("bad label header '" + line + "'", 1);

    std::vector<InjectionLabel> labels;
    std::size_t file_line = 1;
    while (std::getline(in, line)) {
        ++file_line;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) throw ParseError("expected id,kind", file_line);
        InjectionLabel label;
        const std::string_view id_text(line.data(), comma);
        auto [ptr, ec] = std::from_chars(id_text.data(), id_text.data() + id_text.size(),
                                         label.quote_id);
        if (ec != std::errc{} || ptr != id_text.data() + id_text.size())
            throw ParseError("bad id '" + std::string(id_text) + "'", file_line, 1);
        const std::string_view kind_text = std::string_view(line).substr(comma + 1);
        if (kind_text == "bound_violation") label.kind = InjectionKind::BoundViolation;
        else if (kind_text == "outlier") label.kind = InjectionKind::Outlier;
        else if (kind_text == "duplicate") label.kind = InjectionKind::Duplicate;
        else throw ParseError("unknown kind '" + std::string(kind_text) + "'", file_line, 2);
        labels.push_back(label);
    }
    return labels;
}

}  // namespace optclean::synthgen
