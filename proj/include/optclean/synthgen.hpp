#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "optclean/model.hpp"
#include "optclean/outlier_detector.hpp"

namespace optclean::synthgen {

/// Seeded normal sampler with a pinned algorithm: mt19937_64 drives uniforms
/// u = (x >> 11) * 2^-53 (zero mapped to 2^-53) and Box-Muller turns pairs
/// into normals. The spare deviate is cached, so draws come in a fixed order
/// reproducible from the seed alone.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

    double uniform();   // (0, 1]
    double normal();    // standard normal
    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Recipe for one clean maturity group: quotes on the smile parabola
/// price(K) = smile[0] + smile[1] K + smile[2] K^2 plus N(0, noise_sigma)
/// noise, truncated to the no-arbitrage band by redrawing.
struct GroupSpec {
    OptionType option_type = OptionType::Call;
    int maturity_days = 30;
    std::array<double, 3> smile{0.0, 0.0, 0.0};
    std::vector<double> strikes;
    double noise_sigma = 0.0;
    std::int64_t open_interest_base = 100;
};

/// Deterministic for a fixed seed. Throws SpecInfeasible when the parabola
/// itself exits the arbitrage band anywhere on the strike grid (a band too
/// narrow for the noise surfaces the same way, after bounded redraws).
MaturityGroup generate_group(const GroupSpec& spec, const MarketContext& ctx,
                             const CleaningConfig& config, std::uint64_t seed,
                             std::int64_t first_id = 0);

enum class InjectionKind { BoundViolation, Outlier, Duplicate };

std::string_view to_string(InjectionKind kind) noexcept;

struct InjectionCounts {
    int bound_violations = 0;
    int outliers = 0;
    int duplicate_sets = 0;
    double outlier_scale = 10.0;  // displacement in units of noise_sigma
};

struct InjectionLabel {
    std::int64_t quote_id = 0;
    InjectionKind kind = InjectionKind::BoundViolation;
};

struct Fixture {
    std::vector<OptionQuote> quotes;
    std::vector<InjectionLabel> labels;
};

/// Corrupts one clean group. Bound violations push a price outside its
/// interval; outliers displace a price by outlier_scale * noise_sigma (keeping
/// it inside the bounds); each duplicate set adds one near-price copy with
/// strictly smaller open interest, choosing targets whose set survives
/// monotonicity pruning intact so the copy is the one resolved away. Targets
/// are disjoint; TooManyInjections when the group cannot host the request.
Fixture inject_errors(const MaturityGroup& group, const MarketContext& ctx,
                      const CleaningConfig& config, const InjectionCounts& counts,
                      double noise_sigma, std::uint64_t seed);

/// Generates every group, spreads the requested injections across them
/// (outliers one per group round-robin), renumbers ids to final row order and
/// remaps labels accordingly. The result writes/reads through the ingest
/// schema with stable ids.
Fixture make_fixture(std::span<const GroupSpec> specs, const MarketContext& ctx,
                     const CleaningConfig& config, const InjectionCounts& counts,
                     std::uint64_t seed);

/// Sidecar label file: header `id,kind`, one row per injection.
void write_labels(const std::filesystem::path& path, std::span<const InjectionLabel> labels);
std::vector<InjectionLabel> read_labels(const std::filesystem::path& path);

}  // namespace optclean::synthgen
