#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "optclean/arbitrage_filter.hpp"
#include "optclean/dedup.hpp"
#include "optclean/ingest.hpp"
#include "optclean/model.hpp"
#include "optclean/numerics.hpp"
#include "optclean/outlier_detector.hpp"
#include "optclean/pipeline.hpp"
#include "optclean/synthgen.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace pybind11::literals;
using namespace optclean;

namespace {

py::dict detail_to_dict(const RemovalRecord& record) {
    py::dict out;
    if (const auto* d = std::get_if<BoundViolationDetail>(&record.detail)) {
        out["bound"] = d->side == BoundSide::Upper ? "upper" : "lower";
        out["bound_value"] = d->bound_value;
        out["price"] = d->price;
    } else if (const auto* d = std::get_if<OutlierDetail>(&record.detail)) {
        out["residual"] = d->residual;
        out["c_hat"] = d->c_hat;
    } else if (const auto* d = std::get_if<MonotonicityDetail>(&record.detail)) {
        out["neighbor_id"] = d->neighbor_id;
        out["neighbor_strike"] = d->neighbor_strike;
        out["neighbor_price"] = d->neighbor_price;
        out["against"] = d->against_smaller_strike ? "smaller_strike" : "larger_strike";
    } else if (const auto* d = std::get_if<OpenInterestDetail>(&record.detail)) {
        out["kept_id"] = d->kept_id;
        out["kept_open_interest"] = d->kept_open_interest;
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_optclean, m) {
    m.doc() = "Option-price dataset cleaning: no-arbitrage bound filtering, per-maturity "
              "regression outlier removal, duplicate resolution.";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

    py::enum_<OptionType>(m, "OptionType")
        .value("Call", OptionType::Call)
        .value("Put", OptionType::Put);

    py::enum_<RemovalStage>(m, "RemovalStage")
        .value("ArbitrageBound", RemovalStage::ArbitrageBound)
        .value("Outlier", RemovalStage::Outlier)
        .value("DuplicateMonotonicity", RemovalStage::DuplicateMonotonicity)
        .value("DuplicateOpenInterest", RemovalStage::DuplicateOpenInterest);

    py::enum_<SkipReason>(m, "SkipReason")
        .value("GroupTooSmall", SkipReason::GroupTooSmall)
        .value("DegenerateResiduals", SkipReason::DegenerateResiduals)
        .value("SingularDesign", SkipReason::SingularDesign);

    py::class_<OptionQuote>(m, "OptionQuote")
        .def(py::init([](std::int64_t id, OptionType type, double strike, int maturity_days,
                         double price, std::int64_t open_interest) {
                 return OptionQuote{id, type, strike, maturity_days, price, open_interest};
             }),
             "id"_a, "option_type"_a, "strike"_a, "maturity_days"_a, "price"_a,
             "open_interest"_a)
        .def_readwrite("id", &OptionQuote::id)
        .def_readwrite("option_type", &OptionQuote::option_type)
        .def_readwrite("strike", &OptionQuote::strike)
        .def_readwrite("maturity_days", &OptionQuote::maturity_days)
        .def_readwrite("price", &OptionQuote::price)
        .def_readwrite("open_interest", &OptionQuote::open_interest)
        .def("__repr__", [](const OptionQuote& q) {
            return "OptionQuote(id=" + std::to_string(q.id) + ", " +
                   std::string(to_string(q.option_type)) + ", K=" + std::to_string(q.strike) +
                   ", " + std::to_string(q.maturity_days) + "d, price=" +
                   std::to_string(q.price) + ", oi=" + std::to_string(q.open_interest) + ")";
        });

    py::class_<MarketContext>(m, "MarketContext")
        .def(py::init<double, double, double>(), "spot"_a, "rate"_a, "dividend_yield"_a = 0.0)
        .def_property_readonly("spot", &MarketContext::spot)
        .def_property_readonly("rate", &MarketContext::rate)
        .def_property_readonly("dividend_yield", &MarketContext::dividend_yield);

    py::class_<CleaningConfig>(m, "CleaningConfig")
        .def(py::init([](double alpha, int poly_degree, int min_group_size, double day_count) {
                 return CleaningConfig{alpha, poly_degree, min_group_size, day_count};
             }),
             "alpha"_a = 0.01, "poly_degree"_a = 2, "min_group_size"_a = 5,
             "day_count"_a = 365.0)
        .def_readwrite("alpha", &CleaningConfig::alpha)
        .def_readwrite("poly_degree", &CleaningConfig::poly_degree)
        .def_readwrite("min_group_size", &CleaningConfig::min_group_size)
        .def_readwrite("day_count", &CleaningConfig::day_count);

    py::class_<RemovalRecord>(m, "RemovalRecord")
        .def_readonly("quote_id", &RemovalRecord::quote_id)
        .def_readonly("stage", &RemovalRecord::stage)
        .def("reason", &RemovalRecord::reason)
        .def_property_readonly("detail", &detail_to_dict);

    py::class_<StageCounts>(m, "StageCounts")
        .def_readonly("arbitrage", &StageCounts::arbitrage)
        .def_readonly("outlier", &StageCounts::outlier)
        .def_readonly("duplicate_monotonicity", &StageCounts::duplicate_monotonicity)
        .def_readonly("duplicate_open_interest", &StageCounts::duplicate_open_interest)
        .def("total", &StageCounts::total);

    py::class_<TypeReport>(m, "TypeReport")
        .def_readonly("input_count", &TypeReport::input_count)
        .def_readonly("removed", &TypeReport::removed)
        .def_readonly("output_count", &TypeReport::output_count)
        .def_readonly("removed_fraction", &TypeReport::removed_fraction);

    py::class_<GroupWarning>(m, "GroupWarning")
        .def_readonly("option_type", &GroupWarning::option_type)
        .def_readonly("maturity_days", &GroupWarning::maturity_days)
        .def_readonly("group_size", &GroupWarning::group_size)
        .def_readonly("reason", &GroupWarning::reason);

    py::class_<CleaningReport>(m, "CleaningReport")
        .def_readonly("calls", &CleaningReport::calls)
        .def_readonly("puts", &CleaningReport::puts)
        .def_readonly("warnings", &CleaningReport::warnings)
        .def_readonly("config", &CleaningReport::config);

    py::class_<PriceBounds>(m, "PriceBounds")
        .def_readonly("lower", &PriceBounds::lower)
        .def_readonly("upper", &PriceBounds::upper)
        .def("contains", &PriceBounds::contains, "price"_a);

    py::class_<PolyCoeffs>(m, "PolyCoeffs")
        .def_readonly("c", &PolyCoeffs::c)
        .def("degree", &PolyCoeffs::degree)
        .def("__call__", &PolyCoeffs::operator(), "x"_a);

    py::class_<MaturityGroup>(m, "MaturityGroup")
        .def(py::init([](OptionType type, int maturity_days, std::vector<OptionQuote> quotes) {
                 return MaturityGroup{type, maturity_days, std::move(quotes)};
             }),
             "option_type"_a, "maturity_days"_a, "quotes"_a)
        .def_readwrite("option_type", &MaturityGroup::option_type)
        .def_readwrite("maturity_days", &MaturityGroup::maturity_days)
        .def_readwrite("quotes", &MaturityGroup::quotes);

    py::class_<GroupDiagnostics>(m, "GroupDiagnostics")
        .def_readonly("coeffs", &GroupDiagnostics::coeffs)
        .def_readonly("sigma_hat", &GroupDiagnostics::sigma_hat)
        .def_readonly("c_hat", &GroupDiagnostics::c_hat)
        .def_readonly("residuals", &GroupDiagnostics::residuals)
        .def_readonly("flagged_ids", &GroupDiagnostics::flagged_ids);

    py::class_<GroupOutcome>(m, "GroupOutcome")
        .def_readonly("group", &GroupOutcome::group)
        .def_readonly("diagnostics", &GroupOutcome::diagnostics)
        .def_readonly("skip", &GroupOutcome::skip);

    py::class_<DuplicateSet>(m, "DuplicateSet")
        .def_readonly("option_type", &DuplicateSet::option_type)
        .def_readonly("strike", &DuplicateSet::strike)
        .def_readonly("maturity_days", &DuplicateSet::maturity_days)
        .def_readonly("quote_ids", &DuplicateSet::quote_ids);

    py::class_<PipelineResult>(m, "PipelineResult")
        .def_readonly("clean", &PipelineResult::clean)
        .def_readonly("report", &PipelineResult::report)
        .def_readonly("removals", &PipelineResult::removals)
        .def_readonly("group_outcomes", &PipelineResult::group_outcomes);

    // model
    m.def("validate_quote", [](const OptionQuote& q) { return validate_quote(q); }, "quote"_a);
    m.def("years_to_maturity", &years_to_maturity, "maturity_days"_a, "day_count"_a);

    // numerics
    m.def("fit_polynomial",
          [](const std::vector<double>& x, const std::vector<double>& y, int degree) {
              return fit_polynomial(x, y, degree);
          },
          "x"_a, "y"_a, "degree"_a);
    m.def("residuals",
          [](const std::vector<double>& x, const std::vector<double>& y,
             const PolyCoeffs& coeffs) { return residuals(x, y, coeffs); },
          "x"_a, "y"_a, "coeffs"_a);
    m.def("residual_sigma",
          [](const std::vector<double>& r) { return residual_sigma(r); }, "values"_a);
    m.def("normal_quantile", &normal_quantile, "p"_a);

    // arbitrage filter
    m.def("call_bounds", &call_bounds, "ctx"_a, "strike"_a, "years"_a);
    m.def("put_bounds", &put_bounds, "ctx"_a, "strike"_a, "years"_a);
    m.def("filter_arbitrage",
          [](const std::vector<OptionQuote>& quotes, const MarketContext& ctx,
             const CleaningConfig& config) {
              ArbitrageFilterResult result = filter_arbitrage(quotes, ctx, config);
              return py::make_tuple(result.kept, result.removed);
          },
          "quotes"_a, "ctx"_a, "config"_a = CleaningConfig{});

    // outlier detector
    m.def("group_by_maturity",
          [](const std::vector<OptionQuote>& quotes) { return group_by_maturity(quotes); },
          "quotes"_a);
    m.def("critical_value", &critical_value, "sigma"_a, "n"_a, "alpha"_a);
    m.def("detect_outliers",
          [](const MaturityGroup& group, const CleaningConfig& config) {
              OutlierDetectionResult result = detect_outliers(group, config);
              return py::make_tuple(result.kept, result.removed, result.outcome);
          },
          "group"_a, "config"_a = CleaningConfig{});
    m.def("run_outlier_stage",
          [](const std::vector<OptionQuote>& quotes, const CleaningConfig& config) {
              OutlierStageResult result = run_outlier_stage(quotes, config);
              return py::make_tuple(result.kept, result.removed, result.outcomes);
          },
          "quotes"_a, "config"_a = CleaningConfig{});

    // dedup
    m.def("find_duplicate_sets",
          [](const std::vector<OptionQuote>& quotes) { return find_duplicate_sets(quotes); },
          "quotes"_a);
    m.def("resolve_duplicates",
          [](const std::vector<OptionQuote>& quotes) {
              DedupResult result = resolve_duplicates(quotes);
              return py::make_tuple(result.kept, result.removed);
          },
          "quotes"_a);

    // pipeline
    m.def("run_pipeline",
          [](const std::vector<OptionQuote>& quotes, const MarketContext& ctx,
             const CleaningConfig& config) { return run_pipeline(quotes, ctx, config); },
          "quotes"_a, "ctx"_a, "config"_a = CleaningConfig{});

    // ingest
    m.def("read_quotes",
          [](const std::filesystem::path& path, char delimiter, bool collect_errors) {
              ReadResult result = read_quotes(path, {delimiter, collect_errors});
              py::list skipped;
              for (const RowIssue& issue : result.skipped)
                  skipped.append(py::make_tuple(issue.line, issue.message));
              return py::make_tuple(result.quotes, skipped);
          },
          "path"_a, "delimiter"_a = ',', "collect_errors"_a = false);
    m.def("write_clean",
          [](const std::filesystem::path& path, const std::vector<OptionQuote>& quotes,
             char delimiter) { write_clean(path, quotes, delimiter); },
          "path"_a, "quotes"_a, "delimiter"_a = ',');
    m.def("report_to_json",
          [](const CleaningReport& report, const std::vector<RemovalRecord>& removals) {
              return report_to_json(report, removals);
          },
          "report"_a, "removals"_a);
    m.def("write_report",
          [](const std::filesystem::path& path, const CleaningReport& report,
             const std::vector<RemovalRecord>& removals) {
              write_report(path, report, removals);
          },
          "path"_a, "report"_a, "removals"_a);
    m.def("write_plot_data",
          [](const std::filesystem::path& dir, const std::vector<GroupOutcome>& outcomes) {
              write_plot_data(dir, outcomes);
          },
          "dir"_a, "outcomes"_a);
    m.def("compute_log_returns",
          [](const std::vector<double>& prices) { return compute_log_returns(prices); },
          "prices"_a);
    m.def("read_price_series",
          [](const std::filesystem::path& path, char delimiter) {
              return read_price_series(path, delimiter);
          },
          "path"_a, "delimiter"_a = ',');

    // synthgen
    py::module_ sg = m.def_submodule("synthgen", "Arbitrage-free synthetic option chains "
                                                 "with labeled error injection");

    py::enum_<synthgen::InjectionKind>(sg, "InjectionKind")
        .value("BoundViolation", synthgen::InjectionKind::BoundViolation)
        .value("Outlier", synthgen::InjectionKind::Outlier)
        .value("Duplicate", synthgen::InjectionKind::Duplicate);

    py::class_<synthgen::GroupSpec>(sg, "GroupSpec")
        .def(py::init([](OptionType type, int maturity_days, std::array<double, 3> smile,
                         std::vector<double> strikes, double noise_sigma,
                         std::int64_t open_interest_base) {
                 return synthgen::GroupSpec{type, maturity_days, smile, std::move(strikes),
                                            noise_sigma, open_interest_base};
             }),
             "option_type"_a, "maturity_days"_a, "smile"_a, "strikes"_a, "noise_sigma"_a,
             "open_interest_base"_a = 100)
        .def_readwrite("option_type", &synthgen::GroupSpec::option_type)
        .def_readwrite("maturity_days", &synthgen::GroupSpec::maturity_days)
        .def_readwrite("smile", &synthgen::GroupSpec::smile)
        .def_readwrite("strikes", &synthgen::GroupSpec::strikes)
        .def_readwrite("noise_sigma", &synthgen::GroupSpec::noise_sigma)
        .def_readwrite("open_interest_base", &synthgen::GroupSpec::open_interest_base);

    py::class_<synthgen::InjectionCounts>(sg, "InjectionCounts")
        .def(py::init([](int bound_violations, int outliers, int duplicate_sets,
                         double outlier_scale) {
                 return synthgen::InjectionCounts{bound_violations, outliers, duplicate_sets,
                                                  outlier_scale};
             }),
             "bound_violations"_a = 0, "outliers"_a = 0, "duplicate_sets"_a = 0,
             "outlier_scale"_a = 10.0)
        .def_readwrite("bound_violations", &synthgen::InjectionCounts::bound_violations)
        .def_readwrite("outliers", &synthgen::InjectionCounts::outliers)
        .def_readwrite("duplicate_sets", &synthgen::InjectionCounts::duplicate_sets)
        .def_readwrite("outlier_scale", &synthgen::InjectionCounts::outlier_scale);

    py::class_<synthgen::InjectionLabel>(sg, "InjectionLabel")
        .def_readonly("quote_id", &synthgen::InjectionLabel::quote_id)
        .def_readonly("kind", &synthgen::InjectionLabel::kind);

    py::class_<synthgen::Fixture>(sg, "Fixture")
        .def_readonly("quotes", &synthgen::Fixture::quotes)
        .def_readonly("labels", &synthgen::Fixture::labels);

    sg.def("generate_group", &synthgen::generate_group, "spec"_a, "ctx"_a, "config"_a,
           "seed"_a, "first_id"_a = 0);
    sg.def("inject_errors", &synthgen::inject_errors, "group"_a, "ctx"_a, "config"_a,
           "counts"_a, "noise_sigma"_a, "seed"_a);
    sg.def("make_fixture",
           [](const std::vector<synthgen::GroupSpec>& specs, const MarketContext& ctx,
              const CleaningConfig& config, const synthgen::InjectionCounts& counts,
              std::uint64_t seed) {
               return synthgen::make_fixture(specs, ctx, config, counts, seed);
           },
           "specs"_a, "ctx"_a, "config"_a, "counts"_a, "seed"_a);
    sg.def("write_labels",
           [](const std::filesystem::path& path,
              const std::vector<synthgen::InjectionLabel>& labels) {
               synthgen::write_labels(path, labels);
           },
           "path"_a, "labels"_a);
    sg.def("read_labels", &synthgen::read_labels, "path"_a);

#ifdef VERSION_INFO
    m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif
}
