#include "optclean/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace optclean {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view trim(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    return text;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_double(std::string_view field, std::size_t line, std::size_t column) {
    const std::string_view text = trim(field);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value))
        throw ParseError("expected a finite number, got '" + std::string(text) + "'", line,
                         column);
    return value;
}

std::int64_t parse_int(std::string_view field, std::size_t line, std::size_t column) {
    const std::string_view text = trim(field);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError("expected an integer, got '" + std::string(text) + "'", line, column);
    return value;
}

// Shortest representation that round-trips the exact double.
std::string format_double(double value) {
    char buffer[32];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

constexpr std::string_view kQuoteHeader = "type,strike,maturity_days,price,open_interest";

std::string expected_header(char delimiter) {
    std::string header(kQuoteHeader);
    std::replace(header.begin(), header.end(), ',', delimiter);
    return header;
}

std::string lower(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char ch : text)
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    return out;
}

// Tolerate a trailing \r so CRLF files read cleanly.
void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

ordered_json detail_to_json(const RemovalRecord& record) {
    struct Visitor {
        ordered_json operator()(const BoundViolationDetail& d) const {
            return {{"bound", d.side == BoundSide::Upper ? "upper" : "lower"},
                    {"bound_value", d.bound_value},
                    {"price", d.price}};
        }
        ordered_json operator()(const OutlierDetail& d) const {
            return {{"residual", d.residual}, {"c_hat", d.c_hat}};
        }
        ordered_json operator()(const MonotonicityDetail& d) const {
            return {{"neighbor_id", d.neighbor_id},
                    {"neighbor_strike", d.neighbor_strike},
                    {"neighbor_price", d.neighbor_price},
                    {"against", d.against_smaller_strike ? "smaller_strike" : "larger_strike"}};
        }
        ordered_json operator()(const OpenInterestDetail& d) const {
            return {{"kept_id", d.kept_id}, {"kept_open_interest", d.kept_open_interest}};
        }
    };
    return std::visit(Visitor{}, record.detail);
}

ordered_json type_report_to_json(const TypeReport& report) {
    return {{"input", report.input_count},
            {"removed", report.removed.total()},
            {"output", report.output_count},
            {"removed_fraction", report.removed_fraction}};
}

ordered_json stage_counts_to_json(const StageCounts& counts) {
    return {{"arbitrage_bound", counts.arbitrage},
            {"outlier", counts.outlier},
            {"duplicate_monotonicity", counts.duplicate_monotonicity},
            {"duplicate_open_interest", counts.duplicate_open_interest}};
}

}  // namespace

ReadResult read_quotes(const std::filesystem::path& path, const ReadOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line))
        throw ParseError("empty file, expected header '" + expected_header(options.delimiter) +
                             "'", 1);
    strip_cr(line);
    if (lower(line) != expected_header(options.delimiter))
        throw ParseError("bad header '" + line + "', expected '" +
                             expected_header(options.delimiter) + "'", 1);

    ReadResult result;
    std::int64_t row_id = 0;
    std::size_t file_line = 1;
    while (std::getline(in, line)) {
        ++file_line;
        strip_cr(line);
        if (trim(line).empty()) continue;
        const std::int64_t id = row_id++;

        auto handle_bad_row = [&](const std::string& message) {
            if (!options.collect_errors)
                throw ValidationError("row " + std::to_string(file_line) + ": " + message,
                                      {{file_line, message}});
            result.skipped.push_back(RowIssue{file_line, message});
        };

        const auto fields = split(line, options.delimiter);
        if (fields.size() != 5)
            throw ParseError("expected 5 fields, got " + std::to_string(fields.size()),
                             file_line);
        try {
            OptionQuote quote;
            quote.id = id;
            const auto type = option_type_from_string(trim(fields[0]));
            if (!type)
                throw ParseError("unknown option type '" + std::string(trim(fields[0])) + "'",
                                 file_line, 1);
            quote.option_type = *type;
            quote.strike = parse_double(fields[1], file_line, 2);
            const std::int64_t days = parse_int(fields[2], file_line, 3);
            if (days > std::numeric_limits<int>::max())
                throw ParseError("maturity_days out of range", file_line, 3);
            quote.maturity_days = static_cast<int>(days);
            quote.price = parse_double(fields[3], file_line, 4);
            quote.open_interest = parse_int(fields[4], file_line, 5);
            validate_quote(quote);
            result.quotes.push_back(quote);
        } catch (const NegativeField& e) {
            handle_bad_row(e.what());
        } catch (const ZeroMaturity& e) {
            handle_bad_row(e.what());
        }
    }
    return result;
}

void write_clean(const std::filesystem::path& path, std::span<const OptionQuote> quotes,
                 char delimiter) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << expected_header(delimiter) << '\n';
    for (const OptionQuote& quote : quotes) {
        out << to_string(quote.option_type) << delimiter << format_double(quote.strike)
            << delimiter << quote.maturity_days << delimiter << format_double(quote.price)
            << delimiter << quote.open_interest << '\n';
    }
    if (!out) throw IoError("write failed for " + path.string());
}

std::string report_to_json(const CleaningReport& report,
                           std::span<const RemovalRecord> removals) {
    ordered_json doc;
    doc["config"] = {{"alpha", report.config.alpha},
                     {"poly_degree", report.config.poly_degree},
                     {"min_group_size", report.config.min_group_size},
                     {"day_count", report.config.day_count}};
    if (report.market)
        doc["market"] = {{"spot", report.market->spot()},
                         {"rate", report.market->rate()},
                         {"dividend_yield", report.market->dividend_yield()}};
    doc["per_type_counts"] = {{"call", type_report_to_json(report.calls)},
                              {"put", type_report_to_json(report.puts)}};
    doc["stage_counts"] = {{"call", stage_counts_to_json(report.calls.removed)},
                           {"put", stage_counts_to_json(report.puts.removed)}};
    doc["warnings"] = ordered_json::array();
    for (const GroupWarning& warning : report.warnings)
        doc["warnings"].push_back({{"option_type", to_string(warning.option_type)},
                                   {"maturity_days", warning.maturity_days},
                                   {"group_size", warning.group_size},
                                   {"reason", to_string(warning.reason)}});
    doc["removals"] = ordered_json::array();
    for (const RemovalRecord& record : removals)
        doc["removals"].push_back({{"id", record.quote_id},
                                   {"stage", to_string(record.stage)},
                                   {"reason", record.reason()},
                                   {"diagnostics", detail_to_json(record)}});
    return doc.dump(2) + "\n";
}

void write_report(const std::filesystem::path& path, const CleaningReport& report,
                  std::span<const RemovalRecord> removals) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << report_to_json(report, removals);
    if (!out) throw IoError("write failed for " + path.string());
}

void write_plot_data(const std::filesystem::path& dir,
                     std::span<const GroupOutcome> outcomes) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    for (const GroupOutcome& outcome : outcomes) {
        if (!outcome.diagnostics) continue;
        const GroupDiagnostics& diag = *outcome.diagnostics;
        std::ostringstream name;
        name << to_string(outcome.group.option_type) << '_' << outcome.group.maturity_days
             << "d.csv";
        std::ofstream out(dir / name.str(), std::ios::binary);
        if (!out) throw IoError("cannot write " + (dir / name.str()).string());
        out << "strike,price,fitted,residual,c_hat\n";
        for (std::size_t i = 0; i < outcome.group.quotes.size(); ++i) {
            const OptionQuote& quote = outcome.group.quotes[i];
            out << format_double(quote.strike) << ',' << format_double(quote.price) << ','
                << format_double(quote.price - diag.residuals[i]) << ','
                << format_double(diag.residuals[i]) << ',' << format_double(diag.c_hat)
                << '\n';
        }
    }
}

std::vector<double> compute_log_returns(std::span<const double> prices) {
    if (prices.size() < 2)
        throw TooShort("log returns need at least two prices, got " +
                       std::to_string(prices.size()));
    for (double price : prices)
        if (!(price > 0.0))
            throw NonPositivePrice("log returns need positive prices, got " +
                                   std::to_string(price));
    std::vector<double> returns;
    returns.reserve(prices.size() - 1);
    for (std::size_t t = 1; t < prices.size(); ++t)
        returns.push_back(std::log(prices[t] / prices[t - 1]));
    return returns;
}

std::vector<double> read_price_series(const std::filesystem::path& path, char delimiter) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty file, expected a price header", 1);
    strip_cr(line);
    const auto header = split(line, delimiter);
    std::size_t price_column = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
        if (lower(std::string(trim(header[i]))) == "price") price_column = i;
    if (price_column == header.size())
        throw ParseError("header '" + line + "' has no 'price' column", 1);

    std::vector<double> prices;
    std::size_t file_line = 1;
    while (std::getline(in, line)) {
        ++file_line;
        strip_cr(line);
        if (trim(line).empty()) continue;
        const auto fields = split(line, delimiter);
        if (fields.size() <= price_column)
            throw ParseError("row has no price field", file_line, price_column + 1);
        prices.push_back(parse_double(fields[price_column], file_line, price_column + 1));
    }
    return prices;
}

void write_log_returns(const std::filesystem::path& path, std::span<const double> returns) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "log_return\n";
    for (double value : returns) out << format_double(value) << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace optclean
