#include <doctest.h>

#include "optclean/model.hpp"

using namespace optclean;

TEST_CASE("validate_quote accepts a well-formed quote unchanged") {
    const OptionQuote quote{0, OptionType::Call, 100.0, 30, 5.0, 10};
    const OptionQuote& same = validate_quote(quote);
    CHECK(&same == &quote);
}

TEST_CASE("validate_quote rejects boundary violations") {
    OptionQuote quote{1, OptionType::Put, 100.0, 0, 5.0, 10};
    CHECK_THROWS_AS(validate_quote(quote), ZeroMaturity);

    quote = {2, OptionType::Call, -5.0, 30, 5.0, 10};
    CHECK_THROWS_AS(validate_quote(quote), NegativeField);

    quote = {3, OptionType::Call, 100.0, 30, -0.01, 10};
    CHECK_THROWS_AS(validate_quote(quote), NegativeField);

    quote = {4, OptionType::Call, 100.0, 30, 5.0, -1};
    CHECK_THROWS_AS(validate_quote(quote), NegativeField);
}

TEST_CASE("zero price and zero strike are admitted") {
    CHECK_NOTHROW(validate_quote(OptionQuote{0, OptionType::Call, 0.0, 1, 0.0, 0}));
}

TEST_CASE("years_to_maturity") {
    CHECK(years_to_maturity(365, 365.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(years_to_maturity(160, 365.0) ==
          doctest::Approx(0.4383561643835616).epsilon(1e-12));
    CHECK(years_to_maturity(182, 365.0) ==
          doctest::Approx(0.4986301369863014).epsilon(1e-12));
    CHECK_THROWS_AS(years_to_maturity(0, 365.0), Error);
    CHECK_THROWS_AS(years_to_maturity(30, 0.0), Error);
}

TEST_CASE("years_to_maturity is strictly increasing in maturity_days") {
    for (double day_count : {252.0, 360.0, 365.0}) {
        double previous = 0.0;
        for (int days = 1; days <= 800; days += 7) {
            const double years = years_to_maturity(days, day_count);
            CHECK(years > previous);
            previous = years;
        }
    }
}

TEST_CASE("market context invariants") {
    CHECK_NOTHROW(MarketContext(1353.39, 0.0015));
    CHECK_THROWS_AS(MarketContext(0.0, 0.0015), Error);
    CHECK_THROWS_AS(MarketContext(-10.0, 0.0015), Error);
    CHECK_THROWS_AS(MarketContext(100.0, 0.0015, 0.02), Error);  // dividends unsupported
    CHECK_NOTHROW(MarketContext(100.0, -0.005));                 // negative rates are fine
}

TEST_CASE("cleaning config invariants") {
    CHECK_NOTHROW(validate_config(CleaningConfig{}));
    CHECK_THROWS_AS(validate_config(CleaningConfig{0.0, 2, 5, 365.0}), Error);
    CHECK_THROWS_AS(validate_config(CleaningConfig{1.0, 2, 5, 365.0}), Error);
    CHECK_THROWS_AS(validate_config(CleaningConfig{0.01, 0, 5, 365.0}), Error);
    CHECK_THROWS_AS(validate_config(CleaningConfig{0.01, 2, 3, 365.0}), Error);
    CHECK_THROWS_AS(validate_config(CleaningConfig{0.01, 2, 5, 0.0}), Error);
    // min_group_size has to leave at least one residual degree of freedom
    CHECK_NOTHROW(validate_config(CleaningConfig{0.01, 2, 4, 365.0}));
}
