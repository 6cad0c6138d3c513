"""Smoke tests for the _optclean extension module."""

import math

import pytest

import optclean as oc


def make_quote(i, type_, strike, days, price, oi=10):
    return oc.OptionQuote(i, type_, strike, days, price, oi)


def test_version():
    assert oc.__version__


def test_normal_quantile():
    assert oc.normal_quantile(0.5) == pytest.approx(0.0, abs=1e-12)
    assert oc.normal_quantile(0.995) == pytest.approx(2.5758293035489004, abs=1e-9)
    with pytest.raises(oc.Error):
        oc.normal_quantile(1.5)


def test_critical_value_matches_closed_form():
    c = oc.critical_value(2.0, 25, 0.01)
    expected = 2.0 * oc.normal_quantile(0.5 + 0.5 * (0.99) ** (1 / 25))
    assert c == pytest.approx(expected, rel=1e-12)


def test_bounds():
    ctx = oc.MarketContext(spot=1353.39, rate=0.0015)
    b = oc.call_bounds(ctx, 1350.0, 0.5)
    assert b.lower == pytest.approx(4.402120407404027, abs=1e-9)
    assert b.upper == pytest.approx(1353.39)
    assert b.contains(b.lower) and b.contains(b.upper)
    assert not b.contains(b.upper + 0.01)

    with pytest.raises(oc.Error):
        oc.MarketContext(spot=-1.0, rate=0.0)
    with pytest.raises(oc.Error):
        oc.MarketContext(spot=100.0, rate=0.0, dividend_yield=0.03)


def test_fit_and_residuals():
    fit = oc.fit_polynomial([0.0, 1.0, 2.0], [0.0, 1.0, 4.0], 2)
    assert fit.c == pytest.approx([0.0, 0.0, 1.0], abs=1e-10)
    assert fit(3.0) == pytest.approx(9.0, abs=1e-9)
    r = oc.residuals([1.0, 2.0, 3.0], [3.0, 5.0, 8.0], oc.fit_polynomial([1, 2, 3], [3, 5, 7], 1))
    assert r == pytest.approx([0.0, 0.0, 1.0], abs=1e-9)


def test_pipeline_end_to_end():
    ctx = oc.MarketContext(spot=1000.0, rate=0.0015)
    quotes = []
    smile = lambda k: 1045.0 - 1.4 * k + 0.0005 * k * k
    for i in range(20):
        strike = 800.0 + 20.0 * i
        quotes.append(make_quote(i, oc.OptionType.Call, strike, 91, smile(strike), 100 + i))
    quotes[3].price = 2000.0       # arbitrage violation
    quotes[11].price += 60.0       # outlier
    dup = make_quote(20, oc.OptionType.Call, quotes[6].strike, 91, quotes[6].price + 0.2, 1)
    quotes.append(dup)

    result = oc.run_pipeline(quotes, ctx, oc.CleaningConfig())
    stages = {r.quote_id: r.stage for r in result.removals}
    assert stages[3] == oc.RemovalStage.ArbitrageBound
    assert stages[11] == oc.RemovalStage.Outlier
    assert stages[20] == oc.RemovalStage.DuplicateOpenInterest
    assert len(result.clean) == 18

    report = result.report
    assert report.calls.input_count == 21
    assert report.calls.output_count == 18
    assert report.calls.removed.total() == 3
    assert report.calls.removed_fraction == pytest.approx(3 / 21)

    removal = [r for r in result.removals if r.quote_id == 3][0]
    assert removal.detail["bound"] == "upper"
    assert "upper" in removal.reason()


def test_file_round_trip(tmp_path):
    quotes = [
        make_quote(0, oc.OptionType.Call, 100.0, 30, 5.2, 150),
        make_quote(1, oc.OptionType.Put, 95.5, 60, 2.75, 0),
    ]
    path = tmp_path / "quotes.csv"
    oc.write_clean(path, quotes)
    loaded, skipped = oc.read_quotes(path)
    assert skipped == []
    assert [q.strike for q in loaded] == [100.0, 95.5]
    assert loaded[1].option_type == oc.OptionType.Put

    report = oc.run_pipeline(loaded, oc.MarketContext(100.0, 0.01), oc.CleaningConfig()).report
    report_path = tmp_path / "report.json"
    oc.write_report(report_path, report, [])
    assert report_path.exists()
    import json

    doc = json.loads(report_path.read_text())
    assert doc["per_type_counts"]["call"]["input"] == 1


def test_log_returns():
    r = oc.compute_log_returns([100.0, 105.0])
    assert r == pytest.approx([math.log(1.05)], rel=1e-12)
    with pytest.raises(oc.Error):
        oc.compute_log_returns([100.0])


def test_synthgen_fixture():
    sg = oc.synthgen
    spec = sg.GroupSpec(
        oc.OptionType.Call,
        91,
        [1045.0, -1.4, 0.0005],
        [700.0 + 13.0 * i for i in range(45)],
        0.35,
    )
    ctx = oc.MarketContext(1000.0, 0.0015)
    group = sg.generate_group(spec, ctx, oc.CleaningConfig(), 7)
    again = sg.generate_group(spec, ctx, oc.CleaningConfig(), 7)
    assert [q.price for q in group.quotes] == [q.price for q in again.quotes]

    fixture = sg.make_fixture([spec], ctx, oc.CleaningConfig(),
                              sg.InjectionCounts(bound_violations=2, duplicate_sets=1), 11)
    kinds = {label.quote_id: label.kind for label in fixture.labels}
    assert len(kinds) == 3
    result = oc.run_pipeline(fixture.quotes, ctx, oc.CleaningConfig())
    removed = {r.quote_id for r in result.removals}
    assert set(kinds) == removed
