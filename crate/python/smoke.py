"""Smoke test for the ttp2 extension module.

Build and install first, e.g. ``pip install crates/py`` or
``maturin develop -m crates/py/Cargo.toml``.
"""

import json

import ttp2


def main() -> None:
    dm = ttp2.DistanceMatrix.worst_case(8)
    assert dm.n == 8 and dm.is_metric

    lb, d_g, d_m, per_team = ttp2.lower_bound(dm)
    assert (lb, d_g, d_m) == (48, 24, 0)
    assert sum(per_team) == lb

    pairs, weight = ttp2.min_perfect_matching(dm)
    assert weight == 0 and len(pairs) == 4

    schedule, report = ttp2.solve(dm)
    assert schedule.is_feasible(), schedule.violations()
    assert (report.lb, report.total, report.gap_percent) == (48, 60, "25.00")
    assert report.within_bound
    assert schedule.cost(dm) == report.total

    again = ttp2.Schedule.parse(schedule.to_json())
    assert again.to_text() == schedule.to_text()
    assert json.loads(schedule.to_json())["n"] == 8

    rnd = ttp2.DistanceMatrix.parse(ttp2.DistanceMatrix.random_metric(16, 7).to_text())
    before = ttp2.solve(rnd, local_search=False)[1].total
    _, after = ttp2.solve(rnd)
    assert after.total <= before
    num, den = ttp2.ratio_bound(16)
    assert after.total * den <= num * after.lb

    try:
        ttp2.solve(ttp2.DistanceMatrix.random_metric(10, 1))
    except ValueError as e:
        assert "mod 4" in str(e)
    else:
        raise AssertionError("n=10 should be rejected")

    print(f"ok: {report!r}, random n=16 total {after.total} (before {before})")


if __name__ == "__main__":
    main()
