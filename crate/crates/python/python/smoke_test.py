"""Smoke test of the liespec extension module.

Build and install first, e.g. `maturin build --release -o dist && pip install dist/*.whl`
from crates/python, then run `python python/smoke_test.py`.
"""

import math

import liespec


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    liespec.self_test()

    su2 = liespec.Group("su2")
    assert (su2.dim, su2.k_max) == (3, 2)
    assert su2.ell() == 2
    assert liespec.Group("su2xsu2").k_max == 5

    r = liespec.lambda1(su2)
    assert close(r["lambda1"], 3.0) and r["certified"], r
    assert r["witness"] == "spin(1/2)", r
    assert close(liespec.lambda1(liespec.Group("so3"))["lambda1"], 8.0)
    t2 = liespec.Group("t2")
    assert close(liespec.lambda1(t2)["lambda1"], 4 * math.pi**2)

    m = liespec.Metric([[3, 0, 0], [0, 2, 0], [0, 0, 1]])
    assert m.sigma == [3.0, 2.0, 1.0]
    assert close(m.norm([1, 0, 0]), 1 / 3)
    assert m.scaled(2.0).sigma == [6.0, 4.0, 2.0]
    big = liespec.Metric.from_aat([[10, 0, 0], [0, 5, 0], [0, 0, 2]])
    assert m.loewner_leq(big) and not big.loewner_leq(m)
    assert liespec.Metric.identity(3).loewner_leq(big)

    d = liespec.diameter(t2)
    assert d["lower"] <= math.sqrt(2) / 2 + 1e-9 <= d["upper"] + 1e-9, d
    d = liespec.diameter(su2, net_size=3000)
    assert 0.95 * math.pi / 2 <= d["value"] <= 1.05 * math.pi, d
    lo, hi = liespec.diameter_bounds(su2, m)
    assert close(lo, math.pi / 4) and close(hi, math.pi / 2)

    rec = liespec.egs_ratio(t2)
    assert close(rec["ratio"], 2 * math.pi**2, 1e-6) and rec["li_ok"], rec

    assert liespec.lambda1_restricted(su2, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], 2) == 8.0
    assert math.isinf(liespec.lambda1_restricted(su2, [[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3))

    s = liespec.sample_metric(t2, seed=5)
    assert len(s.sigma) == 2

    report = liespec.scan(t2, 20, seed=1, grid_resolution=24)
    assert report["schema_version"] == 1 and len(report["records"]) == 20
    assert report["summary"]["violation_counts"]["li_ok"] == 0

    deg = liespec.degenerate(t2, "torus-dense-line", [1, 4, 16])
    trends = {t["quantity"]: t["trend"] for t in deg["trends"]}
    assert trends["diam*sigma_2"] == "strictly_decreasing", trends

    v = liespec.verify(t2, trials=5)
    assert all(c["failures"] == 0 for c in v["checks"]), v

    try:
        liespec.Metric([[1, 0], [0, 0]])
    except ValueError:
        pass
    else:
        raise AssertionError("singular matrix accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
