import math

import pytest

import sardkit as sk


def test_bracket_and_martinet():
    d = sk.builtin("loop")
    assert sk.lie_bracket(d.X, d.Y) == sk.VecField("0", "0", "y^2 - x^2*(x+z)")
    md = sk.analyze(d)
    assert md.h in (sk.Poly("y^2 - x^2*(x+z)"), -sk.Poly("y^2 - x^2*(x+z)"))
    assert sk.analyze(sk.builtin("heisenberg")).sigma_empty
    assert sk.classify_point(md, (0.0, 0.0, 1.0)) == "SingularLocus"
    assert sk.check_bracket_generating(sk.builtin("martinet_flat"), (0, 0, 0), 3)


def test_poly_roundtrip_and_errors():
    p = sk.parse("(x+y)^3 - z/2")
    assert sk.parse(str(p)) == p
    assert sk.divide_exact(p * sk.Poly("x - z"), sk.Poly("x - z")) == p
    assert sk.divide_exact(p, sk.Poly("x")) is None
    with pytest.raises(ValueError):
        sk.parse("x^^2")
    with pytest.raises(sk.InvariantError):
        sk.analyze(sk.Distribution(sk.VecField("1", "0", "0"), sk.VecField("x", "0", "0")))


def test_orbit_and_scan():
    md = sk.analyze(sk.builtin("loop"))
    tr = sk.integrate_orbit(md, (-0.3, 0.0, 0.3))
    assert tr["termination"] == "SpeedFloor"
    zs = [p[2] for p in tr["points"]]
    assert all(b <= a for a, b in zip(zs, zs[1:]))
    with pytest.raises(sk.OffSurfaceError):
        sk.integrate_orbit(md, (0.0, 1.0, 0.0))
    rep = sk.divergence_ratio_scan(md, (-1, -1, 0.1), (-0.1, 1, 1), n=50, seed=3)
    assert math.isfinite(rep["sup_ratio"]) and rep["seed"] == 3


def test_blowup():
    d = sk.builtin("conical_frame")
    md = sk.analyze(d)
    c = sk.chart_map([0, 1, 2], 2, 1)
    st = sk.strict_transform(md.h, c)
    assert st["alpha"] == 2 and st["strict"] == sk.Poly("1 - x^2 - y^2")
    assert sk.volume_factor(c) == (2, sk.Poly("z^2"))
    rep = sk.verify_div_compat(d, md.h, c, n=50)
    assert rep["max_abs_err"] <= 1e-6
    with pytest.raises(sk.DegenerateChartError):
        sk.chart_map([0, 1], 2, 1)


def test_chain_and_flow_checks():
    link = sk.homoclinic_orbit(-0.3)
    assert link["z_plus"] < link["z_minus"] and link["signs_ok"]
    rep = sk.run_chain(0.5, 2)
    assert rep["complete"] and not rep["ineq_violations"]
    vol = sk.liouville_check(sk.VecField("x", "y", "0"), [(0.1, 0.2), (0.3, -0.1)], [0.5, 1.0])
    assert vol["max_rel_err"] <= 1e-8
    rp = sk.reparametrize(sk.Poly(2), sk.analyze(sk.builtin("loop")).Z, (-0.3, 0, 0.3), [0.5])
    assert abs(rp["r"][0] - 1.0) <= 1e-9


def test_selftest():
    rows = sk.selftest(cases=10)
    assert rows and all(r["ok"] for r in rows)
