#!/usr/bin/env python3
"""Smoke test for the tank_py extension module.

Builds nothing itself: it locates the cdylib produced by
`cargo build -p tank-py` (debug or release), copies it next to a temp dir as
`tank_py.so`, imports it, and exercises the bindings against known benchmark
values.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path


def locate_cdylib() -> Path:
    root = Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libtank_py.so", "libtank_py.dylib", "tank_py.dll")
    ]
    for c in candidates:
        if c.exists():
            return c
    sys.exit("tank_py cdylib not found; run `cargo build -p tank-py` first")


def main() -> None:
    lib = locate_cdylib()
    tmp = tempfile.mkdtemp(prefix="tank_py_")
    suffix = ".pyd" if lib.suffix == ".dll" else ".so"
    shutil.copy(lib, Path(tmp) / f"tank_py{suffix}")
    sys.path.insert(0, tmp)
    import tank_py

    p = tank_py.Params()
    assert p.validate() == [], p.validate()

    c = tank_py.derive(p)
    assert abs(c.kappa1 - 3.0) < 1e-12
    assert abs(c.kappa2 - 4.0) < 1e-12
    assert abs(c.delta_c - 0.6) < 1e-12
    assert abs(c.delta_p - 0.15) < 1e-12
    assert abs(c.eta_p_tilde - 5.3175) < 1e-12

    s = tank_py.solve(p)
    assert abs(s.xi1 - 0.11228450705395041) < 1e-12
    assert abs(s.xi2 - 2.024079129309686) < 1e-12
    assert abs(s.omega_p - 0.38715061293416403) < 1e-12
    assert s.determinate and s.ad_condition and s.prop1_condition

    panel = tank_py.irf(p, shock="monetary", size=0.01, horizon=40)
    assert abs(panel["pi_p"][0] - 100 * 0.01 * s.omega_p) < 1e-12
    assert abs(panel["x"][0] - 100 * 0.01 * s.omega_x) < 1e-12
    # output equals the gap under a monetary shock
    assert all(abs(y - x) < 1e-12 for y, x in zip(panel["y"], panel["x"]))

    # general variant stays close to the closed form for monetary shocks
    gen = tank_py.irf(p, shock="monetary", variant="general")
    rel = abs(gen["pi_p"][0] - panel["pi_p"][0]) / abs(panel["pi_p"][0])
    assert rel < 0.05, rel

    # technology shock: positive output, deflation
    tech = tank_py.irf(p, shock="technology")
    assert tech["y"][0] > 0 and tech["pi_p"][0] < 0

    gap_w, wage_w, price_w, surcharge = tank_py.welfare_weights(p)
    assert (gap_w, wage_w) == (4.0, 5.0)
    assert abs(price_w - 5.3175) < 1e-12 and abs(surcharge - 0.3175) < 1e-12

    rule = tank_py.targeting_rule(p, "discretion")
    assert abs(rule.coef_pi + 5.3175 / 3.0) < 1e-12
    assert rule.coef_pi_lag == 0.0

    loss = tank_py.welfare_loss(p, regime="taylor", shock="technology")
    parts = loss["gap_term"] + loss["wage_term"] + loss["price_term"]
    assert abs(parts - loss["total"]) < 1e-9 * abs(loss["total"])

    cond = tank_py.check(p)
    assert abs(cond["prop1_condition_margin"] - 1.75) < 1e-12

    table = tank_py.sweep(p, "phi_taylor", [1.5, 3.0, 6.0])
    assert table["omega_p"][0] > table["omega_p"][1] > table["omega_p"][2]

    # validation errors surface as ValueError
    p.lambda_h = 1.0
    try:
        tank_py.solve(p)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError for lambda_h = 1")

    assert not math.isnan(s.omega_x_inf)
    print("tank_py smoke test: OK")


if __name__ == "__main__":
    main()
