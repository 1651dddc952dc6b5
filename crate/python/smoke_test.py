"""Smoke test for the hwlab_py extension.

Build with `cargo build --release -p hwlab-py` and copy
target/release/libhwlab_py.so next to this file as hwlab_py.so.
"""

import math
import os
import sys
import tempfile

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import hwlab_py as hw


def main():
    grid = hw.Grid(64, 64, 20.0, 20.0)
    params = hw.ModelParams(2.0, 1.0, 0.0)

    sol = hw.ground_state(params, grid, tol=1e-9, max_iter=3000)
    assert sol.nehari_residual < 1e-8, sol.nehari_residual
    assert sol.action > 0
    report = hw.functional_report(sol.q, params)
    assert abs(report["action"] - sol.action) < 1e-10 * sol.action

    _, _, _, dist = hw.orbital_fit(sol.q.translated(0.5, -0.25), sol.q)
    assert dist < 1e-3 * hw.x_norm(sol.q), dist

    out = hw.evolve(sol.q, 2.0, 0.5, 1e-3, sample_stride=100, reference=sol.q)
    assert out["aborted"] is None
    m = out["mass"]
    assert abs(m[-1] - m[0]) < 1e-10 * m[0]

    sc = hw.t_lambda(sol.q, 1.1)
    assert abs(hw.mass(sc) - hw.mass(sol.q)) < 1e-3 * hw.mass(sol.q)

    xs = [(-400.0 + 800.0 * k / 4096) for k in range(4096)]
    g = [complex(math.exp(-x * x), 0.0) for x in xs]
    slope, _ = hw.dispersive_decay(g, 800.0, [float(t) for t in range(1, 11)])
    assert -0.55 < slope < -0.45, slope

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "q.hwsf")
        hw.save_snapshot(path, sol.q, params)
        q2, p2 = hw.load_snapshot(path)
        assert q2.values() == sol.q.values()
        assert p2.p == params.p

    try:
        hw.Grid(0, 8, 1.0, 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("invalid grid accepted")

    print(f"ok: S = {sol.action:.10f}, iterations = {sol.iterations}, decay slope = {slope:.4f}")


if __name__ == "__main__":
    main()
