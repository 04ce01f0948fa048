"""Smoke test for the swarmsim_py extension module."""
import cmath
import math

import swarmsim_py as ss


def close(a, b, tol=1e-10):
    return all(abs(x - y) < tol for x, y in zip(a, b)) and len(a) == len(b)


def main():
    bell = ss.Circuit(2)
    bell.add("h", [0])
    bell.add("cx", [0, 1])
    h = 1 / math.sqrt(2)
    assert close(ss.simulate(bell).amplitudes, [h, 0, 0, h])

    qft = ss.Circuit.generate("qft:8")
    for opt in ["none", "fusion", "block", "boost", "diag", "all"]:
        got = ss.simulate(qft, opt).amplitudes
        assert close(got, ss.reference_state(qft)), opt

    rzz = ss.Circuit.generate("rzz_full:10")
    naive = ss.optimize(rzz, "none").sweep_cost()
    plan = ss.optimize(rzz, "all")
    assert plan.sweep_cost() < naive
    res = plan.run(product_state="+" * 10)
    assert abs(res.norm - 1) < 1e-10
    assert res.counters["sweep_total"] == plan.sweep_cost()
    assert "FUSED_DIAGONAL" in plan.histogram()

    text = bell.to_qasm()
    again = ss.Circuit.from_qasm(text)
    assert len(again) == 2 and again.n == 2

    try:
        ss.Circuit.from_qasm("OPENQASM 2.0;\nqreg q[1];\nfoo q[0];\n")
    except ValueError as e:
        assert "3:" in str(e)
    else:
        raise AssertionError("bad gate accepted")

    phase = ss.Circuit(1)
    phase.add("u1", [0], [math.pi / 2])
    assert close(ss.simulate(phase, product_state="1").amplitudes, [0, cmath.exp(1j * math.pi / 2)])
    print("smoke test passed")


if __name__ == "__main__":
    main()
