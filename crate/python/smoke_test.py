"""Smoke test for the qpos extension module.

Build and install first, e.g.  pip install --no-build-isolation ./crates/python
"""

import json
import math

import qpos


def main():
    en = qpos.StateFamily.max_entangled(3)
    assert en.name == "en" and en.channels == 3
    assert math.isclose(en.lossless_accuracy(), 1 / 3, rel_tol=1e-15)

    un = qpos.StateFamily.unentangled(2)
    per_run, r_runs, usable = un.accuracy(0.5)
    assert math.isclose(r_runs, math.sqrt(10 / 9), rel_tol=1e-12)
    assert math.isclose(per_run, math.sqrt(5 / 6), rel_tol=1e-12)
    assert math.isclose(usable, 0.75)

    assert math.isclose(qpos.gain_lambda(4, 1.0), 2.0, rel_tol=1e-12)
    assert abs(qpos.gain_root(2) - 0.4530818393219728) < 1e-9
    assert qpos.threshold_eta(2) == 0.5
    assert qpos.classify_region(2, 1.0, 2, 2.0) == "en=G>un"

    est = qpos.simulate(en, 1.0, 20_000, seed=1)
    assert abs(est.statistic_std / (1 / 3) - 1) < 0.03, est
    again = qpos.simulate(en, 1.0, 20_000, seed=1, threads=1)
    assert (est.mean, est.std_of_mean) == (again.mean, again.std_of_mean)

    ops = qpos.kraus_operators(0.36, 4)
    assert len(ops) == 4 and len(ops[0]) == 4
    rho = [[0j] * 3 for _ in range(3)]
    rho[2][2] = 1 + 0j
    out = qpos.apply_loss(rho, 0.5)
    assert math.isclose(out[1][1].real, 0.5)
    assert qpos.beam_splitter_deviation(0.36, 5) < 1e-8

    estimate, broadcasts = qpos.run_protocol_one(5, 1.0, 2_000, seed=2, distance=3.0)
    assert len(broadcasts) == 2_000 and len(broadcasts[0]) == 4
    assert abs(estimate.mean - 3.0) < 0.05

    t = qpos.run_protocol_two(3, 64, 1.0, seed=3)
    assert t.verdict == "clean" and len(t) == 64
    lines = t.to_jsonl().splitlines()
    assert json.loads(lines[-1])["summary"]["verdict"] == "clean"
    t = qpos.run_protocol_two(3, 200, 1.0, seed=3, freq_bin=0.5, eve="measure_time")
    assert t.verdict == "eavesdropper_detected" and t.estimates is None

    try:
        qpos.StateFamily.unentangled(0)
    except ValueError:
        pass
    else:
        raise AssertionError("M = 0 accepted")

    print("qpos smoke test passed")


if __name__ == "__main__":
    main()
