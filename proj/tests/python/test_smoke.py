import json
import os
import subprocess

import numpy as np
import pytest

import triharm


def test_grid_round_trip():
    spec = triharm.GridSpec(1, 64, 8.0)
    assert spec.N == 64 and spec.size == 64
    x = np.array([spec.coord(i) for i in range(64)])
    f = np.exp(-np.pi * x**2).astype(complex)
    back = triharm.inverse_transform(spec, triharm.forward_transform(spec, f))
    assert np.max(np.abs(back - f)) < 1e-12
    assert triharm.lp_norm(spec, f, 2.0) == pytest.approx(2 ** -0.25, rel=1e-10)


def test_regions():
    assert triharm.classify("6/5,3/10,3/10") == "R1"
    assert triharm.required_regularity("6/5,3/10,3/10") == "17/10"
    plan_json, ok, violation = triharm.plan("9/10,4/5,3/10", "2")
    plan = json.loads(plan_json)
    assert ok and violation == ""
    assert [e["region"] for e in plan["endpoints"]] == ["R1", "R2"]
    with pytest.raises(triharm.ThresholdError):
        triharm.plan("9/10,4/5,3/10", "17/10")
    with pytest.raises(triharm.UsageError):
        triharm.classify("1/0,1,1")


def test_atom_and_multiplier():
    spec = triharm.GridSpec(1, 256, 16.0)
    values, passed, sidecar = triharm.make_atom(spec, 0, [1], p=0.5)
    assert passed and json.loads(sidecar)["certificate"]["passed"]
    assert np.abs(values).max() <= 1.0
    small = triharm.GridSpec(1, 32, 8.0)
    rng = np.random.default_rng(1)
    f = [rng.normal(size=32) + 1j * rng.normal(size=32) for _ in range(3)]
    direct = triharm.apply_multiplier("one", small, f, "direct")
    assert np.max(np.abs(direct - f[0] * f[1] * f[2])) < 1e-10
    value, shells, per_shell = triharm.ls2_norm("one", small, 3, 0.0)
    assert value > 0 and len(shells) == len(per_shell)


def test_ratio_experiment_is_deterministic():
    cfg = json.loads(triharm.default_config())
    cfg["inputs"]["count"] = 2
    cfg["dilations"] = ["1"]
    text = json.dumps(cfg)
    a = triharm.ratio_experiment(text)
    assert a.startswith("# schema=1\n")
    assert a == triharm.ratio_experiment(text)


CLI = os.environ.get("TRIHARM_CLI")


@pytest.mark.skipif(not CLI, reason="TRIHARM_CLI not set")
@pytest.mark.parametrize(
    "args, code",
    [
        (["classify", "--t", "6/5,3/10,3/10"], 0),
        (["classify", "--t", "1/10,1/10,1/10"], 2),
        (["plan", "--t", "9/10,4/5,3/10", "--s", "1", "--n", "1"], 3),
        (["classify", "--t", "6/5,x,3/10"], 64),
        (["no-such-command"], 64),
    ],
)
def test_cli_exit_codes(args, code):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True)
    assert proc.returncode == code, proc.stderr
    if code == 0:
        assert proc.stdout.strip() == "R1, threshold s > 17/10·n"
