"""Run parameters and the per-step layer plan."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from faacut.schedule import FaaParams, build_layer_plan, n_steps_of, plan_for


def test_n_steps_of():
    assert n_steps_of(4.0, 2.0) == 8
    assert n_steps_of(0.5, 6.0) == 3
    assert n_steps_of(2 / math.pi, 3 * math.pi) == 6
    with pytest.raises(ValueError):
        n_steps_of(4.0, 0.3)  # 1.2 steps is not a whole number
    with pytest.raises(ValueError):
        n_steps_of(0.5, 1.0)  # rounds to 0 steps... rejected below 1
    with pytest.raises(ValueError):
        n_steps_of(-1.0, 2.0)


def test_params_validation():
    FaaParams(n=4.0, T=2.0)
    with pytest.raises(ValueError):
        FaaParams(n=4.0, T=0.3)
    with pytest.raises(ValueError):
        FaaParams(n=4.0, T=2.0, shots=0)
    with pytest.raises(ValueError):
        FaaParams(n=4.0, T=2.0, backend="mps")  # needs a bond cap
    with pytest.raises(ValueError):
        FaaParams(n=4.0, T=2.0, backend="statevector", bond_dim=8)
    with pytest.raises(ValueError):
        FaaParams(n=4.0, T=2.0, backend="mps", bond_dim=0)
    with pytest.raises(ValueError):
        FaaParams(n=4.0, T=2.0, backend="tensor")


def test_params_derived_quantities():
    p = FaaParams(n=4.0, T=2.0)
    assert p.n_steps == 8
    assert p.dt == 0.25
    assert p.dt_eff == 0.25
    q = p.with_t(5.0)
    assert q.n_steps == 20 and q.n == 4.0
    # fractional-step sizes are representable as long as n*T is integral
    big = FaaParams(n=2 / math.pi, T=3 * math.pi)
    assert big.n_steps == 6
    assert big.dt_eff == pytest.approx(math.pi / 2, abs=1e-12)


def test_layer_plan_values():
    plan = build_layer_plan(4.0, 2.0)
    assert plan.n_steps == 8
    assert plan.dt_eff == 0.25
    assert [s.step for s in plan.steps] == list(range(1, 9))
    for k, step in enumerate(plan.steps, start=1):
        assert step.s == pytest.approx(k / 8)
        assert step.x_angle == pytest.approx((1 - k / 8) * 0.25)
        assert step.zz_angle == pytest.approx((k / 8) * 0.25)
    # the closing step is a pure problem-layer application
    assert plan.steps[-1].s == 1.0
    assert plan.steps[-1].x_angle == 0.0


@given(st.integers(1, 40), st.sampled_from([0.5, 0.75, 1.0, 2.0, 4.0]))
@settings(max_examples=60)
def test_plan_angle_sums(t_int, n):
    if abs(n * t_int - round(n * t_int)) > 1e-9:
        return
    plan = build_layer_plan(n, float(t_int))
    m = plan.n_steps
    assert m == round(n * t_int)
    # sum of x angles = dt * sum(1 - k/M) = (T/M) * (M-1)/2 * ... closed form:
    assert sum(s.x_angle for s in plan.steps) == pytest.approx(plan.dt_eff * (m - 1) / 2)
    assert sum(s.zz_angle for s in plan.steps) == pytest.approx(plan.dt_eff * (m + 1) / 2)


def test_plan_for_matches_build():
    p = FaaParams(n=1.0, T=3.0)
    assert plan_for(p).to_dicts() == build_layer_plan(1.0, 3.0).to_dicts()


def test_to_dicts_fields():
    d = build_layer_plan(1.0, 2.0).to_dicts()
    assert len(d) == 2
    assert set(d[0]) == {"step", "s", "x_angle", "zz_angle"}
