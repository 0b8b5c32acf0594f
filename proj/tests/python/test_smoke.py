import math

import numpy as np
import pytest

import infoot


def points(n, d, seed):
    return np.random.default_rng(seed).uniform(-1, 1, size=(n, d))


def test_product_plan_has_zero_information():
    xs, ys = points(12, 2, 0), points(9, 3, 1)
    plan = np.full((12, 9), 1.0 / 108)
    assert abs(infoot.mutual_information(xs, ys, plan, 0.4)) < 1e-12


def test_gradient_matches_finite_differences():
    xs, ys = points(5, 2, 2), points(4, 2, 3)
    plan = infoot.sinkhorn(np.abs(points(5, 4, 4)), epsilon=0.1)["coupling"]
    grad = infoot.mi_gradient(xs, ys, plan, 0.5) + math.log(20)
    step = 1e-6
    bump = np.zeros_like(plan)
    bump[1, 2] = step
    fd = (infoot.mutual_information(xs, ys, plan + bump, 0.5)
          - infoot.mutual_information(xs, ys, plan - bump, 0.5)) / (2 * step)
    assert fd == pytest.approx(grad[1, 2], rel=1e-5)


def test_sinkhorn_approaches_assignment():
    cost = (points(6, 6, 5) + 1) / 2
    perm, value = infoot.exact_assignment(cost)
    assert sorted(perm) == list(range(6))
    plan = infoot.sinkhorn(cost, epsilon=0.01)["coupling"]
    assert np.allclose(plan.sum(axis=1), 1 / 6, atol=1e-8)
    assert abs((plan * cost).sum() - value) < 1e-2


def test_fused_solver_and_projections():
    xs, ys = points(15, 2, 6), points(12, 2, 7)
    r = infoot.solve_fused_infoot(xs, ys)
    plan = r["coupling"]
    assert plan.shape == (15, 12)
    assert np.allclose(plan.sum(axis=0), 1 / 12, atol=1e-6)
    assert r["sinkhorn_failures"] == 0
    bary = infoot.barycentric_project(plan, ys)
    cond = infoot.conditional_project(xs, ys, plan, bandwidth=1e-4)
    assert np.abs(cond - bary).max() < 1e-6
    w = infoot.importance_weights(xs, ys, plan, xs[:3])
    assert np.allclose(w.sum(axis=1), 1.0)


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        infoot.sinkhorn(np.ones((2, 2)), epsilon=0.0)


def test_cli_entry_point_reports_errors():
    code, _, err = infoot.run_cli(["solve", "/nonexistent/spec.json"])
    assert code == 1
    assert err
