import numpy as np
import pytest

from acalc import REALS, RelationError, cos, exp, named_algebra, norm_bound
from acalc.expr import FieldExpr
from acalc.numerics import ml_bound, segment_integral
from acalc.picard import (Segment, acr_check, path_independence, pde_consequence_check,
                          picard_solve, rk4_oracle, trajectory_difference,
                          verify_first_order_solution)


def test_exponential_field_any_algebra(rng):
    for A in (REALS, named_algebra("Hn", 2), named_algebra("Cn", 3)):
        end = A.random(rng)
        seg = Segment(A.zero(), end, 256)
        res = picard_solve(lambda z, ys: [ys[0]], seg, [A.one()])
        assert res.converged
        assert res.trajectory.end_state[0].isclose(exp(end), 1e-9)


def test_zero_field_is_constant(H):
    seg = Segment(H.zero(), H(1, 1), 16)
    res = picard_solve(lambda z, ys: [H.zero()], seg, [H(2, 3)])
    assert res.iterations == 1 and res.final_delta == 0.0
    assert np.all(res.trajectory.values == H(2, 3).coords)


def test_residual_contract(H):
    f = FieldExpr.parse(H, "w^2*sin(z)")
    res = picard_solve(f, Segment(H.zero(), H(0.5, 0.2)), [H.scalar(0.5)])
    assert res.converged and res.final_delta <= 1e-10
    assert res.residual <= 10 * 1e-10 * res.field_scale


def test_non_convergence_reported(H):
    f = FieldExpr.parse(H, "w^2")
    res = picard_solve(f, Segment(H.zero(), H.scalar(0.9), 32), [H.one()], max_iter=5)
    assert not res.converged
    assert res.iterations == 5 and res.final_delta > 1e-10


def test_rk4_exponential():
    seg = Segment(REALS.zero(), REALS.one())
    tr = rk4_oracle(lambda z, ys: [ys[0]], seg, [REALS.one()], 1000)
    assert tr.end_state[0].coords[0] == pytest.approx(np.e, abs=1e-10)


def test_rk4_order_four():
    seg = Segment(REALS.zero(), REALS.scalar(0.5))
    exact = 1 / (1 - 0.5)
    errs = []
    for steps in (20, 40):
        tr = rk4_oracle(lambda z, ys: [ys[0] * ys[0]], seg, [REALS.one()], steps)
        errs.append(abs(tr.end_state[0].coords[0] - exact))
    assert 12 < errs[0] / errs[1] < 20


def test_system_field(H):
    f = FieldExpr.parse(H, ["v", "-u"], variables=["u", "v"])
    end = H(0.7, 0.3)
    res = picard_solve(f, Segment(H.zero(), end, 128), [H.zero(), H.one()])
    u, v = res.trajectory.end_state
    from acalc import sin
    assert u.isclose(sin(end), 1e-9) and v.isclose(cos(end), 1e-9)


def test_uniqueness_probe(H):
    f = FieldExpr.parse(H, "w^2*sin(z)")
    a = picard_solve(f, Segment(H.zero(), H(0.5, 0.2), 128), [H.scalar(0.5)])
    b = picard_solve(f, Segment(H.zero(), H(0.5, 0.2), 512), [H.scalar(0.5)])
    assert trajectory_difference(a.trajectory, b.trajectory) < 1e-9


def test_separable_conservation(H):
    f = FieldExpr.parse(H, "w^2*sin(z)")
    res = picard_solve(f, Segment(H.zero(), H(0.5, 0.2)), [H.scalar(0.5)])
    rep = verify_first_order_solution("separable", {"G": lambda w: -1 / w,
                                                    "F": lambda z: -cos(z)}, res.trajectory)
    assert rep.drift < 1e-6


def test_exact_conservation(H):
    # 2 w dw + 2 z dz = 0
    f = lambda z, ys: [-z / ys[0]]
    res = picard_solve(f, Segment(H.zero(), H(0.4, 0.1)), [H.scalar(1.0)])
    rep = verify_first_order_solution("exact", {"F": lambda z, w: w * w + z * z}, res.trajectory)
    assert rep.drift < 1e-9


def test_linear_conservation(H):
    # w' + w = z with integrating factor exp(z)
    f = lambda z, ys: [z - ys[0]]
    res = picard_solve(f, Segment(H.zero(), H(0.6, -0.2)), [H.one()])
    rep = verify_first_order_solution("linear", {"I": exp, "Q": lambda z: z}, res.trajectory)
    assert rep.drift < 1e-9
    const = picard_solve(lambda z, ys: [H.zero()], Segment(H.zero(), H.one(), 8), [H(1, 2)])
    rep = verify_first_order_solution("linear", {"I": lambda z: H.one()}, const.trajectory)
    assert rep.drift == 0.0


def test_acr_checks(H):
    j = H["j"]
    assert acr_check(exp, H(0.3, -0.2)).relative < 1e-8
    affine = acr_check(lambda z: (2 + 3 * j) * z + j, H(0.1, 0.4), h=0.1)
    assert affine.max_residual <= 1e-12
    bad = acr_check(lambda z: H(z.coords[0], 0.0), H(0.1, 0.4))
    assert bad.flagged and bad.relative == pytest.approx(1.0, abs=1e-6)


def test_pde_consequences(H, C):
    lap = pde_consequence_check(exp, C(0.3, 0.2), {(0, 0): 1, (1, 1): 1})
    wave = pde_consequence_check(exp, H(0.3, 0.2), {("1", "1"): 1, ("j", "j"): -1})
    assert lap < 1e-5 and wave < 1e-5
    assert pde_consequence_check(exp, H(0.3, 0.2), {(0, 1): 0.0}) == 0.0
    with pytest.raises(RelationError):
        pde_consequence_check(exp, C(0.3, 0.2), {(0, 0): 1, (1, 1): -1})


def test_path_independence_and_ml_bound(H):
    a, m, b = H.zero(), H(0.5, 0.8), H(1.0, 0.1)
    assert path_independence(exp, a, m, b) < 1e-10
    val = segment_integral(exp, a, b)
    assert val.isclose(exp(b) - exp(a), 1e-10)
    assert np.linalg.norm(val.coords) <= ml_bound(exp, a, b)
    assert norm_bound(H) > 1


def test_segment_validation(H):
    with pytest.raises(ValueError):
        Segment(H.zero(), H.one(), 3)
    with pytest.raises(ValueError):
        picard_solve(lambda z, ys: ys, Segment(H.zero(), H.one(), 4), [H.one()], tol=0)
