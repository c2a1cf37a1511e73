import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from invdisc import (Constant, FunctionOfX, IdentityInY, PolyCoeffs, Point,
                     RhsEvalPolicy, RootPolicy, RootSelection, SchemeKind,
                     SchemeSpec, Stencil, StopReason, Uniform, h5_uniform,
                     integrate, l3, l4, m3, seed_stencil_from_function,
                     select_root, slx3_step, sly4_step, solve_poly,
                     stencil_from_sequences)
from invdisc.schemes import extrapolate, h5_step

from conftest import make_mobius, random_mobius

OMEX = lambda x: 1.0 / (1.0 - math.exp(x))
MOBIUS = lambda x: (2.0 * x + 1.0) / (x + 3.0)


# --- root solving ----------------------------------------------------------------

def test_solve_poly_quadratic():
    assert solve_poly(PolyCoeffs((2.0, -3.0, 1.0))) == pytest.approx([1.0, 2.0])
    assert solve_poly(PolyCoeffs((1.0, 0.0, 1.0))) == []


def test_solve_poly_cubic_three_roots():
    roots = solve_poly(PolyCoeffs((-6.0, 11.0, -6.0, 1.0)))
    assert roots == pytest.approx([1.0, 2.0, 3.0], abs=1e-12)


def test_solve_poly_cubic_single_root():
    # (t - 2)(t^2 + 1) = t^3 - 2 t^2 + t - 2
    roots = solve_poly(PolyCoeffs((-2.0, 1.0, -2.0, 1.0)))
    assert roots == pytest.approx([2.0], abs=1e-12)


def test_solve_poly_linear():
    assert solve_poly(PolyCoeffs((-3.0, 1.5))) == pytest.approx([2.0])


def test_poly_coeffs_validation():
    with pytest.raises(ValueError):
        PolyCoeffs((1.0, 2.0, 0.0))
    with pytest.raises(ValueError):
        PolyCoeffs((1.0,))


@settings(max_examples=200, deadline=None)
@given(r=st.lists(st.floats(-5, 5), min_size=3, max_size=3))
def test_solve_poly_factored_cubics(r):
    r = sorted(r)
    c0 = -r[0] * r[1] * r[2]
    c1 = r[0] * r[1] + r[0] * r[2] + r[1] * r[2]
    c2 = -(r[0] + r[1] + r[2])
    p = PolyCoeffs((c0, c1, c2, 1.0))
    roots = solve_poly(p)
    assert 1 <= len(roots) <= 3
    scale = max(1.0, *(abs(v) for v in p.coeffs))
    for t in roots:
        assert abs(p(t)) <= 1e-8 * scale * max(1.0, abs(t)) ** 3
    assert roots == sorted(roots)
    # every constructed root is found (up to near-degenerate pairs)
    gaps = [abs(a - b) for a, b in zip(r, r[1:])]
    if all(g > 1e-3 for g in gaps):
        assert len(roots) == 3
        for want, got in zip(r, roots):
            assert got == pytest.approx(want, abs=1e-6)


def test_select_root():
    pol = RootPolicy()
    assert select_root([1.0, 5.0], 1.2, pol) == 1.0
    assert select_root([], 1.2, pol) is None
    # an exact distance tie resolves to the smaller root
    assert select_root([1.0, 3.0], 2.0, pol) == 1.0
    # near-coincident roots: either representative of the pair is acceptable
    tie = select_root([2.0, 2.0 + 1e-15], 3.0, pol)
    assert tie == pytest.approx(2.0, abs=1e-14)
    assert select_root([1.0, 5.0], 4.9, RootPolicy(RootSelection.SMALLEST_REAL)) == 1.0
    assert select_root([1.0, 5.0], 1.1, RootPolicy(RootSelection.LARGEST_REAL)) == 5.0


def test_extrapolate_exact_on_polynomials():
    pts = [Point(x, 3.0 - 2.0 * x + 0.5 * x * x) for x in (0.0, 0.5, 1.0)]
    assert extrapolate(pts, 1.5, 2) == pytest.approx(3.0 - 3.0 + 0.5 * 2.25, rel=1e-12)
    assert extrapolate(pts, 1.5, 0) == pytest.approx(pts[-1].y)


# --- single steps ------------------------------------------------------------------

def test_sly4_zero_forcing_preserves_mobius_manifold():
    prev = seed_stencil_from_function(MOBIUS, 0.0, 0.1, 4)
    out = sly4_step(prev, 0.4, lambda x: 0.0)
    assert out.advanced
    assert out.point.y == pytest.approx(MOBIUS(0.4), rel=1e-9)
    assert out.poly.degree == 1
    # the new window still sits on the weakly invariant manifold
    full = stencil_from_sequences(list(prev.xs) + [0.4],
                                  list(prev.ys) + [out.point.y])
    assert abs(l3(Stencil(full.points[1:]))) <= 1e-7


def test_sly4_consistency_with_forcing():
    prev = seed_stencil_from_function(math.exp, 0.0, 0.5, 4)
    out = sly4_step(prev, 2.0, math.cos)
    full = stencil_from_sequences([0, 0.5, 1.0, 1.5, 2.0],
                                  list(prev.ys) + [out.point.y])
    assert abs(l4(full) - math.cos(1.0)) <= 1e-10 * abs(math.cos(1.0))


def test_slx3_degree_contract():
    st3 = stencil_from_sequences([0.0, 0.5, 1.0], [0.0, 0.4, 0.7])
    out = slx3_step(st3, 1.5, Constant(0.5))
    assert out.poly.degree == 2
    out = slx3_step(st3, 1.5, IdentityInY())
    assert out.poly.degree == 3
    out = slx3_step(st3, 1.5, IdentityInY(), RhsEvalPolicy.STENCIL_MEAN)
    assert out.poly.degree == 3
    # zero constant forcing degenerates to the linear weakly-invariant form
    out = slx3_step(st3, 1.5, Constant(0.0))
    assert out.poly.degree == 1


def test_slx3_consistency():
    st3 = seed_stencil_from_function(lambda x: math.log(abs(x)), 1.0, 0.5, 3)
    out = slx3_step(st3, 2.5, Constant(0.5))
    assert out.advanced
    full = stencil_from_sequences([1.0, 1.5, 2.0, 2.5],
                                  list(st3.ys) + [out.point.y])
    assert abs(m3(full) - 0.5) <= 1e-10 * 0.5

    st3 = stencil_from_sequences([0.0, 0.5, 1.0], [1.0, 1.7, 2.6])
    out = slx3_step(st3, 1.5, IdentityInY())
    full = stencil_from_sequences([0.0, 0.5, 1.0, 1.5],
                                  list(st3.ys) + [out.point.y])
    assert abs(m3(full) - out.point.y) <= 1e-10 * abs(out.point.y)

    out = slx3_step(st3, 1.5, IdentityInY(), RhsEvalPolicy.STENCIL_MEAN)
    mean = (sum(st3.ys) + out.point.y) / 4.0
    full = stencil_from_sequences([0.0, 0.5, 1.0, 1.5],
                                  list(st3.ys) + [out.point.y])
    assert abs(m3(full) - mean) <= 1e-10 * abs(mean)


def test_slx3_no_real_root_at_barrier():
    # close to the logarithmic singularity the quadratic loses its real roots
    h = 1e-3
    f = lambda x: math.log(abs(x))
    seed = seed_stencil_from_function(f, -0.05, h, 3)
    spec = SchemeSpec(SchemeKind.SLX3, Constant(0.5), Uniform(h))
    traj = integrate(spec, seed, 100)
    assert traj.stop is StopReason.NO_REAL_ROOT
    assert traj.points[-1].x <= 0.0


def test_h5_exact_propagation():
    seed = seed_stencil_from_function(OMEX, -1.0, 0.1, 5)
    spec = SchemeSpec(SchemeKind.H5, Constant(0.0), Uniform(0.1))
    traj = integrate(spec, seed, 4)
    for p in traj.points:
        assert p.y == pytest.approx(OMEX(p.x), rel=1e-10)


def test_h5_consistency_nonzero_forcing():
    seed = seed_stencil_from_function(math.log, 1.0, 0.5, 5)
    out = h5_step(seed, 3.5, 2.0)
    assert out.advanced and out.poly.degree == 1
    ys = list(seed.ys) + [out.point.y]

    def cr(a):
        return ((a[3] - a[1]) * (a[2] - a[0])) / ((a[3] - a[2]) * (a[1] - a[0]))

    got = h5_uniform(cr(ys[0:4]), cr(ys[1:5]), cr(ys[2:6]))
    assert abs(got - 2.0) <= 1e-10 * 2.0


def test_h5_degenerate_on_weak_manifold_with_forcing():
    seed = seed_stencil_from_function(MOBIUS, 0.0, 0.1, 5)
    out = h5_step(seed, 0.5, 2.0)
    assert not out.advanced
    assert out.stop is StopReason.DEGENERATE_COEFFICIENT


# --- equivariance ------------------------------------------------------------------

def test_sly4_equivariance(rng):
    worst = 0.0
    for _ in range(200):
        xs = [0.0, 0.1, 0.2, 0.3]
        ys = list(np.cumsum(rng.uniform(1.0, 2.0, 4)))
        stencil = stencil_from_sequences(xs, ys)
        g = make_mobius(*random_mobius(rng, ys + [8.0]))
        f = lambda x: math.cos(3.0 * x)
        out = sly4_step(stencil, 0.4, f)
        out_g = sly4_step(stencil_from_sequences(xs, [g(y) for y in ys]), 0.4, f)
        if not (out.advanced and out_g.advanced):
            continue
        a, b = g(out.point.y), out_g.point.y
        worst = max(worst, abs(a - b) / max(1.0, abs(a), abs(b)))
    assert worst <= 1e-8


def test_h5_equivariance(rng):
    worst = 0.0
    for _ in range(200):
        xs = [0.1 * k for k in range(5)]
        ys = list(np.cumsum(rng.uniform(0.5, 1.5, 5)))
        stencil = stencil_from_sequences(xs, ys)
        g = make_mobius(*random_mobius(rng, ys + [8.0]))
        out = h5_step(stencil, 0.5, 0.0)
        out_g = h5_step(stencil_from_sequences(xs, [g(y) for y in ys]), 0.5, 0.0)
        if not (out.advanced and out_g.advanced):
            continue
        a, b = g(out.point.y), out_g.point.y
        worst = max(worst, abs(a - b) / max(1.0, abs(a), abs(b)))
    assert worst <= 1e-8


# --- trajectory driver --------------------------------------------------------------

def test_integrate_validates_seed():
    seed = seed_stencil_from_function(math.exp, 0.0, 0.1, 4)
    spec = SchemeSpec(SchemeKind.SLX3, Constant(2.0), Uniform(0.1))
    with pytest.raises(ValueError):
        integrate(spec, seed, 5)
    # abscissae inconsistent with the declared step
    seed3 = stencil_from_sequences([0.0, 0.11, 0.2], [1.0, 1.5, 2.1])
    with pytest.raises(ValueError):
        integrate(spec, seed3, 5)


def test_integrate_completed_and_metadata():
    seed = seed_stencil_from_function(math.atanh, -0.5, 0.01, 3)
    spec = SchemeSpec(SchemeKind.SLX3, Constant(2.0), Uniform(0.01))
    traj = integrate(spec, seed, 10)
    assert traj.stop is StopReason.COMPLETED
    assert len(traj.points) == 13
    assert traj.scheme_id == "slx3"
    assert traj.h_nominal == 0.01


def test_integrate_stop_when_user_limit():
    seed = seed_stencil_from_function(math.atanh, -0.5, 0.01, 3)
    spec = SchemeSpec(SchemeKind.SLX3, Constant(2.0), Uniform(0.01))
    traj = integrate(spec, seed, 50, stop_when=lambda p: p.x >= -0.4)
    assert traj.stop is StopReason.USER_LIMIT
    assert traj.points[-1].x >= -0.4


def test_integrate_backward():
    f = lambda x: math.log(abs(x))
    seed = seed_stencil_from_function(f, 1.0, -1e-3, 3)
    spec = SchemeSpec(SchemeKind.SLX3, Constant(0.5), Uniform(-1e-3))
    traj = integrate(spec, seed, 100)
    assert traj.stop is StopReason.COMPLETED
    assert traj.points[-1].x == pytest.approx(1.0 - 0.102, rel=1e-10)
    for p in traj.points:
        assert p.y == pytest.approx(f(p.x), abs=1e-6)


def test_integrate_reports_scheme_consistency_after_steps():
    # every advanced five-point window satisfies the defining equation
    seed = seed_stencil_from_function(math.exp, 0.0, 0.2, 4)
    spec = SchemeSpec(SchemeKind.SLY4, FunctionOfX(math.cos, "cos"), Uniform(0.2))
    traj = integrate(spec, seed, 10)
    assert traj.stop is StopReason.COMPLETED
    pts = traj.points
    for k in range(len(pts) - 4):
        window = Stencil(pts[k:k + 5])
        target = math.cos(window.xs[2])
        assert abs(l4(window) - target) <= 1e-9 * max(1.0, abs(target))
