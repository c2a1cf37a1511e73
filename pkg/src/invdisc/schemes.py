"""Invariant difference schemes: advance a stencil one lattice step by
solving the invariant equation for the new ordinate.

The fourth-order scheme (Mobius maps of y) and the six-point product-group
scheme reduce to a linear equation in the new ordinate.  The third-order
hodograph scheme is quadratic for constant forcing and cubic when the
forcing is the dependent variable itself; all real roots are computed in
closed form and one is selected by the configured root policy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (Constant, DegenerateCoefficientError, ForcingTerm,
                   IdentityInY, OVERFLOW_LIMIT, Point, RhsEvalPolicy, RootPolicy,
                   RootSelection, SchemeKind, SchemeSpec, Stencil, StopReason,
                   Trajectory, Uniform, is_degenerate)
from .discrete import _cross_ratio, _l3


@dataclass(frozen=True)
class PolyCoeffs:
    """Real polynomial c0 + c1*t + ... of degree 1..3, low order first."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if not 2 <= len(self.coeffs) <= 4:
            raise ValueError("degree must be 1..3")
        if self.coeffs[-1] == 0.0:
            raise ValueError("leading coefficient must be nonzero")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative(self, t: float) -> float:
        acc = 0.0
        n = self.degree
        for i, c in enumerate(reversed(self.coeffs[1:])):
            acc = acc * t + (n - i) * c
        return acc


@dataclass(frozen=True)
class StepOutcome:
    """Result of one scheme step, with root-solving diagnostics retained."""

    point: Point | None
    stop: StopReason | None
    roots: tuple[float, ...] = ()
    selected: int | None = None
    prediction: float | None = None
    poly: PolyCoeffs | None = None

    @property
    def advanced(self) -> bool:
        return self.point is not None


def _advanced(point: Point, **diag) -> StepOutcome:
    return StepOutcome(point=point, stop=None, **diag)

def _stopped(reason: StopReason, **diag) -> StepOutcome:
    return StepOutcome(point=None, stop=reason, **diag)


# --- closed-form real roots ---------------------------------------------------

def _polish(p: PolyCoeffs, t: float) -> float:
    """One Newton iteration, accepted only if it reduces the residual.

    At (near-)multiple roots both p and p' are noise-level and the raw step
    can jump to an unrelated point.
    """
    dp = p.derivative(t)
    if dp == 0.0 or not math.isfinite(dp):
        return t
    t1 = t - p(t) / dp
    if not math.isfinite(t1):
        return t
    return t1 if abs(p(t1)) <= abs(p(t)) else t


def solve_poly(p: PolyCoeffs) -> list[float]:
    """All real roots of p in ascending order, each polished once.

    Complex-conjugate pairs are simply absent from the result; an empty
    list is a valid return.
    """
    c = p.coeffs
    if p.degree == 1:
        roots = [-c[0] / c[1]]
    elif p.degree == 2:
        a, b, cc = c[2], c[1], c[0]
        disc = b * b - 4.0 * a * cc
        if disc < 0.0:
            return []
        sq = math.sqrt(disc)
        # Citardauq pairing avoids cancellation in the small root.
        q = -0.5 * (b + math.copysign(sq, b)) if b != 0.0 else -0.5 * sq
        if q == 0.0:
            roots = [0.0, 0.0]
        else:
            roots = [q / a, cc / q]
    else:
        b, cc, d = c[2] / c[3], c[1] / c[3], c[0] / c[3]
        # depressed form u^3 + p*u + q with t = u - b/3
        pp = cc - b * b / 3.0
        qq = 2.0 * b ** 3 / 27.0 - b * cc / 3.0 + d
        shift = -b / 3.0
        disc = -4.0 * pp ** 3 - 27.0 * qq * qq
        if disc > 0.0:
            # three distinct real roots (requires pp < 0)
            m = 2.0 * math.sqrt(-pp / 3.0)
            arg = 3.0 * qq / (pp * m)
            arg = min(1.0, max(-1.0, arg))
            theta = math.acos(arg) / 3.0
            roots = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) + shift
                     for k in range(3)]
        else:
            inner = math.sqrt(max(0.0, qq * qq / 4.0 + pp ** 3 / 27.0))
            u = _cbrt(-qq / 2.0 + inner) + _cbrt(-qq / 2.0 - inner)
            roots = [u + shift]
            if disc == 0.0 and pp != 0.0:
                roots.append(-u / 2.0 + shift)
    roots = [_polish(p, t) for t in roots]
    roots.sort()
    return roots


def _cbrt(v: float) -> float:
    return math.copysign(abs(v) ** (1.0 / 3.0), v)


def extrapolate(points: list[Point] | tuple[Point, ...], x: float, order: int) -> float:
    """Value at x of the degree-``order`` polynomial through the trailing points."""
    tail = list(points)[-(order + 1):]
    # Newton divided differences on shifted abscissae for conditioning
    xref = tail[-1].x
    xs = [p.x - xref for p in tail]
    coef = [p.y for p in tail]
    n = len(coef)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    acc = coef[-1]
    for i in range(n - 2, -1, -1):
        acc = acc * (x - xref - xs[i]) + coef[i]
    return acc


def select_root(roots: list[float], prediction: float, policy: RootPolicy) -> float | None:
    """Pick one real root per policy; ties go to the smaller root."""
    if not roots:
        return None
    if policy.selection is RootSelection.SMALLEST_REAL:
        return min(roots)
    if policy.selection is RootSelection.LARGEST_REAL:
        return max(roots)
    return min(roots, key=lambda r: (abs(r - prediction), r))


# --- the three schemes --------------------------------------------------------

def _finite_point(x: float, y: float) -> Point | None:
    if not math.isfinite(y) or abs(y) > OVERFLOW_LIMIT:
        return None
    return Point(x, y)


def sly4_step(prev4: Stencil, x_next: float, forcing) -> StepOutcome:
    """Advance the fourth-order scheme: solve l4(prev4 + new point) = f(x_mid).

    ``forcing`` is a callable of x (the middle abscissa of the five-point
    window).  The cleared equation is linear in the new ordinate.
    """
    if len(prev4) != 4:
        raise ValueError("sly4_step needs 4 previous points")
    xs = (*prev4.xs, x_next)
    ys = prev4.ys
    try:
        l3_left = _l3(xs, ys, 0)
        s4 = _cross_ratio(xs[1], xs[2], xs[3], xs[4])
    except DegenerateCoefficientError:
        return _stopped(StopReason.DEGENERATE_COEFFICIENT)
    x_mid = xs[2]
    target = l3_left + forcing(x_mid) * (xs[4] - xs[0]) / 4.0
    # l3 on the right window must equal `target`; unwind to a cross-ratio value
    v = s4 * (1.0 - target * (xs[3] - xs[2]) * (xs[4] - xs[1]) / 6.0)
    # ((t - y2)(y3 - y1)) / ((t - y3)(y2 - y1)) = v, linear in t
    a = (ys[3] - ys[1]) - v * (ys[2] - ys[1])
    b = ys[2] * (ys[3] - ys[1]) - v * ys[3] * (ys[2] - ys[1])
    scale = max(abs(ys[3] - ys[1]), abs(v * (ys[2] - ys[1])))
    poly = None
    if math.isfinite(a) and a != 0.0:
        poly = PolyCoeffs((-b, a))
    if not math.isfinite(a) or not math.isfinite(b):
        return _stopped(StopReason.NON_FINITE)
    if is_degenerate(a, scale):
        return _stopped(StopReason.DEGENERATE_COEFFICIENT, poly=poly)
    t = b / a
    pt = _finite_point(x_next, t)
    if pt is None:
        return _stopped(StopReason.NON_FINITE, roots=(t,), poly=poly)
    return _advanced(pt, roots=(t,), selected=0, poly=poly)


def _slx3_poly(ys, forcing: ForcingTerm, rhs_eval: RhsEvalPolicy) -> PolyCoeffs:
    """Cleared polynomial of the third-order scheme on a uniform lattice (S = 4)."""
    y0, y1, y2 = ys
    common = 4.0 * (y2 - y1) * (y1 - y0)
    # linear part: 24 (y1 - y0)(t - y2) - 6 (y2 - y0)(t - y1)
    lin1 = 24.0 * (y1 - y0) - 6.0 * (y2 - y0)
    lin0 = -24.0 * y2 * (y1 - y0) + 6.0 * y1 * (y2 - y0)
    if isinstance(forcing, Constant):
        c = forcing.c
        coeffs = [lin0 - c * common * y0 * y2,
                  lin1 + c * common * (y0 + y2),
                  -c * common]
    elif isinstance(forcing, IdentityInY):
        if rhs_eval is RhsEvalPolicy.NEW_POINT:
            # rhs(t) = t
            coeffs = [lin0,
                      lin1 - common * y0 * y2,
                      common * (y0 + y2),
                      -common]
        else:
            # rhs(t) = (y0 + y1 + y2 + t)/4
            s3 = y0 + y1 + y2
            q = common / 4.0
            coeffs = [lin0 - q * s3 * y0 * y2,
                      lin1 - q * (y0 * y2 - s3 * (y0 + y2)),
                      -q * (s3 - y0 - y2),
                      -q]
    else:
        raise ValueError("slx3 forcing must be constant or the identity in y")
    # drop degenerate leading coefficients (scale-aware)
    scale = max(abs(c) for c in coeffs)
    while len(coeffs) > 2 and is_degenerate(coeffs[-1], scale):
        coeffs = coeffs[:-1]
    if is_degenerate(coeffs[-1], max(abs(c) for c in coeffs)):
        raise DegenerateCoefficientError("scheme polynomial degenerates")
    return PolyCoeffs(tuple(coeffs))


def slx3_step(prev3: Stencil, x_next: float, forcing: ForcingTerm,
              rhs_eval: RhsEvalPolicy = RhsEvalPolicy.NEW_POINT,
              policy: RootPolicy = RootPolicy()) -> StepOutcome:
    """Advance the third-order hodograph scheme on a uniform lattice.

    Clears m3(prev3 + new point) = rhs into a polynomial of degree 2
    (constant forcing) or 3 (identity forcing), computes all real roots and
    selects one.  An empty real-root set signals the singularity barrier.
    """
    if len(prev3) != 3:
        raise ValueError("slx3_step needs 3 previous points")
    prediction = extrapolate(prev3.points, x_next,
                             min(policy.prediction_order, len(prev3) - 1))
    try:
        poly = _slx3_poly(prev3.ys, forcing, rhs_eval)
    except DegenerateCoefficientError:
        return _stopped(StopReason.DEGENERATE_COEFFICIENT, prediction=prediction)
    roots = solve_poly(poly)
    chosen = select_root(roots, prediction, policy)
    if chosen is None:
        return _stopped(StopReason.NO_REAL_ROOT, roots=tuple(roots),
                        prediction=prediction, poly=poly)
    pt = _finite_point(x_next, chosen)
    if pt is None:
        return _stopped(StopReason.NON_FINITE, roots=tuple(roots),
                        prediction=prediction, poly=poly)
    return _advanced(pt, roots=tuple(roots), selected=roots.index(chosen),
                     prediction=prediction, poly=poly)


def h5_step(prev5: Stencil, x_next: float, c: float,
            policy: RootPolicy = RootPolicy()) -> StepOutcome:
    """Advance the six-point product-group scheme on a uniform lattice.

    The equation h5_uniform(R3, R4, R5) = c is linear in R5, and R5 is a
    linear-fractional function of the new ordinate, so the cleared equation
    is linear in it.
    """
    if len(prev5) != 5:
        raise ValueError("h5_step needs 5 previous points")
    ys = prev5.ys
    try:
        r3 = _cross_ratio(ys[0], ys[1], ys[2], ys[3])
        r4 = _cross_ratio(ys[1], ys[2], ys[3], ys[4])
    except DegenerateCoefficientError:
        return _stopped(StopReason.DEGENERATE_COEFFICIENT)
    # 16 R5 + R4 (3 R4 + R5 - 32) + R3 (R4 - 5 R5 + 16) = 2c (R3-4)(R4-4)(R5-4)
    a_r5 = 16.0 + r4 - 5.0 * r3 - 2.0 * c * (r3 - 4.0) * (r4 - 4.0)
    b_r5 = (-3.0 * r4 ** 2 + 32.0 * r4 - r3 * r4 - 16.0 * r3
            - 8.0 * c * (r3 - 4.0) * (r4 - 4.0))
    scale_r = max(abs(r3), abs(r4), 16.0, abs(2.0 * c * (r3 - 4.0) * (r4 - 4.0)))
    if is_degenerate(a_r5, scale_r):
        return _stopped(StopReason.DEGENERATE_COEFFICIENT)
    r5 = b_r5 / a_r5
    # ((t - y3)(y4 - y2)) / ((t - y4)(y3 - y2)) = r5, linear in t
    a = (ys[4] - ys[2]) - r5 * (ys[3] - ys[2])
    b = ys[3] * (ys[4] - ys[2]) - r5 * ys[4] * (ys[3] - ys[2])
    poly = None
    if math.isfinite(a) and a != 0.0 and math.isfinite(b):
        poly = PolyCoeffs((-b, a))
    scale = max(abs(ys[4] - ys[2]), abs(r5 * (ys[3] - ys[2])))
    if not (math.isfinite(a) and math.isfinite(b)):
        return _stopped(StopReason.NON_FINITE)
    if is_degenerate(a, scale):
        return _stopped(StopReason.DEGENERATE_COEFFICIENT, poly=poly)
    t = b / a
    pt = _finite_point(x_next, t)
    if pt is None:
        return _stopped(StopReason.NON_FINITE, roots=(t,), poly=poly)
    return _advanced(pt, roots=(t,), selected=0, poly=poly)


# --- trajectory driver --------------------------------------------------------

def _check_seed_lattice(seed: Stencil, rule: Uniform):
    x0 = seed.points[0].x
    for k, p in enumerate(seed.points):
        expected = x0 + k * rule.h
        if abs(p.x - expected) > 1e-9 * max(abs(rule.h), abs(expected), 1.0):
            raise ValueError("seed abscissae inconsistent with the uniform lattice rule")


def integrate(spec: SchemeSpec, seed: Stencil, n_steps: int,
              stop_when=None) -> Trajectory:
    """Repeatedly apply the scheme's step, collecting Advanced points.

    Returns the partial trajectory and the reason extension ceased; scheme
    failures surface as stop reasons, never as exceptions.  ``stop_when``,
    if given, is a predicate on the newest point that halts the run with
    USER_LIMIT.
    """
    arity = spec.arity
    if len(seed) != arity:
        raise ValueError(f"{spec.scheme.value} needs a {arity}-point seed, got {len(seed)}")
    _check_seed_lattice(seed, spec.lattice)
    h = spec.lattice.h
    x0 = seed.points[0].x
    points = list(seed.points)
    stop = StopReason.COMPLETED
    for _ in range(n_steps):
        n = len(points)
        x_next = x0 + n * h
        window = Stencil(tuple(points[-arity:]))
        if spec.scheme is SchemeKind.SLY4:
            f = spec.forcing
            fn = (lambda _x, c=f.c: c) if isinstance(f, Constant) else f.fn
            out = sly4_step(window, x_next, fn)
        elif spec.scheme is SchemeKind.SLX3:
            out = slx3_step(window, x_next, spec.forcing, spec.rhs_eval,
                            spec.root_policy)
        else:
            out = h5_step(window, x_next, spec.forcing.c, spec.root_policy)
        if not out.advanced:
            stop = out.stop
            break
        points.append(out.point)
        if stop_when is not None and stop_when(out.point):
            stop = StopReason.USER_LIMIT
            break
    return Trajectory(tuple(points), stop, spec.scheme.value, h)
