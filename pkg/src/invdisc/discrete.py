"""Difference invariants of the projective group actions on a stencil.

Cross-ratios are invariant under Mobius maps of the coordinate they are
built from.  The L-family (built on y cross-ratios, normalized by x
spacings) tends to the Schwarzian-derivative hierarchy in the continuous
limit; the M-family (normalized by y differences) tends to its hodograph
counterpart; the six-point combination evaluated by :func:`h5_discrete`
tends to the lowest-order invariant of the product action.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import DegenerateCoefficientError, Stencil, is_degenerate


@dataclass(frozen=True)
class CrossRatioWindow:
    """Four consecutive coordinate values (all x's or all y's)."""

    a0: float
    a1: float
    a2: float
    a3: float

    def values(self):
        return (self.a0, self.a1, self.a2, self.a3)


@dataclass(frozen=True)
class QTriple:
    """Q_i = 1 - R_i/S_i for the three windows of a six-point stencil."""

    q3: float
    q4: float
    q5: float


def _cross_ratio(a0: float, a1: float, a2: float, a3: float) -> float:
    n1, n2 = a3 - a1, a2 - a0
    d1, d2 = a3 - a2, a1 - a0
    scale = max(abs(n1), abs(n2), abs(d1), abs(d2))
    if is_degenerate(d1, scale) or is_degenerate(d2, scale):
        raise DegenerateCoefficientError(
            f"cross-ratio denominator vanishes on window ({a0}, {a1}, {a2}, {a3})")
    return (n1 * n2) / (d1 * d2)


def cross_ratio(w: CrossRatioWindow) -> float:
    """((a3-a1)(a2-a0)) / ((a3-a2)(a1-a0)) of four collinear values."""
    return _cross_ratio(*w.values())


def _ratio_r_over_s(xs, ys, k: int) -> float:
    """R_{k+3}/S_{k+3} in one full-precision expression."""
    ry = (ys[k + 3] - ys[k + 1]) * (ys[k + 2] - ys[k])
    dy = (ys[k + 3] - ys[k + 2]) * (ys[k + 1] - ys[k])
    rx = (xs[k + 3] - xs[k + 1]) * (xs[k + 2] - xs[k])
    dx = (xs[k + 3] - xs[k + 2]) * (xs[k + 1] - xs[k])
    y_scale = max(abs(ys[k + 3] - ys[k + 2]), abs(ys[k + 1] - ys[k]),
                  abs(ys[k + 3] - ys[k + 1]), abs(ys[k + 2] - ys[k]))
    if is_degenerate(ys[k + 3] - ys[k + 2], y_scale) or \
       is_degenerate(ys[k + 1] - ys[k], y_scale):
        raise DegenerateCoefficientError("repeated y-values in cross-ratio window")
    # x-differences cannot vanish on a valid stencil, rx may:
    x_scale = max(abs(xs[k + 3] - xs[k + 1]), abs(xs[k + 2] - xs[k]))
    if is_degenerate(rx, x_scale * x_scale):
        raise DegenerateCoefficientError("vanishing x cross-ratio numerator")
    return (ry * dx) / (dy * rx)


def _l3(xs, ys, k: int) -> float:
    d = (xs[k + 2] - xs[k + 1]) * (xs[k + 3] - xs[k])
    return 6.0 / d * (1.0 - _ratio_r_over_s(xs, ys, k))


def _m3(xs, ys, k: int) -> float:
    d1 = ys[k + 3] - ys[k]
    d2 = ys[k + 2] - ys[k + 1]
    scale = max(abs(v - w) for v in ys[k:k + 4] for w in ys[k:k + 4])
    if is_degenerate(d1, scale) or is_degenerate(d2, scale):
        raise DegenerateCoefficientError("vanishing y-difference in M window")
    return 6.0 / (d1 * d2) * (1.0 - _ratio_r_over_s(xs, ys, k))


def _require_len(s: Stencil, n: int, name: str):
    if len(s) != n:
        raise ValueError(f"{name} needs a {n}-point stencil, got {len(s)}")


def l3(s: Stencil) -> float:
    """Third-order invariant on 4 points; continuous limit is the Schwarzian."""
    _require_len(s, 4, "l3")
    return _l3(s.xs, s.ys, 0)


def l4(s: Stencil) -> float:
    """Fourth-order invariant on 5 points; limit is the Schwarzian's x-derivative."""
    _require_len(s, 5, "l4")
    xs, ys = s.xs, s.ys
    return 4.0 / (xs[4] - xs[0]) * (_l3(xs, ys, 1) - _l3(xs, ys, 0))


def l5(s: Stencil) -> float:
    """Fifth-order invariant on 6 points.

    On a lattice with coefficient W (see :func:`w_coefficient`) the limit
    carries a W * (Schwarzian)^2 correction.
    """
    _require_len(s, 6, "l5")
    xs, ys = s.xs, s.ys
    l4a = 4.0 / (xs[4] - xs[0]) * (_l3(xs, ys, 1) - _l3(xs, ys, 0))
    l4b = 4.0 / (xs[5] - xs[1]) * (_l3(xs, ys, 2) - _l3(xs, ys, 1))
    return 5.0 / (xs[5] - xs[0]) * (l4b - l4a)


def m3(s: Stencil) -> float:
    """Third-order hodograph-side invariant on 4 points."""
    _require_len(s, 4, "m3")
    return _m3(s.xs, s.ys, 0)


def m4(s: Stencil) -> float:
    """Fourth-order hodograph-side invariant on 5 points."""
    _require_len(s, 5, "m4")
    xs, ys = s.xs, s.ys
    d = ys[4] - ys[0]
    scale = max(abs(v - w) for v in ys for w in ys)
    if is_degenerate(d, scale):
        raise DegenerateCoefficientError("vanishing spanning y-difference in m4")
    return 4.0 / d * (_m3(xs, ys, 1) - _m3(xs, ys, 0))


def m5(s: Stencil) -> float:
    """Fifth-order hodograph-side invariant on 6 points.

    The continuous limit carries a -W_x * (third-order invariant)^2 term,
    with W_x from :func:`wx_coefficient` (equal to 2 on uniform lattices).
    """
    _require_len(s, 6, "m5")
    xs, ys = s.xs, s.ys

    def m4_window(k):
        d = ys[k + 4] - ys[k]
        scale = max(abs(v - w) for v in ys[k:k + 5] for w in ys[k:k + 5])
        if is_degenerate(d, scale):
            raise DegenerateCoefficientError("vanishing spanning y-difference in m5")
        return 4.0 / d * (_m3(xs, ys, k + 1) - _m3(xs, ys, k))

    d = ys[5] - ys[0]
    scale = max(abs(v - w) for v in ys for w in ys)
    if is_degenerate(d, scale):
        raise DegenerateCoefficientError("vanishing spanning y-difference in m5")
    return 5.0 / d * (m4_window(1) - m4_window(0))


def q_triple(s: Stencil) -> QTriple:
    """Q_i = 1 - R_i/S_i, computed from full-precision R/S ratios."""
    _require_len(s, 6, "q_triple")
    xs, ys = s.xs, s.ys
    return QTriple(*(1.0 - _ratio_r_over_s(xs, ys, k) for k in range(3)))


def _check_factor(value: float, scale: float, what: str):
    if is_degenerate(value, scale):
        raise DegenerateCoefficientError(f"vanishing {what}")


def h5_discrete(s: Stencil) -> float:
    """Six-point invariant of the product action, on an arbitrary lattice.

    Undefined where any window has R = S (the weakly invariant manifold);
    those windows raise DegenerateCoefficientError.
    """
    _require_len(s, 6, "h5_discrete")
    xs, ys = s.xs, s.ys
    s3 = _cross_ratio(xs[0], xs[1], xs[2], xs[3])
    s4 = _cross_ratio(xs[1], xs[2], xs[3], xs[4])
    s5 = _cross_ratio(xs[2], xs[3], xs[4], xs[5])
    q = q_triple(s)
    s_scale = max(abs(s3), abs(s4), abs(s5), 1.0)
    for qi in (q.q3, q.q4, q.q5):
        _check_factor(qi, 1.0, "Q factor (window on the R = S manifold)")
    d1 = s3 * (1.0 - s4) + s4
    d2 = s4 * (1.0 - s5) + s5
    d3 = s4 * (1.0 - s3) * (1.0 - s5) - s3 * s5
    _check_factor(d1, s_scale ** 2, "bracket denominator")
    _check_factor(d2, s_scale ** 2, "bracket denominator")
    _check_factor(d3, s_scale ** 3, "bracket denominator")
    pref = (10.0 / 3.0) * s4 / (d1 * d2 * d3)
    bracket = (s4 * (1.0 - s5) / q.q5
               + s4 * (1.0 - s3) / q.q3
               - (1.0 - s4) * d3 / q.q4
               - s4 * (1.0 - s3) * (1.0 - s5) * q.q4 / (q.q3 * q.q5))
    return pref * bracket


def h5_uniform(r3: float, r4: float, r5: float) -> float:
    """Uniform-lattice (S = 4) form of the six-point product invariant."""
    scale = max(abs(r3), abs(r4), abs(r5), 4.0)
    for r in (r3, r4, r5):
        _check_factor(r - 4.0, scale, "R - 4 factor (window on the R = S manifold)")
    num = 16.0 * r5 + r4 * (3.0 * r4 + r5 - 32.0) + r3 * (r4 - 5.0 * r5 + 16.0)
    return num / (2.0 * (r3 - 4.0) * (r4 - 4.0) * (r5 - 4.0))


def w_coefficient(x0: float, x1: float, x2: float, x3: float, x4: float,
                  x5: float) -> float:
    """Lattice-dependent coefficient entering the l5 continuous limit."""
    span = x5 - x0
    d40 = x4 - x0
    d51 = x5 - x1
    scale = max(abs(span), abs(d40), abs(d51))
    for d in (span, d40, d51):
        _check_factor(d, scale, "spanning x-difference")
    return (10.0 / 3.0) * (0.2
                           - (x4 - x3) / span
                           - (x3 - x1) * (x2 - x0) / (span * d40)
                           + (x4 - x2) * (x3 - x1) / (span * d51))


def wx_coefficient(h1: float, h2: float, h3: float, h4: float, h5: float) -> float:
    """Spacing-dependent coefficient entering the m5 continuous limit."""
    total = h1 + h2 + h3 + h4 + h5
    scale = max(abs(h) for h in (h1, h2, h3, h4, h5))
    _check_factor(total, scale, "spacing sum")
    return (20.0 / 6.0) * (0.8 - h3 / total)
