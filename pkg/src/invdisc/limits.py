"""Numeric verification of the continuous-limit relations: each difference
invariant approaches its differential target (with lattice-coefficient
corrections) as the stencil shrinks, and the convergence order is estimated
from the error decay."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .core import Jet, LatticeRule, Uniform, stencil_from_sequences
from .differential import h5_differential, jy_invariants, kx_invariants
from .discrete import (h5_discrete, l3, l4, l5, m3, m4, m5, w_coefficient,
                       wx_coefficient)

#: discrete invariant -> (stencil length, evaluator)
_INVARIANTS = {
    "l3": (4, l3),
    "l4": (5, l4),
    "l5": (6, l5),
    "m3": (4, m3),
    "m4": (5, m4),
    "m5": (6, m5),
    "h5": (6, h5_discrete),
}


def target_value(invariant: str, jet: Jet, xs: Sequence[float]) -> float:
    """Differential-invariant target for one stencil, including the
    lattice-coefficient corrections evaluated on the actual abscissae."""
    if invariant in ("l3", "l4", "l5"):
        t = jy_invariants(jet)
        if invariant == "l3":
            return t.third
        if invariant == "l4":
            return t.fourth
        return t.fifth + w_coefficient(*xs) * t.third ** 2
    if invariant in ("m3", "m4", "m5"):
        t = kx_invariants(jet)
        if invariant == "m3":
            return t.third
        if invariant == "m4":
            return t.fourth
        hs = [b - a for a, b in zip(xs, xs[1:])]
        return t.fifth - wx_coefficient(*hs) * t.third ** 2
    if invariant == "h5":
        hs = [b - a for a, b in zip(xs, xs[1:])]
        factor = (hs[4] * hs[0]) / (hs[3] * hs[1])
        return factor * (h5_differential(jet) + w_coefficient(*xs))
    raise ValueError(f"unknown invariant {invariant!r}")


@dataclass(frozen=True)
class LimitProbe:
    """One convergence experiment.

    The stencil at level k spans [x_center, x_center + h_k * sum(alphas)]
    with spacings h_k * alphas; ``h_sequence`` must be strictly decreasing
    with at least 4 levels.  A callable ``lattice`` overrides the placement
    entirely: it maps h to explicit abscissae (the jet target is then taken
    at the first abscissa).
    """

    invariant: str
    test_function: Callable[[float], Jet]
    x_center: float
    h_sequence: tuple[float, ...]
    lattice: LatticeRule | Callable[[float], Sequence[float]] = field(
        default_factory=lambda: Uniform(1.0))
    alphas: tuple[float, ...] | None = None
    target_fn: Callable[[Jet, Sequence[float]], float] | None = None

    def __post_init__(self):
        if self.invariant not in _INVARIANTS:
            raise ValueError(f"unknown invariant {self.invariant!r}")
        hs = tuple(float(h) for h in self.h_sequence)
        object.__setattr__(self, "h_sequence", hs)
        if len(hs) < 4 or any(b >= a for a, b in zip(hs, hs[1:])):
            raise ValueError("h_sequence must be strictly decreasing with >= 4 levels")


@dataclass(frozen=True)
class LimitReport:
    """Per-level errors, fitted order, and the finest clean estimate."""

    hs: tuple[float, ...]
    values: tuple[float, ...]
    errors: tuple[float, ...]
    targets: tuple[float, ...]
    estimated_order: float
    limit_value: float
    floor_level: int  # first level hit by the roundoff floor; len(hs) if none
    monotone: bool


def _abscissae(p: LimitProbe, h: float, npts: int) -> list[float]:
    if callable(p.lattice):
        xs = [float(v) for v in p.lattice(h)]
        if len(xs) != npts:
            raise ValueError(f"lattice callable returned {len(xs)} abscissae, need {npts}")
        return xs
    if not isinstance(p.lattice, Uniform):
        raise ValueError("probe lattices are uniform-by-alphas or callables")
    alphas = p.alphas if p.alphas is not None else (1.0,) * (npts - 1)
    if len(alphas) != npts - 1:
        raise ValueError(f"need {npts - 1} spacing multipliers, got {len(alphas)}")
    xs = [p.x_center]
    for a in alphas:
        xs.append(xs[-1] + h * a)
    return xs


def probe_limit(p: LimitProbe) -> LimitReport:
    """Evaluate the invariant across the shrinking stencils and fit the
    convergence order on the levels before the roundoff floor."""
    npts, evaluate = _INVARIANTS[p.invariant]
    values, errors, targets, mean_hs = [], [], [], []
    for h in p.h_sequence:
        xs = _abscissae(p, h, npts)
        jets = [p.test_function(x) for x in xs]
        stencil = stencil_from_sequences(xs, [j.d[0] for j in jets])
        value = evaluate(stencil)
        anchor = jets[0]
        if p.target_fn is not None:
            target = p.target_fn(anchor, xs)
        else:
            target = target_value(p.invariant, anchor, xs)
        values.append(value)
        targets.append(target)
        errors.append(abs(value - target))
        mean_hs.append(sum(abs(b - a) for a, b in zip(xs, xs[1:])) / (npts - 1))
    # roundoff floor: first level whose error stops decreasing
    floor = len(errors)
    for i in range(1, len(errors)):
        if errors[i] >= errors[i - 1]:
            floor = i
            break
    clean = max(floor, 2)
    slope = float(np.polyfit(np.log(mean_hs[:clean]), np.log(np.maximum(errors[:clean], 1e-300)), 1)[0])
    return LimitReport(
        hs=tuple(mean_hs), values=tuple(values), errors=tuple(errors),
        targets=tuple(targets), estimated_order=slope,
        limit_value=values[clean - 1], floor_level=floor,
        monotone=(floor == len(errors)))
