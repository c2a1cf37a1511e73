"""Shared value types: lattice points, stencils, jets, trajectories and the
vocabulary describing one scheme run.

Everything here is an immutable value; instances can be shared freely
between threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence


class DegenerateCoefficientError(ArithmeticError):
    """A denominator factor (or leading coefficient) vanished within tolerance."""


class NonFiniteError(ArithmeticError):
    """A computed quantity is NaN or infinite."""


class DomainError(ValueError):
    """An exact solution was evaluated at one of its singular points."""


#: |d| <= DEGENERACY_RTOL * local_scale marks a denominator as vanishing.
DEGENERACY_RTOL = 1e-13

#: values beyond this magnitude count as a blow-up during integration.
OVERFLOW_LIMIT = 1e300


def is_degenerate(d: float, scale: float) -> bool:
    """Scale-aware vanishing test for denominator factors."""
    return abs(d) <= DEGENERACY_RTOL * scale


@dataclass(frozen=True)
class Point:
    """One lattice node (x, y)."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise NonFiniteError(f"non-finite point ({self.x}, {self.y})")


@dataclass(frozen=True)
class Stencil:
    """Ordered window of 3..6 consecutive lattice points.

    Abscissae must be strictly monotone; decreasing order expresses
    backward integration.
    """

    points: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if not 3 <= len(pts) <= 6:
            raise ValueError(f"stencil needs 3..6 points, got {len(pts)}")
        dxs = [b.x - a.x for a, b in zip(pts, pts[1:])]
        if not (all(d > 0 for d in dxs) or all(d < 0 for d in dxs)):
            raise ValueError("stencil abscissae must be strictly monotone")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def xs(self) -> tuple[float, ...]:
        return tuple(p.x for p in self.points)

    @property
    def ys(self) -> tuple[float, ...]:
        return tuple(p.y for p in self.points)


@dataclass(frozen=True)
class Jet:
    """Value and derivatives (y, y', ..., y^(5)) at an abscissa x."""

    x: float
    d: tuple[float, ...]

    def __post_init__(self):
        d = tuple(float(v) for v in self.d)
        object.__setattr__(self, "d", d)
        if len(d) != 6:
            raise ValueError(f"jet needs entries for orders 0..5, got {len(d)}")
        if not all(math.isfinite(v) for v in (self.x, *d)):
            raise NonFiniteError("non-finite jet entry")


class StopReason(Enum):
    COMPLETED = "completed"
    NO_REAL_ROOT = "no-real-root"
    DEGENERATE_COEFFICIENT = "degenerate-coefficient"
    NON_FINITE = "non-finite"
    USER_LIMIT = "user-limit"


@dataclass(frozen=True)
class Trajectory:
    """Computed sequence of points plus the reason extension ceased."""

    points: tuple[Point, ...]
    stop: StopReason
    scheme_id: str
    h_nominal: float

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def xs(self):
        return tuple(p.x for p in self.points)

    @property
    def ys(self):
        return tuple(p.y for p in self.points)


# --- forcing terms -----------------------------------------------------------

@dataclass(frozen=True)
class Constant:
    """Constant right-hand side."""

    c: float


@dataclass(frozen=True)
class FunctionOfX:
    """Named function of x as the right-hand side; must be total on the
    integration interval."""

    fn: Callable[[float], float]
    name: str = "f"

    def __call__(self, x: float) -> float:
        return self.fn(x)


@dataclass(frozen=True)
class IdentityInY:
    """Right-hand side equal to the dependent variable itself."""


ForcingTerm = Constant | FunctionOfX | IdentityInY


# --- lattice rules -----------------------------------------------------------

@dataclass(frozen=True)
class Uniform:
    """Equally spaced abscissae x_n = x0 + n*h."""

    h: float

    def __post_init__(self):
        if self.h == 0 or not math.isfinite(self.h):
            raise ValueError("uniform lattice needs a nonzero finite step")


@dataclass(frozen=True)
class ConstantS:
    """Lattice with constant x cross-ratio K, extended from a three-point seed."""

    K: float
    seed: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "seed", tuple(self.seed))
        a, b, c = self.seed
        if not ((a < b < c) or (a > b > c)):
            raise ValueError("seed abscissae must be strictly monotone")
        if self.K == 0:
            raise ValueError("cross-ratio constant K must be nonzero")


LatticeRule = Uniform | ConstantS


# --- scheme run configuration ------------------------------------------------

class SchemeKind(Enum):
    SLY4 = "sly4"
    SLX3 = "slx3"
    H5 = "h5"


#: previous points consumed per step (the new point extends these by one).
SCHEME_ARITY = {SchemeKind.SLY4: 4, SchemeKind.SLX3: 3, SchemeKind.H5: 5}


class RootSelection(Enum):
    NEAREST_TO_PREDICTION = "nearest"
    SMALLEST_REAL = "smallest"
    LARGEST_REAL = "largest"


@dataclass(frozen=True)
class RootPolicy:
    """How one real root is selected among several.

    ``prediction_order`` is the degree of the polynomial extrapolating the
    trailing y-values; it must not exceed (stencil length - 1).
    """

    selection: RootSelection = RootSelection.NEAREST_TO_PREDICTION
    prediction_order: int = 2

    def __post_init__(self):
        if self.prediction_order < 0:
            raise ValueError("prediction_order must be nonnegative")


class RhsEvalPolicy(Enum):
    """Where a y-dependent right-hand side is evaluated: at the new point or
    as the mean over the full stencil.  Only meaningful for the third-order
    scheme with IdentityInY forcing."""

    NEW_POINT = "new-point"
    STENCIL_MEAN = "stencil-mean"


@dataclass(frozen=True)
class SchemeSpec:
    """Which scheme, forcing, lattice, and root handling define one run."""

    scheme: SchemeKind
    forcing: ForcingTerm
    lattice: LatticeRule
    root_policy: RootPolicy = field(default_factory=RootPolicy)
    rhs_eval: RhsEvalPolicy = RhsEvalPolicy.NEW_POINT

    def __post_init__(self):
        if not isinstance(self.lattice, Uniform):
            raise ValueError("schemes run on uniform lattices only")
        if self.scheme is SchemeKind.SLY4:
            if not isinstance(self.forcing, (Constant, FunctionOfX)):
                raise ValueError("sly4 forcing must be a function of x only")
        elif self.scheme is SchemeKind.SLX3:
            if not isinstance(self.forcing, (Constant, IdentityInY)):
                raise ValueError("slx3 forcing must be constant or the identity in y")
        elif self.scheme is SchemeKind.H5:
            if not isinstance(self.forcing, Constant):
                raise ValueError("h5 forcing must be constant")
        arity = SCHEME_ARITY[self.scheme]
        if self.root_policy.prediction_order > arity - 1:
            raise ValueError("prediction_order exceeds stencil length - 1")

    @property
    def arity(self) -> int:
        return SCHEME_ARITY[self.scheme]


def seed_stencil_from_function(f: Callable[[float], float], x0: float, h: float,
                               n: int) -> Stencil:
    """Sample (x0 + k*h, f(x0 + k*h)) for k = 0..n-1 into a seed stencil."""
    if n not in (3, 4, 5, 6):
        raise ValueError(f"seed length must be 3..6, got {n}")
    if h == 0:
        raise ValueError("h must be nonzero")
    pts = []
    for k in range(n):
        x = x0 + k * h
        y = f(x)
        if not math.isfinite(y):
            raise NonFiniteError(f"f({x}) = {y} is not finite")
        pts.append(Point(x, y))
    return Stencil(tuple(pts))


def stencil_from_sequences(xs: Sequence[float], ys: Sequence[float]) -> Stencil:
    if len(xs) != len(ys):
        raise ValueError("xs and ys must have equal length")
    return Stencil(tuple(Point(x, y) for x, y in zip(xs, ys)))
