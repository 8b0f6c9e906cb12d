"""Transition-rate assembly for the eight scenarios:
(single atom | entangled pair) x (inertial | coaccelerated observer)
x (free space | single mirror | cavity).

Every rate is ``lam^2 * geometric_factor * occupation_factor``.  The
geometric factor carries the boundary physics; the occupation factor is
the Planck factor at ``2 pi omega0 / alpha`` (inertial observer) or
``omega0 / T`` (coaccelerated observer in a thermal bath), ``n`` for
upward transitions and ``1 + n`` for downward ones, so detailed balance
holds by construction.

Cavity factors are computed as paired-difference image sums rather than
by composing the public f/h/m/n sums: the pairing keeps the truncation
error two orders below the individual sums and makes the exact-zero
positions (atom touching a mirror, atom on the midplane) cancel term by
term.  The pair factor is assembled as

    cos^2(theta) * F(z0) + sin^2(theta) * F(z0 + d) + sin(2 theta) * X

with ``F`` the single-atom factor and ``X`` the cross-correlation factor,
which reduces bitwise to the single-atom rates at theta = 0 and pi/2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from .errors import InternalError, InvalidParameterError
from .series import (
    DEFAULT_CONTROL,
    SeriesControl,
    SeriesValue,
    TWO_PI,
    g_kernel,
    paired_difference_sum,
    planck_occupation,
)


@dataclass(frozen=True)
class AtomSpec:
    """Two-level gap omega0 and dimensionless coupling lam."""

    omega0: float
    lam: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.omega0) and self.omega0 > 0.0):
            raise InvalidParameterError(f"AtomSpec.omega0 must be > 0, got {self.omega0!r}")
        if not (math.isfinite(self.lam) and self.lam > 0.0):
            raise InvalidParameterError(f"AtomSpec.lam must be > 0, got {self.lam!r}")


@dataclass(frozen=True)
class FreeSpace:
    pass


@dataclass(frozen=True)
class SingleBoundary:
    """One mirror at z = 0; the atom sits at z0 > 0."""

    z0: float

    def __post_init__(self):
        if not (math.isfinite(self.z0) and self.z0 > 0.0):
            raise InvalidParameterError(f"SingleBoundary.z0 must be > 0, got {self.z0!r}")


@dataclass(frozen=True)
class Cavity:
    """Mirrors at z = 0 and z = L; the atom sits at 0 < z0 < L."""

    L: float
    z0: float

    def __post_init__(self):
        if not (math.isfinite(self.L) and self.L > 0.0):
            raise InvalidParameterError(f"Cavity.L must be > 0, got {self.L!r}")
        if not (math.isfinite(self.z0) and 0.0 < self.z0 < self.L):
            raise InvalidParameterError(
                f"Cavity requires 0 < z0 < L, got z0={self.z0!r}, L={self.L!r}"
            )


Geometry = Union[FreeSpace, SingleBoundary, Cavity]


@dataclass(frozen=True)
class Inertial:
    alpha: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise InvalidParameterError(f"Inertial.alpha must be > 0, got {self.alpha!r}")


@dataclass(frozen=True)
class Coaccelerated:
    """Coaccelerated observer; the field is a thermal bath at temperature T."""

    alpha: float
    T: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise InvalidParameterError(
                f"Coaccelerated.alpha must be > 0, got {self.alpha!r}"
            )
        if not (math.isfinite(self.T) and self.T >= 0.0):
            raise InvalidParameterError(f"Coaccelerated.T must be >= 0, got {self.T!r}")


FrameSpec = Union[Inertial, Coaccelerated]


@dataclass(frozen=True)
class PairConfig:
    """Entanglement angle theta in [0, pi] and interatomic distance d > 0."""

    theta: float
    d: float

    def __post_init__(self):
        if not (math.isfinite(self.theta) and 0.0 <= self.theta <= math.pi):
            raise InvalidParameterError(
                f"PairConfig.theta must lie in [0, pi], got {self.theta!r}"
            )
        if not (math.isfinite(self.d) and self.d > 0.0):
            raise InvalidParameterError(f"PairConfig.d must be > 0, got {self.d!r}")


class Direction(Enum):
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True)
class RateBreakdown:
    """Auditable decomposition: rate = lam^2 * geometric * occupation."""

    geometric_factor: float
    occupation_factor: float
    rate: float
    truncation_error: float


def occupation_argument(frame: FrameSpec, dE: float) -> Optional[float]:
    """Planck argument: 2 pi dE / alpha (inertial) or dE / T (coaccelerated).

    Returns None for a coaccelerated frame at T = 0, where the upward
    occupation is 0 and the downward one is 1 by convention.
    """
    if isinstance(frame, Inertial):
        return 2.0 * math.pi * dE / frame.alpha
    if frame.T == 0.0:
        return None
    return dE / frame.T


def _occupation(frame: FrameSpec, dE: float, direction: Direction) -> float:
    x = occupation_argument(frame, dE)
    if x is None:
        return 0.0 if direction is Direction.UP else 1.0
    n = planck_occupation(x)
    return n if direction is Direction.UP else 1.0 + n


def cavity_position_factor(
    dE: float, alpha: float, L: float, z: float, ctl: SeriesControl
) -> SeriesValue:
    """sum_n [g(n L/2) - g(z - n L/2)]  ==  dE/2pi + f - h(z)."""
    return paired_difference_sum(dE, alpha, L, (0.0, z), (1.0, -1.0), ctl)


def cavity_cross_factor(
    dE: float, alpha: float, L: float, z0: float, d: float, ctl: SeriesControl
) -> SeriesValue:
    """sum_n [g(d/2 - n L/2) - g(z0 + d/2 - n L/2)]  ==  n(d/2) - m(z0, d/2)."""
    return paired_difference_sum(
        dE, alpha, L, (d / 2.0, z0 + d / 2.0), (1.0, -1.0), ctl
    )


def _single_factor(omega0, alpha, geom, ctl):
    if isinstance(geom, FreeSpace):
        return omega0 / TWO_PI, 0.0
    if isinstance(geom, SingleBoundary):
        return omega0 / TWO_PI - g_kernel(omega0, alpha, geom.z0), 0.0
    sv = cavity_position_factor(omega0, alpha, geom.L, geom.z0, ctl)
    return sv.value, sv.tail_bound


def _pair_factor(omega0, alpha, geom, pair, ctl):
    c2 = math.cos(pair.theta) ** 2
    s2 = math.sin(pair.theta) ** 2
    s22 = math.sin(2.0 * pair.theta)
    if isinstance(geom, FreeSpace):
        base = omega0 / TWO_PI
        cross = g_kernel(omega0, alpha, pair.d / 2.0)
        return c2 * base + s2 * base + s22 * cross, 0.0
    if isinstance(geom, SingleBoundary):
        fa = omega0 / TWO_PI - g_kernel(omega0, alpha, geom.z0)
        fb = omega0 / TWO_PI - g_kernel(omega0, alpha, geom.z0 + pair.d)
        cross = g_kernel(omega0, alpha, pair.d / 2.0) - g_kernel(
            omega0, alpha, geom.z0 + pair.d / 2.0
        )
        return c2 * fa + s2 * fb + s22 * cross, 0.0
    if not geom.z0 + pair.d < geom.L:
        raise InvalidParameterError(
            f"cavity pair requires z0 + d < L, got z0={geom.z0!r}, d={pair.d!r}, L={geom.L!r}"
        )
    fa = cavity_position_factor(omega0, alpha, geom.L, geom.z0, ctl)
    fb = cavity_position_factor(omega0, alpha, geom.L, geom.z0 + pair.d, ctl)
    cross = cavity_cross_factor(omega0, alpha, geom.L, geom.z0, pair.d, ctl)
    factor = c2 * fa.value + s2 * fb.value + s22 * cross.value
    tail = c2 * fa.tail_bound + s2 * fb.tail_bound + abs(s22) * cross.tail_bound
    return factor, tail


def _assemble(atom, frame, direction, factor, tail):
    occ = _occupation(frame, atom.omega0, direction)
    lam2 = atom.lam * atom.lam
    return RateBreakdown(
        geometric_factor=factor,
        occupation_factor=occ,
        rate=lam2 * factor * occ,
        truncation_error=lam2 * tail * occ,
    )


def single_rate(
    atom: AtomSpec,
    geom: Geometry,
    frame: FrameSpec,
    direction: Direction = Direction.UP,
    ctl: SeriesControl | None = None,
) -> RateBreakdown:
    """Transition rate of one accelerated atom."""
    ctl = ctl or DEFAULT_CONTROL
    factor, tail = _single_factor(atom.omega0, frame.alpha, geom, ctl)
    return _assemble(atom, frame, direction, factor, tail)


def pair_rate(
    atom: AtomSpec,
    geom: Geometry,
    frame: FrameSpec,
    pair: PairConfig,
    direction: Direction = Direction.UP,
    ctl: SeriesControl | None = None,
) -> RateBreakdown:
    """Transition rate of the entangled pair into |gg> (down) or |ee> (up).

    Both directions share one geometric factor, as in the closed forms this
    implements; only the occupation factor (n vs 1 + n) changes.
    """
    ctl = ctl or DEFAULT_CONTROL
    factor, tail = _pair_factor(atom.omega0, frame.alpha, geom, pair, ctl)
    return _assemble(atom, frame, direction, factor, tail)


def rate_ratio(
    atom: AtomSpec,
    geom: Geometry,
    frame: FrameSpec,
    pair: PairConfig | None = None,
    ctl: SeriesControl | None = None,
) -> float:
    """Upward/downward rate ratio; exp(-2 pi w0/alpha) or exp(-w0/T),
    independent of geometry and of the entanglement angle."""
    if pair is None:
        up = single_rate(atom, geom, frame, Direction.UP, ctl)
        down = single_rate(atom, geom, frame, Direction.DOWN, ctl)
    else:
        up = pair_rate(atom, geom, frame, pair, Direction.UP, ctl)
        down = pair_rate(atom, geom, frame, pair, Direction.DOWN, ctl)
    if down.rate == 0.0:
        raise InternalError(
            "downward rate is zero (geometric factor vanished); ratio undefined"
        )
    return up.rate / down.rate


def rate_per_unit(breakdown: RateBreakdown, atom: AtomSpec) -> float:
    """Rate in units of lam^2 * omega0 / 2 pi (the figures' normalization)."""
    return breakdown.rate / (atom.lam * atom.lam * atom.omega0 / TWO_PI)
