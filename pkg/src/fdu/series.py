"""Numerical kernels: the image kernel, its four boundary sums, and the
Planck occupation factor.

All sums run over mirror-image positions spaced by half the cavity length
``h = L/2``:

    f_sum(dE, a, L)        = 2 * sum_{n>=1} g(dE, a, n h)
    h_sum(dE, a, z0, L)    = sum_{n in Z} g(dE, a, z0 - n h)
    m_sum(dE, a, z0, d, L) = sum_{n in Z} g(dE, a, z0 + d - n h)
    n_sum(dE, a, d, L)     = sum_{n in Z} g(dE, a, d/2 - n h)

with ``g = g_kernel``.  Every sum returns a :class:`SeriesValue` whose
``tail_bound`` rigorously bounds the discarded tail.  These series have
envelope tails that decay only like 1/N, so they are truncated on a
per-term criterion; the rate assembly in :mod:`fdu.rates` instead sums
paired differences of these series, whose tails decay like 1/N^2 and admit
a much tighter stopping rule (see ``paired_difference_sum``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import backend
from .errors import InvalidParameterError, SeriesTruncationError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control for the image sums."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_terms: int = 10**6

    def __post_init__(self):
        if not (self.rel_tol > 0.0):
            raise InvalidParameterError("SeriesControl.rel_tol must be > 0")
        if not (self.abs_tol > 0.0):
            raise InvalidParameterError("SeriesControl.abs_tol must be > 0")
        if self.max_terms < 1:
            raise InvalidParameterError("SeriesControl.max_terms must be >= 1")


DEFAULT_CONTROL = SeriesControl()


@dataclass(frozen=True)
class SeriesValue:
    """A truncated sum with a rigorous bound on what was discarded."""

    value: float
    tail_bound: float
    terms_used: int


def _require_finite(name: str, x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise InvalidParameterError(f"{name} must be finite, got {x!r}")
    return x


def _require_positive(name: str, x: float) -> float:
    x = _require_finite(name, x)
    if not x > 0.0:
        raise InvalidParameterError(f"{name} must be > 0, got {x!r}")
    return x


def g_kernel(dE: float, alpha: float, z: float) -> float:
    """Image kernel sin((2 dE/a) asinh(a z)) / (4 pi z sqrt(1 + a^2 z^2)).

    Even in ``z``; the removable singularity at ``z = 0`` evaluates to
    ``dE / 2 pi``.  Arguments with ``max(a, 2 dE) |z| < 1e-6`` go through a
    Taylor branch so the zero-argument cancellations in the cavity rates
    are exact.
    """
    dE = _require_positive("dE", dE)
    alpha = _require_positive("alpha", alpha)
    z = _require_finite("z", z)
    return backend.kernel(dE, alpha, z)


def planck_occupation(x: float) -> float:
    """Thermal occupation n(x) = 1 / (e^x - 1) for x > 0, underflowing to 0."""
    x = _require_finite("x", x)
    if not x > 0.0:
        raise InvalidParameterError(f"planck_occupation argument must be > 0, got {x!r}")
    if x >= 40.0:
        # exp(-x)(1 + e^-x + ...) truncated; relative error < 4e-18 here
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def _run(dE, alpha, h, offsets, weights, skip_zero, ctl, tail_stop, rel_scale, what):
    value, tail, terms, hit_max = backend.image_sum(
        dE,
        alpha,
        h,
        tuple(offsets),
        tuple(weights),
        skip_zero,
        ctl.rel_tol,
        ctl.abs_tol,
        ctl.max_terms,
        tail_stop,
        rel_scale,
    )
    result = SeriesValue(value=value, tail_bound=tail, terms_used=terms)
    if hit_max:
        raise SeriesTruncationError(
            f"{what}: max_terms={ctl.max_terms} exhausted before the stopping "
            f"criterion was met (tail_bound={tail:.3e})",
            partial=result,
        )
    return result


def f_sum(dE: float, alpha: float, L: float, ctl: SeriesControl | None = None) -> SeriesValue:
    """Boundary-spacing sum 2 sum_{n>=1} g(dE, a, n L/2).

    Computed as the full two-sided sum minus its n = 0 term (exactly
    dE / 2 pi), so the index-shift identity h_sum(0) = dE/2pi + f_sum holds
    term by term, truncation included.
    """
    dE = _require_positive("dE", dE)
    alpha = _require_positive("alpha", alpha)
    L = _require_positive("L", L)
    ctl = ctl or DEFAULT_CONTROL
    try:
        sv = _run(dE, alpha, L / 2.0, (0.0,), (1.0,), False, ctl, False, 0.0, "f_sum")
    except SeriesTruncationError as exc:
        p = exc.partial
        exc.partial = SeriesValue(p.value - dE / TWO_PI, p.tail_bound, p.terms_used)
        raise
    return SeriesValue(
        value=sv.value - dE / TWO_PI,
        tail_bound=sv.tail_bound,
        terms_used=sv.terms_used,
    )


def h_sum(
    dE: float, alpha: float, z0: float, L: float, ctl: SeriesControl | None = None
) -> SeriesValue:
    """Two-sided image sum centred on the atom position z0."""
    dE = _require_positive("dE", dE)
    alpha = _require_positive("alpha", alpha)
    L = _require_positive("L", L)
    z0 = _require_finite("z0", z0)
    if not (0.0 <= z0 <= L):
        raise InvalidParameterError(f"h_sum requires 0 <= z0 <= L, got z0={z0!r}, L={L!r}")
    ctl = ctl or DEFAULT_CONTROL
    return _run(dE, alpha, L / 2.0, (z0,), (1.0,), False, ctl, False, 0.0, "h_sum")


def m_sum(
    dE: float,
    alpha: float,
    z0: float,
    d: float,
    L: float,
    ctl: SeriesControl | None = None,
) -> SeriesValue:
    """Two-sided image sum centred on z0 + d; m_sum(z0, d) == h_sum(z0 + d)."""
    dE = _require_positive("dE", dE)
    alpha = _require_positive("alpha", alpha)
    L = _require_positive("L", L)
    z0 = _require_finite("z0", z0)
    d = _require_finite("d", d)
    ctl = ctl or DEFAULT_CONTROL
    return _run(dE, alpha, L / 2.0, (z0 + d,), (1.0,), False, ctl, False, 0.0, "m_sum")


def n_sum(
    dE: float, alpha: float, d: float, L: float, ctl: SeriesControl | None = None
) -> SeriesValue:
    """Two-sided image sum centred on the half separation d/2."""
    dE = _require_positive("dE", dE)
    alpha = _require_positive("alpha", alpha)
    L = _require_positive("L", L)
    d = _require_finite("d", d)
    if d < 0.0:
        raise InvalidParameterError(f"n_sum requires d >= 0, got {d!r}")
    ctl = ctl or DEFAULT_CONTROL
    return _run(dE, alpha, L / 2.0, (d / 2.0,), (1.0,), False, ctl, False, 0.0, "n_sum")


def paired_difference_sum(
    dE: float,
    alpha: float,
    L: float,
    offsets,
    weights,
    ctl: SeriesControl | None = None,
) -> SeriesValue:
    """Fused sum sum_n sum_j w_j g(c_j - n L/2) for weights summing to zero.

    The zero weight sum makes consecutive images pair up, so the tail decays
    like 1/N^2 and the sum can stop on its rigorous tail bound reaching
    ``max(abs_tol, rel_tol * dE/2pi)``.  This is the primitive the cavity
    rates are assembled from; expressing a geometric factor this way (rather
    than composing independently truncated f/h/m/n sums) is what makes the
    exact-zero identities hold to the reported tail bound.
    """
    dE = _require_positive("dE", dE)
    alpha = _require_positive("alpha", alpha)
    L = _require_positive("L", L)
    if abs(sum(weights)) > 1e-9 * sum(abs(w) for w in weights):
        raise InvalidParameterError("paired_difference_sum weights must sum to zero")
    ctl = ctl or DEFAULT_CONTROL
    return _run(
        dE,
        alpha,
        L / 2.0,
        offsets,
        weights,
        False,
        ctl,
        True,
        dE / TWO_PI,
        "paired_difference_sum",
    )
