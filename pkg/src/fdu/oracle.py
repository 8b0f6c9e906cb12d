"""Independent validation of the closed-form rates by direct quadrature.

Two methodologically independent paths, neither of which reuses the residue
closed forms that :mod:`fdu.rates` implements:

* Inertial observer: the response integrals are integrated on the real
  proper-time axis with the finite i*epsilon prescription kept in the
  integrand, then extrapolated epsilon -> 0 polynomially
  (:func:`oracle_I1`, :func:`oracle_I2`, assembled over boundary images for
  the mirror and cavity geometries).

* Coaccelerated observer: the thermal correlator is built by summing the
  imaginary-time images s directly (with polygamma tail corrections through
  1/s^4), keeping the singular s = 0 image on the epsilon-extrapolated
  path; the closed-form resummation of the s sum is used nowhere here.

Appendix convention: the standalone integrals carry the separation in the
``sinh^2 - dist^2 alpha^2`` form; the assembly maps main-text image
distances D to ``dist = D/2`` at its boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import polygamma

from ._series_numpy import _side_tail
from .errors import InvalidParameterError, OracleConvergenceError
from .quadrature import (
    adaptive_gauss_kronrod,
    extrapolation_diagnostics,
    ladder_edges,
    richardson_zero,
)
from .rates import (
    AtomSpec,
    Cavity,
    Coaccelerated,
    Direction,
    FrameSpec,
    FreeSpace,
    Geometry,
    Inertial,
    PairConfig,
    SingleBoundary,
    pair_rate,
    single_rate,
)
from .series import planck_occupation

TWO_PI = 2.0 * math.pi
DEFAULT_EPSILONS = (1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4, 3.125e-4)


@dataclass(frozen=True)
class QuadratureControl:
    """Controls for the quadrature oracle.

    ``window_halfwidth`` is the half-width of the decaying integration
    window in proper-time units; None picks 40/alpha (inertial) or
    40/(2 pi T) (thermal), past which the integrand tail is far below
    ``abs_tol``.  ``image_rel_target`` steers how many boundary images the
    cavity assemblies keep.
    """

    epsilon_sequence: tuple = DEFAULT_EPSILONS
    window_halfwidth: Optional[float] = None
    abs_tol: float = 1e-9
    max_subdivisions: int = 2000
    image_rel_target: float = 1e-6
    max_images: int = 4096
    thermal_sum_terms: Optional[int] = None

    def __post_init__(self):
        eps = tuple(float(e) for e in self.epsilon_sequence)
        if not eps or any(e <= 0.0 for e in eps):
            raise InvalidParameterError("epsilon_sequence entries must be > 0")
        if any(b >= a for a, b in zip(eps, eps[1:])):
            raise InvalidParameterError("epsilon_sequence must be strictly decreasing")
        if not self.abs_tol > 0.0:
            raise InvalidParameterError("QuadratureControl.abs_tol must be > 0")


DEFAULT_QUAD_CONTROL = QuadratureControl()


@dataclass(frozen=True)
class OracleResult:
    value: float
    error_estimate: float
    epsilon_extrapolation_order: int


def _lagrange_amplification(eps):
    """Sum of |Lagrange weights at 0|: noise amplification of the
    extrapolation (about 12 for six halvings)."""
    eps = [float(e) for e in eps]
    total = 0.0
    for j, ej in enumerate(eps):
        w = 1.0
        for i, ei in enumerate(eps):
            if i != j:
                w *= ei / (ei - ej)
        total += abs(w)
    return total


def _extrapolate(eps, vals, quad_errs, value_scale):
    value, rich_err, order = richardson_zero(eps, vals)
    err = rich_err + _lagrange_amplification(eps) * max(quad_errs)
    if err > max(1e-4 * abs(value), 1e-4 * value_scale):
        history = extrapolation_diagnostics(eps, vals)
        raise OracleConvergenceError(
            f"epsilon extrapolation did not settle: levels={history!r}, "
            f"error estimate {err:.3e} vs value {value:.6e}"
        )
    return value, err, order


# ---------------------------------------------------------------------------
# inertial path
# ---------------------------------------------------------------------------


def _inertial_quad(dE, alpha, dist, eps, decay_window, abs_tol, max_panels):
    """One epsilon level of -(a^2/16pi^2) * Int e^{-i dE t} /
    (sinh^2((a t - i eps)/2) - dist^2 a^2) dt, over the full real line
    folded onto [0, W]."""
    c = (dist * alpha) ** 2
    if dist == 0.0:
        specials = [0.0]
        w_end = decay_window
    else:
        tp = 2.0 / alpha * math.asinh(dist * alpha)
        specials = [tp]
        w_end = tp + decay_window

    def f(t):
        k = 1.0 / (np.sinh(0.5 * (alpha * t - 1j * eps)) ** 2 - c)
        return (np.exp(-1j * dE * t) * k).real

    edges = ladder_edges(0.0, w_end, specials, w_min=eps / (8.0 * alpha), n_base=16)
    v, e, _ = adaptive_gauss_kronrod(f, edges, abs_tol, max_panels)
    scale = alpha * alpha / (16.0 * math.pi**2)
    return -scale * 2.0 * v, scale * 2.0 * e


def oracle_I1(dE: float, alpha: float, ctl: QuadratureControl | None = None) -> OracleResult:
    """Free-trajectory response integral for signed energy gap dE."""
    if dE == 0.0 or not math.isfinite(dE):
        raise InvalidParameterError(f"oracle_I1 requires dE != 0, got {dE!r}")
    if not alpha > 0.0:
        raise InvalidParameterError(f"oracle_I1 requires alpha > 0, got {alpha!r}")
    ctl = ctl or DEFAULT_QUAD_CONTROL
    decay = ctl.window_halfwidth if ctl.window_halfwidth else 40.0 / alpha
    vals, errs = [], []
    for eps in ctl.epsilon_sequence:
        v, e = _inertial_quad(dE, alpha, 0.0, eps, decay, ctl.abs_tol, ctl.max_subdivisions)
        vals.append(v)
        errs.append(e)
    value, err, order = _extrapolate(
        ctl.epsilon_sequence, vals, errs, abs(dE) / TWO_PI
    )
    return OracleResult(value, err, order)


def oracle_I2(
    dE: float, alpha: float, dist: float, ctl: QuadratureControl | None = None
) -> OracleResult:
    """Separated-trajectory response integral (appendix distance convention)."""
    if dE == 0.0 or not math.isfinite(dE):
        raise InvalidParameterError(f"oracle_I2 requires dE != 0, got {dE!r}")
    if not alpha > 0.0:
        raise InvalidParameterError(f"oracle_I2 requires alpha > 0, got {alpha!r}")
    if not dist > 0.0:
        raise InvalidParameterError(f"oracle_I2 requires dist > 0, got {dist!r}")
    ctl = ctl or DEFAULT_QUAD_CONTROL
    decay = ctl.window_halfwidth if ctl.window_halfwidth else 40.0 / alpha
    vals, errs = [], []
    for eps in ctl.epsilon_sequence:
        v, e = _inertial_quad(dE, alpha, dist, eps, decay, ctl.abs_tol, ctl.max_subdivisions)
        vals.append(v)
        errs.append(e)
    value, err, order = _extrapolate(
        ctl.epsilon_sequence, vals, errs, abs(dE) / TWO_PI
    )
    return OracleResult(value, err, order)


# ---------------------------------------------------------------------------
# image bookkeeping shared by both paths
# ---------------------------------------------------------------------------


def _pair_weights(theta):
    """Transition matrix elements (cos t on the atom at z0, sin t on the
    atom at z0 + d), entering as cos^2, sin^2, and the cross weight
    sin(2t); used identically for both transition directions, matching the
    closed forms this oracle checks."""
    return math.cos(theta) ** 2, math.sin(theta) ** 2, math.sin(2.0 * theta)


def _merge(images):
    merged: dict = {}
    for w, dist in images:
        key = abs(float(dist))
        merged[key] = merged.get(key, 0.0) + float(w)
    return sorted((d, w) for d, w in merged.items() if w != 0.0)


def _cavity_image_count(dE, alpha, L, offsets, weights, ctl):
    """Smallest power-of-two image count whose paired truncation estimate
    meets ctl.image_rel_target (in units of dE / 2 pi)."""
    h = L / 2.0
    c = np.asarray(offsets)
    w = np.asarray(weights)
    c_min, c_max = float(c.min()), float(c.max())
    c_mid = 0.5 * (c_min + c_max)
    sw = float(np.abs(w).sum())
    wd = float(np.sum(np.abs(w) * np.abs(c - c_mid)))
    target = ctl.image_rel_target * dE / TWO_PI
    n = 128
    while n < ctl.max_images:
        est = _image_tail_estimate(dE, alpha, h, c_min, c_max, sw, wd, n)
        if est <= target:
            break
        n *= 2
    return n


def _image_tail_estimate(dE, alpha, h, c_min, c_max, sum_abs_w, w_dist, n):
    a_hi = (n + 1) * h - c_max
    a_lo = c_min + (n + 1) * h
    return _side_tail(dE, alpha, h, a_hi, sum_abs_w, w_dist, True) + _side_tail(
        dE, alpha, h, a_lo, sum_abs_w, w_dist, True
    )


def _scenario_images(geom, pair, dE, alpha, ctl):
    """Main-text image distances with matrix-element weights folded in.

    Returns (merged [(distance, weight)], truncation estimate on the
    geometric factor).
    """
    if pair is None:
        if isinstance(geom, FreeSpace):
            return _merge([(1.0, 0.0)]), 0.0
        if isinstance(geom, SingleBoundary):
            return _merge([(1.0, 0.0), (-1.0, 2.0 * geom.z0)]), 0.0
        L, z0 = geom.L, geom.z0
        offsets, weights = (0.0, z0), (1.0, -1.0)
        n_im = _cavity_image_count(dE, alpha, L, offsets, weights, ctl)
        images = [(1.0, 0.0)]
        for n in range(1, n_im + 1):
            images.append((2.0, n * L))
        for n in range(-n_im, n_im + 1):
            images.append((-1.0, abs(2.0 * z0 - n * L)))
        est = _image_tail_estimate(dE, alpha, L / 2.0, 0.0, z0, 2.0, z0, n_im)
        return _merge(images), est

    c2, s2, s22 = _pair_weights(pair.theta)
    d = pair.d
    if isinstance(geom, FreeSpace):
        return _merge([(1.0, 0.0), (s22, d)]), 0.0
    if isinstance(geom, SingleBoundary):
        z0 = geom.z0
        return (
            _merge(
                [
                    (1.0, 0.0),
                    (-c2, 2.0 * z0),
                    (-s2, 2.0 * (z0 + d)),
                    (s22, d),
                    (-s22, 2.0 * z0 + d),
                ]
            ),
            0.0,
        )
    L, z0 = geom.L, geom.z0
    offsets = (0.0, z0, z0 + d, d / 2.0, z0 + d / 2.0)
    weights = (1.0, -c2, -s2, s22, -s22)
    n_im = _cavity_image_count(dE, alpha, L, offsets, weights, ctl)
    images = [(1.0, 0.0)]
    for n in range(1, n_im + 1):
        images.append((2.0, n * L))
    for n in range(-n_im, n_im + 1):
        images.append((-c2, abs(2.0 * z0 - n * L)))
        images.append((-s2, abs(2.0 * (z0 + d) - n * L)))
        images.append((s22, abs(d - n * L)))
        images.append((-s22, abs(2.0 * z0 + d - n * L)))
    c_arr = np.asarray(offsets)
    w_arr = np.asarray(weights)
    c_mid = 0.5 * (c_arr.min() + c_arr.max())
    est = _image_tail_estimate(
        dE,
        alpha,
        L / 2.0,
        float(c_arr.min()),
        float(c_arr.max()),
        float(np.abs(w_arr).sum()),
        float(np.sum(np.abs(w_arr) * np.abs(c_arr - c_mid))),
        n_im,
    )
    return _merge(images), est


def _inertial_rate_value(atom, geom, frame, pair, direction, ctl):
    dE = atom.omega0 if direction is Direction.UP else -atom.omega0
    alpha = frame.alpha
    images, image_est = _scenario_images(geom, pair, atom.omega0, alpha, ctl)
    decay = ctl.window_halfwidth if ctl.window_halfwidth else 40.0 / alpha
    tol_img = max(1e-13, 1e-3 * ctl.abs_tol)
    vals, errs = [], []
    for eps in ctl.epsilon_sequence:
        total = 0.0
        err = 0.0
        for dist_main, w in images:
            v, e = _inertial_quad(
                dE, alpha, dist_main / 2.0, eps, decay, tol_img, ctl.max_subdivisions
            )
            total += w * v
            err += abs(w) * e
        vals.append(total)
        errs.append(err)
    occ = 1.0 + planck_occupation(TWO_PI * atom.omega0 / alpha)
    scale = atom.omega0 / TWO_PI * occ
    value, err, order = _extrapolate(ctl.epsilon_sequence, vals, errs, scale)
    lam2 = atom.lam**2
    return OracleResult(lam2 * value, lam2 * (err + image_est * occ), order)


# ---------------------------------------------------------------------------
# thermal (coaccelerated) path
# ---------------------------------------------------------------------------


def _b_and_ratio(alpha, dist):
    """Rindler separation B = (2/a) asinh(a D/2) and the amplitude B/C."""
    if dist == 0.0:
        return 0.0, 1.0
    B = 2.0 / alpha * math.asinh(alpha * dist / 2.0)
    C = dist * math.sqrt(1.0 + 0.25 * alpha * alpha * dist * dist)
    return B, B / C


def _thermal_pairs(tau, B_arr, wbc_arr, beta, S):
    """Smooth s >= 1 part of the thermal kernel, summed over images.

    Direct sum of the s-image pairs up to S plus polygamma tail corrections
    through 1/s^6; vectorized over tau nodes and image chunks.
    """
    tau = np.asarray(tau, dtype=float)
    out = np.zeros_like(tau)
    psi1 = float(polygamma(1, S + 1))
    psi3 = float(polygamma(3, S + 1))
    psi5 = float(polygamma(5, S + 1))
    s = np.arange(1.0, S + 1.0)
    sb2 = (s * beta) ** 2
    t2 = tau * tau
    for i0 in range(0, len(B_arr), 64):
        B2 = B_arr[i0 : i0 + 64] ** 2
        w = wbc_arr[i0 : i0 + 64]
        Q = sb2[:, None, None] + B2[None, :, None] - t2[None, None, :]
        pairs = np.sum(
            -2.0 * Q / (Q * Q + 4.0 * sb2[:, None, None] * t2[None, None, :]), axis=0
        )
        tails = -2.0 / beta**2 * psi1
        tails = tails + (B2[:, None] + 3.0 * t2[None, :]) * psi3 / (3.0 * beta**4)
        tails = tails - (
            B2[:, None] ** 2 + 10.0 * B2[:, None] * t2[None, :] + 5.0 * t2[None, :] ** 2
        ) * psi5 / (60.0 * beta**6)
        out += w @ (pairs + tails)
    return out


def _thermal_s_residual(W, B_max, beta, S, wbc_total):
    """Bound on what the polygamma-corrected s tail still misses (next
    order is O((B^2 + 4 tau^2)^3 / s^8))."""
    q = B_max * B_max + 4.0 * W * W
    return wbc_total * 8.0 * q**3 / (7.0 * S**7 * beta**8)


def oracle_thermal_rate(
    atom: AtomSpec,
    geom: Geometry,
    T: float,
    alpha: Optional[float] = None,
    pair: PairConfig | None = None,
    direction: Direction = Direction.UP,
    ctl: QuadratureControl | None = None,
) -> OracleResult:
    """Rate seen by the coaccelerated observer in a bath at temperature T,
    from the imaginary-time image sum plus proper-time quadrature.

    ``alpha`` is required for mirror and cavity geometries (the image
    separations live on the accelerated trajectory); free space needs none.
    """
    if not T > 0.0:
        raise InvalidParameterError(f"oracle_thermal_rate requires T > 0, got {T!r}")
    if alpha is None:
        if not isinstance(geom, FreeSpace):
            raise InvalidParameterError(
                "oracle_thermal_rate needs alpha for boundary and cavity geometries"
            )
        alpha = 1.0
    ctl = ctl or DEFAULT_QUAD_CONTROL
    dE = atom.omega0 if direction is Direction.UP else -atom.omega0
    beta = 1.0 / T

    images, image_est = _scenario_images(geom, pair, atom.omega0, alpha, ctl)
    B_list, wbc_list = [], []
    for dist_main, w in images:
        B, bc = _b_and_ratio(alpha, dist_main)
        B_list.append(B)
        wbc_list.append(w * bc)
    B_arr = np.asarray(B_list)
    wbc_arr = np.asarray(wbc_list)
    B_max = float(B_arr.max())

    decay = ctl.window_halfwidth if ctl.window_halfwidth else 40.0 * beta / TWO_PI
    W = B_max + decay
    S = ctl.thermal_sum_terms or max(192, int(math.ceil(24.0 * W / beta)))

    def f_smooth(t):
        return np.cos(dE * t) * _thermal_pairs(t, B_arr, wbc_arr, beta, S)

    smooth_edges = ladder_edges(0.0, W, [], n_base=32)
    smooth_v, smooth_e, _ = adaptive_gauss_kronrod(
        f_smooth, smooth_edges, ctl.abs_tol, ctl.max_subdivisions
    )

    tol_img = max(1e-13, 1e-3 * ctl.abs_tol)

    def one_eps(eps):
        total = 0.0
        err = 0.0
        for B, wbc in zip(B_arr, wbc_arr):
            def f0(t, B=B):
                return (np.exp(-1j * dE * t) / ((t - 1j * eps) ** 2 - B * B)).real

            edges = ladder_edges(0.0, W, [B], w_min=eps / 8.0, n_base=8)
            v, e, _ = adaptive_gauss_kronrod(f0, edges, tol_img, ctl.max_subdivisions)
            total += wbc * 2.0 * v
            err += abs(wbc) * 2.0 * e
        return total, err

    vals, errs = [], []
    for eps in ctl.epsilon_sequence:
        v, e = one_eps(eps)
        vals.append(v)
        errs.append(e)

    occ_up = planck_occupation(atom.omega0 / T)
    occ = occ_up if direction is Direction.UP else 1.0 + occ_up
    scale = atom.omega0 / TWO_PI * occ * 4.0 * math.pi**2
    sing_v, sing_err, order = _extrapolate(ctl.epsilon_sequence, vals, errs, scale)

    pref = -1.0 / (4.0 * math.pi**2)
    value = pref * (sing_v + 2.0 * smooth_v)
    s_res = _thermal_s_residual(W, B_max, beta, S, float(np.abs(wbc_arr).sum()))
    err = abs(pref) * (sing_err + 2.0 * smooth_e + 2.0 * W * s_res) + image_est * occ
    lam2 = atom.lam**2
    return OracleResult(lam2 * value, lam2 * err, order)


# ---------------------------------------------------------------------------
# dispatch and the validation grid
# ---------------------------------------------------------------------------


def oracle_rate(
    atom: AtomSpec,
    geom: Geometry,
    frame: FrameSpec,
    pair: PairConfig | None = None,
    direction: Direction = Direction.UP,
    ctl: QuadratureControl | None = None,
) -> OracleResult:
    """Quadrature-oracle value of the same rate :mod:`fdu.rates` computes."""
    ctl = ctl or DEFAULT_QUAD_CONTROL
    if isinstance(frame, Inertial):
        return _inertial_rate_value(atom, geom, frame, pair, direction, ctl)
    return oracle_thermal_rate(
        atom, geom, frame.T, alpha=frame.alpha, pair=pair, direction=direction, ctl=ctl
    )


@dataclass(frozen=True)
class GridConfig:
    name: str
    atom: AtomSpec
    geom: Geometry
    frame: FrameSpec
    pair: Optional[PairConfig]
    direction: Direction


def default_grid() -> tuple:
    """The fixed 20-configuration validation grid spanning all scenarios."""
    a = AtomSpec(omega0=1.0, lam=1.0)
    up, down = Direction.UP, Direction.DOWN
    pi = math.pi
    unruh4 = 4.0 / TWO_PI
    return (
        GridConfig("single/inertial/free/up", a, FreeSpace(), Inertial(4.0), None, up),
        GridConfig("single/inertial/free/down", a, FreeSpace(), Inertial(2.0), None, down),
        GridConfig("single/inertial/boundary/up", a, SingleBoundary(0.4), Inertial(4.0), None, up),
        GridConfig("single/inertial/boundary/down", a, SingleBoundary(1.0), Inertial(2.0), None, down),
        GridConfig("single/inertial/cavity/up", a, Cavity(1.2, 0.2), Inertial(4.0), None, up),
        GridConfig("single/inertial/cavity/down", a, Cavity(3.0, 0.6), Inertial(2.0), None, down),
        GridConfig("pair/inertial/free/up", a, FreeSpace(), Inertial(4.0), PairConfig(pi / 3, 0.5), up),
        GridConfig("pair/inertial/free/down", a, FreeSpace(), Inertial(2.0), PairConfig(3 * pi / 4, 0.3), down),
        GridConfig("pair/inertial/boundary/up", a, SingleBoundary(0.4), Inertial(4.0), PairConfig(1.0, 0.3), up),
        GridConfig("pair/inertial/boundary/down", a, SingleBoundary(0.7), Inertial(3.0), PairConfig(0.5, 0.4), down),
        GridConfig("pair/inertial/cavity/up", a, Cavity(1.2, 0.2), Inertial(4.0), PairConfig(pi / 3, 0.5), up),
        GridConfig("pair/inertial/cavity/down", a, Cavity(1.5, 0.3), Inertial(4.0), PairConfig(2.0, 0.4), down),
        GridConfig("single/coaccel/free/unruh-up", a, FreeSpace(), Coaccelerated(4.0, unruh4), None, up),
        GridConfig("single/coaccel/free/down", a, FreeSpace(), Coaccelerated(4.0, 0.5), None, down),
        GridConfig("single/coaccel/boundary/up", a, SingleBoundary(0.5), Coaccelerated(4.0, 0.7), None, up),
        GridConfig("single/coaccel/cavity/unruh-up", a, Cavity(1.2, 0.2), Coaccelerated(4.0, unruh4), None, up),
        GridConfig("single/coaccel/cavity/down", a, Cavity(3.0, 0.9), Coaccelerated(2.0, 0.4), None, down),
        GridConfig("pair/coaccel/free/up", a, FreeSpace(), Coaccelerated(4.0, 0.6), PairConfig(pi / 4, 0.5), up),
        GridConfig("pair/coaccel/boundary/down", a, SingleBoundary(0.4), Coaccelerated(4.0, 0.5), PairConfig(2.5, 0.3), down),
        GridConfig("pair/coaccel/cavity/up", a, Cavity(1.2, 0.2), Coaccelerated(4.0, unruh4), PairConfig(pi / 3, 0.5), up),
    )


def smoke_grid() -> tuple:
    """Three light configurations for fast wiring checks."""
    g = default_grid()
    return (g[0], g[2], g[13])


@dataclass(frozen=True)
class ValidationRow:
    name: str
    closed_rate: float
    oracle_value: float
    error_estimate: float
    rel_deviation: float
    passed: bool


def run_validation(configs=None, ctl: QuadratureControl | None = None, tol: float = 1e-5):
    """Closed forms vs oracle on the grid; a row passes when the relative
    deviation is within max(tol, its reported error estimate)."""
    ctl = ctl or DEFAULT_QUAD_CONTROL
    rows = []
    for cfg in configs if configs is not None else default_grid():
        if cfg.pair is None:
            closed = single_rate(cfg.atom, cfg.geom, cfg.frame, cfg.direction)
        else:
            closed = pair_rate(cfg.atom, cfg.geom, cfg.frame, cfg.pair, cfg.direction)
        got = oracle_rate(cfg.atom, cfg.geom, cfg.frame, cfg.pair, cfg.direction, ctl)
        denom = max(abs(closed.rate), 1e-300)
        rel = abs(closed.rate - got.value) / denom
        allowed = max(tol, got.error_estimate / denom)
        rows.append(
            ValidationRow(
                name=cfg.name,
                closed_rate=closed.rate,
                oracle_value=got.value,
                error_estimate=got.error_estimate,
                rel_deviation=rel,
                passed=rel <= allowed,
            )
        )
    return rows


def max_deviation(rows) -> float:
    return max(r.rel_deviation for r in rows)
