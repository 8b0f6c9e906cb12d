"""NumPy engine for the image-series kernels.

This is the pure-Python fallback for the compiled extension ``_series_cy``.
Both engines implement the same contract and the same algorithm:

* ``kernel(dE, alpha, z)`` evaluates the reflection-image kernel

      sin((2 dE / alpha) * asinh(alpha z)) / (4 pi z sqrt(1 + alpha^2 z^2))

  even in ``z``, with the removable singularity at ``z = 0`` filled by a
  Taylor branch (value ``dE / 2 pi``).

* ``image_sum`` accumulates ``sum_n sum_j w_j * kernel(c_j - n h)`` over the
  image index ``n``, outward from the index nearest the kernel peak, in
  fixed-size blocks of rings.  Two stopping modes:

  - term mode (``tail_stop=False``): stop once the envelope of the latest
    ring falls below ``max(abs_tol, rel_tol * |partial|)``.  Used by the
    public one-offset sums, whose envelope tails decay only like 1/N.
  - tail mode (``tail_stop=True``): stop once a rigorous bound on the
    discarded two-sided tail falls below ``max(abs_tol, rel_tol * rel_scale)``.
    Only attainable for weight sets summing to zero, where the images pair
    up and the tail bound gains an extra power of 1/N; this is the mode the
    rate assembly uses.

  The reported ``tail_bound`` is always rigorous: the plain bound comes from
  the envelope ``|kernel| <= 1/(4 pi alpha z^2)``, the paired bound from the
  derivative envelope ``|kernel'(z)| <= (dE/alpha + 1)/(2 pi alpha z^3)``,
  each extended over the tail by integral comparison.
"""
from __future__ import annotations

import math

import numpy as np

BLOCK_RINGS = 512
SMALL_ARG = 1e-6

_FOUR_PI = 4.0 * math.pi
_TWO_PI = 2.0 * math.pi


def kernel(dE: float, alpha: float, z: float) -> float:
    """Scalar image kernel, even in z, with the z -> 0 limit dE / 2 pi."""
    z = abs(z)
    if z * max(alpha, 2.0 * dE) < SMALL_ARG:
        return dE / _TWO_PI * (1.0 - (2.0 / 3.0) * (alpha * alpha + dE * dE) * z * z)
    return math.sin(2.0 * dE / alpha * math.asinh(alpha * z)) / (
        _FOUR_PI * z * math.sqrt(1.0 + alpha * alpha * z * z)
    )


def kernel_array(dE: float, alpha: float, z: np.ndarray) -> np.ndarray:
    """Vectorized ``kernel``."""
    z = np.abs(np.asarray(z, dtype=float))
    out = np.empty_like(z)
    small = z * max(alpha, 2.0 * dE) < SMALL_ARG
    zb = z[~small]
    out[~small] = np.sin(2.0 * dE / alpha * np.arcsinh(alpha * zb)) / (
        _FOUR_PI * zb * np.sqrt(1.0 + alpha * alpha * zb * zb)
    )
    zs = z[small]
    out[small] = dE / _TWO_PI * (1.0 - (2.0 / 3.0) * (alpha * alpha + dE * dE) * zs * zs)
    return out


def _envelope(dE: float, alpha: float, z: np.ndarray) -> np.ndarray:
    """Pointwise bound min(dE/2pi, 1/(4 pi z sqrt(1 + a^2 z^2)))."""
    z = np.abs(np.asarray(z, dtype=float))
    cap = dE / _TWO_PI
    with np.errstate(divide="ignore"):
        env = 1.0 / (_FOUR_PI * z * np.sqrt(1.0 + alpha * alpha * z * z))
    return np.minimum(cap, env)


def _side_tail(dE, alpha, h, a, sum_abs_w, w_dist, paired_ok):
    """Rigorous bound on one side's discarded tail, nearest |argument| a."""
    if a <= 0.0:
        return math.inf
    plain = sum_abs_w / (_FOUR_PI * alpha) * (1.0 / (a * a) + 1.0 / (h * a))
    if not paired_ok:
        return plain
    coef = (dE / alpha + 1.0) / (_TWO_PI * alpha)
    paired = w_dist * coef * (1.0 / (a * a * a) + 1.0 / (2.0 * h * a * a))
    return min(plain, paired)


def image_sum(
    dE: float,
    alpha: float,
    h: float,
    offsets,
    weights,
    skip_zero_index: bool,
    rel_tol: float,
    abs_tol: float,
    max_terms: int,
    tail_stop: bool,
    rel_scale: float,
):
    """Adaptive two-sided image sum.

    Returns ``(value, tail_bound, terms_used, hit_max)`` where ``terms_used``
    counts the image indices n visited and ``hit_max`` flags that the term
    budget ran out before the stopping criterion was met.
    """
    c = np.asarray(offsets, dtype=float)
    w = np.asarray(weights, dtype=float)
    c_min = float(c.min())
    c_max = float(c.max())
    c_mid = 0.5 * (c_min + c_max)
    sum_abs_w = float(np.abs(w).sum())
    w_dist = float(np.sum(np.abs(w) * np.abs(c - c_mid)))
    paired_ok = len(c) > 1 and abs(float(w.sum())) <= 1e-12 * sum_abs_w

    n_center = int(round(c_mid / h))

    def ring_terms(ns: np.ndarray) -> float:
        args = c[:, None] - ns[None, :] * h
        g = kernel_array(dE, alpha, args.ravel()).reshape(args.shape)
        if skip_zero_index:
            g[:, ns == 0] = 0.0
        return float(np.dot(w, g).sum())

    def tail_at(K: int) -> float:
        a_hi = (n_center + K + 1) * h - c_max
        a_lo = c_min - (n_center - K - 1) * h
        return _side_tail(dE, alpha, h, a_hi, sum_abs_w, w_dist, paired_ok) + _side_tail(
            dE, alpha, h, a_lo, sum_abs_w, w_dist, paired_ok
        )

    value = ring_terms(np.array([n_center]))
    terms_used = 1
    K = 0
    hit_max = False

    while True:
        budget = (max_terms - terms_used) // 2
        if budget < 1:
            hit_max = True
            break
        rings = min(BLOCK_RINGS, budget)
        ks = np.arange(K + 1, K + rings + 1)
        ns = np.concatenate([n_center - ks, n_center + ks])
        value += ring_terms(ns)
        terms_used += 2 * rings
        K += rings

        a_hi = (n_center + K + 1) * h - c_max
        a_lo = c_min - (n_center - K - 1) * h
        if a_hi <= 0.0 or a_lo <= 0.0 or K < 2:
            continue
        if tail_stop:
            if tail_at(K) <= max(abs_tol, rel_tol * rel_scale):
                break
        else:
            edge_args = np.concatenate(
                [c - (n_center - K) * h, c - (n_center + K) * h]
            )
            env = float(
                np.dot(
                    np.concatenate([np.abs(w), np.abs(w)]),
                    _envelope(dE, alpha, edge_args),
                )
            )
            if env <= max(abs_tol, rel_tol * abs(value)):
                break

    return value, tail_at(K), terms_used, hit_max
