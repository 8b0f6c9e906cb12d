# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled engine for the image-series kernels.

Mirrors ``_series_numpy`` block for block (same ring ordering, same stop
checks at the same block boundaries); see that module for the algorithm
documentation.  Kept free of the NumPy C API so it builds with nothing but
a C compiler and libm.
"""

from libc.math cimport asinh, fabs, sin, sqrt, INFINITY

cdef double FOUR_PI = 12.566370614359172
cdef double TWO_PI = 6.283185307179586
cdef double SMALL_ARG = 1e-6
cdef int BLOCK_RINGS = 512
DEF MAX_OFFSETS = 16


cdef inline double _kernel(double dE, double alpha, double z) noexcept nogil:
    cdef double scale = alpha if alpha > 2.0 * dE else 2.0 * dE
    z = fabs(z)
    if z * scale < SMALL_ARG:
        return dE / TWO_PI * (1.0 - (2.0 / 3.0) * (alpha * alpha + dE * dE) * z * z)
    return sin(2.0 * dE / alpha * asinh(alpha * z)) / (
        FOUR_PI * z * sqrt(1.0 + alpha * alpha * z * z)
    )


cdef inline double _envelope(double dE, double alpha, double z) noexcept nogil:
    cdef double cap = dE / TWO_PI
    cdef double env
    z = fabs(z)
    if z == 0.0:
        return cap
    env = 1.0 / (FOUR_PI * z * sqrt(1.0 + alpha * alpha * z * z))
    return cap if cap < env else env


cdef inline double _side_tail(double dE, double alpha, double h, double a,
                              double sum_abs_w, double w_dist,
                              bint paired_ok) noexcept nogil:
    cdef double plain, coef, paired
    if a <= 0.0:
        return INFINITY
    plain = sum_abs_w / (FOUR_PI * alpha) * (1.0 / (a * a) + 1.0 / (h * a))
    if not paired_ok:
        return plain
    coef = (dE / alpha + 1.0) / (TWO_PI * alpha)
    paired = w_dist * coef * (1.0 / (a * a * a) + 1.0 / (2.0 * h * a * a))
    return plain if plain < paired else paired


def kernel(double dE, double alpha, double z):
    """Scalar image kernel, even in z, with the z -> 0 limit dE / 2 pi."""
    return _kernel(dE, alpha, z)


def image_sum(double dE, double alpha, double h, offsets, weights,
              bint skip_zero_index, double rel_tol, double abs_tol,
              long max_terms, bint tail_stop, double rel_scale):
    """Adaptive two-sided image sum; same contract as the NumPy engine."""
    cdef double[MAX_OFFSETS] c
    cdef double[MAX_OFFSETS] w
    cdef int j, nj = len(offsets)
    if nj > MAX_OFFSETS:
        raise ValueError("too many offsets for the compiled engine")
    for j in range(nj):
        c[j] = offsets[j]
        w[j] = weights[j]

    cdef double c_min = c[0], c_max = c[0]
    cdef double sum_w = 0.0, sum_abs_w = 0.0
    for j in range(nj):
        if c[j] < c_min:
            c_min = c[j]
        if c[j] > c_max:
            c_max = c[j]
        sum_w += w[j]
        sum_abs_w += fabs(w[j])
    cdef double c_mid = 0.5 * (c_min + c_max)
    cdef double w_dist = 0.0
    for j in range(nj):
        w_dist += fabs(w[j]) * fabs(c[j] - c_mid)
    cdef bint paired_ok = nj > 1 and fabs(sum_w) <= 1e-12 * sum_abs_w

    cdef long n_center = <long> (c_mid / h + (0.5 if c_mid >= 0 else -0.5))

    cdef double value, term, a_hi, a_lo, tail, env, stop
    cdef long terms_used, K, budget, rings, k, n
    cdef bint hit_max = False

    # center ring
    value = 0.0
    if not (skip_zero_index and n_center == 0):
        for j in range(nj):
            value += w[j] * _kernel(dE, alpha, c[j] - n_center * h)
    terms_used = 1
    K = 0

    while True:
        budget = (max_terms - terms_used) // 2
        if budget < 1:
            hit_max = True
            break
        rings = BLOCK_RINGS if budget > BLOCK_RINGS else budget
        for k in range(K + 1, K + rings + 1):
            n = n_center - k
            if not (skip_zero_index and n == 0):
                term = 0.0
                for j in range(nj):
                    term += w[j] * _kernel(dE, alpha, c[j] - n * h)
                value += term
            n = n_center + k
            if not (skip_zero_index and n == 0):
                term = 0.0
                for j in range(nj):
                    term += w[j] * _kernel(dE, alpha, c[j] - n * h)
                value += term
        terms_used += 2 * rings
        K += rings

        a_hi = (n_center + K + 1) * h - c_max
        a_lo = c_min - (n_center - K - 1) * h
        if a_hi <= 0.0 or a_lo <= 0.0 or K < 2:
            continue
        if tail_stop:
            tail = _side_tail(dE, alpha, h, a_hi, sum_abs_w, w_dist, paired_ok) + \
                _side_tail(dE, alpha, h, a_lo, sum_abs_w, w_dist, paired_ok)
            stop = abs_tol if abs_tol > rel_tol * rel_scale else rel_tol * rel_scale
            if tail <= stop:
                break
        else:
            env = 0.0
            for j in range(nj):
                env += fabs(w[j]) * _envelope(dE, alpha, c[j] - (n_center - K) * h)
                env += fabs(w[j]) * _envelope(dE, alpha, c[j] - (n_center + K) * h)
            stop = abs_tol if abs_tol > rel_tol * fabs(value) else rel_tol * fabs(value)
            if env <= stop:
                break

    a_hi = (n_center + K + 1) * h - c_max
    a_lo = c_min - (n_center - K - 1) * h
    tail = _side_tail(dE, alpha, h, a_hi, sum_abs_w, w_dist, paired_ok) + \
        _side_tail(dE, alpha, h, a_lo, sum_abs_w, w_dist, paired_ok)
    return value, tail, terms_used, hit_max
