"""Special functions and fixed-step numerical kernels.

Integer-order Bessel functions of the first kind are evaluated with Miller's
downward recurrence (ascending series for small arguments), so the package has
no special-function dependency. Complex scalars are plain Python ``complex``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "BesselTable",
    "DEFAULT_EPS_TRUNC",
    "bessel_j",
    "bessel_j_sequence",
    "bessel_table",
    "integrate_1d",
    "simpson_weights",
    "rk4_solve",
    "rk4_trajectory",
]

# Omitted Bessel mass 2*sum_{|k|>K} J_k^2. Cross terms in the double series are
# linear in the tail amplitudes, so spectra carry an error of order sqrt(eps).
DEFAULT_EPS_TRUNC = 1e-20

_SERIES_MAX_ARG = 1.0
_RESCALE = 1e100


def _check_finite(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"Bessel argument must be finite, got {x!r}")
    return x


def _series(n: int, x: float) -> float:
    # ascending series; terms shrink by at least 4x for |x| <= 1
    half = 0.5 * x
    if half == 0.0:
        return 1.0 if n == 0 else 0.0
    log_lead = n * math.log(abs(half)) - math.lgamma(n + 1)
    if log_lead < -745.0:
        return 0.0
    lead = math.exp(log_lead)
    if half < 0 and n % 2:
        lead = -lead
    q = -half * half
    term, total, j = 1.0, 1.0, 0
    while True:
        j += 1
        term *= q / (j * (j + n))
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return lead * total


def _start_order(x: float, nmax: int) -> int:
    # J_N / J_nmax must be negligible at the starting order
    ax = abs(x)
    n = int(max(nmax, ax) + 12.0 * ax ** (1.0 / 3.0) + 30)
    return n + (n % 2)


def _miller(x: float, nmax: int) -> np.ndarray:
    """J_0(x) .. J_nmax(x) for x > 0 by downward recurrence.

    The unnormalised sequence is scaled with the sum-of-squares identity
    ``J_0^2 + 2 sum J_k^2 = 1`` (no cancellation); the sign comes from the
    even-order identity ``J_0 + 2 sum J_2k = 1``.
    """
    start = _start_order(x, nmax)
    out = np.zeros(nmax + 1)
    j_next, j_cur = 0.0, 1.0
    sq_sum = 0.0
    even_sum = 0.0
    two_over_x = 2.0 / x
    for k in range(start, 0, -1):
        j_prev = k * two_over_x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        order = k - 1
        if order <= nmax:
            out[order] = j_cur
        if order > 0:
            sq_sum += 2.0 * j_cur * j_cur
            if order % 2 == 0:
                even_sum += 2.0 * j_cur
        if abs(j_cur) > _RESCALE:
            s = 1.0 / _RESCALE
            j_cur *= s
            j_next *= s
            out *= s
            sq_sum *= s * s
            even_sum *= s
    sq_sum += j_cur * j_cur
    even_sum += j_cur
    norm = math.sqrt(sq_sum)
    if even_sum < 0:
        norm = -norm
    return out / norm


def bessel_j_sequence(x: float, nmax: int) -> np.ndarray:
    """Return ``[J_0(x), ..., J_nmax(x)]`` for real ``x``."""
    x = _check_finite(x)
    if nmax < 0:
        raise ValueError("nmax must be non-negative")
    ax = abs(x)
    if ax <= _SERIES_MAX_ARG:
        vals = np.array([_series(n, ax) for n in range(nmax + 1)])
    else:
        vals = _miller(ax, nmax)
    if x < 0:
        vals[1::2] *= -1.0
    return vals


def bessel_j(order: int, x: float) -> float:
    """Bessel function of the first kind J_order(x) for integer order."""
    x = _check_finite(x)
    order = int(order)
    n = abs(order)
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    ax = abs(x)
    if ax <= _SERIES_MAX_ARG:
        val = _series(n, ax)
    else:
        val = float(_miller(ax, n)[n])
    # J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x)
    flips = (order < 0) + (x < 0)
    if n % 2 and flips == 1:
        val = -val
    return val


@dataclass(frozen=True)
class BesselTable:
    """J_0(m) .. J_K(m); negative orders come from parity."""

    argument: float
    max_order: int
    values: np.ndarray

    def __getitem__(self, k: int) -> float:
        k = int(k)
        if abs(k) > self.max_order:
            return 0.0
        v = float(self.values[abs(k)])
        return -v if (k < 0 and k % 2) else v

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.max_order, self.max_order + 1)

    def symmetric(self) -> np.ndarray:
        """Values for orders -K..K as one array."""
        k = np.arange(self.max_order, 0, -1)
        neg = np.where(k % 2, -1.0, 1.0) * self.values[k]
        return np.concatenate([neg, self.values])

    def weight(self) -> float:
        """Captured mass J_0^2 + 2 sum_{k=1..K} J_k^2."""
        v = self.values
        return float(v[0] ** 2 + 2.0 * np.sum(v[1:] ** 2))


def bessel_table(m: float, eps_trunc: float = DEFAULT_EPS_TRUNC) -> BesselTable:
    """Smallest table whose captured mass is at least ``1 - eps_trunc``.

    The omitted mass ``2 sum_{k>K} J_k^2`` is accumulated from the top down,
    so ``eps_trunc`` far below machine epsilon is honoured.
    """
    m = _check_finite(m)
    if not 0.0 < eps_trunc < 1.0:
        raise ValueError("eps_trunc must lie in (0, 1)")
    if m == 0.0:
        return BesselTable(0.0, 0, np.array([1.0]))
    nmax = int(abs(m) + 12.0 * abs(m) ** (1.0 / 3.0) + 40)
    vals = bessel_j_sequence(m, nmax)
    # tail[K] = 2 * sum_{k > K} J_k^2
    tail = np.concatenate([np.cumsum(2.0 * vals[:0:-1] ** 2)[::-1], [0.0]])
    k_max = int(np.nonzero(tail <= eps_trunc)[0][0])
    return BesselTable(m, k_max, vals[: k_max + 1].copy())


def simpson_weights(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the composite Simpson rule with ``n`` intervals."""
    x, w = _simpson_pattern(n, a, b)
    return x, w * ((b - a) / (3.0 * n))


def _simpson_pattern(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    # unscaled 1-4-2-...-4-1 weights; sums of these are exact integers
    if n < 2 or n % 2:
        raise ValueError(f"Simpson rule needs an even number of intervals >= 2, got {n}")
    if b < a:
        raise ValueError("integration bounds must satisfy a <= b")
    x = np.linspace(a, b, n + 1)
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return x, w


def integrate_1d(f: Callable, a: float, b: float, n: int) -> complex:
    """Composite Simpson estimate of the integral of ``f`` over ``[a, b]``.

    ``f`` is called once with the array of nodes; scalar-only callables are
    vectorised transparently.
    """
    x, w = _simpson_pattern(n, a, b)
    try:
        y = np.asarray(f(x), dtype=complex)
        if y.shape != x.shape:
            y = np.broadcast_to(y, x.shape)
    except TypeError:
        y = np.array([complex(f(xi)) for xi in x])
    return complex(np.dot(w, y)) * ((b - a) / (3.0 * n))


def rk4_trajectory(
    rhs: Callable[[float, complex], complex],
    y0: complex,
    t0: float,
    t1: float,
    steps: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Classical RK4 with a fixed step; returns the grid and all states."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if t1 < t0:
        raise ValueError("t1 must be >= t0")
    h = (t1 - t0) / steps
    ts = t0 + h * np.arange(steps + 1)
    ys = np.empty(steps + 1, dtype=complex)
    y = complex(y0)
    ys[0] = y
    for i in range(steps):
        t = t0 + i * h
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        ys[i + 1] = y
    return ts, ys


def rk4_solve(
    rhs: Callable[[float, complex], complex],
    y0: complex,
    t0: float,
    t1: float,
    steps: int,
) -> complex:
    """Terminal value of :func:`rk4_trajectory`."""
    return complex(rk4_trajectory(rhs, y0, t0, t1, steps)[1][-1])
