import math

import mpmath
import numpy as np
import pytest

from fluorospec import _kernel_py, kernel
from fluorospec.numerics import bessel_table

BACKENDS = kernel.available_backends()


def literal_f(a, b, t):
    with mpmath.workdps(60):
        a, b, t = mpmath.mpc(a), mpmath.mpc(b), mpmath.mpf(t)
        c = b - a
        if a == 0:
            return complex(mpmath.quad(lambda s: s * mpmath.exp(-b * s), [0, t]))
        return complex(((1 - mpmath.exp(-c * t)) / c - (1 - mpmath.exp(-b * t)) / b) / a)


def test_compiled_backend_built():
    # the package ships the compiled kernel; a silent fallback would hide a build failure
    assert "cython" in BACKENDS


@pytest.mark.parametrize("seed", range(4))
def test_bracket_against_high_precision(seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(300):
        t = 10 ** rng.uniform(-3, 3)
        gs, g = 10 ** rng.uniform(-1, 1), 10 ** rng.uniform(-4, 1)
        x = rng.uniform(-60, 60) if rng.random() < 0.5 else rng.choice([-1, 1]) * 10 ** rng.uniform(-9, 0)
        shift = rng.integers(-6, 7) * 10 ** rng.uniform(-2, 1.5)
        a = complex(g / 2 - gs, x)
        b = a + complex(g / 2 + gs, shift - x)
        ref = literal_f(a, b, t)
        got = _kernel_py.bracket_f(a, b, b - a, t)
        # floor: cancellation at the series switch-over is about eps / SING_THRESHOLD;
        # large B t adds an unavoidable phase rounding of |B t| ulp
        tol = 5e-13 * max(1.0, abs(b) * t / 10)
        worst = max(worst, abs(got - ref) / abs(ref) / tol)
    assert worst <= 1.0


@pytest.mark.parametrize("m, w, g, phi", [(1.0, 10.0, 1.0, 0.3), (10.0, 1.0, 0.1, 0.0),
                                          (3.0, 2.0, 2.0, 1.0), (0.0, 5.0, 0.5, 0.0)])
def test_backends_agree(m, w, g, phi):
    jk = bessel_table(m, 1e-20).symmetric()
    tg = np.array([0.0, 0.013, 0.7, 3.0, 25.0, 400.0])
    # includes detunings at k * w where A vanishes for g = 2 gamma_s
    dg = np.concatenate([np.linspace(-3 * m * w - 5, 3 * m * w + 5, 37), [0.0, w, -2 * w]])
    results = {name: fn(tg, dg, jk, 1.0, g, w, phi) for name, fn in BACKENDS.items()}
    ref_diag, ref_nd = results["python"]
    scale = np.abs(ref_diag) + np.abs(ref_nd) + 1e-300
    for name, (diag, nondiag) in results.items():
        assert np.all(np.abs(diag - ref_diag) <= 1e-12 * scale), name
        assert np.all(np.abs(nondiag - ref_nd) <= 1e-12 * scale), name
    assert np.all(ref_diag[0] == 0) and np.all(ref_nd[0] == 0)


def test_active_backend_is_listed():
    assert kernel.BACKEND in BACKENDS
    assert kernel.spectrum_grid is BACKENDS[kernel.BACKEND]


def test_huge_time_stays_finite():
    jk = bessel_table(2.0, 1e-20).symmetric()
    for fn in BACKENDS.values():
        diag, nondiag = fn(np.array([1e5]), np.linspace(-10, 10, 9), jk, 1.0, 0.01, 3.0, 0.0)
        assert np.all(np.isfinite(diag)) and np.all(np.isfinite(nondiag))
