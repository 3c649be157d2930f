"""Small-N complex matrix algebra: adjoints, Hermitian exponentials, su(N) bases.

All routines are batched over arbitrary leading axes; the matrix lives on
the last two axes. Orders N <= 4 are the design target, so exact
eigendecomposition is preferred over Pade-style approximations.
"""
from __future__ import annotations

import numpy as np


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose on the last two axes."""
    return np.conj(np.swapaxes(m, -1, -2))


def herm_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + dagger(m))


def antiherm_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m - dagger(m))


def _scale(m: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(m))) if m.size else 0.0)


def is_hermitian(m: np.ndarray, tol: float = 1e-12) -> bool:
    return float(np.max(np.abs(m - dagger(m)))) <= tol * _scale(m)


def is_unitary(m: np.ndarray, tol: float = 1e-10) -> bool:
    eye = np.eye(m.shape[-1])
    return float(np.max(np.abs(dagger(m) @ m - eye))) <= tol


def is_traceless(m: np.ndarray, tol: float = 1e-12) -> bool:
    return float(np.max(np.abs(np.trace(m, axis1=-2, axis2=-1)))) <= tol * _scale(m)


def mat_exp_i(h: np.ndarray, s: float = 1.0) -> np.ndarray:
    """exp(i*s*h) for Hermitian h, via eigendecomposition.

    The result is unitary up to rounding. Raises ValueError if h is not
    Hermitian within 1e-12 (relative to its magnitude).
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h):
        raise ValueError("mat_exp_i requires a Hermitian generator")
    w, v = np.linalg.eigh(h)
    phases = np.exp(1j * s * w)
    return np.einsum("...ij,...j,...kj->...ik", v, phases, np.conj(v))


def mat_exp_i_dexp(h: np.ndarray, dh: np.ndarray, s: float = 1.0) -> np.ndarray:
    """Directional derivative of h -> exp(i*s*h) at h, in direction dh.

    Uses the divided-difference (Daleckii-Krein) formula in the eigenbasis
    of h: exact for Hermitian h, stable for near-degenerate eigenvalues.
    """
    h = np.asarray(h, dtype=complex)
    dh = np.asarray(dh, dtype=complex)
    w, v = np.linalg.eigh(h)
    # divided differences of f(x) = exp(i s x):
    # (f(x)-f(y))/(x-y) = i s exp(i s (x+y)/2) sinc(s (x-y)/2)
    x = w[..., :, None]
    y = w[..., None, :]
    mean = 0.5 * (x + y)
    half = 0.5 * (x - y)
    dd = 1j * s * np.exp(1j * s * mean) * np.sinc(s * half / np.pi)
    e = np.einsum("...ji,...jk,...kl->...il", np.conj(v), dh, v)
    return np.einsum("...ij,...jk,...lk->...il", v, dd * e, np.conj(v))


def sun_basis(n: int, include_identity: bool = False) -> np.ndarray:
    """Hermitian generator basis for su(n) (generalized Gell-Mann matrices).

    Returns an array of shape (G, n, n) with tr(Ta Tb) = 2 delta_ab.
    With include_identity=True a scaled identity is appended, extending the
    basis to u(n).
    """
    if not 1 <= n <= 4:
        raise ValueError(f"generator basis supported for 1 <= n <= 4, got {n}")
    gens = []
    for j in range(n):
        for k in range(j + 1, n):
            sym = np.zeros((n, n), dtype=complex)
            sym[j, k] = sym[k, j] = 1.0
            gens.append(sym)
            asym = np.zeros((n, n), dtype=complex)
            asym[j, k] = -1j
            asym[k, j] = 1j
            gens.append(asym)
    for l in range(1, n):
        d = np.zeros((n, n), dtype=complex)
        d[:l, :l] = np.eye(l)
        d[l, l] = -l
        gens.append(d * np.sqrt(2.0 / (l * (l + 1))))
    if include_identity:
        gens.append(np.sqrt(2.0 / n) * np.eye(n, dtype=complex))
    if not gens:
        return np.zeros((0, n, n), dtype=complex)
    return np.stack(gens)


def random_hermitian(rng: np.random.Generator, shape: tuple, n: int,
                     scale: float = 1.0) -> np.ndarray:
    """iid random Hermitian matrices of order n over leading `shape`."""
    m = rng.normal(size=(*shape, n, n)) + 1j * rng.normal(size=(*shape, n, n))
    return herm_part(scale * m)
