"""Modular linear-algebra kernels: numba JIT with a pure-numpy fallback.

The backend is picked once at import from ``TAFT_DEPTH_BACKEND``
(``numba`` or ``numpy``); ``numba`` is the default when it imports.
:func:`set_backend` switches at runtime (tests and the benchmark use it).

All kernels take int64 arrays whose entries are already reduced into
``[0, p)`` and a prime ``p < 2**26``; that bound keeps every intermediate
product, and numpy's blocked dot products, inside int64.
"""

from __future__ import annotations

import importlib.util
import os

import numpy as np

__all__ = [
    "MAX_PRIME",
    "available_backends",
    "get_backend",
    "matmul_mod",
    "rank_mod",
    "set_backend",
]

MAX_PRIME = 1 << 26
_DOT_CHUNK = 1024  # 2**52 * 1024 < 2**63

# numba is imported on first use: importing it costs more than small runs take
HAVE_NUMBA = importlib.util.find_spec("numba") is not None


# -- numpy fallback -----------------------------------------------------------------


def _rank_mod_numpy(mat: np.ndarray, p: int) -> int:
    p = int(p)
    a = np.array(mat, dtype=np.int64, copy=True)
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = (a[r, c:] * inv) % p
        below = np.flatnonzero(a[r + 1 :, c]) + r + 1
        if below.size:
            fac = a[below, c][:, None]
            a[below, c:] = (a[below, c:] - (fac * a[r, c:][None, :]) % p) % p
        r += 1
    return r


def _matmul_mod_numpy(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, a.shape[1], _DOT_CHUNK):
        out = (out + (a[:, s : s + _DOT_CHUNK] @ b[s : s + _DOT_CHUNK]) % p) % p
    return out


# -- numba -------------------------------------------------------------------------


def _build_numba():
    import numba

    @numba.njit(cache=True)
    def _powmod(base, exp, p):
        result = 1
        base = base % p
        while exp > 0:
            if exp & 1:
                result = (result * base) % p
            base = (base * base) % p
            exp >>= 1
        return result

    @numba.njit(cache=True)
    def rank_mod_numba(mat, p):
        a = mat.copy()
        rows, cols = a.shape
        r = 0
        for c in range(cols):
            if r == rows:
                break
            piv = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(c, cols):
                    t = a[r, j]
                    a[r, j] = a[piv, j]
                    a[piv, j] = t
            inv = _powmod(a[r, c], p - 2, p)
            for j in range(c, cols):
                a[r, j] = (a[r, j] * inv) % p
            for i in range(r + 1, rows):
                f = a[i, c]
                if f != 0:
                    for j in range(c, cols):
                        v = a[i, j] - (f * a[r, j]) % p
                        if v < 0:
                            v += p
                        a[i, j] = v
            r += 1
        return r

    @numba.njit(cache=True)
    def matmul_mod_numba(a, b, p):
        n, m = a.shape
        k = b.shape[1]
        out = np.zeros((n, k), dtype=np.int64)
        # products stay below 2**52, so up to 1024 of them fit before reducing
        for s in range(0, m, 1024):
            e = min(m, s + 1024)
            for i in range(n):
                for t in range(s, e):
                    x = a[i, t]
                    if x != 0:
                        for j in range(k):
                            out[i, j] += x * b[t, j]
                for j in range(k):
                    out[i, j] %= p
        return out

    return rank_mod_numba, matmul_mod_numba


_IMPLS = {"numpy": (_rank_mod_numpy, _matmul_mod_numpy)}


def _impl(name):
    if name not in _IMPLS:
        _IMPLS[name] = _build_numba()
    return _IMPLS[name]


def available_backends() -> list[str]:
    return ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]


def _initial_backend() -> str:
    requested = os.environ.get("TAFT_DEPTH_BACKEND", "").strip().lower()
    if requested:
        if requested not in ("numba", "numpy"):
            raise ValueError(f"TAFT_DEPTH_BACKEND must be 'numba' or 'numpy', got {requested!r}")
        if requested == "numba" and not HAVE_NUMBA:
            raise ValueError("TAFT_DEPTH_BACKEND=numba but numba is not importable")
        return requested
    return "numba" if HAVE_NUMBA else "numpy"


_backend = _initial_backend()


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in available_backends():
        raise ValueError(f"unknown or unavailable backend {name!r}; have {available_backends()}")
    _backend = name


def _check(p):
    if not (2 < p < MAX_PRIME):
        raise ValueError(f"prime modulus must lie in (2, 2**26), got {p}")


def rank_mod(mat: np.ndarray, p: int) -> int:
    """Rank of an int64 matrix over GF(p)."""
    _check(p)
    mat = np.ascontiguousarray(mat, dtype=np.int64)
    if mat.size == 0:
        return 0
    return int(_impl(_backend)[0](mat, np.int64(p)))


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Matrix product over GF(p)."""
    _check(p)
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    return _impl(_backend)[1](a, b, np.int64(p))
