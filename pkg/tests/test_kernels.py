import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from taft_depth import kernels
from taft_depth.qarith import CycloMatrix, field
from taft_depth.ranks import certified_chain_ranks, chain_ranks, exact_chain_ranks

P = 67108859
SMALL_P = 101


def sympy_rank_mod(mat, p):
    rows = [[int(x) for x in row] for row in np.asarray(mat)]
    if not rows or not rows[0]:
        return 0
    return DomainMatrix(rows, (len(rows), len(rows[0])), GF(p)).convert_to(GF(p)).rank()


def sympy_matmul_mod(a, b, p):
    return (np.asarray(a, dtype=object) @ np.asarray(b, dtype=object)) % p


int_mats = st.tuples(st.integers(1, 9), st.integers(1, 9), st.integers(0, 2**31)).map(
    lambda t: np.random.default_rng(t[2]).integers(0, 5, size=(t[0], t[1])).astype(np.int64)
)


@given(int_mats)
def test_rank_mod_matches_sympy(backend, mat):
    assert kernels.rank_mod(mat, SMALL_P) == sympy_rank_mod(mat, SMALL_P)


def test_rank_mod_large_prime(backend):
    rng = np.random.default_rng(1)
    a = rng.integers(0, P, size=(30, 20), dtype=np.int64)
    a[20:] = (a[:10] * 7 + a[10:20] * 3) % P
    assert kernels.rank_mod(a, P) == sympy_rank_mod(a, P) == 20
    assert kernels.rank_mod(np.zeros((0, 4), dtype=np.int64), P) == 0


def test_matmul_mod_matches_object_arithmetic(backend):
    rng = np.random.default_rng(2)
    for shape in [(3, 4, 5), (17, 1100, 9), (1, 1, 1)]:
        a = rng.integers(0, P, size=shape[:2], dtype=np.int64)
        b = rng.integers(0, P, size=shape[1:], dtype=np.int64)
        got = kernels.matmul_mod(a, b, P)
        assert np.array_equal(got.astype(object), sympy_matmul_mod(a, b, P))


def test_backends_agree():
    rng = np.random.default_rng(3)
    a = rng.integers(0, P, size=(40, 40), dtype=np.int64)
    a[30:] = a[:10]
    before = kernels.get_backend()
    try:
        out = set()
        for name in kernels.available_backends():
            kernels.set_backend(name)
            out.add((kernels.rank_mod(a, P), kernels.matmul_mod(a, a, P).tobytes()))
        assert len(out) == 1
    finally:
        kernels.set_backend(before)


def test_kernel_argument_errors():
    with pytest.raises(ValueError):
        kernels.rank_mod(np.eye(2, dtype=np.int64), 1 << 27)
    with pytest.raises(ValueError):
        kernels.matmul_mod(np.eye(2, dtype=np.int64), np.eye(3, dtype=np.int64), P)
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")


def _backend_from_env(value):
    env = dict(os.environ, TAFT_DEPTH_BACKEND=value)
    return subprocess.run(
        [sys.executable, "-c", "from taft_depth import kernels; print(kernels.get_backend())"],
        env=env,
        capture_output=True,
        text=True,
    )


def test_env_flag_selects_backend():
    res = _backend_from_env("numpy")
    assert res.returncode == 0 and res.stdout.strip() == "numpy"
    if kernels.HAVE_NUMBA:
        res = _backend_from_env("numba")
        assert res.returncode == 0 and res.stdout.strip() == "numba"
    res = _backend_from_env("cuda")
    assert res.returncode != 0 and "TAFT_DEPTH_BACKEND" in res.stderr


# -- chain ranks ----------------------------------------------------------------------


@st.composite
def chains(draw):
    n = draw(st.sampled_from([2, 3, 4, 5, 6]))
    f = field(n)
    dims = draw(st.lists(st.integers(1, 6), min_size=2, max_size=5))
    coef = st.integers(-3, 3)
    blocks = []
    for r, c in zip(dims, dims[1:]):
        rows = []
        for _ in range(r):
            row = []
            for _ in range(c):
                if draw(st.booleans()):
                    row.append(f.zero)
                else:
                    cs = draw(st.lists(coef, min_size=f.phi, max_size=f.phi))
                    row.append(f.from_coeffs(cs))
            rows.append(row)
        blocks.append(CycloMatrix.from_rows(n, rows, c))
    return blocks


@given(chains())
def test_certified_matches_exact(backend, blocks):
    assert certified_chain_ranks(blocks) == exact_chain_ranks(blocks)


def test_certified_handles_fractions_and_large_coefficients(backend):
    f = field(3)
    big = f.from_coeffs([2**40 + 1, -(2**35)])
    frac = f.from_coeffs([1, 0]) / 7
    M = CycloMatrix.from_rows(3, [[big, frac], [big * frac, frac * frac]])
    N = CycloMatrix.from_rows(3, [[1, f.q], [f.q, f.q**2]])
    assert certified_chain_ranks([M, N]) == exact_chain_ranks([M, N])


def test_chain_ranks_dispatch():
    blk = CycloMatrix.identity(3, 4)
    assert chain_ranks([blk, blk], "exact") == [4, 4]
    assert chain_ranks([blk, blk], "modular") == [4, 4]
    assert chain_ranks([blk, blk]) == [4, 4]
    with pytest.raises(ValueError):
        chain_ranks([blk], "guess")
