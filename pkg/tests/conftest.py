"""Shared helpers for the test suite.

The helpers here are intentionally naive (index loops, explicit sums over
basis states) so they stay independent of the library's vectorized code
paths and can serve as oracles for them.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def kron_loops(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product written as four explicit index loops."""
    p, q = a.shape
    r, s = b.shape
    out = np.zeros((p * r, q * s), dtype=complex)
    for i in range(p):
        for j in range(q):
            for k in range(r):
                for m in range(s):
                    out[i * r + k, j * s + m] = a[i, j] * b[k, m]
    return out


def embed_single_loops(op: np.ndarray, site: int, dims: tuple[int, ...]) -> np.ndarray:
    """I x ... x op x ... x I built by repeated loop-based kron (site 0-based)."""
    out = np.eye(1, dtype=complex)
    for k, d in enumerate(dims):
        factor = op if k == site else np.eye(d, dtype=complex)
        out = kron_loops(out, factor)
    return out


def partial_trace_loops(matrix: np.ndarray, dims: tuple[int, ...], keep0: tuple[int, ...]) -> np.ndarray:
    """Partial trace by summing matrix elements over explicit basis tuples."""
    n = len(dims)
    rest = [k for k in range(n) if k not in keep0]
    d_keep = math.prod(dims[k] for k in keep0)
    out = np.zeros((d_keep, d_keep), dtype=complex)

    def flat(idx):
        pos = 0
        for k in range(n):
            pos = pos * dims[k] + idx[k]
        return pos

    def keep_flat(idx):
        pos = 0
        for k in keep0:
            pos = pos * dims[k] + idx[k]
        return pos

    for row in np.ndindex(*dims):
        for col in np.ndindex(*dims):
            if any(row[k] != col[k] for k in rest):
                continue
            out[keep_flat(row), keep_flat(col)] += matrix[flat(row), flat(col)]
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
