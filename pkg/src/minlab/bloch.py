"""Generalized Gell-Mann bases and Bloch-tensor decompositions.

The correlation tensors stored here are the plain operator moments
t = tr(rho * lambda ... lambda); the dimension-dependent weights that make
the expansion sum back to rho are applied only during reconstruction.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qcore import (
    _LETTERS,
    DensityOperator,
    DimensionProfile,
    embed_operator,
    partial_trace,
)


@dataclass(frozen=True)
class OperatorBasis:
    """The d^2 - 1 Hermitian traceless generators for one local dimension."""

    dim: int
    generators: np.ndarray  # shape (d^2 - 1, d, d)


@functools.lru_cache(maxsize=None)
def _generator_stack(d: int) -> np.ndarray:
    if d < 2:
        raise ValueError(f"local dimension must be >= 2, got {d}")
    mats = []
    for j, k in itertools.combinations(range(d), 2):  # symmetric pairs
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = m[k, j] = 1.0
        mats.append(m)
    for j, k in itertools.combinations(range(d), 2):  # antisymmetric pairs
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = -1.0j
        m[k, j] = 1.0j
        mats.append(m)
    for r in range(1, d):  # diagonal generators
        diag = [1.0] * r + [-float(r)] + [0.0] * (d - r - 1)
        mats.append(math.sqrt(2.0 / (r * (r + 1))) * np.diag(diag).astype(complex))
    stack = np.stack(mats)
    stack.setflags(write=False)
    return stack


def generators(d: int) -> OperatorBasis:
    """Generalized Gell-Mann matrices for local dimension ``d``.

    Ordering is fixed as symmetric off-diagonal pairs, antisymmetric
    off-diagonal pairs, then diagonal generators, so d = 2 yields exactly
    (sigma_x, sigma_y, sigma_z). All satisfy tr(g_a g_b) = 2 delta_ab.
    """
    return OperatorBasis(d, _generator_stack(d))


@dataclass
class BlochData:
    """Coherent vectors and correlation tensors of an n-partite state.

    ``coherent`` maps each subsystem k (1-based) to its vector of
    single-site moments; ``tensors`` maps every subset {k_1 < ... < k_M}
    with M >= 2 to the M-dimensional array of joint moments.
    """

    coherent: dict[int, np.ndarray]
    tensors: dict[tuple[int, ...], np.ndarray]

    def dims(self) -> DimensionProfile:
        """Recover the dimension profile from the stored vector lengths."""
        ds = []
        for k in sorted(self.coherent):
            d = math.isqrt(len(self.coherent[k]) + 1)
            ds.append(d)
        return DimensionProfile(tuple(ds))


def _trace_expr(m: int) -> str:
    ii = _LETTERS[:m]
    jj = _LETTERS[m : 2 * m]
    aa = _LETTERS[2 * m : 3 * m]
    operands = [ii + jj] + [aa[q] + jj[q] + ii[q] for q in range(m)]
    return ",".join(operands) + "->" + aa


def _operator_expr(m: int) -> str:
    ii = _LETTERS[:m]
    jj = _LETTERS[m : 2 * m]
    aa = _LETTERS[2 * m : 3 * m]
    operands = [aa] + [aa[q] + ii[q] + jj[q] for q in range(m)]
    return ",".join(operands) + "->" + ii + jj


def _check_subset(subset: Sequence[int], profile: DimensionProfile) -> tuple[int, ...]:
    subs = tuple(int(k) for k in subset)
    if not subs:
        raise ValueError("subset must be non-empty")
    if any(subs[i] >= subs[i + 1] for i in range(len(subs) - 1)):
        raise ValueError(f"subset must be strictly increasing, got {subs}")
    for k in subs:
        profile.check_subsystem(k)
    return subs


def correlation_tensor(rho: DensityOperator, subset: Sequence[int]) -> np.ndarray:
    """Moments tr(rho * g_{a_1} ... g_{a_M}) for one subsystem subset.

    For a single subsystem this is the coherent vector; for qubits its z
    component is the usual <sigma_z>.
    """
    subs = _check_subset(subset, rho.profile)
    sub_dims = tuple(rho.profile.dims[k - 1] for k in subs)
    reduced = partial_trace(rho, subs).reshape(sub_dims + sub_dims)
    gens = [_generator_stack(d) for d in sub_dims]
    t = np.einsum(_trace_expr(len(subs)), reduced, *gens)
    return np.ascontiguousarray(t.real)


def bloch_decompose(rho: DensityOperator) -> BlochData:
    """All coherent vectors and correlation tensors of a density operator."""
    n = rho.profile.n
    coherent = {k: correlation_tensor(rho, (k,)) for k in range(1, n + 1)}
    tensors = {}
    for m in range(2, n + 1):
        for subs in itertools.combinations(range(1, n + 1), m):
            tensors[subs] = correlation_tensor(rho, subs)
    return BlochData(coherent, tensors)


def bloch_reconstruct(data: BlochData, profile: DimensionProfile) -> DensityOperator:
    """Rebuild the density operator from its Bloch data.

    Each subset contributes with weight prod(d_k / 2) over its members, the
    inverse of the tr(g_a g_b) = 2 delta_ab normalization.
    """
    n = profile.n
    total = profile.total
    expected = set(range(1, n + 1))
    if set(data.coherent) != expected:
        raise ValueError("incomplete Bloch data: missing coherent vectors")
    acc = np.eye(total, dtype=complex)
    for m in range(1, n + 1):
        for subs in itertools.combinations(range(1, n + 1), m):
            if m == 1:
                t = np.asarray(data.coherent[subs[0]], dtype=float)
            else:
                if subs not in data.tensors:
                    raise ValueError(f"incomplete Bloch data: missing tensor for {subs}")
                t = np.asarray(data.tensors[subs], dtype=float)
            sub_dims = tuple(profile.dims[k - 1] for k in subs)
            if t.shape != tuple(d * d - 1 for d in sub_dims):
                raise ValueError(f"tensor for {subs} has wrong shape {t.shape}")
            gens = [_generator_stack(d) for d in sub_dims]
            local = np.einsum(_operator_expr(m), t.astype(complex), *gens)
            d_sub = math.prod(sub_dims)
            weight = d_sub / 2.0**m
            acc += weight * embed_operator(local.reshape(d_sub, d_sub), subs, profile)
    return DensityOperator(acc / total, profile)
