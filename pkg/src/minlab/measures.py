"""Closed-form nonlocality and discord measures.

Both measures normalize the squared Hilbert-Schmidt distance by
d_l / (d_l - 1), so a maximally entangled pair of the measured subsystem
scores 1. The mixed-state formulas run through the K and G matrices built
from the correlation tensors of every subset containing the measured part.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .bloch import BlochData, _generator_stack, bloch_decompose
from .qcore import (
    DensityOperator,
    DimensionProfile,
    PureState,
    degeneracy_clusters,
    hermitian_eig,
    hs_inner,
    partial_trace,
)

# Below this norm the measured part's coherent vector counts as zero and the
# degenerate-marginal branch applies.
S_NORM_THRESHOLD = 1e-9
# Absolute residual allowed when testing that s-hat is an eigenvector of K.
ALIGNMENT_TOL = 1e-8
# Relative eigenvalue spread below which K counts as triply degenerate.
TRIPLE_DEGENERACY_RTOL = 1e-8
# Slack for the eigenvalue-ordering inequality, so exact boundary points
# (ties in exact arithmetic) are not flipped by roundoff.
ORDERING_SLACK = 1e-12


@dataclass(frozen=True)
class KMatrix:
    """Gram-type matrix of all correlation tensors containing one subsystem."""

    subsystem: int
    entries: np.ndarray


@dataclass(frozen=True)
class GMatrix:
    """s s^t + K for one subsystem; its top eigenvalue drives the discord."""

    subsystem: int
    entries: np.ndarray


@dataclass(frozen=True)
class IsometryRows:
    """Rows a_{j,i} = <j| g_i |j> / sqrt(2) over an orthonormal basis {|j>}."""

    subsystem: int
    rows: np.ndarray  # shape (d, d^2 - 1), real


@dataclass(frozen=True)
class EqualityVerdict:
    """Outcome of the nonlocality-equals-discord criteria for one subsystem."""

    case: str  # "CaseI", "CaseII" or "NotApplicable"
    commutator_norm: float
    eigen_condition: bool
    triply_degenerate: bool
    predicted_equal: bool


def min_pure(psi: PureState, l: int) -> float:
    """Nonlocality of a pure state: (d_l/(d_l-1)) (1 - tr (rho^(l))^2)."""
    d = psi.profile.dim(l)
    marg = psi.marginal(l)
    purity = hs_inner(marg, marg)
    return max(0.0, d / (d - 1) * (1.0 - purity))


def discord_pure(psi: PureState, l: int) -> float:
    """Geometric discord of a pure state; coincides with min_pure."""
    return min_pure(psi, l)


def concurrence_pure_bipartite(psi: PureState) -> float:
    """Concurrence sqrt(2 (1 - tr rho_A^2)) of a bipartite pure state."""
    if psi.profile.n != 2:
        raise ValueError("concurrence is defined here for bipartite pure states only")
    marg = psi.marginal(1)
    purity = hs_inner(marg, marg)
    return math.sqrt(max(0.0, 2.0 * (1.0 - purity)))


def meyer_wallach(psi: PureState) -> float:
    """Meyer-Wallach global entanglement (1/n) sum_k 2 (1 - tr rho_k^2)."""
    n = psi.profile.n
    total = 0.0
    for k in range(1, n + 1):
        marg = psi.marginal(k)
        total += 2.0 * (1.0 - hs_inner(marg, marg))
    return total / n


def subset_weight(profile: DimensionProfile, l: int, rest: tuple[int, ...]) -> float:
    """Weight d_l d_{k_1} ... d_{k_M} / 2^(M+1) of one correlation tensor.

    Identically 1 when every involved subsystem is a qubit.
    """
    m = len(rest)
    dims = profile.dim(l) * math.prod(profile.dim(k) for k in rest)
    return dims / 2.0 ** (m + 1)


def k_matrix(data: BlochData, profile: DimensionProfile, l: int) -> KMatrix:
    """Assemble K^(l) from the correlation tensors of every subset containing l."""
    profile.check_subsystem(l)
    d = profile.dim(l)
    size = d * d - 1
    others = [k for k in range(1, profile.n + 1) if k != l]
    K = np.zeros((size, size))
    for m in range(1, profile.n):
        for rest in itertools.combinations(others, m):
            subset = tuple(sorted((l,) + rest))
            t = data.tensors[subset]
            axis = subset.index(l)
            mat = np.moveaxis(t, axis, 0).reshape(size, -1)
            K += subset_weight(profile, l, rest) * (mat @ mat.T)
    return KMatrix(l, K)


def min_bound(k: KMatrix) -> float:
    """Sum of the largest d_l^2 - d_l eigenvalues of K^(l).

    Upper bound on the unnormalized optimization term inside the
    mixed-state nonlocality formula.
    """
    size = k.entries.shape[0]
    d = math.isqrt(size + 1)
    eta = np.linalg.eigvalsh(k.entries)[::-1]
    return float(eta[: d * d - d].sum())


def isometry_rows(vectors: np.ndarray, subsystem: int) -> IsometryRows:
    """Rows a_{j,i} = <j| g_i |j> / sqrt(2) for the basis given as columns."""
    d = vectors.shape[0]
    gens = _generator_stack(d)
    rows = np.einsum("pj,apq,qj->ja", vectors.conj(), gens, vectors).real / math.sqrt(2.0)
    return IsometryRows(subsystem, np.ascontiguousarray(rows))


def _nonlocality_term(rho: DensityOperator, l: int) -> tuple[np.ndarray, np.ndarray, float]:
    data = bloch_decompose(rho)
    K = k_matrix(data, rho.profile, l).entries
    s = data.coherent[l]
    # trace(K) equals sum_S w_S ||T^(l u S)||^2, the correlation budget.
    return s, K, float(np.trace(K))


def min_qubit(rho: DensityOperator, l: int) -> float:
    """Nonlocality of a mixed state whose measured part is a qubit.

    Subtracts the Rayleigh quotient of K along the coherent vector when the
    marginal is non-degenerate, and the smallest eigenvalue of K otherwise.
    """
    profile = rho.profile
    d = profile.dim(l)
    if d != 2:
        raise ValueError("min_qubit requires the measured subsystem to be a qubit")
    s, K, budget = _nonlocality_term(rho, l)
    s_norm = float(np.linalg.norm(s))
    if s_norm > S_NORM_THRESHOLD:
        drop = float(s @ K @ s) / (s_norm * s_norm)
    else:
        drop = float(np.linalg.eigvalsh(K)[0])
    pref = d / ((d - 1) * profile.total)
    return pref * (budget - drop)


def min_general_nondegenerate(rho: DensityOperator, l: int) -> float:
    """Nonlocality for a non-degenerate marginal of any local dimension.

    The unique admissible measurement is the eigenbasis of rho^(l); its
    isometry rows contract K directly.
    """
    profile = rho.profile
    d = profile.dim(l)
    vals, vecs = hermitian_eig(partial_trace(rho, l))
    clusters = degeneracy_clusters(vals)
    if any(len(c) > 1 for c in clusters):
        raise ValueError("marginal spectrum is degenerate; use the direct search")
    s, K, budget = _nonlocality_term(rho, l)
    A = isometry_rows(vecs, l).rows
    drop = float(np.trace(A @ K @ A.T))
    pref = d / ((d - 1) * profile.total)
    return pref * (budget - drop)


def g_matrix(data: BlochData, l: int) -> GMatrix:
    """G^(l) = s s^t + K^(l) for a qubit subsystem."""
    profile = data.dims()
    if profile.dim(l) != 2:
        raise ValueError("g_matrix requires the measured subsystem to be a qubit")
    K = k_matrix(data, profile, l).entries
    s = data.coherent[l]
    return GMatrix(l, np.outer(s, s) + K)


def discord_qubit(rho: DensityOperator, l: int) -> float:
    """Geometric discord of an n-qubit state, via the top eigenvalue of G^(l)."""
    profile = rho.profile
    if any(d != 2 for d in profile.dims):
        raise ValueError("discord_qubit requires every subsystem to be a qubit")
    s, K, budget = _nonlocality_term(rho, l)
    G = np.outer(s, s) + K
    lam_max = float(np.linalg.eigvalsh(G)[-1])
    pref = 1.0 / 2 ** (profile.n - 1)
    return pref * (float(s @ s) + budget - lam_max)


def equality_verdict(data: BlochData, l: int) -> EqualityVerdict:
    """Decide whether nonlocality and discord coincide for subsystem l.

    Case I (coherent vector nonzero): s-hat must be an eigenvector of K and
    ||s||^2 + eta_s must dominate every other eigenvalue. Case II (coherent
    vector zero): K must have a single triply degenerate eigenvalue. The
    commutator norm ||[s s^t, K]||_F is reported as a diagnostic.
    """
    profile = data.dims()
    if profile.dim(l) != 2:
        return EqualityVerdict("NotApplicable", 0.0, False, False, False)
    K = k_matrix(data, profile, l).entries
    s = data.coherent[l]
    eta = np.linalg.eigvalsh(K)
    scale = max(1.0, float(np.abs(eta).max()))
    spread = float(eta[-1] - eta[0])
    triply = spread < TRIPLE_DEGENERACY_RTOL * scale
    ss = np.outer(s, s)
    commutator_norm = float(np.linalg.norm(ss @ K - K @ ss))
    s_norm = float(np.linalg.norm(s))
    if s_norm > S_NORM_THRESHOLD:
        shat = s / s_norm
        eta_s = float(shat @ K @ shat)
        aligned = float(np.linalg.norm(K @ shat - eta_s * shat)) < ALIGNMENT_TOL
        ordering = bool(s_norm * s_norm + eta_s + ORDERING_SLACK * scale >= eta[-1])
        return EqualityVerdict("CaseI", commutator_norm, ordering, triply, aligned and ordering)
    return EqualityVerdict("CaseII", commutator_norm, False, triply, triply)
