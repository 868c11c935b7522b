"""Definition-level evaluation of nonlocality and discord by direct search.

Everything here works on raw matrices only: post-measurement states are
built projector by projector and the squared Hilbert-Schmidt distance is
optimized over explicitly parameterized measurement bases. No Bloch data
enters, so these values are an independent check on every closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .qcore import (
    DensityOperator,
    MeasurementBasis,
    apply_measurement,
    degeneracy_clusters,
    hermitian_eig,
    hs_inner,
    partial_trace,
)
from .states import haar_unitary, split_rng

MARGINAL_TOL = 1e-8


@dataclass(frozen=True)
class SearchConfig:
    """Budget and seeding of the two-stage measurement search."""

    grid_points: int = 128
    restarts: int = 6
    refine_iters: int = 48
    seed: int = 0
    tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.grid_points < 1:
            raise ValueError("grid_points must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.refine_iters < 0:
            raise ValueError("refine_iters must be >= 0")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class OracleResult:
    value: float
    argmax_basis: MeasurementBasis
    evaluations: int
    converged: bool


def distance_sq(rho: DensityOperator, basis: MeasurementBasis) -> float:
    """Squared Hilbert-Schmidt distance between rho and its post-measurement state."""
    post = apply_measurement(rho, basis).matrix
    m = rho.matrix
    return max(0.0, hs_inner(m, m) - 2.0 * hs_inner(m, post) + hs_inner(post, post))


def marginal_invariant(rho: DensityOperator, basis: MeasurementBasis, tol: float = MARGINAL_TOL) -> bool:
    """Whether the measurement leaves the measured marginal unchanged."""
    marg = partial_trace(rho, basis.subsystem)
    probs = np.einsum("ik,kl,il->i", basis.vectors.conj().T, marg, basis.vectors.T)
    dephased = (basis.vectors * probs) @ basis.vectors.conj().T
    return bool(np.abs(dephased - marg).max() <= tol)


def _axis_basis(theta: float, phi: float) -> np.ndarray:
    """Orthonormal qubit basis aligned with the Bloch axis (theta, phi)."""
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    e = complex(math.cos(phi), math.sin(phi))
    return np.array([[c, -s * e.conjugate()], [s * e, c]], dtype=complex)


def _fibonacci_angles(count: int) -> np.ndarray:
    """Deterministic near-uniform (theta, phi) spiral covering the sphere."""
    i = np.arange(count, dtype=float)
    z = 1.0 - (2.0 * i + 1.0) / count
    theta = np.arccos(np.clip(z, -1.0, 1.0))
    phi = i * math.pi * (3.0 - math.sqrt(5.0))
    return np.stack([theta, phi], axis=1)


def _sphere_search(objective, cfg: SearchConfig, maximize: bool):
    """Fibonacci grid plus Nelder-Mead refinement over the Bloch sphere.

    ``objective`` maps a 2x2 basis matrix to the quantity being optimized.
    Returns (basis, value, evaluations, converged).
    """
    sign = -1.0 if maximize else 1.0

    def g(angles) -> float:
        return sign * objective(_axis_basis(angles[0], angles[1]))

    evals = 0
    best_angles = None
    best = math.inf
    for angles in _fibonacci_angles(cfg.grid_points):
        val = g(angles)
        evals += 1
        if val < best:
            best = val
            best_angles = angles
    converged = False
    if cfg.refine_iters > 0:
        res = minimize(
            g,
            best_angles,
            method="Nelder-Mead",
            options={
                "xatol": 1e-9,
                "fatol": cfg.tol,
                "maxfev": max(80, 30 * cfg.refine_iters),
            },
        )
        evals += res.nfev
        converged = bool(res.success)
        if res.fun < best:  # refinement never degrades the grid optimum
            best = float(res.fun)
            best_angles = res.x
    return _axis_basis(best_angles[0], best_angles[1]), sign * best, evals, converged


def _random_block_rotation(rng: np.random.Generator, sizes: list[int]) -> np.ndarray:
    out = np.zeros((sum(sizes), sum(sizes)), dtype=complex)
    pos = 0
    for m in sizes:
        out[pos : pos + m, pos : pos + m] = haar_unitary(m, rng) if m > 1 else 1.0
        pos += m
    return out


def _block_geodesic_step(rng: np.random.Generator, sizes: list[int], step: float) -> np.ndarray:
    """exp(i step H) with an independent random Hermitian H in each block."""
    out = np.zeros((sum(sizes), sum(sizes)), dtype=complex)
    pos = 0
    for m in sizes:
        if m == 1:
            out[pos, pos] = 1.0
        else:
            h = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
            h = h + h.conj().T
            h /= np.linalg.norm(h)
            w, v = np.linalg.eigh(h)
            out[pos : pos + m, pos : pos + m] = (v * np.exp(1j * step * w)) @ v.conj().T
        pos += m
    return out


def _block_search(objective, frame: np.ndarray, sizes: list[int], cfg: SearchConfig, maximize: bool):
    """Per-block Haar sampling with geodesic shrinking-step refinement.

    Admissible bases are frame @ blockdiag(U_1, ..., U_c); each restart owns
    the RNG stream (seed, restart index). Returns the same tuple as
    _sphere_search.
    """
    sign = -1.0 if maximize else 1.0

    def g(rotation: np.ndarray) -> float:
        return sign * objective(frame @ rotation)

    evals = 0
    best_rot = np.eye(frame.shape[0], dtype=complex)
    best = g(best_rot)
    evals += 1
    converged = False
    for r in range(cfg.restarts):
        rng = split_rng(cfg.seed, r)
        rot = best_rot if r == 0 else _random_block_rotation(rng, sizes)
        cur = g(rot)
        evals += 1
        for _ in range(max(0, cfg.grid_points - 1)):
            cand = _random_block_rotation(rng, sizes)
            val = g(cand)
            evals += 1
            if val < cur:
                cur, rot = val, cand
        # Geodesic refinement: random tangent directions with a step that
        # halves after repeated failures; stop once refine_iters consecutive
        # proposals fail to improve by more than tol.
        step = 0.4
        stall = 0
        shrink_every = max(4, cfg.refine_iters // 4)
        budget = cfg.grid_points + 40 * cfg.refine_iters
        proposals = 0
        while cfg.refine_iters > 0 and stall < cfg.refine_iters and proposals < budget:
            cand = rot @ _block_geodesic_step(rng, sizes, step)
            val = g(cand)
            evals += 1
            proposals += 1
            if val < cur - cfg.tol:
                cur, rot = val, cand
                stall = 0
            else:
                stall += 1
                if stall % shrink_every == 0:
                    step = max(step * 0.5, 1e-7)
        if cfg.refine_iters > 0 and stall >= cfg.refine_iters:
            converged = True
        if cur < best:
            best, best_rot = cur, rot
    return frame @ best_rot, sign * best, evals, converged


def min_direct(rho: DensityOperator, l: int, cfg: SearchConfig | None = None) -> OracleResult:
    """Nonlocality straight from its definition.

    Computes the measured marginal, clusters its spectrum, and maximizes the
    squared distance over eigenbases that may rotate freely inside each
    degenerate cluster. A non-degenerate spectrum admits exactly one basis.
    """
    cfg = cfg or SearchConfig()
    profile = rho.profile
    profile.check_subsystem(l)
    d = profile.dim(l)
    factor = d / (d - 1)
    vals, vecs = hermitian_eig(partial_trace(rho, l))
    clusters = degeneracy_clusters(vals)

    def objective(basis_matrix: np.ndarray) -> float:
        return distance_sq(rho, MeasurementBasis(l, basis_matrix))

    if all(len(c) == 1 for c in clusters):
        basis = MeasurementBasis(l, vecs)
        return OracleResult(max(0.0, factor * objective(vecs)), basis, 1, True)
    if d == 2:
        mat, val, evals, converged = _sphere_search(objective, cfg, maximize=True)
    else:
        sizes = [len(c) for c in clusters]
        mat, val, evals, converged = _block_search(objective, vecs, sizes, cfg, maximize=True)
    return OracleResult(max(0.0, factor * val), MeasurementBasis(l, mat), evals, converged)


def discord_direct(rho: DensityOperator, l: int, cfg: SearchConfig | None = None) -> OracleResult:
    """Geometric discord straight from its definition.

    Minimizes the squared distance over all von Neumann bases on subsystem
    l, with the same two-stage search and normalization as min_direct.
    """
    cfg = cfg or SearchConfig()
    profile = rho.profile
    profile.check_subsystem(l)
    d = profile.dim(l)
    factor = d / (d - 1)

    def objective(basis_matrix: np.ndarray) -> float:
        return distance_sq(rho, MeasurementBasis(l, basis_matrix))

    if d == 2:
        mat, val, evals, converged = _sphere_search(objective, cfg, maximize=False)
    else:
        # Start the full-manifold search from the marginal eigenbasis; for
        # states close to pure that frame is already near the optimum.
        _, vecs = hermitian_eig(partial_trace(rho, l))
        mat, val, evals, converged = _block_search(objective, vecs, [d], cfg, maximize=False)
    return OracleResult(max(0.0, factor * val), MeasurementBasis(l, mat), evals, converged)
