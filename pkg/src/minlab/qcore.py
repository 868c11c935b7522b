"""Dense complex linear algebra and multipartite state plumbing.

Conventions shared by the whole package: the product basis is ordered
row-major over (i_1, ..., i_n), so the first subsystem is the most
significant digit, and subsystems are numbered 1..n in every public
signature.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass
from typing import Sequence

import numpy as np

# Absolute construction tolerances; roundoff accumulated across kron chains
# stays well below these at desk scale.
HERMITICITY_TOL = 1e-9
TRACE_TOL = 1e-9
PSD_TOL = 1e-9

# Relative eigenvalue gap below which neighbouring eigenvalues are treated
# as one degenerate cluster.
DEGENERACY_RTOL = 1e-8

_LETTERS = string.ascii_lowercase + string.ascii_uppercase


@dataclass(frozen=True)
class DimensionProfile:
    """Ordered local dimensions (d_1, ..., d_n) of an n-partite system."""

    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValueError("profile needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise ValueError(f"local dimensions must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def total(self) -> int:
        return math.prod(self.dims)

    def dim(self, l: int) -> int:
        """Local dimension of subsystem ``l`` (1-based)."""
        self.check_subsystem(l)
        return self.dims[l - 1]

    def check_subsystem(self, l: int) -> None:
        if not 1 <= int(l) <= self.n:
            raise ValueError(f"subsystem index {l} out of range 1..{self.n}")


@dataclass(frozen=True)
class DensityOperator:
    """Dense density matrix together with its local-dimension profile."""

    matrix: np.ndarray
    profile: DimensionProfile

    @classmethod
    def from_matrix(cls, matrix, dims: Sequence[int], tol: float = HERMITICITY_TOL) -> "DensityOperator":
        """Build and validate a density operator from user-supplied data."""
        profile = DimensionProfile(tuple(dims))
        mat = np.ascontiguousarray(matrix, dtype=complex)
        if mat.shape != (profile.total, profile.total):
            raise ValueError(
                f"matrix shape {mat.shape} does not match total dimension {profile.total}"
            )
        rho = cls(mat, profile)
        rho.validate(tol)
        return rho

    def validate(self, tol: float = HERMITICITY_TOL) -> None:
        """Check Hermiticity, unit trace and positive semidefiniteness."""
        m = self.matrix
        if np.abs(m - m.conj().T).max() > tol:
            raise ValueError("density matrix is not Hermitian within tolerance")
        if abs(m.trace() - 1.0) > max(tol, TRACE_TOL):
            raise ValueError("density matrix trace differs from 1 beyond tolerance")
        if np.linalg.eigvalsh(m).min() < -max(tol, PSD_TOL):
            raise ValueError("density matrix has a negative eigenvalue beyond tolerance")


@dataclass(frozen=True)
class PureState:
    """Complex amplitude tensor a_{i_1 ... i_n} over the product basis."""

    amplitudes: np.ndarray
    profile: DimensionProfile

    @classmethod
    def from_vector(cls, vector, dims: Sequence[int], tol: float = HERMITICITY_TOL) -> "PureState":
        profile = DimensionProfile(tuple(dims))
        vec = np.ascontiguousarray(vector, dtype=complex).reshape(-1)
        if vec.size != profile.total:
            raise ValueError(
                f"amplitude count {vec.size} does not match total dimension {profile.total}"
            )
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > max(tol, 1e-9):
            raise ValueError("state vector is not normalized")
        return cls(vec.reshape(profile.dims), profile)

    @property
    def vector(self) -> np.ndarray:
        """Amplitudes flattened row-major over (i_1, ..., i_n)."""
        return self.amplitudes.reshape(-1)

    def to_density(self) -> DensityOperator:
        v = self.vector
        return DensityOperator(np.outer(v, v.conj()), self.profile)

    def marginal(self, l: int) -> np.ndarray:
        """Reduced density matrix of subsystem ``l``, straight from amplitudes."""
        self.profile.check_subsystem(l)
        d = self.profile.dims[l - 1]
        a = np.moveaxis(self.amplitudes, l - 1, 0).reshape(d, -1)
        return a @ a.conj().T


@dataclass(frozen=True)
class MeasurementBasis:
    """Orthonormal basis on one subsystem, defining a von Neumann measurement.

    ``vectors`` holds the basis kets as columns of a d_l x d_l matrix.
    """

    subsystem: int
    vectors: np.ndarray

    def validate(self, tol: float = HERMITICITY_TOL) -> None:
        v = self.vectors
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("basis vectors must form a square matrix")
        gram = v.conj().T @ v
        if np.abs(gram - np.eye(v.shape[0])).max() > tol:
            raise ValueError("basis vectors are not orthonormal within tolerance")


def kron(a, b) -> np.ndarray:
    """Kronecker product of two matrices."""
    return np.kron(np.asarray(a), np.asarray(b))


def kron_all(*mats) -> np.ndarray:
    """Kronecker product of a sequence of matrices, left to right."""
    out = np.asarray(mats[0])
    for m in mats[1:]:
        out = np.kron(out, np.asarray(m))
    return out


def embed_operator(op, subsystems: Sequence[int], profile: DimensionProfile) -> np.ndarray:
    """Extend an operator on the given subsystems by identity elsewhere.

    ``op`` acts on the tensor factor ordered by the (strictly increasing,
    1-based) ``subsystems``; the result acts on the full space in the
    package's row-major basis order.
    """
    subs = tuple(int(k) for k in subsystems)
    if not subs or any(subs[i] >= subs[i + 1] for i in range(len(subs) - 1)):
        raise ValueError("subsystems must be non-empty and strictly increasing")
    for k in subs:
        profile.check_subsystem(k)
    dims = profile.dims
    n = profile.n
    keep0 = [k - 1 for k in subs]
    rest0 = [k for k in range(n) if k not in keep0]
    op = np.asarray(op, dtype=complex)
    d_keep = math.prod(dims[k] for k in keep0)
    if op.shape != (d_keep, d_keep):
        raise ValueError(f"operator shape {op.shape} does not match subsystems {subs}")
    if not rest0:
        return op.copy()
    full = np.kron(op, np.eye(math.prod(dims[k] for k in rest0)))
    order = keep0 + rest0
    shape = [dims[k] for k in order]
    perm = [order.index(q) for q in range(n)]
    tensor = full.reshape(shape + shape)
    tensor = tensor.transpose(perm + [n + p for p in perm])
    return np.ascontiguousarray(tensor.reshape(profile.total, profile.total))


def partial_trace(rho: DensityOperator, keep) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep`` (1-based).

    ``keep`` may be a single index or a strictly increasing sequence; the
    returned matrix is ordered by the kept subsystems.
    """
    if isinstance(keep, (int, np.integer)):
        keep = (int(keep),)
    keep = tuple(int(k) for k in keep)
    if not keep or any(keep[i] >= keep[i + 1] for i in range(len(keep) - 1)):
        raise ValueError("keep must be non-empty and strictly increasing")
    for k in keep:
        rho.profile.check_subsystem(k)
    dims = rho.profile.dims
    n = rho.profile.n
    keep0 = [k - 1 for k in keep]

    rows = list(_LETTERS[:n])
    cols = []
    fresh = iter(_LETTERS[n:])
    for k in range(n):
        cols.append(next(fresh) if k in keep0 else rows[k])
    out = "".join(rows[k] for k in keep0) + "".join(cols[k] for k in keep0)
    expr = "".join(rows) + "".join(cols) + "->" + out

    tensor = rho.matrix.reshape(dims + dims)
    d_keep = math.prod(dims[k] for k in keep0)
    return np.einsum(expr, tensor).reshape(d_keep, d_keep)


def hermitian_eig(m, tol: float = HERMITICITY_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (non-increasing) and orthonormal eigenvectors of a Hermitian matrix.

    Eigenvectors are returned as columns, each rephased so its
    largest-magnitude entry is real and positive; combined with the stable
    eigenvalue ordering this makes the output deterministic.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("input must be a square matrix")
    if np.abs(m - m.conj().T).max() > tol:
        raise ValueError("matrix is not Hermitian within tolerance")
    vals, vecs = np.linalg.eigh(m)
    vals = vals[::-1].copy()
    vecs = np.ascontiguousarray(vecs[:, ::-1])
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        idx = int(np.argmax(np.abs(col)))
        pivot = col[idx]
        if abs(pivot) > 0:
            vecs[:, j] = col * (pivot.conjugate() / abs(pivot))
    return vals, vecs


def degeneracy_clusters(values: np.ndarray, rtol: float = DEGENERACY_RTOL) -> list[list[int]]:
    """Group non-increasing eigenvalues into clusters of near-degenerate ones.

    Neighbours closer than rtol * max(1, spectral range) are merged; the
    measurement search treats each cluster as one degenerate eigenspace.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return []
    spread = float(values[0] - values[-1]) if values.size > 1 else 0.0
    threshold = rtol * max(1.0, spread)
    clusters = [[0]]
    for i in range(1, values.size):
        if values[i - 1] - values[i] < threshold:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    return clusters


def apply_measurement(rho: DensityOperator, basis: MeasurementBasis) -> DensityOperator:
    """Apply the von Neumann measurement map sum_k P_k rho P_k on one subsystem."""
    profile = rho.profile
    l = basis.subsystem
    profile.check_subsystem(l)
    d = profile.dims[l - 1]
    if basis.vectors.shape != (d, d):
        raise ValueError(
            f"basis vectors shape {basis.vectors.shape} does not match local dimension {d}"
        )
    pre = math.prod(profile.dims[: l - 1]) if l > 1 else 1
    post = math.prod(profile.dims[l:]) if l < profile.n else 1
    eye_pre = np.eye(pre)
    eye_post = np.eye(post)
    out = np.zeros_like(rho.matrix)
    for k in range(d):
        v = basis.vectors[:, k]
        proj = np.kron(np.kron(eye_pre, np.outer(v, v.conj())), eye_post)
        out += proj @ rho.matrix @ proj
    return DensityOperator(out, profile)


def hs_inner(a, b) -> float:
    """Hilbert-Schmidt inner product Re tr(a^dagger b)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(np.einsum("ij,ij->", a.conj(), b).real)


def hs_norm_sq(a) -> float:
    """Squared Frobenius norm, hs_inner(a, a)."""
    return hs_inner(a, a)
