"""Named states, the four two-projector mixing families, and seeded sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .qcore import DensityOperator, DimensionProfile, PureState


def split_rng(seed, *key: int) -> np.random.Generator:
    """Seeded PCG64 stream for (seed, key...).

    Stream splitting rule used package-wide: ``seed`` (an int, or a tuple of
    ints for derived streams) is the SeedSequence entropy and the key tuple
    its spawn key, so independent streams never overlap and every run with
    the same (seed, key) is bitwise reproducible.
    """
    if isinstance(seed, (tuple, list)):
        entropy = tuple(int(s) for s in seed)
    else:
        entropy = int(seed)
    return np.random.default_rng(
        np.random.SeedSequence(entropy, spawn_key=tuple(int(k) for k in key))
    )


def _qubits(n: int) -> DimensionProfile:
    return DimensionProfile((2,) * n)


def _pure(amplitudes: dict[tuple[int, ...], complex], n: int) -> PureState:
    tensor = np.zeros((2,) * n, dtype=complex)
    for idx, val in amplitudes.items():
        tensor[idx] = val
    return PureState(tensor, _qubits(n))


def ghz(n: int = 3) -> PureState:
    """(|0...0> + |1...1>) / sqrt(2) on n qubits."""
    if n < 2:
        raise ValueError("ghz needs at least two qubits")
    r = 1.0 / math.sqrt(2.0)
    return _pure({(0,) * n: r, (1,) * n: r}, n)


def bell() -> PureState:
    """The two-qubit |Phi+> state, ghz(2)."""
    return ghz(2)


def w3() -> PureState:
    """(|001> + |010> + |100>) / sqrt(3)."""
    r = 1.0 / math.sqrt(3.0)
    return _pure({(0, 0, 1): r, (0, 1, 0): r, (1, 0, 0): r}, 3)


def w3_flipped() -> PureState:
    """(|110> + |101> + |011>) / sqrt(3), i.e. X X X applied to w3."""
    r = 1.0 / math.sqrt(3.0)
    return _pure({(1, 1, 0): r, (1, 0, 1): r, (0, 1, 1): r}, 3)


def ghz_minus() -> PureState:
    """(|000> - |111>) / sqrt(2)."""
    r = 1.0 / math.sqrt(2.0)
    return _pure({(0, 0, 0): r, (1, 1, 1): -r}, 3)


def ghz_1() -> PureState:
    """(|001> + |110>) / sqrt(2)."""
    r = 1.0 / math.sqrt(2.0)
    return _pure({(0, 0, 1): r, (1, 1, 0): r}, 3)


# Family name -> (state weighted by p, state weighted by 1 - p).
FAMILY_COMPONENTS = {
    "ghz-w": (ghz, w3),
    "wt-w": (w3_flipped, w3),
    "ghz-ghzminus": (ghz, ghz_minus),
    "ghz-ghz1": (ghz, ghz_1),
}


@dataclass(frozen=True)
class FamilySpec:
    """A point in one of the two-projector mixing families."""

    family: str
    p: float

    def __post_init__(self) -> None:
        if self.family not in FAMILY_COMPONENTS:
            raise ValueError(
                f"unknown family {self.family!r}; choose from {sorted(FAMILY_COMPONENTS)}"
            )
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"mixing weight p must lie in [0, 1], got {self.p}")


def family(spec: FamilySpec) -> DensityOperator:
    """rho(p) = p |a><a| + (1 - p) |b><b| for the named family."""
    make_a, make_b = FAMILY_COMPONENTS[spec.family]
    a = make_a().vector
    b = make_b().vector
    mat = spec.p * np.outer(a, a.conj()) + (1.0 - spec.p) * np.outer(b, b.conj())
    return DensityOperator(mat, _qubits(3))


def haar_pure(profile: DimensionProfile, seed) -> PureState:
    """Haar-random pure state: normalized complex Gaussian amplitudes.

    ``seed`` follows the split_rng convention (int or tuple of ints).
    """
    rng = split_rng(seed)
    vec = rng.standard_normal(profile.total) + 1j * rng.standard_normal(profile.total)
    vec /= np.linalg.norm(vec)
    return PureState(vec.reshape(profile.dims), profile)


def random_mixed(profile: DimensionProfile, rank: int, seed) -> DensityOperator:
    """Convex mixture of ``rank`` Haar pure states with Dirichlet-uniform weights."""
    if not 1 <= rank <= profile.total:
        raise ValueError(f"rank must lie in 1..{profile.total}, got {rank}")
    rng = split_rng(seed)
    weights = rng.dirichlet(np.ones(rank))
    mat = np.zeros((profile.total, profile.total), dtype=complex)
    for w in weights:
        vec = rng.standard_normal(profile.total) + 1j * rng.standard_normal(profile.total)
        vec /= np.linalg.norm(vec)
        mat += w * np.outer(vec, vec.conj())
    return DensityOperator(mat, profile)


def haar_unitary(d: int, rng: np.random.Generator | int) -> np.ndarray:
    """Haar-distributed d x d unitary via QR of a complex Gaussian matrix."""
    if isinstance(rng, (int, np.integer)):
        rng = split_rng(int(rng))
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases.conj()


def local_unitary(profile: DimensionProfile, rng: np.random.Generator | int) -> np.ndarray:
    """Tensor product of independent Haar unitaries, one per subsystem."""
    if isinstance(rng, (int, np.integer)):
        rng = split_rng(int(rng))
    out = haar_unitary(profile.dims[0], rng)
    for d in profile.dims[1:]:
        out = np.kron(out, haar_unitary(d, rng))
    return out
