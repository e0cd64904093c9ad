"""Kraus channels, pure states and the partial trace.

Matrices are plain complex ``numpy`` arrays. Bipartite indices are row-major
over ``(a, b)``: composite index ``a * dim_b + b``, matching
``np.kron(psi_a, psi_b)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .spectra import _rank_rows, as_density, as_hermitian
from .tolerances import CLAMP_TOL, NORM_TOL, TP_TOL

__all__ = [
    "Channel",
    "BipartiteShape",
    "as_pure_state",
    "projector",
    "apply",
    "output_purity",
    "partial_trace_b",
    "partial_trace_a",
    "output_rank_estimate",
    "identity_channel",
    "depolarizing_channel",
    "bit_flip_channel",
    "unitary_channel",
]


class Channel:
    """Trace-preserving completely positive map given by Kraus operators.

    Parameters
    ----------
    kraus : array_like, shape (k, dim_out, dim_in) or sequence of matrices
        Kraus operators. ``sum K^dag K`` must equal the identity within
        ``tp_tol`` (max-norm).
    """

    __slots__ = ("_kraus",)

    def __init__(self, kraus, tp_tol: float = TP_TOL):
        k = np.array(kraus, dtype=complex)
        if k.ndim == 2:
            k = k[None]
        if k.ndim != 3 or k.shape[0] == 0 or 0 in k.shape:
            raise DomainError(f"Kraus family must have shape (k, d_out, d_in), got {k.shape}")
        if not np.all(np.isfinite(k)):
            raise DomainError("Kraus entries must be finite")
        gram = np.einsum("kij,kil->jl", k.conj(), k)
        err = np.max(np.abs(gram - np.eye(k.shape[2])))
        if err > tp_tol:
            raise DomainError(f"Kraus family is not trace preserving (error {err:.3e})")
        k.flags.writeable = False
        self._kraus = k

    @property
    def kraus(self) -> np.ndarray:
        return self._kraus

    @property
    def dim_in(self) -> int:
        return self._kraus.shape[2]

    @property
    def dim_out(self) -> int:
        return self._kraus.shape[1]

    @property
    def num_kraus(self) -> int:
        return self._kraus.shape[0]

    def __call__(self, rho):
        return apply(self, rho)

    def __repr__(self):
        return f"Channel(dim_in={self.dim_in}, dim_out={self.dim_out}, kraus={self.num_kraus})"


@dataclass(frozen=True)
class BipartiteShape:
    dim_a: int
    dim_b: int

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise DomainError("subsystem dimensions must be >= 1")

    @property
    def total(self) -> int:
        return self.dim_a * self.dim_b

    def swapped(self) -> "BipartiteShape":
        return BipartiteShape(self.dim_b, self.dim_a)


def as_pure_state(psi) -> np.ndarray:
    v = np.array(psi, dtype=complex).ravel()
    if v.size == 0:
        raise DomainError("empty state vector")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > NORM_TOL:
        raise DomainError(f"state vector has norm {norm!r}, expected 1")
    return v


def projector(psi) -> np.ndarray:
    """``|psi><psi|`` for a unit vector."""
    v = as_pure_state(psi)
    return np.outer(v, v.conj())


def _apply(kraus: np.ndarray, rho: np.ndarray) -> np.ndarray:
    out = np.einsum("kij,jl,kml->im", kraus, rho, kraus.conj())
    return 0.5 * (out + out.conj().T)


def apply(phi: Channel, rho) -> np.ndarray:
    """``sum_k K rho K^dag``."""
    r = as_density(rho)
    if r.shape[0] != phi.dim_in:
        raise DomainError(f"state dimension {r.shape[0]} != channel input {phi.dim_in}")
    return _apply(phi.kraus, r)


def output_purity(phi: Channel, psi) -> float:
    """``Tr Phi(|psi><psi|)^2``, which lies in ``[1/dim_out, 1]``."""
    v = as_pure_state(psi)
    if v.size != phi.dim_in:
        raise DomainError(f"state dimension {v.size} != channel input {phi.dim_in}")
    out = _apply(phi.kraus, np.outer(v, v.conj()))
    return float(np.sum(out.real ** 2 + out.imag ** 2))


def _reshaped(rho, shape: BipartiteShape) -> np.ndarray:
    r = as_hermitian(rho)
    if r.shape[0] != shape.total:
        raise DomainError(f"state dimension {r.shape[0]} != {shape.dim_a}*{shape.dim_b}")
    return r.reshape(shape.dim_a, shape.dim_b, shape.dim_a, shape.dim_b)


def partial_trace_b(rho, shape: BipartiteShape) -> np.ndarray:
    """Trace out the second factor, returning a ``dim_a x dim_a`` matrix.

    Linear in ``rho``, so it accepts any Hermitian matrix of the right size,
    not only density matrices.
    """
    return np.einsum("ajbj->ab", _reshaped(rho, shape))


def partial_trace_a(rho, shape: BipartiteShape) -> np.ndarray:
    """Trace out the first factor, returning a ``dim_b x dim_b`` matrix."""
    return np.einsum("iaib->ab", _reshaped(rho, shape))


def output_rank_estimate(phi: Channel, trials: int = 64, seed: int = 0) -> int:
    """Largest numerical rank of ``Phi(|psi><psi|)`` over Haar-random inputs.

    A sampled lower estimate of the maximum over all pure inputs, capped by
    ``min(dim_out, num_kraus)``, which bounds it exactly.
    """
    from .sampling import SeedSpec, sample_haar_pure_batch

    if trials < 1:
        raise DomainError("trials must be >= 1")
    psis = sample_haar_pure_batch(phi.dim_in, SeedSpec(seed, "output-rank"), trials)
    k = phi.kraus
    # K psi for every Kraus operator; Phi(pi) = A A^dag with A = [K_1 psi, ...]
    a = np.einsum("kij,tj->tik", k, psis)
    w = np.linalg.eigvalsh(a @ a.conj().transpose(0, 2, 1))
    w = np.where(w < CLAMP_TOL * w[:, -1:], 0.0, w)
    best = int(_rank_rows(w).max())
    return min(best, phi.dim_out, phi.num_kraus)


# ---------------------------------------------------------------------------
# standard families

def identity_channel(dim: int) -> Channel:
    return Channel(np.eye(dim)[None])


def unitary_channel(u) -> Channel:
    return Channel(np.asarray(u)[None])


def depolarizing_channel(dim: int, p: float = 1.0) -> Channel:
    """``rho -> (1 - p) rho + p Tr(rho) I / dim``; ``p = 1`` is fully depolarizing.

    Kraus family: ``sqrt(1 - p) I`` and ``sqrt(p / dim) |i><j|`` for all i, j.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError("depolarizing probability must lie in [0, 1]")
    units = np.zeros((dim * dim, dim, dim))
    for i in range(dim):
        for j in range(dim):
            units[i * dim + j, i, j] = 1.0
    ops = [np.sqrt(p / dim) * units]
    if p < 1.0:
        ops.insert(0, np.sqrt(1.0 - p) * np.eye(dim)[None])
    return Channel(np.concatenate(ops))


def bit_flip_channel(p: float) -> Channel:
    """Qubit channel applying Pauli X with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise DomainError("flip probability must lie in [0, 1]")
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    return Channel([np.sqrt(1.0 - p) * np.eye(2), np.sqrt(p) * x])
