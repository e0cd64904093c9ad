"""Seedable random spectra, pure states, density matrices and channels.

Randomness is counter-style: a draw is a pure function of
``(master_seed, stream_label, trial)``. Trials are grouped in blocks of
:data:`BLOCK` that share one generator keyed by the block index, so batch
draws cost one generator per thousand trials while a single draw still
depends on nothing but its own coordinates.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .channels import Channel
from .errors import DomainError
from .spectra import Spectrum

__all__ = [
    "SeedSpec",
    "BLOCK",
    "sample_simplex",
    "sample_simplex_batch",
    "sample_haar_pure",
    "sample_haar_pure_batch",
    "sample_density",
    "sample_density_batch",
    "sample_channel",
    "haar_unitary",
]

BLOCK = 1024
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    stream_label: str = "default"

    def child(self, suffix: str) -> "SeedSpec":
        return SeedSpec(self.master_seed, f"{self.stream_label}/{suffix}")


def _word(text: str) -> int:
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "little")


def _block_rng(seed: SeedSpec, kind: str, block: int) -> np.random.Generator:
    key = [seed.master_seed & _MASK64, (seed.master_seed >> 64) & _MASK64,
           _word(seed.stream_label), _word(kind), block]
    return np.random.default_rng(np.random.SeedSequence(key))


def _batch(draw_block, seed: SeedSpec, kind: str, start: int, count: int) -> np.ndarray:
    """Concatenate the rows ``start .. start+count`` of the block draws."""
    if start < 0 or count < 0:
        raise DomainError("trial indices must be non-negative")
    if count == 0:
        return draw_block(_block_rng(seed, kind, 0))[:0]
    first, last = start // BLOCK, (start + count - 1) // BLOCK
    parts = [draw_block(_block_rng(seed, kind, b)) for b in range(first, last + 1)]
    rows = np.concatenate(parts, axis=0) if len(parts) > 1 else parts[0]
    offset = start - first * BLOCK
    return rows[offset:offset + count]


def _complex_normal(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


# ---------------------------------------------------------------------------

def sample_simplex_batch(n: int, seed: SeedSpec, count: int, start: int = 0) -> np.ndarray:
    """Flat-Dirichlet probability vectors, one per row, in draw order (unsorted)."""
    if n < 1:
        raise DomainError("simplex dimension must be >= 1")

    def draw(rng):
        g = rng.standard_exponential((BLOCK, n))
        return g / g.sum(axis=1, keepdims=True)

    return _batch(draw, seed, f"simplex:{n}", start, count)


def sample_simplex(n: int, seed: SeedSpec, trial: int) -> Spectrum:
    """Uniformly distributed point of the probability simplex, as a Spectrum."""
    return Spectrum(sample_simplex_batch(n, seed, 1, trial)[0])


def sample_haar_pure_batch(n: int, seed: SeedSpec, count: int, start: int = 0) -> np.ndarray:
    if n < 1:
        raise DomainError("state dimension must be >= 1")

    def draw(rng):
        z = _complex_normal(rng, (BLOCK, n))
        return z / np.linalg.norm(z, axis=1, keepdims=True)

    return _batch(draw, seed, f"haar-pure:{n}", start, count)


def sample_haar_pure(n: int, seed: SeedSpec, trial: int) -> np.ndarray:
    """Unit vector with the unitarily invariant distribution."""
    return sample_haar_pure_batch(n, seed, 1, trial)[0]


def sample_density_batch(n: int, rank: int, seed: SeedSpec, count: int,
                         start: int = 0) -> np.ndarray:
    """Stack of ``G G^dag / Tr(G G^dag)`` with ``G`` an n x rank Ginibre matrix."""
    if not 1 <= rank <= n:
        raise DomainError(f"rank must lie in [1, {n}], got {rank}")

    def draw(rng):
        return _complex_normal(rng, (BLOCK, n, rank))

    g = _batch(draw, seed, f"density:{n}:{rank}", start, count)
    rho = g @ g.conj().transpose(0, 2, 1)
    tr = np.trace(rho, axis1=1, axis2=2).real
    rho /= tr[:, None, None]
    return 0.5 * (rho + rho.conj().transpose(0, 2, 1))


def sample_density(n: int, rank: int, seed: SeedSpec, trial: int) -> np.ndarray:
    """Random density matrix; Hilbert-Schmidt distributed when ``rank == n``."""
    return sample_density_batch(n, rank, seed, 1, trial)[0]


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary from QR of a Ginibre matrix with the phases of R fixed."""
    q, r = np.linalg.qr(_complex_normal(rng, (n, n)))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def sample_channel(d_in: int, d_out: int, k: int, seed: SeedSpec, trial: int) -> Channel:
    """Random channel from a Haar isometry ``C^d_in -> C^d_out (x) C^k``.

    Kraus operator ``j`` is the row block ``j*d_out : (j+1)*d_out`` of the
    isometry, so ``sum K_j^dag K_j = V^dag V = I``.
    """
    if k < 1 or d_in < 1 or d_out < 1:
        raise DomainError("channel dimensions and Kraus count must be >= 1")
    if k * d_out < d_in:
        raise DomainError(f"no isometry from dimension {d_in} into {k}*{d_out}")
    block, offset = divmod(trial, BLOCK)
    rng = _block_rng(seed, f"channel:{d_in}:{d_out}:{k}", block)
    # isometries inside a block are drawn sequentially; skip to ours
    z = _complex_normal(rng, (BLOCK, k * d_out, d_in))[offset]
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    v = q * (d / np.abs(d))
    return Channel(v.reshape(k, d_out, d_in))
