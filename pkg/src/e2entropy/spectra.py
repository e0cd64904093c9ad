"""Spectral quantities: entropy, homogenized entropy, symmetric polynomials.

The central object is the ratio ``f = S1 / sqrt(e2)`` of the homogenized von
Neumann entropy to the square root of the second elementary symmetric
polynomial of a spectrum. It is bounded above by

    c_N = log(N) * sqrt(2N / (N - 1)),

with equality exactly at rank-one spectra (both sides vanish) and at spectra
proportional to the identity.

Every public function takes a :class:`Spectrum` or anything array-like that
:class:`Spectrum` accepts. The row-wise kernels prefixed ``_`` operate on
stacked spectra (2-D arrays, one spectrum per row) and are what the batch
experiments in :mod:`e2entropy.lab` call, so single and batch evaluations
share one code path.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.special import entr

from .errors import DomainError, NotPSDError, PreconditionError, UndefinedRatioError
from .tolerances import CLAMP_TOL, EQ_TOL, HERM_TOL, RANK_TOL, TRACE_TOL

__all__ = [
    "LogBase",
    "Spectrum",
    "GapReport",
    "RANK_ONE_EQUALITY",
    "UNIFORM_EQUALITY",
    "STRICT",
    "as_hermitian",
    "as_density",
    "eta",
    "entropy",
    "s1",
    "e2_from_spectrum",
    "e2_from_matrix",
    "elementary_symmetric",
    "c_constant",
    "ratio_f",
    "inequality_gap",
    "numerical_rank",
    "grad_s1",
    "grad_e2",
    "grad_f",
    "eigenvalues",
]

RANK_ONE_EQUALITY = "rank-one-equality"
UNIFORM_EQUALITY = "uniform-equality"
STRICT = "strict"


class LogBase(enum.Enum):
    """Logarithm base used for every entropic quantity of one computation."""

    NATURAL = "e"
    BASE2 = "2"
    BASE10 = "10"

    @classmethod
    def coerce(cls, base: "LogBase | str | int | float | None") -> "LogBase":
        if base is None:
            return cls.NATURAL
        if isinstance(base, cls):
            return base
        key = str(base).strip().lower()
        aliases = {"e": "e", "natural": "e", "ln": "e", "2": "2", "2.0": "2",
                   "base-2": "2", "bits": "2", "10": "10", "10.0": "10",
                   "base-10": "10"}
        if key not in aliases:
            raise DomainError(f"unsupported log base {base!r}")
        return cls(aliases[key])

    @property
    def ln(self) -> float:
        """Natural log of the base; divide natural-unit entropies by this."""
        return {"e": 1.0, "2": np.log(2.0), "10": np.log(10.0)}[self.value]


class Spectrum:
    """Non-negative eigenvalue vector, stored in non-increasing order.

    Entries in ``(-clamp_tol * max|x|, 0)`` are clamped to zero; anything more
    negative raises :class:`NotPSDError`. The stored array is read-only.
    """

    __slots__ = ("_values",)

    def __init__(self, values, clamp_tol: float = CLAMP_TOL):
        if isinstance(values, Spectrum):
            self._values = values._values
            return
        x = np.array(values, dtype=float).ravel()
        if x.size == 0:
            raise DomainError("a spectrum needs at least one entry")
        if not np.all(np.isfinite(x)):
            raise DomainError("spectrum entries must be finite")
        scale = np.max(np.abs(x))
        if np.any(x < -clamp_tol * scale):
            raise NotPSDError(f"negative spectrum entry {x.min():.3e}")
        x[x < 0] = 0.0
        x = np.sort(x)[::-1].copy()
        x.flags.writeable = False
        self._values = x

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def trace(self) -> float:
        return float(self._values.sum())

    def __len__(self):
        return self._values.size

    def __iter__(self):
        return iter(self._values.tolist())

    def __getitem__(self, i):
        return self._values[i]

    def __array__(self, dtype=None, copy=None):
        return np.array(self._values, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        return np.array_equal(self._values, other._values)

    def __hash__(self):
        return hash(self._values.tobytes())

    def __repr__(self):
        return f"Spectrum({self._values.tolist()})"

    def scaled(self, factor: float) -> "Spectrum":
        if factor < 0:
            raise DomainError("scale factor must be non-negative")
        return Spectrum(self._values * factor)


@dataclass(frozen=True)
class GapReport:
    """Both sides of ``S1 <= c_n sqrt(e2)`` and the equality classification."""

    s1: float
    e2: float
    cN: float
    gap: float
    classification: str
    n: int
    rank: int
    base: str = "e"


def _values(s) -> np.ndarray:
    return Spectrum(s).values


# ---------------------------------------------------------------------------
# row-wise kernels, natural-log units

def _rest_sums(X: np.ndarray):
    """Exclusive prefix and suffix sums along the last axis (no subtraction)."""
    zero = np.zeros_like(X[..., :1])
    before = np.concatenate([zero, np.cumsum(X[..., :-1], axis=-1)], axis=-1)
    after = np.concatenate([np.cumsum(X[..., :0:-1], axis=-1)[..., ::-1], zero], axis=-1)
    return before, after


def _s1_rows(X: np.ndarray) -> np.ndarray:
    # sum x_i log(1 + rest_i / x_i), rest_i the sum of the other entries:
    # equal to sum eta(x_i) - eta(x) but every term is non-negative
    before, after = _rest_sums(X)
    rest = before + after
    terms = np.zeros_like(X)
    big = (X > 0) & (X >= rest)
    small = (X > 0) & (X < rest)
    terms[big] = X[big] * np.log1p(rest[big] / X[big])
    # split the log so subnormal x_i cannot overflow rest / x_i
    xs, rs = X[small], rest[small]
    terms[small] = xs * (np.log(rs) - np.log(xs) + np.log1p(xs / rs))
    return terms.sum(axis=-1)


def _e2_rows(X: np.ndarray) -> np.ndarray:
    # sum_i x_i * sum_{j>i} x_j; same value as ((sum x)^2 - sum x^2) / 2
    # without the cancellation near rank one
    _, after = _rest_sums(X)
    return (X * after).sum(axis=-1)


def _rank_rows(X: np.ndarray) -> np.ndarray:
    top = X.max(axis=-1, keepdims=True)
    return np.count_nonzero((X > RANK_TOL * top) & (X > 0), axis=-1)


def _c_nat(n) -> np.ndarray:
    n = np.asarray(n, dtype=float)
    return np.log(n) * np.sqrt(2.0 * n / (n - 1.0))


def _gap_rows(X: np.ndarray, ln_base: float = 1.0, n=None):
    """Return ``(s1, e2, c, gap, rank, n_used, normalized_gap)`` per row.

    ``n`` defaults to the support size (count of positive entries), not the
    numerical rank: entries below the rank threshold still add to S1, and
    dropping them from ``n`` can break the inequality by more than GAP_TOL.
    """
    s1_ = _s1_rows(X) / ln_base
    e2 = _e2_rows(X)
    rank = _rank_rows(X)
    support = np.count_nonzero(X > 0, axis=-1)
    n_used = support if n is None else np.broadcast_to(np.asarray(n), rank.shape)
    n_used = np.maximum(n_used, 2)
    c = _c_nat(n_used) / ln_base
    root = np.sqrt(e2)
    gap = c * root - s1_
    normalized = gap / (c * np.maximum(np.maximum(root, s1_), 1.0))
    return s1_, e2, c, gap, rank, n_used, normalized


def _classify_rows(rank: np.ndarray, normalized: np.ndarray) -> np.ndarray:
    out = np.full(rank.shape, STRICT, dtype=object)
    out[np.abs(normalized) <= EQ_TOL] = UNIFORM_EQUALITY
    out[rank <= 1] = RANK_ONE_EQUALITY
    return out


# ---------------------------------------------------------------------------
# matrices

def as_hermitian(m) -> np.ndarray:
    """Validate a square conjugate-symmetric matrix and return it as complex.

    The returned array is the exact Hermitian part ``(m + m^dag) / 2``.
    """
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DomainError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix entries must be finite")
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(a - a.conj().T)) > HERM_TOL * scale:
        raise DomainError("matrix is not Hermitian")
    return 0.5 * (a + a.conj().T)


def as_density(m) -> np.ndarray:
    """Validate a density matrix: Hermitian, PSD within CLAMP_TOL, unit trace."""
    a = as_hermitian(m)
    tr = np.trace(a).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise PreconditionError(f"density matrix trace is {tr!r}, expected 1")
    w = np.linalg.eigvalsh(a)
    if w[0] < -CLAMP_TOL * max(1.0, abs(w[-1])):
        raise NotPSDError(f"density matrix has eigenvalue {w[0]:.3e}")
    return a


def eigenvalues(m) -> Spectrum:
    """Spectrum of a PSD Hermitian matrix, tiny negative eigenvalues clamped."""
    a = as_hermitian(m)
    return Spectrum(np.linalg.eigvalsh(a))


# ---------------------------------------------------------------------------
# scalar and spectral quantities

def eta(x, base: LogBase | str = LogBase.NATURAL):
    """``-x log x`` with ``eta(0) = 0``.

    Accepts a scalar or an array; a scalar input returns a float.
    """
    b = LogBase.coerce(base)
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise DomainError("eta is defined for x >= 0 only")
    out = entr(arr) / b.ln
    return float(out) if out.ndim == 0 else out


def entropy(s, base: LogBase | str = LogBase.NATURAL) -> float:
    """Von Neumann entropy of a unit-trace spectrum."""
    x = _values(s)
    if abs(x.sum() - 1.0) > TRACE_TOL:
        raise PreconditionError(
            f"entropy needs a unit-trace spectrum (trace {x.sum()!r}); use s1")
    return float(entr(x).sum() / LogBase.coerce(base).ln)


def s1(s, base: LogBase | str = LogBase.NATURAL) -> float:
    """Homogenized entropy ``sum eta(x_i) - eta(sum x_i)``, degree one."""
    x = _values(s)
    return float(_s1_rows(x) / LogBase.coerce(base).ln)


def e2_from_spectrum(s) -> float:
    """Second elementary symmetric polynomial ``sum_{i<j} x_i x_j``.

    Evaluated as ``sum_i x_i (x_{i+1} + ... + x_N)``, which equals
    ``((sum x)^2 - sum x^2) / 2`` but keeps full relative precision when one
    entry dominates.
    """
    return float(_e2_rows(_values(s)))


def e2_from_matrix(m, check_psd: bool = True) -> float:
    """``((Tr m)^2 - Tr m^2) / 2`` from traces, with no eigendecomposition.

    ``check_psd`` validates positivity (which does need eigenvalues); pass
    False when the caller already knows ``m`` is PSD.
    """
    a = as_hermitian(m)
    if check_psd:
        w = np.linalg.eigvalsh(a)
        if w[0] < -CLAMP_TOL * max(1.0, abs(w[-1])):
            raise NotPSDError(f"matrix has eigenvalue {w[0]:.3e}")
    t = np.trace(a).real
    # Tr m^2 = sum |m_ij|^2 for Hermitian m
    t2 = float(np.sum(a.real ** 2 + a.imag ** 2))
    return max(0.5 * (t * t - t2), 0.0)


def elementary_symmetric(s) -> np.ndarray:
    """All of ``e_1 ... e_N``, read off the coefficients of prod(lambda - x_i).

    The product is multiplied out one factor at a time, so no subsets are
    enumerated.
    """
    x = _values(s)
    e = np.zeros(x.size + 1)
    e[0] = 1.0
    for xi in x:
        e[1:] = e[1:] + xi * e[:-1]
    return e[1:]


def c_constant(n: int, base: LogBase | str = LogBase.NATURAL) -> float:
    """``log(n) * sqrt(2n / (n - 1))``, strictly increasing in ``n``."""
    if int(n) != n or n < 2:
        raise DomainError(f"c_constant needs an integer n >= 2, got {n!r}")
    return float(_c_nat(int(n)) / LogBase.coerce(base).ln)


def numerical_rank(s) -> int:
    """Number of entries above ``RANK_TOL`` times the largest entry."""
    return int(_rank_rows(_values(s)))


def ratio_f(s, base: LogBase | str = LogBase.NATURAL) -> float:
    x = _values(s)
    if _rank_rows(x) < 2:
        raise UndefinedRatioError("S1 / sqrt(e2) is 0/0 below rank 2")
    return float(_s1_rows(x) / LogBase.coerce(base).ln / np.sqrt(_e2_rows(x)))


def inequality_gap(s, base: LogBase | str = LogBase.NATURAL,
                   n_override: int | None = None) -> GapReport:
    """Evaluate ``c_n sqrt(e2) - S1`` and classify the equality case.

    ``n`` defaults to the number of positive entries. ``n_override`` may not
    be below the numerical rank. Spectra with a single positive entry are
    reported with ``n = 2``: both sides vanish and ``c_1`` is not defined.

    Classification: numerical rank <= 1 gives ``"rank-one-equality"``; a
    normalized gap ``gap / (c_n max(sqrt(e2), S1, 1))`` within ``EQ_TOL``
    gives ``"uniform-equality"``; anything else is ``"strict"``.
    """
    b = LogBase.coerce(base)
    x = _values(s)
    if n_override is not None:
        if int(n_override) != n_override or n_override < 1:
            raise DomainError(f"n_override must be a positive integer, got {n_override!r}")
        rank = int(_rank_rows(x))
        if n_override < rank:
            raise DomainError(
                f"n_override={n_override} is below the rank {rank}; "
                "the inequality is not guaranteed there")
    s1_, e2, c, gap, rank, n_used, normalized = _gap_rows(x, b.ln, n_override)
    return GapReport(
        s1=float(s1_), e2=float(e2), cN=float(c), gap=float(gap),
        classification=str(_classify_rows(np.atleast_1d(rank),
                                          np.atleast_1d(normalized))[0]),
        n=int(n_used), rank=int(rank), base=b.value)


# ---------------------------------------------------------------------------
# gradients on the open positive orthant

def _interior(s) -> np.ndarray:
    x = np.asarray(s.values if isinstance(s, Spectrum) else s, dtype=float).ravel()
    if x.size == 0 or np.any(~np.isfinite(x)) or np.any(x <= 0):
        raise DomainError("gradients need strictly positive entries")
    return x


def grad_s1(s, base: LogBase | str = LogBase.NATURAL) -> np.ndarray:
    """``d S1 / d x_m = log(x / x_m)`` with ``x = sum x_m``.

    Component order follows the input order; a :class:`Spectrum` is sorted.
    """
    x = _interior(s)
    return np.log(x.sum() / x) / LogBase.coerce(base).ln


def grad_e2(s) -> np.ndarray:
    """``d e2 / d x_m = x - x_m``."""
    x = np.asarray(s.values if isinstance(s, Spectrum) else s, dtype=float).ravel()
    return x.sum() - x


def grad_f(s, base: LogBase | str = LogBase.NATURAL) -> np.ndarray:
    """Gradient of ``S1 / sqrt(e2)``.

    Since the ratio is homogeneous of degree zero, ``x . grad_f(x) = 0``.
    """
    x = _interior(s)
    if x.size < 2:
        raise DomainError("grad_f needs at least two positive entries")
    ln = LogBase.coerce(base).ln
    e2 = float(_e2_rows(x))
    s1_ = float(_s1_rows(x)) / ln
    return (np.log(x.sum() / x) / ln) / np.sqrt(e2) - 0.5 * (x.sum() - x) * s1_ / e2 ** 1.5
