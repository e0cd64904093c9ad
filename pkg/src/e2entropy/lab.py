"""Batch experiments: inequality sweeps, conjecture probes, figure tables.

All experiments draw through :mod:`e2entropy.sampling`, so a report is a pure
function of its arguments and trial ``t`` of a run is the same draw no matter
how many trials the run has.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import entr

from .errors import DomainError
from .sampling import SeedSpec, sample_density_batch, sample_simplex_batch
from .serialize import from_pairs, to_pairs
from .spectra import (
    STRICT,
    LogBase,
    _c_nat,
    _classify_rows,
    _e2_rows,
    _gap_rows,
    _s1_rows,
    elementary_symmetric,
)
from .tolerances import GAP_TOL, PROBE_TOL, TOLERANCES

__all__ = [
    "SweepReport",
    "ProbeReport",
    "verify_theorem",
    "probe_concavity",
    "probe_ek_monotone",
    "replay_counterexample",
    "ek_derivatives",
    "fig1_data",
    "fig2_data",
    "fig2_diff",
]

#: Counterexamples kept verbatim in a report; the total is always counted.
MAX_COUNTEREXAMPLES = 100
_CHUNK = 16384
_DISPLACEMENT_RATIO = 0.1


@dataclass
class SweepReport:
    dimension: int
    trials: int
    measure: str
    min_gap: float
    min_gap_trial: int
    violations: int
    equality_hits: list = field(default_factory=list)
    base: str = "e"
    seed: dict = field(default_factory=dict)
    injected: int = 0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SweepReport":
        d = dict(d)
        d["equality_hits"] = [list(h) for h in d["equality_hits"]]
        return cls(**d)


@dataclass
class ProbeReport:
    probe_kind: str
    dimension: int
    trials: int
    worst_margin: float
    worst_trial: int
    counterexample_count: int = 0
    counterexamples: list = field(default_factory=list)
    resampled: int = 0
    base: str = "e"
    seed: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ProbeReport":
        return cls(**d)


def _seed_dict(seed: SeedSpec) -> dict:
    return {"master_seed": seed.master_seed, "stream_label": seed.stream_label}


def _as_seed(seed) -> SeedSpec:
    return seed if isinstance(seed, SeedSpec) else SeedSpec(int(seed))


# ---------------------------------------------------------------------------
# inequality sweep

def _sweep_spectra(n, measure, seed, start, count):
    if measure == "simplex":
        return sample_simplex_batch(n, seed.child("simplex"), count, start)
    if measure == "matrix":
        rho = sample_density_batch(n, n, seed.child("matrix"), count, start)
        return np.clip(np.linalg.eigvalsh(rho), 0.0, None)
    raise DomainError(f"unknown measure {measure!r}; use 'simplex' or 'matrix'")


def verify_theorem(n: int, trials: int, measure: str = "simplex", seed=0,
                   base: LogBase | str = LogBase.NATURAL, inject=()) -> SweepReport:
    """Evaluate the entropy inequality on ``trials`` random instances.

    Parameters
    ----------
    n : int
        Dimension, at least 2.
    measure : {"simplex", "matrix"}
        Flat Dirichlet spectra, or spectra of Hilbert-Schmidt random density
        matrices.
    inject : sequence of array_like
        Extra spectra of length ``n`` evaluated after the random ones, as
        trials ``trials, trials + 1, ...``.

    Returns
    -------
    SweepReport
        ``violations`` counts gaps below ``-GAP_TOL``; ``equality_hits``
        lists ``(trial, classification)`` for every non-strict instance.
    """
    if n < 2:
        raise DomainError("the sweep needs n >= 2")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    b = LogBase.coerce(base)
    seed = _as_seed(seed)
    min_gap, min_trial, violations, hits = np.inf, -1, 0, []

    def consume(X, offset):
        nonlocal min_gap, min_trial, violations
        _, _, _, gap, rank, _, normalized = _gap_rows(X, b.ln)
        i = int(np.argmin(gap))
        if gap[i] < min_gap:
            min_gap, min_trial = float(gap[i]), offset + i
        violations += int(np.count_nonzero(gap < -GAP_TOL))
        cls = _classify_rows(rank, normalized)
        for j in np.flatnonzero(cls != STRICT):
            hits.append([offset + int(j), str(cls[j])])

    for start in range(0, trials, _CHUNK):
        consume(_sweep_spectra(n, measure, seed, start, min(_CHUNK, trials - start)), start)
    inject = [np.sort(np.asarray(s, dtype=float))[::-1] for s in inject]
    if inject:
        if any(s.size != n for s in inject):
            raise DomainError(f"injected spectra must have length {n}")
        consume(np.clip(np.stack(inject), 0.0, None), trials)
    return SweepReport(dimension=n, trials=trials, measure=measure, min_gap=min_gap,
                       min_gap_trial=min_trial, violations=violations, equality_hits=hits,
                       base=b.value, seed=_seed_dict(seed), injected=len(inject))


# ---------------------------------------------------------------------------
# concavity of S1 / sqrt(e2)

def _f_rows(X, ln):
    return _s1_rows(X) / ln / np.sqrt(_e2_rows(X))


def _concavity_margins(P, Q, ln):
    return _f_rows(0.5 * (P + Q), ln) - 0.5 * (_f_rows(P, ln) + _f_rows(Q, ln))


def _matrix_spectra(rho):
    return np.clip(np.linalg.eigvalsh(rho), 0.0, None)


def probe_concavity(n: int, trials: int, level: str = "spectrum", seed=0,
                    base: LogBase | str = LogBase.NATURAL) -> ProbeReport:
    """Midpoint concavity test of ``f = S1 / sqrt(e2)`` on random pairs.

    At ``level="spectrum"`` the pair is two flat-Dirichlet probability
    vectors mixed coordinate-wise; at ``level="matrix"`` two full-rank
    Hilbert-Schmidt density matrices mixed as matrices. The margin is
    ``f(mid) - (f(a) + f(b)) / 2``; a counterexample has margin below
    ``-PROBE_TOL``.
    """
    if n < 2:
        raise DomainError("f needs n >= 2")
    b = LogBase.coerce(base)
    seed = _as_seed(seed)
    worst, worst_trial, count, examples = np.inf, -1, 0, []
    for start in range(0, trials, _CHUNK):
        size = min(_CHUNK, trials - start)
        if level == "spectrum":
            P = sample_simplex_batch(n, seed.child("concavity-a"), size, start)
            Q = sample_simplex_batch(n, seed.child("concavity-b"), size, start)
            margins = _concavity_margins(P, Q, b.ln)
        elif level == "matrix":
            A = sample_density_batch(n, n, seed.child("concavity-a"), size, start)
            B = sample_density_batch(n, n, seed.child("concavity-b"), size, start)
            margins = (_f_rows(_matrix_spectra(0.5 * (A + B)), b.ln)
                       - 0.5 * (_f_rows(_matrix_spectra(A), b.ln)
                                + _f_rows(_matrix_spectra(B), b.ln)))
        else:
            raise DomainError(f"unknown level {level!r}; use 'spectrum' or 'matrix'")
        i = int(np.argmin(margins))
        if margins[i] < worst:
            worst, worst_trial = float(margins[i]), start + i
        for j in np.flatnonzero(margins < -PROBE_TOL):
            count += 1
            if len(examples) < MAX_COUNTEREXAMPLES:
                if level == "spectrum":
                    pair = [P[j].tolist(), Q[j].tolist()]
                else:
                    pair = [to_pairs(A[j]), to_pairs(B[j])]
                examples.append({"trial": start + int(j), "level": level,
                                 "margin": float(margins[j]), "inputs": pair})
    return ProbeReport(probe_kind=f"concavity-{level}", dimension=n, trials=trials,
                       worst_margin=worst, worst_trial=worst_trial,
                       counterexample_count=count, counterexamples=examples,
                       base=b.value, seed=_seed_dict(seed))


def replay_counterexample(record: dict, base: LogBase | str = LogBase.NATURAL) -> float:
    """Recompute the margin of a serialized concavity counterexample."""
    ln = LogBase.coerce(base).ln
    a, b = record["inputs"]
    if record["level"] == "spectrum":
        P, Q = np.array([a], dtype=float), np.array([b], dtype=float)
        return float(_concavity_margins(P, Q, ln)[0])
    A, B = from_pairs(a)[None], from_pairs(b)[None]
    return float(_f_rows(_matrix_spectra(0.5 * (A + B)), ln)[0]
                 - 0.5 * (_f_rows(_matrix_spectra(A), ln)[0]
                          + _f_rows(_matrix_spectra(B), ln)[0]))


# ---------------------------------------------------------------------------
# monotonicity of S in e_2 ... e_N at fixed e_1 = 1

def _reduced_jacobian(x: np.ndarray) -> np.ndarray:
    """``d(e_2..e_N) / d(x_2..x_N)`` with ``x_1 = 1 - sum(x_2..x_N)``.

    ``d e_k / d x_m = e_{k-1}(x without x_m)``.
    """
    n = x.size
    minus = np.empty((n, n))  # minus[m] = (1, e_1, ..., e_{n-1}) of x without x_m
    for m in range(n):
        minus[m, 0] = 1.0
        minus[m, 1:] = elementary_symmetric(np.delete(x, m))
    # row k-2 for e_k, k = 2..n, uses e_{k-1}; columns m = 2..n minus column 1
    return (minus[1:, 1:n] - minus[0, 1:n]).T


def ek_derivatives(x, rel_step: float = 1e-5, base: LogBase | str = LogBase.NATURAL):
    """Central-difference ``dS/de_k`` for ``k = 2..N`` at fixed ``e_1``.

    For each ``k`` the perturbation direction solves the reduced Jacobian
    system for a unit change in ``e_k`` with the other ``e_j`` held fixed.
    The step is ``rel_step * e_k``, with one Richardson refinement.

    Returns None for spectra too close to degenerate for that step: the
    Jacobian is numerically singular, or the displacement exceeds
    ``_DISPLACEMENT_RATIO`` times the smallest entry or the smallest gap
    between entries, where the higher-order terms swamp the difference.
    """
    ln = LogBase.coerce(base).ln
    x = np.asarray(x, dtype=float)
    n = x.size
    J = _reduced_jacobian(x)
    if np.linalg.cond(J) > 1e12:
        return None
    tails = np.linalg.solve(J, np.eye(n - 1))
    e = elementary_symmetric(x)
    srt = np.sort(x)
    scale = min(srt[0], np.diff(srt).min())
    out = np.empty(n - 1)
    for k in range(2, n + 1):
        tail = tails[:, k - 2]
        direction = np.concatenate([[-tail.sum()], tail])
        h = rel_step * e[k - 1]
        if h * np.abs(direction).max() > _DISPLACEMENT_RATIO * scale:
            return None
        d = []
        for step in (h, 0.5 * h):
            lo, hi = x - step * direction, x + step * direction
            if lo.min() <= 0 or hi.min() <= 0:
                return None
            d.append((entr(hi).sum() - entr(lo).sum()) / ln / (2.0 * step))
        out[k - 2] = (4.0 * d[1] - d[0]) / 3.0
    return out


def probe_ek_monotone(n: int, trials: int, seed=0,
                      base: LogBase | str = LogBase.NATURAL,
                      max_resample: int = 256) -> ProbeReport:
    """Sign test of ``dS/de_k`` for ``k = 2..n`` on random interior spectra.

    A trial whose Jacobian is singular or whose step leaves the simplex is
    redrawn from a retry stream and counted in ``resampled``. The margin of
    a trial is its smallest derivative over ``k``.
    """
    if n < 2:
        raise DomainError("the probe needs n >= 2")
    b = LogBase.coerce(base)
    seed = _as_seed(seed)
    worst, worst_trial, count, examples, resampled = np.inf, -1, 0, [], 0
    base_draws = sample_simplex_batch(n, seed.child("ek-monotone"), trials)
    for t in range(trials):
        x = base_draws[t]
        for attempt in range(max_resample + 1):
            if attempt:
                resampled += 1
                x = sample_simplex_batch(n, seed.child(f"ek-monotone/retry{attempt}"), 1, t)[0]
            derivs = ek_derivatives(x, base=b)
            if derivs is not None:
                break
        else:
            raise DomainError(f"trial {t}: no usable spectrum after {max_resample} redraws")
        margin = float(min(derivs))
        if margin < worst:
            worst, worst_trial = margin, t
        if margin < -PROBE_TOL:
            count += 1
            if len(examples) < MAX_COUNTEREXAMPLES:
                examples.append({"trial": t, "margin": margin, "spectrum": x.tolist(),
                                 "derivatives": [float(d) for d in derivs]})
    return ProbeReport(probe_kind="ek-monotone", dimension=n, trials=trials,
                       worst_margin=worst, worst_trial=worst_trial,
                       counterexample_count=count, counterexamples=examples,
                       resampled=resampled, base=b.value, seed=_seed_dict(seed))


# ---------------------------------------------------------------------------
# figure data

def fig1_data(resolution: int, base: LogBase | str = LogBase.NATURAL) -> np.ndarray:
    """Rows ``(x, S, 2 log(2) sqrt(x(1-x)))`` for ``x = i / resolution``."""
    if resolution < 2:
        raise DomainError("resolution must be >= 2")
    ln = LogBase.coerce(base).ln
    x = np.arange(resolution + 1) / resolution
    y = 1.0 - x
    s = (entr(x) + entr(y)) / ln
    bound = 2.0 * np.log(2.0) / ln * np.sqrt(x * y)
    return np.column_stack([x, s, bound])


def fig2_diff(x, y, base: LogBase | str = LogBase.NATURAL):
    """``c_3 sqrt(e2) - S`` at eigenvalues ``(x, y, 1 - x - y)``."""
    ln = LogBase.coerce(base).ln
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    X = np.stack([x, y, np.clip(1.0 - x - y, 0.0, None)], axis=-1)
    return _c_nat(3) / ln * np.sqrt(_e2_rows(X)) - entr(X).sum(axis=-1) / ln


def fig2_data(resolution: int, base: LogBase | str = LogBase.NATURAL,
              include_center: bool = True) -> np.ndarray:
    """Rows ``(x, y, diff)`` over the grid ``x = i/R, y = j/R, i + j <= R``.

    With ``include_center`` the centroid ``(1/3, 1/3)`` is appended as a last
    row when the grid misses it (``R`` not divisible by 3).
    """
    if resolution < 2:
        raise DomainError("resolution must be >= 2")
    i, j = np.meshgrid(np.arange(resolution + 1), np.arange(resolution + 1), indexing="ij")
    keep = (i + j) <= resolution
    x, y = i[keep] / resolution, j[keep] / resolution
    if include_center and resolution % 3:
        x, y = np.append(x, 1.0 / 3.0), np.append(y, 1.0 / 3.0)
    return np.column_stack([x, y, fig2_diff(x, y, base)])


def tolerance_record() -> dict:
    return dict(TOLERANCES)
