"""Convex-roof estimators and the three channel/entanglement bounds.

Every decomposition of a density matrix ``rho = W W^dag`` (``W`` the weighted
eigenvectors, ``dim x r``) into ``m >= r`` pure states has the form
``psi~_i = sum_j U_ij w_j`` with ``U`` an ``m x r`` isometry. We search over
``U = U0 exp(iH)`` restricted to its first ``r`` columns, with ``H`` Hermitian
and given by ``m^2`` real generator angles, using a derivative-free
coordinate search. Restart 0 starts from the eigendecomposition itself, so a
reported roof value never exceeds the eigen-ensemble value. All roof values
are upper estimates of the true minima.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.special import entr

from .channels import BipartiteShape, Channel, _apply, output_rank_estimate
from .errors import DomainError
from .sampling import SeedSpec, _block_rng, haar_unitary, sample_haar_pure
from .serialize import from_pairs, to_pairs
from .spectra import LogBase, _rank_rows, as_density
from .tolerances import CLAMP_TOL, ENS_TOL, NORM_TOL, TRACE_TOL

__all__ = [
    "Ensemble",
    "RoofConfig",
    "BoundReport",
    "decompose_via_isometry",
    "roof_objective_ef",
    "roof_objective_concurrence",
    "minimize_roof",
    "ef_bound_from_concurrence",
    "min_output_entropy_bound",
    "holevo_lower_bound",
    "roof_coefficient",
]

# members lighter than this are dropped from a decomposition
_WEIGHT_FLOOR = 1e-15
# a trial step must beat the incumbent by more than rounding to be accepted
_IMPROVE_TOL = 1e-14


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Weighted pure states ``{p_i, psi_i}``; ``states`` has one state per row."""

    weights: np.ndarray
    states: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.weights, dtype=float).ravel()
        psi = np.atleast_2d(np.asarray(self.states, dtype=complex))
        if p.size == 0 or psi.shape[0] != p.size:
            raise DomainError("ensemble needs one weight per state, at least one member")
        if np.any(p <= 0):
            raise DomainError("ensemble weights must be positive")
        if abs(p.sum() - 1.0) > TRACE_TOL:
            raise DomainError(f"ensemble weights sum to {p.sum()!r}")
        if np.max(np.abs(np.linalg.norm(psi, axis=1) - 1.0)) > NORM_TOL:
            raise DomainError("ensemble states must be unit vectors")
        object.__setattr__(self, "weights", p)
        object.__setattr__(self, "states", psi)

    @classmethod
    def checked(cls, weights, states, target) -> "Ensemble":
        """Build and verify that the mixture reproduces ``target`` within ENS_TOL."""
        ens = cls(weights, states)
        err = np.max(np.abs(ens.density() - np.asarray(target)))
        if err > ENS_TOL:
            raise DomainError(f"ensemble does not recombine to the target (error {err:.3e})")
        return ens

    @property
    def target_dim(self) -> int:
        return self.states.shape[1]

    def __len__(self):
        return self.weights.size

    def density(self) -> np.ndarray:
        return np.einsum("i,ij,ik->jk", self.weights, self.states, self.states.conj())

    def to_dict(self) -> dict:
        return {"type": "ensemble", "weights": self.weights.tolist(),
                "states": to_pairs(self.states)}

    @classmethod
    def from_dict(cls, d: dict) -> "Ensemble":
        return cls(np.array(d["weights"], dtype=float), from_pairs(d["states"]))


@dataclass(frozen=True)
class RoofConfig:
    """Optimizer policy. ``ensemble_size=None`` means the rank of the target."""

    ensemble_size: int | None = None
    restarts: int = 4
    max_iters: int = 500
    step_tol: float = 1e-7
    initial_step: float = 0.3
    seed: int = 0
    rank_trials: int = 64

    def __post_init__(self):
        if self.restarts < 1:
            raise DomainError("restarts must be >= 1")
        if self.max_iters < 0 or self.step_tol <= 0 or self.initial_step <= 0:
            raise DomainError("invalid optimizer limits")


@dataclass
class BoundReport:
    """Bound value, the state(s) attaining it and the optimizer record.

    ``quantities`` holds the side values of each estimator (direct estimates,
    roof estimates, coefficients). ``history`` is the best-so-far objective
    after every accepted step, across restarts.
    """

    kind: str
    bound_value: float
    certificate: object
    n_used: int
    iterations: int
    converged: bool
    quantities: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    history: list = field(default_factory=list)

    def to_dict(self) -> dict:
        if isinstance(self.certificate, Ensemble):
            cert = self.certificate.to_dict()
        else:
            cert = {"type": "pure-state", "state": to_pairs(self.certificate)}
        return {"kind": self.kind, "bound_value": float(self.bound_value),
                "certificate": cert, "n_used": int(self.n_used),
                "iterations": int(self.iterations), "converged": bool(self.converged),
                "quantities": {k: float(v) for k, v in self.quantities.items()},
                "config": dict(self.config), "history": [float(h) for h in self.history]}

    @classmethod
    def from_dict(cls, d: dict) -> "BoundReport":
        cert = d["certificate"]
        if cert["type"] == "ensemble":
            certificate = Ensemble.from_dict(cert)
        else:
            certificate = from_pairs(cert["state"])
        return cls(kind=d["kind"], bound_value=d["bound_value"], certificate=certificate,
                   n_used=d["n_used"], iterations=d["iterations"], converged=d["converged"],
                   quantities=dict(d["quantities"]), config=dict(d["config"]),
                   history=list(d["history"]))


# ---------------------------------------------------------------------------
# decompositions

def _support(rho: np.ndarray):
    """Weighted eigenvectors ``W`` (columns) spanning the support of rho."""
    w, v = np.linalg.eigh(rho)
    keep = w > CLAMP_TOL * max(w[-1], 0.0)
    w, v = w[keep][::-1], v[:, keep][:, ::-1]
    return v * np.sqrt(w)


def _generator(m: int, params: np.ndarray) -> np.ndarray:
    """Hermitian ``m x m`` matrix from ``m^2`` real angles."""
    params = np.asarray(params, dtype=float).ravel()
    if params.size != m * m:
        raise DomainError(f"expected {m * m} generator angles, got {params.size}")
    h = np.diag(params[:m]).astype(complex)
    iu = np.triu_indices(m, 1)
    k = iu[0].size
    h[iu] = params[m:m + k] + 1j * params[m + k:]
    h[(iu[1], iu[0])] = np.conj(h[iu])
    return h


def _isometry(m: int, r: int, params, base: np.ndarray | None) -> np.ndarray:
    u = expm(1j * _generator(m, params))
    if base is not None:
        u = base @ u
    return u[:, :r]


def _ensemble_from_support(W: np.ndarray, u: np.ndarray, target: np.ndarray) -> Ensemble:
    vecs = u @ W.T
    p = np.sum(vecs.real ** 2 + vecs.imag ** 2, axis=1)
    keep = p > _WEIGHT_FLOOR
    p, vecs = p[keep], vecs[keep]
    states = vecs / np.sqrt(p)[:, None]
    return Ensemble.checked(p / p.sum(), states, target)


def decompose_via_isometry(rho, m: int, params=None, base_unitary=None) -> Ensemble:
    """Pure-state decomposition of ``rho`` with ``m`` members.

    Parameters
    ----------
    rho : array_like
        Density matrix.
    m : int
        Number of members, at least ``rank(rho)``. Members of zero weight are
        dropped, so the result can be shorter.
    params : array_like of length ``m**2``, optional
        Generator angles; zeros (the default) give the eigendecomposition.
    base_unitary : array_like, optional
        ``m x m`` unitary applied before the generator.
    """
    r_ = as_density(rho)
    W = _support(r_)
    r = W.shape[1]
    if m < r:
        raise DomainError(f"ensemble size {m} is below the rank {r}")
    if params is None:
        params = np.zeros(m * m)
    return _ensemble_from_support(W, _isometry(m, r, params, base_unitary), r_)


# ---------------------------------------------------------------------------
# objectives

def _reduced_states(ens: Ensemble, shape: BipartiteShape) -> np.ndarray:
    if ens.target_dim != shape.total:
        raise DomainError(f"ensemble dimension {ens.target_dim} != {shape.dim_a}*{shape.dim_b}")
    amp = ens.states.reshape(len(ens), shape.dim_a, shape.dim_b)
    # Tr_B |psi><psi| = M M^dag with M the dim_a x dim_b amplitude matrix
    return amp @ amp.conj().transpose(0, 2, 1)


def _spectra(mats: np.ndarray) -> np.ndarray:
    return np.clip(np.linalg.eigvalsh(mats), 0.0, None)


def _sqrt_e2(mats: np.ndarray) -> np.ndarray:
    t = np.trace(mats, axis1=1, axis2=2).real
    t2 = np.sum(mats.real ** 2 + mats.imag ** 2, axis=(1, 2))
    return np.sqrt(np.maximum(0.5 * (t * t - t2), 0.0))


def _member_ranks(mats: np.ndarray) -> np.ndarray:
    return _rank_rows(_spectra(mats))


def roof_objective_ef(ens: Ensemble, shape: BipartiteShape,
                      base: LogBase | str = LogBase.NATURAL) -> float:
    """``sum_i p_i S(Tr_B pi_i)``."""
    ln = LogBase.coerce(base).ln
    s = entr(_spectra(_reduced_states(ens, shape))).sum(axis=1) / ln
    return float(ens.weights @ s)


def roof_objective_concurrence(ens: Ensemble, shape: BipartiteShape) -> float:
    """``2 sum_i p_i sqrt(e2(Tr_B pi_i))``."""
    return float(2.0 * ens.weights @ _sqrt_e2(_reduced_states(ens, shape)))


def roof_coefficient(n: int, base: LogBase | str = LogBase.NATURAL) -> float:
    """``log(n) sqrt(n / (2(n - 1)))``, half of ``c_n``; zero at ``n = 1``.

    At ``n = 1`` every state involved is pure, both sides of the termwise
    inequality vanish and the coefficient is taken as its limit value 0.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if n == 1:
        return 0.0
    return float(np.log(n) * np.sqrt(n / (2.0 * (n - 1.0))) / LogBase.coerce(base).ln)


def ef_bound_from_concurrence(c_value: float, n: int,
                              base: LogBase | str = LogBase.NATURAL) -> float:
    """Entanglement-of-formation upper bound from a concurrence value."""
    if c_value < 0:
        raise DomainError("concurrence must be non-negative")
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")
    return roof_coefficient(n, base) * float(c_value)


# ---------------------------------------------------------------------------
# optimizer

def _coordinate_search(fun, x0, step, step_tol, max_sweeps, project=None):
    """Minimize ``fun`` by +/- steps along each coordinate, halving on failure.

    Returns ``(x, fx, trace, converged)``; ``trace`` is the starting value
    followed by the value after every accepted step.
    """
    x = np.array(x0, dtype=float)
    fx = fun(x)
    trace = [fx]
    sweeps = 0
    while step >= step_tol and sweeps < max_sweeps:
        sweeps += 1
        improved = False
        for i in range(x.size):
            for sign in (1.0, -1.0):
                y = x.copy()
                y[i] += sign * step
                if project is not None:
                    y = project(y)
                fy = fun(y)
                if fy < fx - _IMPROVE_TOL * max(1.0, abs(fx)):
                    x, fx = y, fy
                    trace.append(fx)
                    improved = True
                    break
        if not improved:
            step *= 0.5
    return x, fx, trace, step < step_tol


def _running_min(values):
    return np.minimum.accumulate(np.asarray(values, dtype=float)).tolist()


def _restart_unitary(cfg: RoofConfig, label: str, restart: int, m: int):
    if restart == 0:
        return None
    return haar_unitary(m, _block_rng(SeedSpec(cfg.seed, label), f"unitary:{m}", restart))


def _minimize_ensemble(rho, objective, cfg: RoofConfig, label: str, callback=None):
    """Best ensemble over restarts; ties keep the lower restart index."""
    r_ = as_density(rho)
    W = _support(r_)
    r = W.shape[1]
    m = r if cfg.ensemble_size is None else int(cfg.ensemble_size)
    if m < r:
        raise DomainError(f"ensemble size {m} is below the rank {r}")
    if m > r * r and m > 1:
        raise DomainError(f"ensemble size {m} exceeds rank^2 = {r * r}")

    best = None
    traces = []
    converged = True
    for restart in range(cfg.restarts):
        u0 = _restart_unitary(cfg, label, restart, m)

        def fun(params, u0=u0):
            ens = _ensemble_from_support(W, _isometry(m, r, params, u0), r_)
            if callback is not None:
                callback(ens)
            return objective(ens)

        x, fx, trace, ok = _coordinate_search(
            fun, np.zeros(m * m), cfg.initial_step, cfg.step_tol, cfg.max_iters)
        converged &= ok
        traces.extend(trace)
        if best is None or fx < best[1]:
            best = (x, fx, u0)
    x, fx, u0 = best
    ens = _ensemble_from_support(W, _isometry(m, r, x, u0), r_)
    steps = len(traces) - cfg.restarts
    return ens, fx, m, steps, converged, _running_min(traces)


def minimize_roof(rho, shape: BipartiteShape, objective: str = "ef",
                  cfg: RoofConfig = RoofConfig(), base: LogBase | str = LogBase.NATURAL,
                  callback=None) -> BoundReport:
    """Upper estimate of the entanglement of formation or the concurrence.

    Parameters
    ----------
    objective : {"ef", "concurrence"}
    callback : callable, optional
        Called with every :class:`Ensemble` the optimizer evaluates.
    """
    b = LogBase.coerce(base)
    if objective == "ef":
        fn = lambda ens: roof_objective_ef(ens, shape, b)  # noqa: E731
    elif objective == "concurrence":
        fn = lambda ens: roof_objective_concurrence(ens, shape)  # noqa: E731
    else:
        raise DomainError(f"unknown roof objective {objective!r}")
    if np.asarray(rho).shape[0] != shape.total:
        raise DomainError(f"state dimension {np.asarray(rho).shape[0]} != {shape.total}")
    ens, value, m, steps, converged, history = _minimize_ensemble(
        rho, fn, cfg, f"roof:{objective}", callback)
    n = int(_member_ranks(_reduced_states(ens, shape)).max())
    return BoundReport(kind=objective, bound_value=value, certificate=ens, n_used=n,
                       iterations=steps, converged=converged,
                       quantities={"ensemble_size": m}, config=asdict(cfg),
                       history=history)


def _sphere_project(y):
    return y / np.linalg.norm(y)


def min_output_entropy_bound(phi: Channel, cfg: RoofConfig = RoofConfig(),
                             base: LogBase | str = LogBase.NATURAL,
                             n_override: int | None = None) -> BoundReport:
    """Upper bound on the minimum output entropy from the best output purity.

    Maximizes ``Tr Phi(pi)^2`` over pure inputs and returns
    ``log(n) sqrt(n/(n-1)) sqrt(1 - purity)``. The entropy of the output at
    the same input is reported as ``direct_estimate``.
    """
    b = LogBase.coerce(base)
    d = phi.dim_in
    k = phi.kraus

    def neg_purity(x):
        v = x[:d] + 1j * x[d:]
        out = _apply(k, np.outer(v, v.conj()))
        return -float(np.sum(out.real ** 2 + out.imag ** 2))

    best = None
    traces = []
    converged = True
    for restart in range(cfg.restarts):
        psi0 = sample_haar_pure(d, SeedSpec(cfg.seed, "min-output-entropy"), restart)
        x0 = np.concatenate([psi0.real, psi0.imag])
        x, fx, trace, ok = _coordinate_search(
            neg_purity, x0, cfg.initial_step, cfg.step_tol, cfg.max_iters, _sphere_project)
        converged &= ok
        traces.extend(trace)
        if best is None or fx < best[1]:
            best = (x, fx)
    x, fx = best
    psi = x[:d] + 1j * x[d:]
    purity = -fx
    n = n_override if n_override is not None else output_rank_estimate(
        phi, cfg.rank_trials, cfg.seed)
    coeff = np.sqrt(2.0) * roof_coefficient(n, b)
    bound = coeff * np.sqrt(max(1.0 - purity, 0.0))
    out = _apply(k, np.outer(psi, psi.conj()))
    direct = float(entr(_spectra(out[None])[0]).sum() / b.ln)
    return BoundReport(kind="min-output-entropy", bound_value=float(bound), certificate=psi,
                       n_used=int(n), iterations=len(traces) - cfg.restarts,
                       converged=converged,
                       quantities={"best_purity": purity, "direct_estimate": direct,
                                   "coefficient": coeff},
                       config=asdict(cfg), history=[-h for h in _running_min(traces)])


def holevo_lower_bound(phi: Channel, rho, cfg: RoofConfig = RoofConfig(),
                       base: LogBase | str = LogBase.NATURAL,
                       n_override: int | None = None, callback=None) -> BoundReport:
    """Lower bound ``S(Phi(rho)) - coeff(n) C_Phi`` on the Holevo quantity.

    ``C_Phi`` is minimized over decompositions of ``rho``. The Holevo
    quantity of the same ensemble is returned as ``chi_estimate``; since both
    use one ensemble, ``chi_estimate >= bound_value`` holds instance by
    instance.
    """
    b = LogBase.coerce(base)
    r_ = as_density(rho)
    if r_.shape[0] != phi.dim_in:
        raise DomainError(f"state dimension {r_.shape[0]} != channel input {phi.dim_in}")
    k = phi.kraus

    def outputs(ens):
        a = np.einsum("kij,tj->tik", k, ens.states)
        return a @ a.conj().transpose(0, 2, 1)

    def phi_concurrence(ens):
        return float(2.0 * ens.weights @ _sqrt_e2(outputs(ens)))

    ens, c_phi, m, steps, converged, history = _minimize_ensemble(
        r_, phi_concurrence, cfg, "holevo", callback)
    n = n_override if n_override is not None else output_rank_estimate(
        phi, cfg.rank_trials, cfg.seed)
    coeff = roof_coefficient(n, b)
    s_out = float(entr(_spectra(_apply(k, r_)[None])[0]).sum() / b.ln)
    member_s = entr(_spectra(outputs(ens))).sum(axis=1) / b.ln
    chi = s_out - float(ens.weights @ member_s)
    bound = s_out - coeff * c_phi
    return BoundReport(kind="holevo", bound_value=bound, certificate=ens, n_used=int(n),
                       iterations=steps, converged=converged,
                       quantities={"output_entropy": s_out, "phi_concurrence_estimate": c_phi,
                                   "chi_estimate": chi, "coefficient": coeff,
                                   "ensemble_size": m},
                       config=asdict(cfg), history=history)
