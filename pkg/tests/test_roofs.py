import json

import numpy as np
import pytest

from e2entropy import roofs
from e2entropy.channels import (
    BipartiteShape,
    bit_flip_channel,
    depolarizing_channel,
    identity_channel,
    output_purity,
    partial_trace_b,
    projector,
)
from e2entropy.errors import DomainError
from e2entropy.sampling import (
    SeedSpec,
    sample_channel,
    sample_density,
    sample_haar_pure,
)
from e2entropy.serialize import dumps
from e2entropy.spectra import c_constant, eigenvalues, entropy

TWO = BipartiteShape(2, 2)
BELL = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
SIGMA_Y = np.array([[0, -1j], [1j, 0]])


def wootters_concurrence(rho):
    flip = np.kron(SIGMA_Y, SIGMA_Y)
    r = rho @ flip @ rho.conj() @ flip
    lam = np.sqrt(np.clip(np.sort(np.linalg.eigvals(r).real)[::-1], 0.0, None))
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def wootters_ef(c):
    x = np.array([(1 + np.sqrt(1 - c * c)) / 2, (1 - np.sqrt(1 - c * c)) / 2])
    x = x[x > 0]
    return float(-(x * np.log(x)).sum())


def bloch_grid_max_purity(phi, steps=181):
    best = 0.0
    for theta in np.linspace(0, np.pi, steps):
        for ph in np.linspace(0, 2 * np.pi, 2 * steps, endpoint=False):
            psi = np.array([np.cos(theta / 2), np.exp(1j * ph) * np.sin(theta / 2)])
            best = max(best, output_purity(phi, psi))
    return best


# ---------------------------------------------------------------------------
# decompositions


def test_zero_params_give_eigendecomposition():
    rho = sample_density(3, 2, SeedSpec(1), 0)
    ens = roofs.decompose_via_isometry(rho, 2)
    w, v = np.linalg.eigh(rho)
    np.testing.assert_allclose(ens.weights, w[::-1][:2], atol=1e-14)
    overlaps = np.abs(ens.states.conj() @ v[:, ::-1][:, :2])
    np.testing.assert_allclose(overlaps, np.eye(2), atol=1e-12)


def test_decomposition_recombines():
    rho = sample_density(4, 3, SeedSpec(2), 0)
    params = np.random.default_rng(0).normal(size=25)
    ens = roofs.decompose_via_isometry(rho, 5, params)
    assert len(ens) == 5
    np.testing.assert_allclose(ens.density(), rho, atol=1e-12)
    np.testing.assert_allclose(np.linalg.norm(ens.states, axis=1), 1.0, atol=1e-12)


def test_pure_state_decomposition():
    psi = sample_haar_pure(3, SeedSpec(0), 0)
    ens = roofs.decompose_via_isometry(projector(psi), 1)
    assert len(ens) == 1
    assert abs(np.vdot(ens.states[0], psi)) == pytest.approx(1.0, abs=1e-12)


def test_decomposition_rejects_small_m():
    with pytest.raises(DomainError):
        roofs.decompose_via_isometry(np.eye(3) / 3, 2)


def test_ensemble_validation_and_round_trip():
    with pytest.raises(DomainError):
        roofs.Ensemble([0.5, 0.4], np.eye(2))
    with pytest.raises(DomainError):
        roofs.Ensemble([1.0], [[1.0, 1.0]])
    with pytest.raises(DomainError):
        roofs.Ensemble.checked([0.5, 0.5], np.eye(2), np.diag([0.9, 0.1]))
    ens = roofs.Ensemble.checked([0.25, 0.75], np.eye(2), np.diag([0.25, 0.75]))
    back = roofs.Ensemble.from_dict(json.loads(json.dumps(ens.to_dict())))
    np.testing.assert_array_equal(back.weights, ens.weights)
    np.testing.assert_array_equal(back.states, ens.states)


# ---------------------------------------------------------------------------
# objectives


def test_objectives_on_bell_and_product():
    bell = roofs.Ensemble([1.0], [BELL])
    assert roofs.roof_objective_ef(bell, TWO) == pytest.approx(np.log(2), abs=1e-15)
    assert roofs.roof_objective_ef(bell, TWO, "2") == pytest.approx(1.0, abs=1e-15)
    assert roofs.roof_objective_concurrence(bell, TWO) == pytest.approx(1.0, abs=1e-15)
    prod = roofs.Ensemble([1.0], [np.kron([0.6, 0.8], [1.0, 0.0])])
    assert roofs.roof_objective_ef(prod, TWO) == pytest.approx(0.0, abs=1e-13)
    assert roofs.roof_objective_concurrence(prod, TWO) == pytest.approx(0.0, abs=1e-15)


def test_objectives_are_weighted_sums():
    shape = BipartiteShape(2, 3)
    states = [sample_haar_pure(6, SeedSpec(3), t) for t in range(3)]
    p = np.array([0.2, 0.3, 0.5])
    ens = roofs.Ensemble(p, states)
    single = [roofs.Ensemble([1.0], [s]) for s in states]
    expect_ef = sum(pi * entropy(eigenvalues(partial_trace_b(projector(s), shape)))
                    for pi, s in zip(p, states))
    assert roofs.roof_objective_ef(ens, shape) == pytest.approx(expect_ef, abs=1e-14)
    expect_c = sum(pi * roofs.roof_objective_concurrence(e, shape) for pi, e in zip(p, single))
    assert roofs.roof_objective_concurrence(ens, shape) == pytest.approx(expect_c, abs=1e-14)


def test_termwise_inequality_on_random_ensembles():
    shape = BipartiteShape(3, 3)
    for t in range(20):
        rho = sample_density(9, 4, SeedSpec(4), t)
        params = np.random.default_rng(t).normal(size=36)
        ens = roofs.decompose_via_isometry(rho, 6, params)
        lhs = roofs.roof_objective_ef(ens, shape)
        rhs = roofs.roof_coefficient(3) * roofs.roof_objective_concurrence(ens, shape)
        assert lhs <= rhs + 1e-12


def test_roof_coefficient_values():
    for n in range(2, 8):
        assert roofs.roof_coefficient(n) == pytest.approx(c_constant(n) / 2, rel=1e-14)
    assert roofs.roof_coefficient(1) == 0.0
    assert roofs.roof_coefficient(2, "2") == pytest.approx(1.0, rel=1e-15)
    with pytest.raises(DomainError):
        roofs.roof_coefficient(0)


def test_ef_bound_from_concurrence():
    assert roofs.ef_bound_from_concurrence(1.0, 2) == pytest.approx(np.log(2), rel=1e-15)
    # log(3) sqrt(3/4) * 0.5, evaluated in 30-digit arithmetic
    assert roofs.ef_bound_from_concurrence(0.5, 3) == pytest.approx(
        0.475713075448172982889790829408, rel=1e-14)
    with pytest.raises(DomainError):
        roofs.ef_bound_from_concurrence(0.5, 1)
    with pytest.raises(DomainError):
        roofs.ef_bound_from_concurrence(-0.1, 2)


# ---------------------------------------------------------------------------
# roof minimization


def test_bell_roof_values():
    rho = projector(BELL)
    ef = roofs.minimize_roof(rho, TWO, "ef")
    conc = roofs.minimize_roof(rho, TWO, "concurrence")
    assert ef.bound_value == pytest.approx(np.log(2), abs=1e-12)
    assert conc.bound_value == pytest.approx(1.0, abs=1e-12)
    assert ef.n_used == conc.n_used == 2
    assert ef.iterations == 0


def test_pure_state_needs_no_iterations():
    psi = sample_haar_pure(6, SeedSpec(5), 0)
    rep = roofs.minimize_roof(projector(psi), BipartiteShape(2, 3), "ef")
    assert rep.iterations == 0
    expect = entropy(eigenvalues(partial_trace_b(projector(psi), BipartiteShape(2, 3))))
    assert rep.bound_value == pytest.approx(expect, abs=1e-13)


def test_separable_eigenbasis_gives_zero():
    a = np.diag([0.7, 0.3])
    b = np.diag([0.6, 0.4])
    rep = roofs.minimize_roof(np.kron(a, b), TWO, "ef")
    assert rep.bound_value == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("rank,trial", [(2, 0), (2, 1), (3, 0), (3, 1)])
def test_two_qubit_roofs_match_closed_form(rank, trial):
    rho = sample_density(4, rank, SeedSpec(1, "w"), trial)
    c = wootters_concurrence(rho)
    conc = roofs.minimize_roof(rho, TWO, "concurrence")
    ef = roofs.minimize_roof(rho, TWO, "ef")
    # roof values are upper estimates of the exact minima
    assert conc.bound_value >= c - 1e-12
    assert conc.bound_value == pytest.approx(c, abs=1e-6)
    assert ef.bound_value >= wootters_ef(c) - 1e-12
    assert ef.bound_value == pytest.approx(wootters_ef(c), abs=1e-6)


def test_history_and_eigen_start():
    rho = sample_density(4, 2, SeedSpec(6), 0)
    rep = roofs.minimize_roof(rho, TWO, "ef", roofs.RoofConfig(restarts=3))
    h = np.array(rep.history)
    assert np.all(np.diff(h) <= 0)
    assert h[-1] == rep.bound_value
    eig = roofs.roof_objective_ef(roofs.decompose_via_isometry(rho, 2), TWO)
    assert h[0] == pytest.approx(eig, abs=1e-15)
    assert rep.bound_value <= eig


def test_certificate_revalidates():
    rho = sample_density(6, 3, SeedSpec(7), 0)
    shape = BipartiteShape(2, 3)
    rep = roofs.minimize_roof(rho, shape, "concurrence", roofs.RoofConfig(restarts=2))
    ens = rep.certificate
    np.testing.assert_allclose(ens.density(), rho, atol=1e-9)
    assert roofs.roof_objective_concurrence(ens, shape) == pytest.approx(rep.bound_value, abs=1e-9)
    back = roofs.BoundReport.from_dict(json.loads(dumps(rep.to_dict())))
    assert dumps(back.to_dict()) == dumps(rep.to_dict())


def test_roof_determinism():
    rho = sample_density(4, 2, SeedSpec(8), 0)
    cfg = roofs.RoofConfig(restarts=3, seed=11)
    a = roofs.minimize_roof(rho, TWO, "ef", cfg)
    b = roofs.minimize_roof(rho, TWO, "ef", cfg)
    assert dumps(a.to_dict()) == dumps(b.to_dict())


def test_ensemble_size_limits():
    rho = sample_density(4, 2, SeedSpec(9), 0)
    with pytest.raises(DomainError):
        roofs.minimize_roof(rho, TWO, "ef", roofs.RoofConfig(ensemble_size=1))
    with pytest.raises(DomainError):
        roofs.minimize_roof(rho, TWO, "ef", roofs.RoofConfig(ensemble_size=5))
    with pytest.raises(DomainError):
        roofs.minimize_roof(rho, TWO, "negativity")


def test_callback_sees_every_evaluation():
    rho = sample_density(4, 2, SeedSpec(10), 0)
    seen = []
    rep = roofs.minimize_roof(rho, TWO, "ef", roofs.RoofConfig(restarts=2), callback=seen.append)
    assert len(seen) > rep.iterations
    best = min(roofs.roof_objective_ef(e, TWO) for e in seen)
    assert best == pytest.approx(rep.bound_value, abs=1e-15)


# ---------------------------------------------------------------------------
# channel bounds


def test_min_output_identity():
    rep = roofs.min_output_entropy_bound(identity_channel(3))
    assert rep.bound_value == pytest.approx(0.0, abs=1e-9)
    assert rep.n_used == 1


def test_min_output_depolarizing_qubit():
    rep = roofs.min_output_entropy_bound(depolarizing_channel(2))
    assert rep.bound_value == pytest.approx(np.log(2), abs=1e-6)
    assert rep.quantities["direct_estimate"] == pytest.approx(np.log(2), abs=1e-6)


@pytest.mark.parametrize("phi", [depolarizing_channel(2, 0.3), bit_flip_channel(0.2),
                                 sample_channel(2, 3, 2, SeedSpec(12), 0)],
                         ids=["depolarizing", "bit-flip", "random"])
def test_min_output_purity_against_bloch_grid(phi):
    rep = roofs.min_output_entropy_bound(phi)
    grid = bloch_grid_max_purity(phi)
    assert rep.quantities["best_purity"] >= grid - 1e-9
    assert rep.quantities["best_purity"] <= 1.0 + 1e-12
    # the bound dominates the entropy at the same input
    assert rep.bound_value >= rep.quantities["direct_estimate"] - 1e-9


def test_min_output_bit_flip_closed_form():
    p = 0.2
    rep = roofs.min_output_entropy_bound(bit_flip_channel(p))
    # optimal inputs are X eigenstates, which are left unchanged
    assert rep.quantities["best_purity"] == pytest.approx(1.0, abs=1e-9)
    assert rep.bound_value == pytest.approx(0.0, abs=1e-4)


def test_holevo_depolarizing():
    for dim in (2, 3):
        rep = roofs.holevo_lower_bound(depolarizing_channel(dim), np.eye(dim) / dim)
        assert rep.bound_value == pytest.approx(0.0, abs=1e-6)
        assert rep.quantities["chi_estimate"] == pytest.approx(0.0, abs=1e-12)


def test_holevo_identity():
    rep = roofs.holevo_lower_bound(identity_channel(3), np.eye(3) / 3)
    assert rep.bound_value == pytest.approx(np.log(3), abs=1e-9)
    assert rep.quantities["chi_estimate"] == pytest.approx(np.log(3), abs=1e-9)


def test_holevo_chi_dominates_bound():
    phi = sample_channel(3, 3, 2, SeedSpec(13), 0)
    rho = sample_density(3, 3, SeedSpec(13), 1)
    seen = []
    rep = roofs.holevo_lower_bound(phi, rho, roofs.RoofConfig(restarts=2), callback=seen.append)
    assert rep.quantities["chi_estimate"] >= rep.bound_value - 1e-9
    assert seen
    np.testing.assert_allclose(rep.certificate.density(), rho, atol=1e-9)


def test_holevo_dimension_check():
    with pytest.raises(DomainError):
        roofs.holevo_lower_bound(identity_channel(2), np.eye(3) / 3)
