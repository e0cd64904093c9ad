import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from e2entropy import spectra
from e2entropy.errors import (
    DomainError,
    NotPSDError,
    PreconditionError,
    UndefinedRatioError,
)
from e2entropy.spectra import (
    LogBase,
    Spectrum,
    c_constant,
    e2_from_matrix,
    e2_from_spectrum,
    eigenvalues,
    elementary_symmetric,
    entropy,
    eta,
    grad_e2,
    grad_f,
    grad_s1,
    inequality_gap,
    ratio_f,
    s1,
)

LN2 = math.log(2.0)


def brute_e2(x):
    return sum(a * b for a, b in itertools.combinations(x, 2))


def brute_esym(x):
    return [sum(math.prod(c) for c in itertools.combinations(x, k))
            for k in range(1, len(x) + 1)]


def central_diff(fun, x, rel=1e-6):
    g = np.empty_like(x)
    for m in range(x.size):
        h = rel * x[m]
        up, dn = x.copy(), x.copy()
        up[m] += h
        dn[m] -= h
        g[m] = (fun(up) - fun(dn)) / (2 * h)
    return g


def random_psd(rng, n, rank=None):
    rank = n if rank is None else rank
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    return g @ g.conj().T


positive_spectra = arrays(
    float, st.integers(2, 8),
    elements=st.floats(1e-6, 10.0, allow_nan=False, allow_infinity=False))


# --- Spectrum ---------------------------------------------------------------

def test_spectrum_sorted_and_clamped():
    s = Spectrum([0.2, -1e-13, 0.8])
    assert s.values.tolist() == [0.8, 0.2, 0.0]
    assert not s.values.flags.writeable


def test_spectrum_rejects_negative():
    with pytest.raises(NotPSDError):
        Spectrum([1.0, -1e-3])


def test_spectrum_rejects_empty():
    with pytest.raises(DomainError):
        Spectrum([])


# --- eta / entropy ------------------------------------------------------------

def test_eta_values():
    assert eta(0.0) == 0.0
    assert eta(1.0) == 0.0
    assert eta(0.5) == pytest.approx(0.346573590279972654708616, rel=1e-15)
    assert eta(0.5, "2") == pytest.approx(0.5, rel=1e-15)


def test_eta_negative():
    with pytest.raises(DomainError):
        eta(-0.1)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_entropy_uniform_is_log_n(n):
    assert entropy(np.full(n, 1.0 / n)) == pytest.approx(math.log(n), rel=1e-14)
    assert entropy(np.full(n, 1.0 / n), "2") == pytest.approx(math.log2(n), rel=1e-14)


def test_entropy_examples():
    assert entropy([1, 0, 0, 0]) == 0.0
    assert entropy([0.25, 0.75]) == pytest.approx(0.562335144618808350288, rel=1e-14)


def test_entropy_needs_unit_trace():
    with pytest.raises(PreconditionError):
        entropy([1.0, 1.0])


# --- s1 / e2 --------------------------------------------------------------------

def test_s1_examples():
    x = [0.6, 0.3, 0.1]
    assert s1(x) == pytest.approx(entropy(x), rel=1e-14)
    assert s1([2.0, 2.0]) == pytest.approx(4 * LN2, rel=1e-14)
    assert s1([1.0, 0.0]) == 0.0
    assert s1([0.0, 0.0]) == 0.0


@pytest.mark.parametrize("x", [0.0, 0.1, 0.37, 0.5, 0.99])
def test_e2_qubit(x):
    assert e2_from_spectrum([x, 1 - x]) == pytest.approx(x * (1 - x), abs=1e-16)


@pytest.mark.parametrize("n", [2, 3, 4, 7])
def test_e2_uniform(n):
    assert e2_from_spectrum(np.full(n, 1.0 / n)) == pytest.approx((n - 1) / (2 * n), rel=1e-14)


def test_e2_matrix_examples():
    assert e2_from_matrix(np.eye(4)) == pytest.approx(6.0)
    v = np.array([1, 1j, -1]) / math.sqrt(3)
    assert e2_from_matrix(np.outer(v, v.conj())) == pytest.approx(0.0, abs=1e-15)


def test_e2_matrix_matches_pair_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(50):
        m = random_psd(rng, 3)
        w = np.linalg.eigvalsh(m)
        assert e2_from_matrix(m) == pytest.approx(brute_e2(w), rel=1e-9)


def test_e2_matrix_rejects_non_psd():
    with pytest.raises(NotPSDError):
        e2_from_matrix(np.diag([1.0, -0.5]))


# --- elementary symmetric polynomials --------------------------------------------

def test_esym_examples():
    np.testing.assert_allclose(elementary_symmetric([1, 2, 3]), [6, 11, 6])
    np.testing.assert_allclose(elementary_symmetric([0.4, 0, 0]), [0.4, 0, 0])
    n = 6
    np.testing.assert_allclose(elementary_symmetric(np.ones(n)),
                               [math.comb(n, k) for k in range(1, n + 1)])


@settings(max_examples=200, deadline=None)
@given(arrays(float, st.integers(1, 6), elements=st.floats(0, 5)))
def test_esym_matches_subsets(x):
    got = elementary_symmetric(x)
    want = brute_esym(sorted(x, reverse=True))
    np.testing.assert_allclose(got, want, rtol=1e-10, atol=1e-12)
    assert got[0] == pytest.approx(np.sum(x))
    if x.size >= 2:
        assert got[1] == pytest.approx(e2_from_spectrum(x), rel=1e-9, abs=1e-12)


def principal_minor_sum(m, k):
    """Sum of k x k principal minors, each by Leibniz expansion."""
    total = 0.0
    for rows in itertools.combinations(range(m.shape[0]), k):
        sub = m[np.ix_(rows, rows)]
        det = 0.0
        for perm in itertools.permutations(range(k)):
            sign = (-1) ** sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
            det += sign * math.prod(sub[i, perm[i]] for i in range(k))
        total += det
    return total


@pytest.mark.parametrize("n", [2, 3, 4])
def test_eigenvalues_char_poly_against_determinant(n):
    rng = np.random.default_rng(n)
    m = random_psd(rng, n)
    e = elementary_symmetric(eigenvalues(m))
    want = [principal_minor_sum(m, k).real for k in range(1, n + 1)]
    np.testing.assert_allclose(e, want, rtol=1e-9)


def test_eigenvalues_examples():
    assert eigenvalues(np.eye(3)).values.tolist() == [1.0, 1.0, 1.0]
    assert eigenvalues(np.diag([0.1, 0.7, 0.2])).values.tolist() == [0.7, 0.2, 0.1]
    with pytest.raises(DomainError):
        eigenvalues(np.array([[1.0, 1.0], [0.0, 1.0]]))


# --- c_N, f, gap ----------------------------------------------------------------

def test_c_constant_values():
    assert c_constant(2) == pytest.approx(2 * LN2, rel=1e-15)
    assert c_constant(2, "2") == pytest.approx(2.0, rel=1e-15)
    assert c_constant(3) == pytest.approx(1.90285230179269193155916, rel=1e-14)
    with pytest.raises(DomainError):
        c_constant(1)


def test_c_constant_increasing():
    c = [c_constant(n) for n in range(2, 65)]
    assert all(b > a for a, b in zip(c, c[1:]))


def test_ratio_f_examples():
    for n in (2, 3, 6):
        assert ratio_f(np.full(n, 1.0 / n)) == pytest.approx(c_constant(n), rel=1e-13)
    assert ratio_f([3.5, 3.5]) == pytest.approx(ratio_f([0.5, 0.5]), rel=1e-14)
    assert ratio_f([0.9, 0.1]) == pytest.approx(1.08360991130482746502, rel=1e-13)
    with pytest.raises(UndefinedRatioError):
        ratio_f([1.0, 0.0, 0.0])


def test_gap_examples():
    r = inequality_gap([1.0, 0.0, 0.0])
    assert r.gap == 0.0 and r.classification == spectra.RANK_ONE_EQUALITY
    r = inequality_gap(np.full(4, 0.25))
    assert abs(r.gap) < 1e-12 and r.classification == spectra.UNIFORM_EQUALITY
    r = inequality_gap([0.7, 0.2, 0.1])
    assert r.classification == spectra.STRICT
    assert r.gap == pytest.approx(0.1107573527712187390335, rel=1e-12)


def test_gap_rank_override():
    x = [0.5, 0.5, 0.0, 0.0]
    assert inequality_gap(x).classification == spectra.UNIFORM_EQUALITY
    assert inequality_gap(x, n_override=4).classification == spectra.STRICT
    with pytest.raises(DomainError):
        inequality_gap([0.5, 0.3, 0.2], n_override=2)


def test_gap_base_scales():
    x = [0.5, 0.3, 0.2]
    assert inequality_gap(x, "2").gap == pytest.approx(inequality_gap(x).gap / LN2, rel=1e-13)
    assert LogBase.coerce("bits") is LogBase.BASE2


@settings(max_examples=300, deadline=None)
@given(arrays(float, st.integers(1, 9), elements=st.floats(0, 100)),
       st.sampled_from(["e", "2"]))
def test_gap_never_negative(x, base):
    assert inequality_gap(x, base).gap >= -1e-9


@settings(max_examples=200, deadline=None)
@given(positive_spectra, st.sampled_from([0.5, 1.0, 3.0]))
def test_homogeneity(x, lam):
    assert s1(lam * x) == pytest.approx(lam * s1(x), rel=1e-12, abs=1e-300)
    assert e2_from_spectrum(lam * x) == pytest.approx(lam ** 2 * e2_from_spectrum(x), rel=1e-12)
    if spectra.numerical_rank(x) >= 2:
        assert ratio_f(lam * x) == pytest.approx(ratio_f(x), rel=1e-12)


def test_s1_zero_iff_rank_le_one():
    assert s1([3.0, 0, 0]) == 0.0
    assert s1([3.0, 1e-3, 0]) > 0.0


def test_matrix_concavity_and_superadditivity():
    rng = np.random.default_rng(5)
    g_s1 = lambda m: s1(eigenvalues(m))  # noqa: E731
    g_e2 = lambda m: math.sqrt(e2_from_matrix(m))  # noqa: E731
    for _ in range(200):
        n = int(rng.integers(2, 6))
        a, b = random_psd(rng, n), random_psd(rng, n)
        for g in (g_s1, g_e2):
            assert g((a + b) / 2) >= (g(a) + g(b)) / 2 - 1e-9
            assert g(a + b) >= g(a) + g(b) - 1e-9


def test_upper_bounds_on_random_psd():
    rng = np.random.default_rng(6)
    for _ in range(200):
        n = int(rng.integers(2, 7))
        m = random_psd(rng, n)
        tr = np.trace(m).real
        assert s1(eigenvalues(m)) <= math.log(n) * tr + 1e-9
        assert e2_from_matrix(m) <= (n - 1) / (2 * n) * tr ** 2 + 1e-9


def test_rank_reduction():
    rng = np.random.default_rng(7)
    for _ in range(500):
        n = int(rng.integers(3, 9))
        k = int(rng.integers(2, n))
        x = np.zeros(n)
        x[:k] = rng.dirichlet(np.ones(k))
        assert inequality_gap(x, n_override=k).gap >= -1e-9


# --- gradients ------------------------------------------------------------------

def test_grad_examples():
    np.testing.assert_allclose(grad_s1([0.5, 0.5]), [LN2, LN2])
    np.testing.assert_allclose(grad_s1(np.full(5, 0.2)), np.full(5, math.log(5)))
    np.testing.assert_allclose(grad_e2([0.3, 0.7]), [0.7, 0.3])
    np.testing.assert_allclose(grad_e2(np.full(4, 0.25)), np.full(4, 0.75))
    assert np.max(np.abs(grad_f(np.full(6, 1 / 6)))) <= 1e-10
    with pytest.raises(DomainError):
        grad_s1([1.0, 0.0])
    with pytest.raises(DomainError):
        grad_f([1.0])


@pytest.mark.parametrize("n", [2, 3, 5])
def test_gradients_match_finite_differences(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(100):
        x = rng.dirichlet(np.ones(n)) * rng.uniform(0.5, 3)
        for analytic, fun in [
            (grad_s1(x), s1),
            (grad_e2(x), e2_from_spectrum),
            (grad_f(x), ratio_f),
        ]:
            fd = central_diff(lambda v: fun(v), x)
            err = np.max(np.abs(fd - analytic)) / np.max(np.abs(analytic))
            assert err <= 1e-6


def test_euler_identity():
    rng = np.random.default_rng(8)
    for _ in range(200):
        x = rng.dirichlet(np.ones(int(rng.integers(2, 9))))
        g = grad_f(x)
        assert abs(x @ g) <= 1e-8 * np.linalg.norm(g) * np.linalg.norm(x)
