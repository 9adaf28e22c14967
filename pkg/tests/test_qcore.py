import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quantyhall.qcore import (
    DegenerateStateError,
    Layout,
    MixedState,
    Operator,
    PureState,
    apply,
    apply_mixed,
    basis_state,
    dephase,
    embed,
    expectation,
    identity,
    measure,
    mix,
    outcome_probabilities,
    project,
    superposition,
    tensor,
)

T1 = Layout([("x", 3)])
T2 = Layout([("y", 3)])
PAIR = Layout([("b", 3), ("a", 3)])

G0 = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
G1 = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]])


def ghz():
    v = np.zeros(9)
    v[[0, 4, 8]] = 1 / np.sqrt(3)
    return PureState(PAIR, v)


def random_state(layout, seed):
    r = np.random.default_rng(seed)
    v = r.normal(size=layout.dim) + 1j * r.normal(size=layout.dim)
    return PureState(layout, v / np.linalg.norm(v))


class TestLayout:
    def test_dim_and_index(self):
        lay = Layout([("o", 3), ("b", 3), ("a", 3)])
        assert lay.dim == 27
        assert lay.index((1, 2, 0)) == 9 * 1 + 3 * 2 + 0
        assert lay.digits(14) == (1, 1, 2)

    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            Layout([("a", 3), ("a", 2)])

    def test_dimension_below_two_rejected(self):
        with pytest.raises(ValueError):
            Layout([("a", 1)])


class TestTensor:
    def test_basis(self):
        s = tensor(basis_state(T1, (0,)), basis_state(T2, (0,)))
        assert s.layout.names == ("x", "y")
        assert s.amplitudes[0] == 1 and np.count_nonzero(s.amplitudes) == 1

    def test_identities(self):
        np.testing.assert_array_equal(tensor(identity(T1), identity(T2)).matrix, np.eye(9))

    def test_g0_g0_preserves_ghz(self):
        op = tensor(Operator(Layout([("b", 3)]), G0), Operator(Layout([("a", 3)]), G0))
        # direct 9-dim product as oracle
        np.testing.assert_allclose(np.kron(G0, G0) @ ghz().amplitudes, ghz().amplitudes)
        assert apply(op, ghz()).allclose(ghz())

    def test_name_collision(self):
        with pytest.raises(ValueError):
            tensor(identity(T1), identity(T1))

    def test_mixed_kinds_rejected(self):
        with pytest.raises(TypeError):
            tensor(identity(T1), basis_state(T2, (0,)))


class TestApply:
    def test_identity(self):
        s = random_state(PAIR, 1)
        assert apply(identity(PAIR), s).allclose(s)

    @pytest.mark.parametrize("g, image", [(G0, 1), (G1, 2)])
    def test_strategy_column_zero(self, g, image):
        out = apply(Operator(T1, g), basis_state(T1, (0,)))
        assert out.allclose(basis_state(T1, (image,)))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            apply(identity(PAIR), basis_state(T1, (0,)))

    def test_mixed_identity_and_consistency(self):
        s = random_state(PAIR, 2)
        u = Operator(PAIR, np.kron(G0, G1))
        assert apply_mixed(identity(PAIR), s.density()).allclose(s.density())
        assert apply_mixed(u, s.density()).allclose(apply(u, s).density())

    def test_mixed_conjugation_of_dephased_ghz(self):
        rho = MixedState(PAIR, np.diag([1, 0, 0, 0, 1, 0, 0, 0, 1]) / 3)
        out = apply_mixed(Operator(PAIR, np.kron(G0, np.eye(3))), rho)
        expected = np.zeros((9, 9))
        for b, a in [(1, 0), (2, 1), (0, 2)]:
            expected[3 * b + a, 3 * b + a] = 1 / 3
        np.testing.assert_allclose(out.matrix, expected, atol=1e-12)


class TestEmbed:
    def test_matches_kron_on_contiguous_registers(self):
        lay = Layout([("o", 3), ("b", 3), ("a", 3)])
        op = embed(Operator(T1, G0), lay, ["a"])
        np.testing.assert_array_equal(op.matrix.real, np.kron(np.eye(9), G0))

    def test_reordered_targets(self):
        lay = Layout([("p", 2), ("q", 3)])
        swap_like = Operator(Layout([("q", 3), ("p", 2)]), np.kron(G0, np.array([[0, 1], [1, 0]])))
        op = embed(swap_like, lay, ["q", "p"])
        np.testing.assert_array_equal(op.matrix.real, np.kron(np.array([[0, 1], [1, 0]]), G0))


class TestMeasure:
    def test_victory_register_deterministic(self, rng):
        lay = Layout([("o", 3), ("b", 3), ("a", 3)])
        s = superposition(lay, {(1, 0, 0): 1, (1, 1, 1): 1, (1, 2, 2): 1})
        k, res = measure(s, "o", rng)
        assert k == 1
        assert res.layout == PAIR
        assert res.allclose(ghz())

    def test_uniform_thirds_on_ghz(self):
        s = tensor(basis_state(Layout([("o", 3)]), (0,)), ghz())
        np.testing.assert_allclose(outcome_probabilities(s, "b"), [1 / 3] * 3)

    def test_basis_state(self, rng):
        lay = Layout([("x", 2), ("y", 3)])
        s = basis_state(lay, lay.digits(5))
        k, res = measure(s, "y", rng)
        assert k == 2
        assert res.allclose(basis_state(Layout([("x", 2)]), (1,)))

    def test_keep_reattaches_register(self, rng):
        s = tensor(basis_state(Layout([("o", 3)]), (0,)), ghz())
        k, post = measure(s, "b", rng, keep=True)
        assert post.layout == s.layout
        assert post.allclose(basis_state(s.layout, (0, k, k)))

    def test_repeat_is_deterministic(self, rng):
        s = random_state(PAIR, 3)
        k, post = measure(s, "a", rng, keep=True)
        for _ in range(5):
            assert measure(post, "a", rng, keep=True)[0] == k

    def test_zero_probability_projection_reports(self):
        with pytest.raises(DegenerateStateError):
            project(ghz(), ["b", "a"], 1)

    def test_unknown_register(self, rng):
        with pytest.raises(KeyError):
            measure(ghz(), "zz", rng)

    def test_consumes_one_draw(self):
        r1, r2 = np.random.default_rng(9), np.random.default_rng(9)
        measure(ghz(), "b", r1)
        r2.random()
        assert r1.random() == r2.random()


class TestExpectationAndMix:
    def test_identity_gives_one(self):
        assert expectation(identity(PAIR), random_state(PAIR, 4)) == pytest.approx(1.0, abs=1e-12)

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError):
            expectation(Operator(PAIR, np.kron(G0, G0)), ghz())

    def test_mix_singleton_and_boundary(self):
        s = ghz()
        assert mix([(1.0, s)]).allclose(s.density())
        assert mix([(1.0, s), (0.0, dephase(s))]).allclose(s.density())

    def test_bad_weights(self):
        with pytest.raises(ValueError):
            mix([(0.7, ghz()), (0.7, ghz())])
        with pytest.raises(ValueError):
            mix([(1.5, ghz()), (-0.5, ghz())])

    def test_mixed_pure_consistency(self):
        h = np.random.default_rng(5).normal(size=(9, 9))
        h = Operator(PAIR, h + h.T)
        s = random_state(PAIR, 6)
        assert expectation(h, s) == pytest.approx(expectation(h, s.density()), abs=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(w=st.floats(0, 1), seed=st.integers(0, 10_000))
    def test_linearity(self, w, seed):
        r = np.random.default_rng(seed)
        h = r.normal(size=(9, 9)) + 1j * r.normal(size=(9, 9))
        h = Operator(PAIR, h + h.conj().T)
        s1, s2 = random_state(PAIR, seed), random_state(PAIR, seed + 1)
        lhs = expectation(h, mix([(w, s1), (1 - w, s2)]))
        rhs = w * expectation(h, s1) + (1 - w) * expectation(h, s2)
        assert lhs == pytest.approx(rhs, abs=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_measurement_completeness(self, seed):
        s = random_state(Layout([("x", 2), ("y", 3), ("z", 2)]), seed)
        for target in ("x", "y", ["z", "x"]):
            assert outcome_probabilities(s, target).sum() == pytest.approx(1.0, abs=1e-9)


class TestStateValidation:
    def test_unnormalized_rejected(self):
        with pytest.raises(ValueError):
            PureState(T1, [1, 1, 0])

    def test_non_psd_rejected(self):
        with pytest.raises(ValueError):
            MixedState(Layout([("q", 2)]), np.diag([1.5, -0.5]))

    def test_immutable(self):
        s = ghz()
        with pytest.raises(ValueError):
            s.amplitudes[0] = 0
