import numpy as np
import pytest

from quantyhall import bell, qubit, qutrit
from quantyhall.adversary import attacked_residual, double_ir_residual, lambda_state
from quantyhall.qcore import MixedState

R3 = np.sqrt(3.0)
I3_EXPECTED = 4 * (3 + 2 * R3) / 9
S = 2 / R3

# Reference operators as (row, col) -> value, upper triangle
B_REFERENCE = {
    0: {(0, 4): S, (0, 8): 2, (1, 5): S, (3, 7): S, (4, 8): S},
    1: {(1, 5): S, (1, 6): 2, (2, 3): S, (4, 8): S, (5, 6): S},
    2: {(0, 4): S, (2, 3): S, (2, 7): 2, (3, 7): S, (5, 6): S},
}


def reference(j):
    m = np.zeros((9, 9))
    for (r, c), v in B_REFERENCE[j].items():
        m[r, c] = m[c, r] = v
    return m


class TestQutritOperators:
    @pytest.mark.parametrize("j", range(3))
    def test_entrywise(self, j):
        np.testing.assert_allclose(bell.qutrit_bell(j).matrix, reference(j), atol=0)

    def test_examples(self):
        assert bell.qutrit_bell(0).matrix[0, 8] == 2
        assert bell.qutrit_bell(1).matrix[1, 5] == pytest.approx(2 / R3)

    @pytest.mark.parametrize("j", range(3))
    def test_real_symmetric(self, j):
        m = bell.qutrit_bell(j).matrix
        assert np.isrealobj(m) or not np.any(m.imag)
        np.testing.assert_array_equal(m, m.T)


class TestQubitOperators:
    def test_examples(self):
        assert bell.qubit_bell(0).matrix[int("101110", 2), int("011001", 2)] == 8
        assert bell.qubit_bell(2).matrix[int("100101", 2), int("001010", 2)] == -8

    @pytest.mark.parametrize("j", range(3))
    def test_four_entries_hermitian(self, j):
        m = bell.qubit_bell(j).matrix
        assert np.count_nonzero(m) == 4
        assert set(np.abs(m[m != 0])) == {8}
        np.testing.assert_array_equal(m, m.conj().T)


class TestMaxima:
    @pytest.mark.parametrize("j", range(3))
    def test_i3(self, j):
        v = bell.i3(qutrit.phi(j), j)
        assert v.value == pytest.approx(I3_EXPECTED, abs=1e-12)
        assert v.ratio == pytest.approx(I3_EXPECTED / 2, abs=1e-12)

    def test_i3_value_and_ratio_numbers(self):
        v = bell.i3(qutrit.phi(0), 0)
        assert round(v.value, 3) == 2.873
        assert 1.436 <= v.ratio <= 1.437
        assert v.ratio > bell.E91_RATIO

    @pytest.mark.parametrize("j, sign", [(0, -1), (1, 1), (2, -1)])
    def test_f6_signed(self, j, sign):
        v = bell.f6(qubit.phi_b(j), j)
        assert v.value == pytest.approx(sign * 16 / 3, abs=1e-12)
        assert v.abs_value == pytest.approx(16 / 3, abs=1e-12)
        assert v.ratio == pytest.approx(8 / 3, abs=1e-12)

    def test_ratio_ordering(self):
        rq = bell.i3(qutrit.phi(0), 0).ratio
        rb = bell.f6(qubit.phi_b(0), 0).ratio
        assert rb > rq > np.sqrt(2)

    def test_constants(self):
        assert bell.I3_MAX == pytest.approx(I3_EXPECTED, abs=1e-15)
        assert bell.F6_MAX == pytest.approx(16 / 3, abs=1e-15)


class TestNulls:
    def test_dephased_residuals(self):
        assert bell.i3(double_ir_residual(1, "qutrit"), 1).value == pytest.approx(0, abs=1e-12)
        assert bell.f6(double_ir_residual(2, "qubit"), 2).value == pytest.approx(0, abs=1e-12)

    def test_lambda(self):
        assert bell.f6(lambda_state(0, 0), 0).abs_value == pytest.approx(0, abs=1e-12)


class TestLinearity:
    @pytest.mark.parametrize("p", [0, 0.25, 0.5, 0.75, 1])
    @pytest.mark.parametrize("j", range(3))
    def test_qutrit(self, p, j):
        assert bell.i3(attacked_residual(j, p, "qutrit"), j).value == pytest.approx((1 - p) * I3_EXPECTED, abs=1e-12)

    @pytest.mark.parametrize("p", [0, 0.25, 0.5, 0.75, 1])
    @pytest.mark.parametrize("j", range(3))
    def test_qubit(self, p, j):
        assert bell.f6(attacked_residual(j, p, "qubit"), j).abs_value == pytest.approx((1 - p) * 16 / 3, abs=1e-12)


class TestErrorsAndVerdict:
    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            bell.i3(qubit.phi_b(0), 0)
        with pytest.raises(ValueError):
            bell.f6(qutrit.phi(0), 0)

    def test_mixed_state_accepted(self):
        rho = MixedState(qutrit.PAIR, qutrit.phi(0).density().matrix)
        assert bell.i3(rho, 0).value == pytest.approx(I3_EXPECTED)

    @pytest.mark.parametrize(
        "value, chi, verdict",
        [(2.873, 2.5, "safe"), (0.0, 2.1, "compromised"), (16 / 3, 4.0, "safe"), (-16 / 3, 4.0, "safe"), (2.4, 2.5, "compromised")],
    )
    def test_verdict(self, value, chi, verdict):
        assert bell.violation_verdict(value, chi) == verdict
        assert bell.violation_verdict(bell.BellValue(value), chi) == verdict

    @pytest.mark.parametrize("chi", [2.0, 1.0, -3])
    def test_chi_must_exceed_bound(self, chi):
        with pytest.raises(ValueError):
            bell.violation_verdict(3.0, chi)
