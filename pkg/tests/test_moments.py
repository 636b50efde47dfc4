import itertools
from fractions import Fraction as F

import pytest

from qensemble.combinat import moment_component_via_matching, moment_via_motzkin
from qensemble.moments import (
    EnsembleParams,
    gue_moment,
    moment_closed,
    moment_component,
    qgauss_integral,
    qgue_moment,
    symmetry_pair,
)
from qensemble.qcore import DomainError, QParams

QS = (F(1, 2), F(2, 3))
AS = (F(-1), F(-1, 2), F(-2), F(-3))


class TestEnsembleParams:
    def test_validation(self):
        with pytest.raises(DomainError):
            EnsembleParams(a=F(1, 2), q=F(1, 2), N=1)
        with pytest.raises(DomainError):
            EnsembleParams(a=F(-1), q=F(3, 2), N=1)
        with pytest.raises(DomainError):
            EnsembleParams(a=F(-1), q=F(1, 2), N=0)


class TestExplicitLowMoments:
    @pytest.mark.parametrize("q,a", list(itertools.product(QS, AS)))
    def test_first_three(self, q, a):
        for N in range(1, 5):
            params = EnsembleParams(a=a, q=q, N=N)
            assert moment_closed(params, 0) == N
            assert moment_closed(params, 1) == (a + 1) * (1 - q**N) / (1 - q)
            expected2 = (
                (1 - q**N)
                / (q * (1 - q**2))
                * ((a * a + 1) * q + q**N * (q + a * (1 + 2 * q + q * q + a * q)))
            )
            assert moment_closed(params, 2) == expected2


class TestMomentComponent:
    QP = QParams(q=F(1, 2), a=F(-1, 2))

    def test_order_zero(self):
        for j in range(5):
            assert moment_component(0, j, self.QP) == 1

    def test_order_one_telescopes(self):
        q, a = self.QP.q, self.QP.a
        for j in range(5):
            assert moment_component(1, j, self.QP) == (a + 1) * q**j

    def test_order_two_matches_motzkin(self):
        assert moment_component(2, 0, self.QP) == moment_via_motzkin(2, 0, self.QP)


class TestTripleEquality:
    @pytest.mark.parametrize("q,a", [(F(1, 2), F(-1, 2)), (F(2, 3), F(-2))])
    def test_all_routes_agree(self, q, a):
        qp = QParams(q=q, a=a)
        for p in range(7):
            for j in range(3):
                closed = moment_component(p, j, qp)
                assert closed == moment_via_motzkin(p, j, qp)
                assert closed == moment_component_via_matching(p, j, qp, cap=12)


class TestSymmetry:
    def test_first_moment_example(self):
        # a = -2, p = 1: both sides reduce to (1/2)(1-q^N)/(1-q)
        params = EnsembleParams(a=F(-2), q=F(1, 2), N=3)
        lhs, rhs = symmetry_pair(params, 1)
        assert lhs == rhs == F(1, 2) * (1 - F(1, 2) ** 3) / F(1, 2)

    def test_fixed_point(self):
        params = EnsembleParams(a=F(-1), q=F(2, 3), N=2)
        lhs, rhs = symmetry_pair(params, 4)
        assert lhs == rhs

    @pytest.mark.parametrize("q,a", list(itertools.product(QS, AS)))
    def test_exact_grid(self, q, a):
        for N in (1, 2, 3):
            for p in range(7):
                lhs, rhs = symmetry_pair(EnsembleParams(a=a, q=q, N=N), p)
                assert lhs == rhs


class TestSpecialCases:
    def test_odd_moments_vanish_at_minus_one(self):
        for q in QS:
            for N in range(1, 6):
                params = EnsembleParams(a=F(-1), q=q, N=N)
                for p in (1, 3, 5, 7, 9):
                    assert moment_closed(params, p) == 0

    def test_even_moment_positivity(self):
        for a in (F(-1, 2), F(-1, 4)):
            for N in range(1, 5):
                params = EnsembleParams(a=a, q=F(2, 3), N=N)
                for p in (2, 4, 6, 8):
                    assert moment_closed(params, p) > 0

    def test_qgue_reduction(self):
        for q in QS:
            for N in range(1, 5):
                params = EnsembleParams(a=F(-1), q=q, N=N)
                for p in range(9):
                    assert qgue_moment(params, p) == moment_closed(params, p)

    def test_qgue_domain(self):
        with pytest.raises(DomainError):
            qgue_moment(EnsembleParams(a=F(-1, 2), q=F(1, 2), N=1), 2)

    def test_qgauss_integral(self):
        q = F(1, 3)
        assert qgauss_integral(0, q) == 1 - q
        assert qgauss_integral(1, q) == (1 - q) ** 2
        assert qgauss_integral(2, q) == (1 - q) ** 3 * (1 - q**3) / (1 - q)


class TestGueMoments:
    @pytest.mark.parametrize("N", range(1, 7))
    def test_low_orders(self, N):
        assert gue_moment(N, 0) == N
        assert gue_moment(N, 2) == N**2
        assert gue_moment(N, 4) == 2 * N**3 + N
        assert gue_moment(N, 6) == 5 * N**4 + 10 * N**2

    def test_odd_rejected(self):
        with pytest.raises(DomainError):
            gue_moment(3, 3)


class TestFloatMode:
    def test_float_matches_exact(self):
        for q, a in itertools.product(QS, AS):
            exact = EnsembleParams(a=a, q=q, N=3)
            approx = exact.as_float()
            for p in range(7):
                want = float(moment_closed(exact, p))
                got = moment_closed(approx, p)
                assert got == pytest.approx(want, rel=1e-12, abs=1e-12)
