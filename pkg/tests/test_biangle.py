"""Biangle scalars: U-turns, crossings, skein relations, duality."""

import pytest

from qtrace.qtorus import (
    RootScalar,
    TorusMatrix,
    kron,
    mat_mul,
    q_power,
    scalar_spec,
    TorusElement,
)
from qtrace.biangle import (
    BiangleDiagram,
    BiangleState,
    Slice,
    biangle_trace,
    coribbon,
    crossing_matrix,
    duality_lemma_check,
    duality_parameter,
    kink_scalar,
    quantum_integer,
    skein_checks,
    trivial_strand_matrix,
    unknot_value,
    uturn_matrix,
    yang_baxter_holds,
)


def scalar_matrix(n, rows):
    spec = scalar_spec(n)
    return TorusMatrix(
        spec, [[TorusElement.scalar(spec, x) for x in row] for row in rows]
    )


def q3(num, coeff=1):
    return q_power(3, num, 3, coeff)


ZERO = RootScalar.zero()
ONE = RootScalar.one()


class TestRibbonScalars:
    def test_coribbon_rank3_value(self):
        # the rank-3 coribbon scalar is q^(-8/3), its inverse q^(+8/3)
        assert coribbon(3) == q3(-8)
        assert coribbon(3).inverse() == q3(8) == RootScalar.h_power(48)

    def test_coribbon_general_form(self):
        for n in (2, 3, 4, 5):
            assert coribbon(n) == RootScalar.h_power(
                2 * n * (1 - n * n), (-1) ** (n - 1)
            )

    def test_unknot_value(self):
        for n in (2, 3, 4):
            assert unknot_value(n) == RootScalar.from_int((-1) ** (n - 1)) * quantum_integer(n)


class TestUturnMatrices:
    def test_dec_cw_rank3_display(self):
        # q^(-4/3) * antidiag(q^(-1), -1, q)
        expected = scalar_matrix(3, [
            [ZERO, ZERO, q3(-7)],
            [ZERO, q3(-4, -1), ZERO],
            [q3(-1), ZERO, ZERO],
        ])
        assert uturn_matrix("dec_cw", 3) == expected

    def test_kind_relations(self):
        for n in (2, 3, 4):
            U = uturn_matrix("dec_cw", n)
            zinv = coribbon(n).inverse()
            scale = lambda M: M.map(lambda x: TorusElement.scalar(M.spec, zinv) * x)
            assert uturn_matrix("inc_ccw", n) == U.transpose()
            assert uturn_matrix("dec_ccw", n) == scale(U)
            assert uturn_matrix("inc_cw", n) == scale(U.transpose())

    def test_zigzag_waves_are_identity(self):
        for n in (2, 3):
            wave_a = BiangleDiagram(n, ("l",), (Slice("dec_cw", 1), Slice("dec_ccw", 2)))
            wave_b = BiangleDiagram(n, ("r",), (Slice("inc_ccw", 1), Slice("inc_cw", 2)))
            for diagram in (wave_a, wave_b):
                for s1 in range(1, n + 1):
                    for s2 in range(1, n + 1):
                        expected = ONE if s1 == s2 else ZERO
                        assert biangle_trace(diagram, BiangleState((s1,), (s2,))) == expected


class TestCrossingMatrices:
    def test_same_direction_rank3_display(self):
        d = q3(-3) - q3(3)  # q^-1 - q
        rows = [[ZERO] * 9 for _ in range(9)]
        rows[0][0] = q3(-3)
        rows[1][1] = d
        rows[1][3] = ONE
        rows[2][2] = d
        rows[2][6] = ONE
        rows[3][1] = ONE
        rows[4][4] = q3(-3)
        rows[5][5] = d
        rows[5][7] = ONE
        rows[6][2] = ONE
        rows[7][5] = ONE
        rows[8][8] = q3(-3)
        expected = scalar_matrix(3, rows).map(
            lambda x: TorusElement.scalar(scalar_spec(3), q3(1)) * x
        )
        assert crossing_matrix("pos_same_to_lower", 3) == expected

    def test_opposite_direction_rank3_display(self):
        d = q3(-3) - q3(3)
        rows = [[ZERO] * 9 for _ in range(9)]
        rows[0][0] = q3(-3)
        rows[1][3] = q3(-3)
        rows[2][2] = q3(6) - ONE
        rows[2][4] = d
        rows[2][6] = ONE
        rows[3][1] = q3(-3)
        rows[4][2] = d
        rows[4][4] = ONE
        rows[5][7] = q3(-3)
        rows[6][2] = ONE
        rows[7][5] = q3(-3)
        rows[8][8] = q3(-3)
        expected = scalar_matrix(3, rows).map(
            lambda x: TorusElement.scalar(scalar_spec(3), q3(2)) * x
        )
        assert crossing_matrix("neg_opp_to_lower", 3) == expected

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_inverse_kinds(self, n):
        I = TorusMatrix.identity(scalar_spec(n), n * n)
        pairs = [
            ("pos_same_to_lower", "neg_same_to_lower"),
            ("pos_same_to_higher", "neg_same_to_higher"),
            ("neg_opp_to_lower", "pos_opp_to_lower"),
            ("neg_opp_to_higher", "pos_opp_to_higher"),
        ]
        for a, b in pairs:
            assert mat_mul(crossing_matrix(a, n), crossing_matrix(b, n)) == I

    def test_over_to_lower_equals_over_to_higher(self):
        for n in (2, 3):
            assert crossing_matrix("pos_same_to_lower", n) == crossing_matrix(
                "pos_same_to_higher", n
            )
            assert crossing_matrix("neg_opp_to_lower", n) == crossing_matrix(
                "neg_opp_to_higher", n
            )

    def test_rank2_same_equals_opp_for_all_q(self):
        # at rank 2 the same- and opposite-direction positive crossings
        # coincide exactly, not only in the commutative limit
        assert crossing_matrix("pos_same_to_lower", 2) == crossing_matrix(
            "neg_opp_to_lower", 2
        )

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_same_equals_opp_at_h_one(self, n):
        same = crossing_matrix("pos_same_to_lower", n)
        opp = crossing_matrix("pos_opp_to_lower", n)
        flat = lambda M: [
            [x.scalar_part().at_one() for x in row] for row in M.entries
        ]
        assert flat(same) == flat(opp)

    @pytest.mark.parametrize("n", [2, 3])
    def test_yang_baxter(self, n):
        assert yang_baxter_holds(n)

    def test_trivial_strand_is_identity(self):
        for n in (2, 3):
            assert trivial_strand_matrix(n) == TorusMatrix.identity(scalar_spec(n), n)


class TestSkein:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_skein_identities(self, n):
        report = skein_checks(n)
        assert report == {key: True for key in report}

    def test_kink_values(self):
        assert kink_scalar(3, 1) == coribbon(3)
        assert kink_scalar(3, -1) == coribbon(3).inverse()
        assert kink_scalar(3, 1) * kink_scalar(3, -1) == ONE

    def test_curl_diagrams_reduce_to_kink_factors(self):
        for kind, sign in (("pos_same_to_lower", 1), ("neg_same_to_lower", -1)):
            curl = BiangleDiagram(
                3, ("r",),
                (Slice("inc_ccw", 2), Slice(kind, 1), Slice("dec_ccw", 2)),
            )
            for s1 in range(1, 4):
                for s2 in range(1, 4):
                    expected = kink_scalar(3, sign) if s1 == s2 else ZERO
                    assert biangle_trace(curl, BiangleState((s1,), (s2,))) == expected


class TestBiangleEngine:
    def test_trivial_diagram_is_identity(self):
        diagram = BiangleDiagram(3, ("r", "l"), ())
        for s1 in range(1, 4):
            for s2 in range(1, 4):
                for t1 in range(1, 4):
                    for t2 in range(1, 4):
                        value = biangle_trace(
                            diagram, BiangleState((s1, s2), (t1, t2))
                        )
                        expected = ONE if (s1, s2) == (t1, t2) else ZERO
                        assert value == expected

    def test_far_apart_slices_commute(self):
        base = ("r", "r", "r", "r")
        d1 = BiangleDiagram(
            3, base, (Slice("pos_same_to_lower", 1), Slice("pos_same_to_lower", 3))
        )
        d2 = BiangleDiagram(
            3, base, (Slice("pos_same_to_lower", 3), Slice("pos_same_to_lower", 1))
        )
        state = BiangleState((1, 2, 2, 3), (2, 1, 3, 2))
        assert biangle_trace(d1, state) == biangle_trace(d2, state)

    def test_malformed_slices_rejected(self):
        with pytest.raises(ValueError):
            BiangleDiagram(3, ("l", "r"), (Slice("pos_same_to_lower", 1),))
        with pytest.raises(ValueError):
            BiangleDiagram(3, ("r",), (Slice("dec_ccw", 1),))


class TestDuality:
    def test_lemma_at_canonical_parameters(self):
        for sign in (1, -1):
            report = duality_lemma_check(3, duality_parameter(3, sign))
            assert report == {key: True for key in report}

    def test_lemma_fails_at_one(self):
        report = duality_lemma_check(3, RootScalar.one())
        assert not all(report.values())
