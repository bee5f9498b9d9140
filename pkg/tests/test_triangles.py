import math
from fractions import Fraction

import pytest

from weylchambers.triangles import (
    IDENTITY_NAMES,
    IntegerPolynomial,
    VolumeRow,
    expand_defining_polynomial,
    intrinsic_volume_row,
    row_sum_law,
    triangle,
    verify_identity,
)


def naive_product(constants):
    # independent route: schoolbook convolution, no in-place updates
    coeffs = [1]
    for c in constants:
        shifted = [0] + coeffs
        scaled = [v * c for v in coeffs] + [0]
        coeffs = [a + b for a, b in zip(shifted, scaled)]
    return tuple(coeffs)


class TestExpansion:
    def test_stirling_row_3(self):
        # t(t+1)(t+2) = 2t + 3t^2 + t^3
        assert expand_defining_polynomial("A", 3).coefficients == (0, 2, 3, 1)

    def test_b_row_2(self):
        # (t+1)(t+3) = 3 + 4t + t^2
        assert expand_defining_polynomial("B", 2).coefficients == (3, 4, 1)

    def test_d_row_2(self):
        # (t+1)(t+1) with n = 2
        assert expand_defining_polynomial("D", 2).coefficients == (1, 2, 1)

    def test_empty_products(self):
        for kind in "ABD":
            assert expand_defining_polynomial(kind, 0).coefficients == (1,)

    def test_d_row_1_is_plain_t(self):
        assert expand_defining_polynomial("D", 1).coefficients == (0, 1)

    def test_matches_naive_convolution(self):
        cases = {
            "A": list(range(6)),
            "B": [1, 3, 5, 7, 9, 11],
            "D": [1, 3, 5, 7, 9, 6],
        }
        for kind, constants in cases.items():
            got = expand_defining_polynomial(kind, 6).coefficients
            assert got == naive_product(constants)

    def test_rejects_negative_n(self):
        with pytest.raises(ValueError):
            expand_defining_polynomial("A", -1)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            expand_defining_polynomial("X", 2)


class TestIntegerPolynomial:
    def test_accessors(self):
        p = IntegerPolynomial((0, 2, 3, 1))
        assert p.degree == 3
        assert p.coefficient(2) == 3
        assert p.coefficient(7) == 0
        assert p.coefficient(-1) == 0

    def test_evaluation_gives_row_sum(self):
        # setting t = 1 in the defining product gives the row-sum law
        for kind in "ABD":
            for n in range(8):
                assert expand_defining_polynomial(kind, n)(1) == row_sum_law(kind, n)

    def test_rejects_trailing_zero(self):
        with pytest.raises(ValueError):
            IntegerPolynomial((1, 0))


class TestTriangle:
    def test_frozen_rows(self):
        assert triangle("B", 2).row(2) == (3, 4, 1)
        assert triangle("D", 2).row(2) == (1, 2, 1)
        assert triangle("A", 1).row(1) == (0, 1)

    def test_d_row_2_from_b_difference(self):
        b = triangle("B", 2)
        d = triangle("D", 2)
        for k in range(3):
            assert d.value(2, k) == b.value(2, k) - 2 * b.value(1, k)

    def test_recurrence_equals_expansion(self):
        for kind in "ABD":
            tri = triangle(kind, 40)
            for n in range(41):
                poly = expand_defining_polynomial(kind, n)
                assert tri.row(n) == tuple(poly.coefficient(k) for k in range(n + 1))

    def test_row_sums(self):
        for kind in "ABD":
            tri = triangle(kind, 25)
            for n in range(26):
                assert sum(tri.row(n)) == row_sum_law(kind, n)

    def test_edge_entries(self):
        a = triangle("A", 12)
        b = triangle("B", 12)
        d = triangle("D", 12)
        for n in range(1, 13):
            assert a.value(n, 0) == 0
            assert a.value(n, n) == 1
            assert b.value(n, n) == 1
            assert d.value(n, n) == 1
            double_fact = math.factorial(2 * n) // (2**n * math.factorial(n))
            assert b.value(n, 0) == double_fact  # (2n-1)!!

    def test_out_of_range_entries_are_zero(self):
        tri = triangle("A", 5)
        assert tri.value(3, 4) == 0
        assert tri.value(3, -1) == 0
        with pytest.raises(ValueError):
            tri.value(6, 0)

    def test_d_convention_row_zero(self):
        assert triangle("D", 0).row(0) == (1,)


class TestVolumeRows:
    def test_examples(self):
        assert intrinsic_volume_row("A", 3).values == (
            Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1, 6)
        )
        assert intrinsic_volume_row("B", 1).values == (Fraction(1, 2), Fraction(1, 2))
        assert intrinsic_volume_row("D", 2).values == (
            Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)
        )

    def test_rows_are_probability_vectors(self):
        for family in "ABD":
            for n in range(1, 31):
                row = intrinsic_volume_row(family, n)
                assert sum(row.values) == 1
                assert all(v >= 0 for v in row.values)

    def test_a_rows_have_no_vertex_mass(self):
        for n in range(1, 20):
            assert intrinsic_volume_row("A", n).values[0] == 0

    def test_rejects_n_zero(self):
        with pytest.raises(ValueError):
            intrinsic_volume_row("A", 0)

    def test_volume_row_validates_sum(self):
        with pytest.raises(ValueError):
            VolumeRow("A", 1, (Fraction(1, 2), Fraction(1, 3)))


class TestIdentities:
    def test_b_from_stirling_hand_case(self):
        # B[2,1] = 2 C(1,1) s(2,1) + C(2,1) s(2,2) = 2 + 2 = 4
        s = triangle("A", 2)
        total = 2 * math.comb(1, 1) * s.value(2, 1) + math.comb(2, 1) * s.value(2, 2)
        assert total == 4 == triangle("B", 2).value(2, 1)
        assert verify_identity("b_from_stirling", 2).ok

    def test_composition_hand_case(self):
        # s(3,2) = (3!/2!) (1/(1*2) + 1/(2*1)) = 3
        assert triangle("A", 3).value(3, 2) == 3
        assert verify_identity("stirling_composition_sum", 3).ok

    def test_d_from_b_base_case(self):
        assert verify_identity("d_from_b_both_forms", 1).ok

    def test_all_identities_pass_moderate_range(self):
        for name in IDENTITY_NAMES:
            report = verify_identity(name, 25)
            assert report.ok, (name, report.failures[:5])

    def test_composition_skips_above_limit(self):
        report = verify_identity("stirling_composition_sum", 22)
        assert report.ok
        assert len(report.skipped) == 2

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            verify_identity("nope", 5)

    def test_rejects_bad_n_max(self):
        with pytest.raises(ValueError):
            verify_identity("b_from_stirling", 0)
