from fractions import Fraction

import pytest

from barnorm.chains import Chain, boundary
from barnorm.errors import CollisionDetected
from barnorm.norms import weighted_power_sum
from barnorm.vanishing import (
    ALPHA,
    VanishingConstruction,
    suffix_pair,
)


@pytest.fixture(scope="module")
def construction():
    return VanishingConstruction()


class TestSuffixes:
    def test_level_zero_is_empty(self):
        assert suffix_pair(0) == ((), ())

    def test_small_levels(self):
        assert suffix_pair(1) == ((1, 2), (2, 1))
        assert suffix_pair(3) == ((1, 1, 1, 2, 2, 2), (2, 2, 2, 1, 1, 1))


class TestLevels:
    def test_level_zero(self, construction):
        data = construction.level(0)
        assert data.words == (ALPHA,)
        assert data.markers[ALPHA] == ()
        assert data.signs[ALPHA] == 1

    def test_level_one_words(self, construction):
        words = set(construction.level(1).words)
        assert words == {(1, 1, 2), (1, 2), (1, 2, 1), (2, 1)}

    def test_level_one_signs(self, construction):
        signs = construction.level(1).signs
        assert signs[(1, 1, 2)] == 1   # child of type x·m·s
        assert signs[(1, 2)] == -1     # child of type m·s
        assert signs[(1, 2, 1)] == 1   # child of type x·m·t
        assert signs[(2, 1)] == -1     # child of type m·t

    def test_level_one_markers_shortlex(self, construction):
        markers = construction.level(1).markers
        assert markers[(1, 2)] == (1, 1)
        assert markers[(2, 1)] == (1, 2)
        assert markers[(1, 1, 2)] == (2, 1)
        assert markers[(1, 2, 1)] == (2, 2)

    @pytest.mark.parametrize("d", range(7))
    def test_sizes_and_injectivity(self, construction, d):
        data = construction.level(d)
        assert len(data.words) == 4**d
        assert len(set(data.words)) == 4**d
        markers = set(data.markers.values())
        assert len(markers) == 4**d
        assert all(len(m) == 2 * d for m in markers)
        # positive words only: no inverse letters ever appear
        assert all(all(letter > 0 for letter in w) for w in data.words)

    def test_word_length_growth(self, construction):
        for d in range(7):
            bound = 1 + sum(4 * j - 2 for j in range(1, d + 1))
            realized = max(len(w) for w in construction.level(d).words)
            assert realized <= bound == 2 * d * d + 1

    def test_level_cap(self):
        small = VanishingConstruction(max_level=2)
        with pytest.raises(ValueError):
            small.level(3)


class TestConeSimplices:
    def test_level_zero_pair(self, construction):
        s_a, t_a = construction.cone_simplices(ALPHA, 0)
        assert s_a == ((1,), (1, 1, 2))
        assert t_a == ((1,), (1, 2, 1))

    def test_diameter(self, construction):
        s_a, _ = construction.cone_simplices(ALPHA, 0)
        assert construction.model.diameter(s_a) == 3

    def test_diameter_bound_all_levels(self, construction):
        model = construction.model
        for d in range(5):
            data = construction.level(d)
            for x in data.words:
                s_x, t_x = construction.cone_simplices(x, d)
                bound = len(x) + 4 * d + 2
                assert model.diameter(s_x) <= bound
                assert model.diameter(t_x) <= bound

    def test_boundary_expansion(self, construction):
        s_a, t_a = construction.cone_simplices(ALPHA, 0)
        st = Chain.from_terms(construction.model, 2, [(s_a, 1), (t_a, 1)])
        bd = boundary(st)
        assert bd.coefficient(((1,),)) == 2
        assert bd.coefficient(((1, 2),)) == 1
        assert bd.coefficient(((2, 1),)) == 1
        assert bd.coefficient(((1, 1, 2),)) == -1
        assert bd.coefficient(((1, 2, 1),)) == -1
        assert len(bd) == 5

    def test_unknown_word_rejected(self, construction):
        with pytest.raises(ValueError):
            construction.cone_simplices((2,), 0)


class TestPartialSums:
    def test_level_zero_sum(self, construction):
        b0 = construction.partial_sum(0)
        s_a, t_a = construction.cone_simplices(ALPHA, 0)
        assert b0.coefficient(s_a) == Fraction(1, 2)
        assert b0.coefficient(t_a) == Fraction(1, 2)
        assert len(b0) == 2

    def test_support_sizes(self, construction):
        assert len(construction.partial_sum(2)) == 42
        assert len(construction.partial_sum(5)) == 2730

    def test_uniform_coefficients_per_level(self, construction):
        for d in range(4):
            chunk = construction.level_chunk(d)
            expected = Fraction(1, 2 ** (d + 1))
            assert all(abs(v) == expected for _, v in chunk.terms())

    def test_coefficient_mass_closed_form(self, construction):
        for top in range(5):
            mass = weighted_power_sum(construction.partial_sum(top), 0, 1)
            assert mass == 2 ** (top + 1) - 1


class TestTelescoping:
    def test_level_zero_by_hand(self, construction):
        tail = construction.boundary_tail(0)
        half = Fraction(1, 2)
        assert tail.coefficient(((1, 2),)) == half
        assert tail.coefficient(((2, 1),)) == half
        assert tail.coefficient(((1, 1, 2),)) == -half
        assert tail.coefficient(((1, 2, 1),)) == -half
        assert len(tail) == 4

    @pytest.mark.parametrize("top", range(6))
    def test_exact_identity(self, construction, top):
        tail = construction.boundary_tail(top)
        assert len(tail) == 4 ** (top + 1)
        # tail coefficients all have magnitude 1/2^(top+1)
        expected = Fraction(1, 2 ** (top + 1))
        assert all(abs(v) == expected for _, v in tail.terms())


class TestDecay:
    def test_closed_forms_at_weight_zero(self, construction):
        rows = construction.decay_table(6, [(0, 3), (0, 2)])
        for row in rows:
            if row.p == 3:
                inc = (2 * 4**row.level) ** (1 / 3) / 2 ** (row.level + 1)
                tail = (4 ** (row.level + 1)) ** (1 / 3) / 2 ** (row.level + 1)
                assert abs(row.increment_norm - inc) <= 1e-9 * inc
                assert abs(row.tail_norm - tail) <= 1e-9 * tail
                assert row.decreasing_from == 1
            else:
                assert abs(row.increment_norm - 2**0.5 / 2) <= 1e-9
                assert row.decreasing_from is None

    def test_decrease_kicks_in_within_range(self, construction):
        rows = construction.decay_table(6, [(1, 3)])
        assert rows[0].decreasing_from is not None

    def test_envelope_holds_for_weighted_norms(self, construction):
        # raises internally if the counted-support envelope were violated
        rows = construction.decay_table(5, [(n, p) for n in (0, 1, 2)
                                            for p in (3, 4)])
        for row in rows:
            assert row.increment_norm <= row.envelope * (1 + 1e-9)

    def test_stagnation_at_p_two_vs_decay_above(self, construction):
        rows3 = [r for r in construction.decay_table(6, [(0, 3)])]
        rows2 = [r for r in construction.decay_table(6, [(0, 2)])]
        incs3 = [r.increment_norm for r in rows3]
        incs2 = [r.increment_norm for r in rows2]
        assert all(a > b for a, b in zip(incs3, incs3[1:]))
        assert max(incs2) - min(incs2) <= 1e-9 * max(incs2)


class TestCollisionGuards:
    def test_forged_duplicate_detected(self):
        # a LevelData with the wrong cardinality must refuse to exist
        from barnorm.vanishing import LevelData
        with pytest.raises(CollisionDetected):
            LevelData(1, ((1, 2),) * 4, {}, {})
