import numpy as np
import pytest

from maxdet.constructions import (CONFERENCE, HADAMARD, build_order,
                                  build_recipe, kronecker, paley_conference,
                                  paley_one, paley_two, plan_recipe,
                                  sylvester_double, unit, validate)
from maxdet.exact import IntMatrix, det_exact


def gram_oracle(m):
    """Independent exact Gram product (object-dtype, no float path)."""
    a = np.array(m, dtype=object)
    return a @ a.T


class TestPaleyOne:
    def test_order4(self):
        q = paley_one(3)
        assert q.order == 4 and q.weight == 4 and q.kind == HADAMARD
        gram = gram_oracle(q.matrix.tolist())
        assert (gram == 4 * np.eye(4, dtype=object)).all()
        assert validate(q)

    def test_normalized_first_row_col(self):
        q = paley_one(7)
        assert np.all(q.matrix[0] == 1) and np.all(q.matrix[:, 0] == 1)

    def test_order332(self):
        q = paley_one(331)
        assert q.order == 332 and validate(q)

    def test_rejects_1_mod_4(self):
        with pytest.raises(ValueError):
            paley_one(5)

    def test_rejects_composite(self):
        with pytest.raises(ValueError):
            paley_one(15)


class TestPaleyTwo:
    def test_order12(self):
        q = paley_two(5)
        assert q.order == 12 and q.weight == 12
        gram = gram_oracle(q.matrix.tolist())
        assert (gram == 12 * np.eye(12, dtype=object)).all()

    def test_order2868(self):
        q = paley_two(1433)
        assert q.order == 2868 and validate(q)

    def test_rejects_3_mod_4(self):
        with pytest.raises(ValueError):
            paley_two(3)


class TestPaleyConference:
    def test_order6(self):
        q = paley_conference(5)
        assert q.order == 6 and q.weight == 5 and q.kind == CONFERENCE
        gram = gram_oracle(q.matrix.tolist())
        assert (gram == 5 * np.eye(6, dtype=object)).all()
        assert validate(q)

    @pytest.mark.parametrize("p", [5, 13, 17, 29])
    def test_symmetric(self, p):
        q = paley_conference(p)
        assert np.array_equal(q.matrix, q.matrix.T)

    def test_order710(self):
        q = paley_conference(709)
        assert q.order == 710 and validate(q)

    def test_rejects(self):
        with pytest.raises(ValueError):
            paley_conference(7)


class TestSylvesterAndKronecker:
    def test_unit_double(self):
        q = sylvester_double(unit())
        assert q.matrix.tolist() == [[1, 1], [1, -1]]

    def test_five_doublings(self):
        q = paley_one(3)
        for _ in range(5):
            q = sylvester_double(q)
            assert validate(q)
        assert q.order == 128

    def test_double_rejects_conference(self):
        with pytest.raises(ValueError):
            sylvester_double(paley_conference(5))

    def test_kron_h2_h2(self):
        h2 = sylvester_double(unit())
        q = kronecker(h2, h2)
        assert q.order == 4 and validate(q)

    def test_kron_h4_h4(self):
        h4 = build_recipe("unit;double;double")
        q = kronecker(h4, h4)
        assert q.order == 16 and validate(q)

    def test_kron_rejects_conference(self):
        with pytest.raises(ValueError):
            kronecker(sylvester_double(unit()), paley_conference(5))


class TestValidate:
    def test_flipped_entry_fails(self):
        q = paley_one(7)
        bad = q.matrix.copy()
        bad[3, 5] = -bad[3, 5]
        broken = type(q)(matrix=bad, order=q.order, weight=q.weight,
                         kind=q.kind, recipe=q.recipe)
        assert not validate(broken)

    def test_unit(self):
        assert validate(unit())

    def test_det_identity_small_orders(self):
        for recipe, k, m in [("paley1(11)", 12, 12),
                             ("conference(5)", 5, 6),
                             ("conference(13)", 13, 14),
                             ("paley2(5)", 12, 12)]:
            q = build_recipe(recipe)
            d = det_exact(IntMatrix(q.matrix.tolist()))
            assert d * d == k ** m


class TestRecipes:
    def test_plan_examples(self):
        assert plan_recipe(HADAMARD, 664) == "paley1(331);double"
        assert plan_recipe(HADAMARD, 2868) == "paley2(1433)"
        assert plan_recipe(HADAMARD, 4) == "paley1(3)"
        assert plan_recipe(HADAMARD, 1) == "unit"
        assert plan_recipe(HADAMARD, 2) == "unit;double"
        assert plan_recipe(CONFERENCE, 710) == "conference(709)"
        assert plan_recipe(CONFERENCE, 6) == "conference(5)"

    def test_plan_unreachable(self):
        # 92 = 4*23: 91, 45, and 22 give no Paley prime; 92 != 2^j
        assert plan_recipe(HADAMARD, 92) is None
        assert plan_recipe(CONFERENCE, 8) is None

    def test_plan_round_trip(self):
        for order in (4, 8, 12, 20, 24, 28, 32, 44, 48, 664, 672):
            recipe = plan_recipe(HADAMARD, order)
            assert recipe is not None, order
            q = build_recipe(recipe)
            assert q.order == order and q.kind == HADAMARD

    def test_build_order_error_names_nearest(self):
        with pytest.raises(ValueError, match="nearest realizable"):
            build_order(HADAMARD, 92)

    def test_kron_recipe_parses(self):
        q = build_recipe("kron(unit;double,unit;double)")
        assert q.order == 4 and validate(q)
        q2 = build_recipe(q.recipe)
        assert np.array_equal(q2.matrix, q.matrix)

    def test_bad_recipes(self):
        for recipe in ("", "bogus", "paley1(6)", "unit;triple",
                       "kron(unit)", "paley1(3);double;oops"):
            with pytest.raises(ValueError):
                build_recipe(recipe)


def test_all_plannable_orders_up_to_600_validate():
    # smaller sibling of the full acceptance sweep (<= 2000)
    for m in range(4, 601, 4):
        recipe = plan_recipe(HADAMARD, m)
        if recipe is not None:
            assert validate(build_recipe(recipe)), recipe
    for m in range(6, 601, 4):
        recipe = plan_recipe(CONFERENCE, m)
        if recipe is not None:
            assert validate(build_recipe(recipe)), recipe
