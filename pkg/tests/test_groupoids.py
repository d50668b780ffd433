import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from kindrings import (
    GroupoidValidationError,
    UsageError,
    cyclic_group_table,
    disjoint_union,
    full_equivalence_groupoid,
    groupoid_from_group_action,
    is_bisection,
    load_groupoid_file,
)
from kindrings.groupoids import FiniteGroupoid, groupoid_from_document, resolve_groupoid

from strategies import random_groupoid

FIXTURES = Path(__file__).parent / "fixtures"


def kinds(g):
    return {v.kind for v in g.validate()}


def mutated(g, **changes):
    fields = dict(
        arrows=list(g.arrows),
        units=set(g.units),
        src=dict(g.src),
        rng=dict(g.rng),
        inv=dict(g.inv),
        comp=dict(g.comp),
    )
    for key, fn in changes.items():
        fn(fields[key])
    return FiniteGroupoid(**fields)


class TestFullEquivalence:
    @pytest.mark.parametrize("n", range(1, 7))
    def test_valid(self, n):
        g = full_equivalence_groupoid(n)
        assert g.validate() == []
        assert len(g.arrows) == n * n and len(g.units) == n

    def test_composition(self):
        g = full_equivalence_groupoid(3)
        assert g.compose("(1,2)", "(2,3)") == "(1,3)"
        assert g.compose("(1,2)", "(1,3)") is None
        assert g.src["(1,2)"] == "(2,2)" and g.rng["(1,2)"] == "(1,1)"

    @pytest.mark.parametrize("n", [0, -1, 2.0])
    def test_bad_size(self, n):
        with pytest.raises(UsageError):
            full_equivalence_groupoid(n)


class TestValidator:
    def test_broken_inverse(self):
        g = mutated(full_equivalence_groupoid(2), inv=lambda d: d.update({"(1,2)": "(1,2)"}))
        assert "inv not compatible with src/rng" in kinds(g)

    def test_missing_composite(self):
        g = mutated(full_equivalence_groupoid(2), comp=lambda d: d.pop(("(1,2)", "(2,1)")))
        assert "composable pair undefined" in kinds(g)

    def test_spurious_composite(self):
        g = mutated(full_equivalence_groupoid(2), comp=lambda d: d.update({("(1,2)", "(1,2)"): "(1,2)"}))
        assert "non-composable pair defined" in kinds(g)

    def test_wrong_endpoints(self):
        g = mutated(full_equivalence_groupoid(3), comp=lambda d: d.update({("(1,2)", "(2,3)"): "(1,2)"}))
        assert "composite has wrong src/rng" in kinds(g)

    def test_non_associative(self):
        # Z/3 on a point with one product swapped stays well-typed but breaks associativity
        g = groupoid_from_group_action(cyclic_group_table(3), ["p"])
        g = mutated(g, comp=lambda d: d.update({("(1,p)", "(1,p)"): "(0,p)", ("(2,p)", "(2,p)"): "(0,p)"}))
        assert kinds(g) == {"composition not associative"}

    def test_check_raises_with_list(self):
        g = mutated(full_equivalence_groupoid(2), inv=lambda d: d.update({"(1,2)": "(1,2)"}))
        with pytest.raises(GroupoidValidationError) as exc:
            g.check()
        assert exc.value.violations

    def test_units_characterised(self):
        for seed in range(20):
            g = random_groupoid(random.Random(seed))
            assert g.validate() == []
            fixed = {a for a in g.arrows if g.compose(a, a) == a and g.src[a] == a == g.rng[a]}
            assert fixed == set(g.units)


class TestGroupAction:
    def test_trivial_z2_on_point(self):
        g = groupoid_from_group_action(cyclic_group_table(2), ["p"])
        assert (len(g.arrows), len(g.units)) == (2, 1)
        assert g.validate() == []

    def test_z2_swap(self):
        act = {(0, "a"): "a", (0, "b"): "b", (1, "a"): "b", (1, "b"): "a"}
        g = groupoid_from_group_action(cyclic_group_table(2), ["a", "b"], act)
        assert (len(g.arrows), len(g.units)) == (4, 2)
        assert g.validate() == []

    def test_trivial_group_on_three_points(self):
        g = groupoid_from_group_action([[0]], [1, 2, 3])
        assert len(g.units) == 3 and set(g.arrows) == set(g.units)

    def test_not_an_action(self):
        act = {(0, "a"): "a", (0, "b"): "b", (1, "a"): "b", (1, "b"): "b"}
        with pytest.raises(UsageError):
            groupoid_from_group_action(cyclic_group_table(2), ["a", "b"], act)

    def test_not_a_group(self):
        with pytest.raises(UsageError):
            groupoid_from_group_action([[0, 1], [1, 1]], ["p"])

    def test_mapping_table(self):
        mult = {(g, h): (g + h) % 2 for g in range(2) for h in range(2)}
        assert groupoid_from_group_action(mult, ["p"]) == groupoid_from_group_action(
            cyclic_group_table(2), ["p"]
        )


class TestDisjointUnion:
    def test_sizes(self):
        r1, r2 = full_equivalence_groupoid(1), full_equivalence_groupoid(2)
        g = disjoint_union(r1, r1)
        assert (len(g.units), len(g.arrows)) == (2, 2)
        g = disjoint_union(r2, r1)
        assert (len(g.arrows), len(g.units)) == (5, 3)

    def test_valid_with_isotropy(self):
        g = disjoint_union(
            full_equivalence_groupoid(2), groupoid_from_group_action(cyclic_group_table(2), ["p"])
        )
        assert g.validate() == []

    def test_no_cross_compositions(self):
        g = disjoint_union(full_equivalence_groupoid(2), full_equivalence_groupoid(2))
        assert all(a[0] == b[0] == c[0] for (a, b), c in g.comp.items())


class TestBisection:
    def test_examples(self):
        g = full_equivalence_groupoid(2)
        assert is_bisection(g, ["(1,2)", "(2,1)"])
        assert not is_bisection(g, ["(1,1)", "(1,2)"])
        assert is_bisection(g, [])

    @given(st.integers(1, 5), st.data())
    def test_singletons_and_full_sets(self, n, data):
        g = full_equivalence_groupoid(n)
        a = data.draw(st.sampled_from(g.arrows))
        assert is_bisection(g, [a])
        assert is_bisection(g, g.arrows) == (n == 1)

    def test_unknown_arrow(self):
        with pytest.raises(UsageError):
            is_bisection(full_equivalence_groupoid(2), ["(3,3)"])


class TestFiles:
    def test_fixture_round_trip(self):
        g = load_groupoid_file(FIXTURES / "r2.json")
        assert g == full_equivalence_groupoid(2)
        assert len(g.arrows) == 4

    def test_broken_fixture(self):
        with pytest.raises(GroupoidValidationError) as exc:
            load_groupoid_file(FIXTURES / "r2_broken_inverse.json")
        assert any(v.kind == "inv not compatible with src/rng" for v in exc.value.violations)

    def test_builtin_name(self):
        assert resolve_groupoid("Rn:3") == full_equivalence_groupoid(3)

    @settings(max_examples=30)
    @given(st.randoms(use_true_random=False))
    def test_document_round_trip(self, rnd):
        g = random_groupoid(rnd)
        doc = json.loads(json.dumps(g.to_document()))
        assert groupoid_from_document(doc) == g

    def test_unreadable(self, tmp_path):
        with pytest.raises(UsageError):
            load_groupoid_file(tmp_path / "missing.json")
        bad = tmp_path / "bad.json"
        bad.write_text("{", encoding="utf-8")
        with pytest.raises(UsageError):
            load_groupoid_file(bad)
        with pytest.raises(UsageError):
            groupoid_from_document({"units": []})
