import random

import pytest
from hypothesis import given, settings, strategies as st

from hypersets.apg import is_well_founded, pointed_isomorphic, rank_map
from hypersets.boffa import Universe
from hypersets.canon import Semantics, equal, is_rigid
from hypersets.errors import (
    AtomOutsideBoffa,
    DuplicateDefinition,
    HslSyntaxError,
    UndefinedName,
)
from hypersets.hsl import flatten, flatten_into, parse, unparse
from hypersets.random_graphs import random_apg

fs = frozenset


class TestParse:
    def test_self_reference(self):
        p = parse("x = {x};")
        assert len(p.statements) == 1
        assert p.defined_names == ["x"]

    def test_chain_cycle(self):
        p = parse("a0 = {a1}; a1 = {a2}; a2 = {a0};")
        assert p.defined_names == ["a0", "a1", "a2"]

    def test_tuple_definition(self):
        p = parse("p = <a,b>; a = {}; b = {a};")
        assert p.defined_names == ["p", "a", "b"]

    def test_comments_and_whitespace(self):
        p = parse("# a comment\n  x   =\n{ x };  # trailing\n")
        assert p.defined_names == ["x"]

    def test_syntax_error_position(self):
        with pytest.raises(HslSyntaxError) as err:
            parse("x = {x}\ny = {};")
        assert err.value.line == 2

    def test_duplicate_definition(self):
        with pytest.raises(DuplicateDefinition):
            parse("x = {}; x = {x};")
        with pytest.raises(DuplicateDefinition):
            parse("atom x; x = {};")

    def test_singleton_tuple_rejected(self):
        with pytest.raises(HslSyntaxError):
            parse("p = <a>; a = {};")


class TestFlatten:
    def test_quine(self):
        g = flatten(parse("x = {x};"))["x"]
        assert g.node_count == 1 and g.children[0] == fs([0])

    def test_pair_has_kuratowski_shape(self):
        g = flatten(parse("p = <a,b>; a = {}; b = {a};"))["p"]
        assert g.node_count == 5
        kids = sorted(g.children[g.root])
        assert sorted(len(g.children[k]) for k in kids) == [1, 2]

    def test_numeral(self):
        g = flatten(parse("n = 2;"))["n"]
        assert g.node_count == 3 and rank_map(g)[g.root] == 2

    def test_numerals_well_founded_and_rigid(self):
        for k in range(6):
            g = flatten(parse(f"n = {k};"))["n"]
            assert is_well_founded(g)
            assert is_rigid(g)

    def test_undefined_name(self):
        with pytest.raises(UndefinedName):
            flatten(parse("x = {y};"))

    def test_atom_outside_boffa(self):
        with pytest.raises(AtomOutsideBoffa):
            flatten(parse("atom a;"))

    def test_alias(self):
        gs = flatten(parse("x = y; y = {{}};"))
        assert pointed_isomorphic(gs["x"], gs["y"]) is not None

    def test_alias_cycle_rejected(self):
        with pytest.raises(ValueError):
            flatten(parse("x = y; y = x;"))

    def test_forward_reference(self):
        gs = flatten(parse("x = {y}; y = {};"))
        assert gs["x"].node_count == 2


class TestFlattenIntoBoffa:
    def test_atoms_minted_with_labels(self):
        u = Universe()
        ids = flatten_into(parse("atom a; atom b;"), u)
        assert u.is_quine_atom(ids["a"]) and u.is_quine_atom(ids["b"])
        assert ids["a"] != ids["b"]
        assert u.labels[ids["a"]] == "a"

    def test_duplicate_well_founded_content_merges(self):
        u = Universe()
        ids = flatten_into(parse("e = {}; f = {}; s = {e}; t = {f};"), u)
        assert ids["e"] == ids["f"]
        assert ids["s"] == ids["t"]
        u.check_extensionality()

    def test_singleton_of_atom_is_the_atom(self):
        u = Universe()
        ids = flatten_into(parse("atom a; x = {a};"), u)
        assert ids["x"] == ids["a"]

    def test_anonymous_self_singletons_distinct(self):
        u = Universe()
        ids = flatten_into(parse("x = {x}; y = {y};"), u)
        assert ids["x"] != ids["y"]


class TestUnparse:
    def test_omega(self):
        g = flatten(parse("x = {x};"))["x"]
        assert unparse(g) == "x0 = {x0};\n"

    def test_numeral_sugar(self):
        g = flatten(parse("n = 2;"))["n"]
        assert unparse(g) == "x0 = 2;\n"

    def test_pair_sugar_round_trips(self):
        g = flatten(parse("p = <a,b>; a = {}; b = {{}};"))["p"]
        text = unparse(g)
        assert "<" in text
        g2 = flatten(parse(text))["x0"]
        assert pointed_isomorphic(g, g2) is not None

    def test_self_referential_tuple_round_trips(self):
        g = flatten(parse("r = <r, a>; a = {};"))["r"]
        text = unparse(g)
        g2 = flatten(parse(text))["x0"]
        assert pointed_isomorphic(g, g2) is not None

    def test_random_round_trips(self):
        rng = random.Random(404)
        for _ in range(300):
            g = random_apg(rng, 12)
            g2 = flatten(parse(unparse(g)))["x0"]
            assert pointed_isomorphic(g, g2) is not None

    @given(st.integers(0, 6), st.integers(0, 6))
    @settings(max_examples=40, deadline=None)
    def test_pair_injectivity_on_numerals(self, i, j):
        prog = f"p = <{i}, {j}>;"
        q = flatten(parse(prog))["p"]
        other = flatten(parse("p = <0, 0>;"))["p"]
        assert equal(q, other, Semantics.AFA) == (i == 0 and j == 0)


class TestPairInjectivity:
    def test_pairs_equal_iff_components_equal(self):
        rng = random.Random(500)
        for _ in range(200):
            graphs = [random_apg(rng, 5) for _ in range(4)]
            texts = [unparse(g) for g in graphs]
            named = []
            for prefix, text in zip("abcd", texts):
                named.append(text.replace("x", prefix))
            prog_ab = f"p = <a0, b0>;\n{named[0]}{named[1]}"
            prog_cd = f"p = <c0, d0>;\n{named[2]}{named[3]}"
            pab = flatten(parse(prog_ab))["p"]
            pcd = flatten(parse(prog_cd))["p"]
            lhs = equal(pab, pcd, Semantics.AFA)
            rhs = equal(graphs[0], graphs[2], Semantics.AFA) and equal(
                graphs[1], graphs[3], Semantics.AFA
            )
            assert lhs == rhs
