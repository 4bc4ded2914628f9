import itertools

import pytest

from hypersets.errors import NotInjective, SizeLimitExceeded
from hypersets.wflab import all_automorphisms, build_universe, classify_map, extend_map


class TestBuildUniverse:
    def test_pure_level_sizes(self):
        u = build_universe(0, 4)
        assert [len(level) for level in u.levels] == [0, 1, 2, 4, 16]

    def test_atoms_survive_into_level_one(self):
        u = build_universe(2, 1)
        assert len(u.levels[1]) == 4
        for a in u.atoms:
            assert a in u.levels[1]
            assert u.members[a] == frozenset((a,))

    def test_level_two_size(self):
        u = build_universe(2, 2)
        assert len(u.levels[2]) == 16

    def test_levels_increase(self):
        u = build_universe(2, 2)
        for small, large in zip(u.levels, u.levels[1:]):
            assert set(small) <= set(large)

    def test_rank(self):
        u = build_universe(1, 2)
        empty = u.intern[frozenset()]
        assert u.rank(u.atoms[0]) == 0
        assert u.rank(empty) == 0
        singleton_empty = u.intern[frozenset((empty,))]
        assert u.rank(singleton_empty) == 1

    def test_cap(self):
        with pytest.raises(SizeLimitExceeded):
            build_universe(3, 3)
        with pytest.raises(SizeLimitExceeded):
            build_universe(0, 6)


class TestExtendMap:
    def test_identity_extends_to_identity(self):
        u = build_universe(2, 2)
        m = extend_map(u, {0: 0, 1: 1})
        assert all(m.full_map[c] == c for c in u.top)

    def test_transposition_fixes_eight_of_sixteen(self):
        u = build_universe(2, 2)
        m = extend_map(u, {0: 1, 1: 0})
        assert sum(1 for c in u.top if m.full_map[c] == c) == 8
        assert all(m.full_map[m.full_map[c]] == c for c in u.top)

    def test_three_cycle_has_order_three(self):
        u = build_universe(3, 2)
        m = extend_map(u, {0: 1, 1: 2, 2: 0}).full_map
        twice = {c: m[m[c]] for c in u.top}
        thrice = {c: m[twice[c]] for c in u.top}
        assert any(m[c] != c for c in u.top)
        assert any(twice[c] != c for c in u.top)
        assert all(thrice[c] == c for c in u.top)

    def test_not_injective(self):
        u = build_universe(2, 1)
        with pytest.raises(NotInjective):
            extend_map(u, {0: 0, 1: 0})

    def test_functoriality_full_s3(self):
        u = build_universe(3, 2)
        perms = list(itertools.permutations(range(3)))
        exts = {
            p: extend_map(u, {i: p[i] for i in range(3)}).full_map for p in perms
        }
        for p in perms:
            for q in perms:
                comp = tuple(p[q[i]] for i in range(3))
                lhs = exts[comp]
                rhs = {c: exts[p][exts[q][c]] for c in u.top}
                assert lhs == rhs


class TestClassifyMap:
    def test_transposition_is_automorphism(self):
        u = build_universe(2, 2)
        rep = classify_map(u, extend_map(u, {0: 1, 1: 0}))
        assert rep.verdict == "automorphism"
        assert rep.injective and rep.surjective_onto_top
        assert rep.membership_exact
        assert rep.pure_sets_fixed
        assert rep.rank_preserved

    def test_embedding_two_into_three(self):
        u2 = build_universe(2, 2)
        u3 = build_universe(3, 2)
        rep = classify_map(u2, extend_map(u2, {0: 0, 1: 1}, into=u3))
        assert rep.verdict == "proper-embedding"
        assert rep.injective and not rep.surjective_onto_top
        assert rep.membership_exact
        assert rep.pure_sets_fixed
        assert rep.rank_preserved

    def test_pure_content_fixed_pointwise(self):
        u = build_universe(3, 2)
        m = extend_map(u, {0: 1, 1: 2, 2: 0})
        for c in u.top:
            if not u.atom_support(c):
                assert m.full_map[c] == c


class TestAllAutomorphisms:
    def test_counts_are_factorials(self):
        for n in (1, 2, 3):
            u = build_universe(n, 2)
            assert all_automorphisms(u).count == [1, 1, 2, 6][n]

    def test_every_automorphism_extends_its_atom_restriction(self):
        u = build_universe(3, 2)
        for perm in all_automorphisms(u).elements:
            sigma = {a: perm[a] for a in u.atoms}
            assert extend_map(u, sigma).full_map == perm

    def test_membership_preserved_by_all(self):
        u = build_universe(2, 2)
        for perm in all_automorphisms(u).elements:
            for x in u.top:
                for y in u.top:
                    assert (x in u.members[y]) == (perm[x] in u.members[perm[y]])

    def test_cap(self):
        u = build_universe(3, 2)
        with pytest.raises(SizeLimitExceeded):
            all_automorphisms(u, cap=10)
