from __future__ import annotations

import os
import time

import pytest

import oracles
from supext.errors import EmptySet, GroundTooLarge, NotLinked, PointOutOfRange
from supext.setkit import GroundSet, PointMap, SetFamily, is_self_dual_upclosed, up_closure
from supext.superext import (
    EXPECTED_MLS_COUNTS,
    MaxLinkedSystem,
    complete_linked,
    enumerate_mls,
    eta_point,
    lambda_map,
    lambda_map_image,
    plus_set,
)

NONPRINCIPAL3 = (0b011, 0b101, 0b110)


def mls(n: int, minimal) -> MaxLinkedSystem:
    return MaxLinkedSystem(GroundSet(n), tuple(minimal))


class TestEnumerate:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_matches_direct_scan(self, n):
        """The backtracking enumerator agrees with the brute-force scan of
        all families of nonempty subsets, system by system."""
        got = {
            frozenset(s.full_family().masks) for s in enumerate_mls(GroundSet(n))
        }
        assert got == set(oracles.scan_maximal_linked(n))

    def test_n5_matches_antichain_oracle(self):
        got = {frozenset(s.minimal) for s in enumerate_mls(GroundSet(5))}
        assert got == set(oracles.antichain_maximal_linked(5))

    def test_n6_count_and_runtime(self):
        start = time.monotonic()
        lam = enumerate_mls(GroundSet(6))
        elapsed = time.monotonic() - start
        assert len(lam) == EXPECTED_MLS_COUNTS[6] == 2646
        assert elapsed < 10.0

    def test_n3_explicit(self):
        lam = enumerate_mls(GroundSet(3))
        minimals = [s.minimal for s in lam]
        assert ((0b001,) in minimals and (0b010,) in minimals
                and (0b100,) in minimals and NONPRINCIPAL3 in minimals)
        assert len(minimals) == 4

    def test_all_valid_and_distinct(self):
        lam = enumerate_mls(GroundSet(4))
        assert all(s.is_valid() for s in lam)
        assert len({s.minimal for s in lam}) == len(lam)

    def test_cap(self):
        with pytest.raises(GroundTooLarge):
            enumerate_mls(GroundSet(8))

    @pytest.mark.skipif(
        not os.environ.get("SUPEXT_RUN_SLOW"),
        reason="n=7 takes about two minutes; set SUPEXT_RUN_SLOW=1 to run",
    )
    def test_n7_count_and_runtime(self):
        start = time.monotonic()
        count = len(enumerate_mls(GroundSet(7), workers=4))
        elapsed = time.monotonic() - start
        assert count == EXPECTED_MLS_COUNTS[7] == 1_422_564
        assert elapsed < 300.0

    def test_worker_independence(self):
        base = [s.minimal for s in enumerate_mls(GroundSet(5))]
        for w in (2, 8):
            assert [s.minimal for s in enumerate_mls(GroundSet(5), workers=w)] == base


class TestEtaPoint:
    def test_examples(self):
        assert eta_point(GroundSet(3), 1).minimal == (0b010,)
        assert eta_point(GroundSet(1), 0).minimal == (0b1,)
        with pytest.raises(PointOutOfRange):
            eta_point(GroundSet(3), 3)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_membership(self, n):
        lam = enumerate_mls(GroundSet(n))
        for x in range(n):
            assert lam.index(eta_point(GroundSet(n), x)) >= 0


class TestCompleteLinked:
    def test_singleton_family(self):
        fam = SetFamily.of(GroundSet(3), [0b111])
        assert complete_linked(fam) == eta_point(GroundSet(3), 0)

    def test_fixpoint(self):
        fam = SetFamily.of(GroundSet(3), NONPRINCIPAL3)
        assert complete_linked(fam).minimal == NONPRINCIPAL3

    def test_contains_input(self):
        for n in (2, 3, 4):
            lam = enumerate_mls(GroundSet(n))
            for s in lam:
                fam = SetFamily.of(GroundSet(n), s.minimal)
                done = complete_linked(fam)
                assert done.is_valid()
                assert set(fam.masks) <= set(done.full_family().masks)

    def test_not_linked(self):
        with pytest.raises(NotLinked):
            complete_linked(SetFamily.of(GroundSet(3), [0b001, 0b110]))


class TestLambdaMap:
    def test_identity(self):
        g = GroundSet(3)
        ident = PointMap.identity(g)
        for s in enumerate_mls(g):
            assert lambda_map(ident, s) == s

    def test_merge_example(self):
        # f(0)=f(1)=0, f(2)=1 collapses the non-principal system to a point
        pm = PointMap(GroundSet(3), GroundSet(2), (0, 0, 1))
        out = lambda_map(pm, mls(3, NONPRINCIPAL3))
        assert out == eta_point(GroundSet(2), 0)

    def test_constant_map(self):
        pm = PointMap(GroundSet(3), GroundSet(3), (1, 1, 1))
        for s in enumerate_mls(GroundSet(3)):
            assert lambda_map(pm, s) == eta_point(GroundSet(3), 1)

    def test_composition_law(self):
        f = PointMap(GroundSet(3), GroundSet(3), (1, 0, 1))
        g = PointMap(GroundSet(3), GroundSet(2), (0, 0, 1))
        gf = g.compose(f)
        for s in enumerate_mls(GroundSet(3)):
            assert lambda_map(gf, s) == lambda_map(g, lambda_map(f, s))

    def test_image_formula_on_surjections(self):
        maps = [
            PointMap(GroundSet(3), GroundSet(2), img)
            for img in [(0, 0, 1), (0, 1, 0), (1, 0, 0), (0, 1, 1), (1, 1, 0), (1, 0, 1)]
        ]
        for pm in maps:
            for s in enumerate_mls(GroundSet(3)):
                assert lambda_map(pm, s) == lambda_map_image(pm, s)

    def test_output_valid(self):
        pm = PointMap(GroundSet(4), GroundSet(3), (0, 1, 2, 1))
        for s in enumerate_mls(GroundSet(4)):
            assert lambda_map(pm, s).is_valid()


class TestPlusSet:
    def test_full_set(self):
        lam = enumerate_mls(GroundSet(3))
        assert plus_set(0b111, lam) == tuple(lam)

    def test_singleton(self):
        lam = enumerate_mls(GroundSet(4))
        for x in range(4):
            assert plus_set(1 << x, lam) == (eta_point(GroundSet(4), x),)

    def test_pair_example(self):
        lam = enumerate_mls(GroundSet(3))
        got = plus_set(0b011, lam)
        assert set(got) == {
            eta_point(GroundSet(3), 0),
            eta_point(GroundSet(3), 1),
            mls(3, NONPRINCIPAL3),
        }

    def test_empty_rejected(self):
        with pytest.raises(EmptySet):
            plus_set(0, enumerate_mls(GroundSet(2)))

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_binary_property(self, n):
        """For every linked family of ground subsets, the corresponding
        plus-sets have a system in common (the completion witnesses it)."""
        g = GroundSet(n)
        lam = enumerate_mls(g)
        cache = {f: set(plus_set(f, lam)) for f in g.nonempty_subsets()}
        for chain in oracles.all_antichains(n):
            if not oracles.is_linked_family(chain):
                continue
            common = set(lam)
            for f in chain:
                common &= cache[f]
            assert common, f"linked family {sorted(chain)} has empty plus-set meet"
