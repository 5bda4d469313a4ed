"""Maximal linked systems and their enumeration.

A maximal linked system on a finite discrete ground set is an up-closed
family of nonempty subsets containing exactly one of every complementary
pair {A, complement(A)}.  We store only the antichain of inclusion-minimal
members; the full family is its up-closure.

Enumeration assigns one side of each complementary pair by backtracking,
pairs ordered small-side-first so the hardest constraints land early.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from . import parallel
from .errors import EmptySet, GroundMismatch, GroundTooLarge, NotLinked
from .setkit import (
    GroundSet,
    PointMap,
    SetFamily,
    canonical_key,
    is_linked,
    is_self_dual_upclosed,
    minimal_members,
    popcount,
    up_closure,
    up_contains,
)

DEFAULT_MAX_N = 7


def enumeration_cap() -> int:
    return int(os.environ.get("SUPEXT_MAX_N", str(DEFAULT_MAX_N)))


@dataclass(frozen=True)
class MaxLinkedSystem:
    """A maximal linked system, canonically represented by its minimal antichain."""

    ground: GroundSet
    minimal: tuple[int, ...]

    def __post_init__(self) -> None:
        ms = self.minimal
        if not ms or 0 in ms:
            raise NotLinked("minimal members must be nonempty")
        if ms != tuple(sorted(set(ms), key=canonical_key)):
            raise NotLinked("minimal members must be a canonically ordered antichain")
        for i, a in enumerate(ms):
            for b in ms[i + 1 :]:
                if a & b == a or a & b == b:
                    raise NotLinked("minimal members must form an antichain")
                if not a & b:
                    raise NotLinked("minimal members must be pairwise intersecting")

    def contains(self, mask: int) -> bool:
        """Membership of a subset in the full (up-closed) system."""
        return up_contains(self.minimal, mask)

    def full_family(self) -> SetFamily:
        return up_closure(SetFamily.of(self.ground, self.minimal))

    def is_valid(self) -> bool:
        """Full check of the defining invariant (exponential in n)."""
        return is_self_dual_upclosed(self.full_family())

    def sort_key(self) -> tuple[tuple[int, int], ...]:
        return tuple(canonical_key(m) for m in self.minimal)


@dataclass(frozen=True)
class Superextension:
    """All maximal linked systems on a ground set, canonically ordered."""

    ground: GroundSet
    systems: tuple[MaxLinkedSystem, ...]

    def __len__(self) -> int:
        return len(self.systems)

    def __iter__(self):
        return iter(self.systems)

    def index(self, eta: MaxLinkedSystem) -> int:
        return self.systems.index(eta)


def _pair_order(n: int) -> list[tuple[int, int]]:
    """Complementary pairs {A, A^c}, small side first, hardest pairs earliest."""
    full = (1 << n) - 1
    pairs = []
    for a in range(1, full):
        b = full ^ a
        if canonical_key(a) < canonical_key(b):
            pairs.append((a, b))
    pairs.sort(key=lambda p: canonical_key(p[0]))
    return pairs


def _complete_all(pairs: list[tuple[int, int]], chosen: list[int], idx: int, out: list[tuple[int, ...]]) -> None:
    if idx == len(pairs):
        out.append(tuple(chosen))
        return
    for s in pairs[idx]:
        if all(s & c for c in chosen):
            chosen.append(s)
            _complete_all(pairs, chosen, idx + 1, out)
            chosen.pop()


def _antichain_of(chosen: tuple[int, ...], full: int) -> tuple[int, ...]:
    if not chosen:  # n = 1: the only system is {X}
        return (full,)
    keep: list[int] = []
    for m in sorted(chosen, key=canonical_key):
        if not any(k & m == k for k in keep):
            keep.append(m)
    return tuple(keep)


def _enum_subtree(args: tuple[int, tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Worker: complete all assignments below a fixed prefix of pair choices."""
    n, prefix = args
    pairs = _pair_order(n)
    full = (1 << n) - 1
    leaves: list[tuple[int, ...]] = []
    _complete_all(pairs, list(prefix), len(prefix), leaves)
    return [_antichain_of(leaf, full) for leaf in leaves]


_SPLIT_DEPTH = 2


def enumerate_mls(ground: GroundSet, workers: int = 1) -> Superextension:
    """Enumerate every maximal linked system on the ground set.

    With workers > 1 the backtracking tree is split at a fixed depth and
    the subtrees are processed independently; the canonical merge makes
    the output identical regardless of scheduling.
    """
    cap = enumeration_cap()
    if ground.n > cap:
        raise GroundTooLarge(f"enumeration capped at n <= {cap} (set SUPEXT_MAX_N to override)")
    pairs = _pair_order(ground.n)
    depth = min(_SPLIT_DEPTH, len(pairs))
    prefixes: list[tuple[int, ...]] = []
    _enum_prefixes(pairs, depth, [], prefixes)
    results = parallel.map_chunks(_enum_subtree, [(ground.n, p) for p in prefixes], workers)
    antichains = sorted({ac for chunk in results for ac in chunk})
    systems = tuple(MaxLinkedSystem(ground, ac) for ac in antichains)
    return Superextension(ground, systems)


def _enum_prefixes(pairs: list[tuple[int, int]], depth: int, chosen: list[int], out: list[tuple[int, ...]]) -> None:
    if len(chosen) == depth:
        out.append(tuple(chosen))
        return
    for s in pairs[len(chosen)]:
        if all(s & c for c in chosen):
            chosen.append(s)
            _enum_prefixes(pairs, depth, chosen, out)
            chosen.pop()


def eta_point(ground: GroundSet, x: int) -> MaxLinkedSystem:
    """The principal system of all sets containing the point x."""
    ground.check_point(x)
    return MaxLinkedSystem(ground, (1 << x,))


def complete_linked(fam: SetFamily) -> MaxLinkedSystem:
    """Deterministically extend a linked family to a maximal linked system.

    Complementary pairs are visited in canonical order; the side
    consistent with linkedness is added, preferring the numerically
    smaller mask when both sides are consistent.  A linked family never
    dead-ends: once one side conflicts, the other is forced and safe.
    """
    if not is_linked(fam) or 0 in fam.masks:
        raise NotLinked("input family must be linked and free of the empty set")
    chosen = list(fam.masks)
    full = fam.ground.full
    if full not in chosen:
        chosen.append(full)
    for a, b in _pair_order(fam.ground.n):
        lo, hi = (a, b) if a < b else (b, a)
        if any(not lo & c for c in chosen):
            pick = hi
        elif any(not hi & c for c in chosen):
            pick = lo
        else:
            pick = lo
        if pick not in chosen:
            chosen.append(pick)
    return MaxLinkedSystem(fam.ground, _antichain_of(tuple(chosen), full))


def lambda_map(pm: PointMap, eta: MaxLinkedSystem) -> MaxLinkedSystem:
    """Push a system forward along a point map: {B : preimage(B) in eta}."""
    if eta.ground != pm.dom:
        raise GroundMismatch("system does not live on the map's domain")
    members = [
        b for b in pm.cod.nonempty_subsets() if eta.contains(pm.preimage_mask(b))
    ]
    out = MaxLinkedSystem(pm.cod, tuple(minimal_members(SetFamily.of(pm.cod, members)).masks))
    if not is_self_dual_upclosed(out.full_family()):
        raise NotLinked("pushforward is not a maximal linked system")
    return out


def lambda_map_image(pm: PointMap, eta: MaxLinkedSystem) -> MaxLinkedSystem:
    """Image-based pushforward: up-closure of {f(F) : F in eta}.

    Agrees with lambda_map for surjective maps; kept as an independent
    cross-check of the preimage formula.
    """
    if eta.ground != pm.dom:
        raise GroundMismatch("system does not live on the map's domain")
    images = [pm.image_mask(m) for m in eta.minimal]
    return MaxLinkedSystem(
        pm.cod, tuple(minimal_members(SetFamily.of(pm.cod, images)).masks)
    )


def plus_set(f_mask: int, lam: Superextension) -> tuple[MaxLinkedSystem, ...]:
    """All systems of the superextension containing the given nonempty set."""
    if f_mask == 0:
        raise EmptySet("plus_set of the empty set is undefined")
    lam.ground.check_mask(f_mask)
    return tuple(eta for eta in lam.systems if eta.contains(f_mask))


EXPECTED_MLS_COUNTS = {1: 1, 2: 2, 3: 4, 4: 12, 5: 81, 6: 2646, 7: 1422564}
