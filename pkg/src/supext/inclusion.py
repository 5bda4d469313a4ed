"""Inclusion hyperspaces: nonempty up-closed families of nonempty subsets.

They strictly contain the maximal linked systems (which are exactly the
self-dual ones) and carry their own functor on point maps, mirroring the
superextension machinery on the same antichain representation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import GroundMismatch, InputError, TooLarge
from .setkit import (
    GroundSet,
    PointMap,
    SetFamily,
    canonical_key,
    is_self_dual_upclosed,
    minimal_members,
    up_contains,
)
from .subbase import Subbase
from .superext import MaxLinkedSystem

MAX_IH_GROUND = 5


@dataclass(frozen=True)
class InclusionHyperspace:
    """An up-closed family of nonempty subsets, stored as its minimal antichain."""

    ground: GroundSet
    minimal: tuple[int, ...]

    def __post_init__(self) -> None:
        ms = self.minimal
        if not ms or 0 in ms:
            raise InputError("minimal members must be nonempty")
        if ms != tuple(sorted(set(ms), key=canonical_key)):
            raise InputError("minimal members must be canonically ordered")
        for i, a in enumerate(ms):
            for b in ms[i + 1 :]:
                if a & b == a or a & b == b:
                    raise InputError("minimal members must form an antichain")

    def contains(self, mask: int) -> bool:
        return up_contains(self.minimal, mask)

    def is_maximal_linked(self) -> bool:
        fam = SetFamily.of(self.ground, self.minimal)
        from .setkit import up_closure

        return is_self_dual_upclosed(up_closure(fam))

    def as_mls(self) -> MaxLinkedSystem:
        return MaxLinkedSystem(self.ground, self.minimal)

    def sort_key(self) -> tuple[tuple[int, int], ...]:
        return tuple(canonical_key(m) for m in self.minimal)


def enumerate_ih(ground: GroundSet) -> tuple[InclusionHyperspace, ...]:
    """All inclusion hyperspaces, via antichains of nonempty subsets."""
    if ground.n > MAX_IH_GROUND:
        raise TooLarge(f"hyperspace enumeration capped at n <= {MAX_IH_GROUND}")
    subsets = sorted(ground.nonempty_subsets(), key=canonical_key)
    out: list[tuple[int, ...]] = []

    def extend(start: int, chain: list[int]) -> None:
        if chain:
            out.append(tuple(chain))
        for i in range(start, len(subsets)):
            s = subsets[i]
            # canonical order never puts a superset before its subsets,
            # so only the superset direction needs exclusion
            if any(c & s == c for c in chain):
                continue
            chain.append(s)
            extend(i + 1, chain)
            chain.pop()

    extend(0, [])
    out.sort()
    return tuple(InclusionHyperspace(ground, ac) for ac in out)


def g_map(pm: PointMap, a: InclusionHyperspace) -> InclusionHyperspace:
    """Push a hyperspace forward along a point map.

    Computed as {B : preimage(B) in A} and cross-checked against the
    up-closure of member images; the two agree for total maps.
    """
    if a.ground != pm.dom:
        raise GroundMismatch("hyperspace does not live on the map's domain")
    members = [b for b in pm.cod.nonempty_subsets() if a.contains(pm.preimage_mask(b))]
    by_preimage = tuple(minimal_members(SetFamily.of(pm.cod, members)).masks)
    images = [pm.image_mask(m) for m in a.minimal]
    by_image = tuple(minimal_members(SetFamily.of(pm.cod, images)).masks)
    if by_preimage != by_image:
        raise InputError("pushforward formulas disagree")
    return InclusionHyperspace(pm.cod, by_preimage)


def candidate_subbase_gx(
    ground: GroundSet,
) -> tuple[Subbase, tuple[InclusionHyperspace, ...]]:
    """A candidate subbase over the enumerated hyperspace carrier.

    Members are the containment sets {A : F in A} for every nonempty F
    and the transversal sets {A : every member of A meets U} for every
    nonempty U.  Emitted for checking, never asserted binary a priori.
    """
    if ground.n > 4:
        raise TooLarge("candidate subbase capped at n <= 4")
    carrier = enumerate_ih(ground)
    members: list[int] = []
    for f in sorted(ground.nonempty_subsets(), key=canonical_key):
        members.append(sum(1 << i for i, a in enumerate(carrier) if a.contains(f)))
    for u in sorted(ground.nonempty_subsets(), key=canonical_key):
        members.append(
            sum(1 << i for i, a in enumerate(carrier) if all(m & u for m in a.minimal))
        )
    members = [m for m in members if m]
    return Subbase(len(carrier), tuple(members)), carrier
