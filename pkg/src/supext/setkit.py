"""Bit-encoded subsets and set families over a small finite ground set.

Points are 0-indexed; a subset of an n-point ground set is an int mask
with bit i standing for point i.  Families are duplicate-free and kept
in the canonical (cardinality, mask) order, which makes every
enumeration downstream deterministic and diffable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import GroundTooLarge, InputError, PointOutOfRange

# All family-level operations stay exact and fast up to this width;
# enumeration of maximal linked systems is capped separately (see superext).
MAX_GROUND = 16


def popcount(mask: int) -> int:
    return mask.bit_count()


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def canonical_key(mask: int) -> tuple[int, int]:
    return (popcount(mask), mask)


@dataclass(frozen=True)
class GroundSet:
    """An n-point ground set, n >= 1.

    Finite compact Hausdorff spaces are discrete, so every subset is
    closed; the ground set is all the topology we need here.
    """

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GroundTooLarge("ground set must have at least one point")
        if self.n > MAX_GROUND:
            raise GroundTooLarge(f"ground set size {self.n} exceeds {MAX_GROUND}")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def points(self) -> range:
        return range(self.n)

    def check_point(self, x: int) -> None:
        if not 0 <= x < self.n:
            raise PointOutOfRange(f"point {x} outside ground set of size {self.n}")

    def check_mask(self, mask: int) -> None:
        if not 0 <= mask <= self.full:
            raise PointOutOfRange(f"mask {mask:#x} uses bits outside ground set")

    def nonempty_subsets(self) -> range:
        return range(1, self.full + 1)


@dataclass(frozen=True)
class Subset:
    """A subset of a ground set, encoded as a bitmask."""

    ground: GroundSet
    mask: int

    def __post_init__(self) -> None:
        self.ground.check_mask(self.mask)

    def members(self) -> tuple[int, ...]:
        return tuple(bits(self.mask))

    def complement(self) -> "Subset":
        return Subset(self.ground, self.ground.full ^ self.mask)

    def __len__(self) -> int:
        return popcount(self.mask)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask >> x & 1)


@dataclass(frozen=True)
class SetFamily:
    """A duplicate-free, canonically ordered family of subsets."""

    ground: GroundSet
    masks: tuple[int, ...]

    def __post_init__(self) -> None:
        for m in self.masks:
            self.ground.check_mask(m)
        ordered = tuple(sorted(set(self.masks), key=canonical_key))
        if ordered != self.masks:
            raise InputError("family masks must be duplicate-free and canonically ordered")

    @classmethod
    def of(cls, ground: GroundSet, masks: Iterable[int]) -> "SetFamily":
        return cls(ground, tuple(sorted(set(masks), key=canonical_key)))

    def subsets(self) -> tuple[Subset, ...]:
        return tuple(Subset(self.ground, m) for m in self.masks)

    def __len__(self) -> int:
        return len(self.masks)

    def __contains__(self, mask: int) -> bool:
        return mask in set(self.masks)


@dataclass(frozen=True)
class PointMap:
    """A total map between ground sets, image[x] = f(x)."""

    dom: GroundSet
    cod: GroundSet
    image: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.image) != self.dom.n:
            raise InputError("point map must assign every domain point")
        for y in self.image:
            self.cod.check_point(y)

    def __call__(self, x: int) -> int:
        self.dom.check_point(x)
        return self.image[x]

    def is_surjective(self) -> bool:
        return len(set(self.image)) == self.cod.n

    def image_mask(self, mask: int) -> int:
        out = 0
        for x in bits(mask):
            out |= 1 << self.image[x]
        return out

    def preimage_mask(self, mask: int) -> int:
        out = 0
        for x in range(self.dom.n):
            if mask >> self.image[x] & 1:
                out |= 1 << x
        return out

    @classmethod
    def identity(cls, ground: GroundSet) -> "PointMap":
        return cls(ground, ground, tuple(range(ground.n)))

    def compose(self, inner: "PointMap") -> "PointMap":
        """self after inner: x -> self(inner(x))."""
        if inner.cod != self.dom:
            raise InputError("maps not composable")
        return PointMap(inner.dom, self.cod, tuple(self.image[y] for y in inner.image))


def is_linked(fam: SetFamily) -> bool:
    """True iff every pair of members intersects.

    The empty family and singleton families are linked; any family
    containing the empty set is not (the empty set meets nothing).
    """
    ms = fam.masks
    if 0 in ms:
        return False
    for i in range(len(ms)):
        for j in range(i + 1, len(ms)):
            if not ms[i] & ms[j]:
                return False
    return True


def _supersets(mask: int, full: int) -> Iterator[int]:
    free = full ^ mask
    sub = free
    while True:
        yield mask | sub
        if sub == 0:
            return
        sub = (sub - 1) & free


def up_closure(fam: SetFamily) -> SetFamily:
    """All supersets (within the ground set) of members of the family."""
    full = fam.ground.full
    out: set[int] = set()
    for m in fam.masks:
        out.update(_supersets(m, full))
    return SetFamily.of(fam.ground, out)


def minimal_members(fam: SetFamily) -> SetFamily:
    """The inclusion-minimal members; an antichain with the same up-closure."""
    keep: list[int] = []
    for m in fam.masks:  # canonical order: subsets precede supersets
        if not any(k & m == k for k in keep):
            keep.append(m)
    return SetFamily.of(fam.ground, keep)


def up_contains(minimal: tuple[int, ...], mask: int) -> bool:
    """Whether ``mask`` lies in the up-closure generated by ``minimal``."""
    return any(m & mask == m for m in minimal)


def is_self_dual_upclosed(fam: SetFamily) -> bool:
    """Up-closed, empty-set-free, and containing exactly one of A / complement(A).

    This is the combinatorial characterization of maximal linked
    families on a finite discrete space.
    """
    full = fam.ground.full
    members = set(fam.masks)
    if 0 in members:
        return False
    for m in members:
        free = full ^ m
        for b in bits(free):
            if m | (1 << b) not in members:
                return False
    for a in range(full + 1):
        if (a in members) == ((full ^ a) in members):
            return False
    return True


def family_to_json(fam: SetFamily) -> str:
    """Serialize as {"n": int, "sets": [lowercase hex masks]}."""
    return json.dumps(
        {"n": fam.ground.n, "sets": [format(m, "x") for m in fam.masks]},
        sort_keys=True,
    )


def family_from_json(text: str) -> SetFamily:
    try:
        obj = json.loads(text)
        ground = GroundSet(int(obj["n"]))
        masks = [int(s, 16) for s in obj["sets"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed family file: {exc}") from exc
    return SetFamily.of(ground, masks)
