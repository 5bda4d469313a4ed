"""Finite topological spaces, regular-embedding operators, and the two
conversions between regular operators and usco maps into the superextension.

A finite (Alexandrov) topology is determined by minimal open neighborhoods;
opens are exactly the sets closed under them.  A regular operator e sends
opens of an embedded space X to opens of the ambient space Y with
e(empty) = empty, trace e(U) & X = U, and disjointness preservation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import (
    CarrierMismatch,
    InputError,
    InvalidOperator,
    NotPointFixed,
    NotUsco,
    TooLarge,
)
from .setkit import GroundSet, bits, canonical_key
from .superext import MaxLinkedSystem, Superextension, enumerate_mls, eta_point

MAX_SPACE = 16


@dataclass(frozen=True)
class FiniteTopSpace:
    """A finite topological space given by minimal open neighborhoods."""

    n: int
    min_nbhd: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InputError("space must have at least one point")
        if self.n > MAX_SPACE:
            raise TooLarge(f"space size {self.n} exceeds {MAX_SPACE}")
        if len(self.min_nbhd) != self.n:
            raise InputError("one minimal neighborhood per point required")
        full = (1 << self.n) - 1
        for x, nb in enumerate(self.min_nbhd):
            if nb & ~full or not (nb >> x & 1):
                raise InputError(f"minimal neighborhood of {x} must contain {x}")
        for x in range(self.n):
            for y in bits(self.min_nbhd[x]):
                if self.min_nbhd[y] & ~self.min_nbhd[x]:
                    raise InputError("minimal neighborhoods violate preorder consistency")

    @classmethod
    def discrete(cls, n: int) -> "FiniteTopSpace":
        return cls(n, tuple(1 << x for x in range(n)))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def is_open(self, mask: int) -> bool:
        return all(self.min_nbhd[x] & ~mask == 0 for x in bits(mask))

    def opens(self) -> tuple[int, ...]:
        """All open sets, canonically ordered by (cardinality, mask)."""
        return tuple(
            sorted((m for m in range(self.full + 1) if self.is_open(m)), key=canonical_key)
        )

    def closure(self, mask: int) -> int:
        """Topological closure: points whose every neighborhood meets the set."""
        return sum(1 << y for y in range(self.n) if self.min_nbhd[y] & mask)

    def product(self, other: "FiniteTopSpace") -> "FiniteTopSpace":
        """Product space; point (x, y) gets index x * other.n + y."""
        if self.n * other.n > MAX_SPACE:
            raise TooLarge("product carrier too large")
        nb = []
        for x in range(self.n):
            for y in range(other.n):
                m = 0
                for a in bits(self.min_nbhd[x]):
                    for b in bits(other.min_nbhd[y]):
                        m |= 1 << (a * other.n + b)
                nb.append(m)
        return FiniteTopSpace(self.n * other.n, tuple(nb))


@dataclass(frozen=True)
class RegularOperator:
    """An open-set operator witnessing a regular embedding of X into Y."""

    domain: FiniteTopSpace
    codomain: FiniteTopSpace
    inject: tuple[int, ...]
    table: tuple[tuple[int, int], ...]  # (open of X, its image open of Y)

    def __post_init__(self) -> None:
        if len(self.inject) != self.domain.n or len(set(self.inject)) != self.domain.n:
            raise InputError("inject must be an injection of domain points")
        for y in self.inject:
            if not 0 <= y < self.codomain.n:
                raise InputError("inject target out of range")
        ordered = tuple(sorted(self.table, key=lambda p: canonical_key(p[0])))
        object.__setattr__(self, "table", ordered)

    def image_mask(self, x_mask: int) -> int:
        out = 0
        for x in bits(x_mask):
            out |= 1 << self.inject[x]
        return out

    @property
    def x_image(self) -> int:
        return self.image_mask(self.domain.full)

    def lookup(self) -> dict[int, int]:
        return dict(self.table)

    def e(self, u: int) -> int:
        try:
            return self.lookup()[u]
        except KeyError:
            raise InvalidOperator(f"operator table has no entry for open {u:#x}") from None

    @classmethod
    def identity(cls, space: FiniteTopSpace) -> "RegularOperator":
        return cls(
            space,
            space,
            tuple(range(space.n)),
            tuple((u, u) for u in space.opens()),
        )


@dataclass(frozen=True)
class RegularCheck:
    ok: bool
    axiom: str | None = None
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_regular(e: RegularOperator) -> RegularCheck:
    """Exhaustive check of the three regular-operator axioms."""
    opens_x = e.domain.opens()
    tab = e.lookup()
    if sorted(tab) != sorted(opens_x):
        return RegularCheck(False, "table must cover exactly the opens of the domain")
    for u, eu in e.table:
        if not e.codomain.is_open(eu):
            return RegularCheck(False, "image not open", (u, eu))
    if tab[0] != 0:
        return RegularCheck(False, "empty set must map to the empty set", (0, tab[0]))
    for u, eu in e.table:
        if eu & e.x_image != e.image_mask(u):
            return RegularCheck(False, "trace", (u, eu))
    for i, (u, eu) in enumerate(e.table):
        for v, ev in e.table[i + 1 :]:
            if not u & v and eu & ev:
                return RegularCheck(False, "disjointness", (u, v))
    return RegularCheck(True)


def product_operator(parts: list[RegularOperator]) -> RegularOperator:
    """The box-product operator of finitely many regular operators.

    Basic boxes of domain opens map to boxes of their images; a general
    open maps to the union over the basic boxes it contains.
    """
    if not parts:
        raise InputError("need at least one operator")
    op = parts[0]
    for nxt in parts[1:]:
        op = _product2(op, nxt)
    return op


def _product2(e1: RegularOperator, e2: RegularOperator) -> RegularOperator:
    dx = e1.domain.product(e2.domain)
    dy = e1.codomain.product(e2.codomain)
    if (1 << dx.n) > (1 << 16) or (1 << dy.n) > (1 << 16):
        raise TooLarge("product carrier too large")
    inject = tuple(
        e1.inject[x1] * e2.codomain.n + e2.inject[x2]
        for x1 in range(e1.domain.n)
        for x2 in range(e2.domain.n)
    )

    def box(m1: int, m2: int, width: int) -> int:
        out = 0
        for a in bits(m1):
            for b in bits(m2):
                out |= 1 << (a * width + b)
        return out

    boxes = [
        (box(u1, u2, e2.domain.n), box(eu1, eu2, e2.codomain.n))
        for u1, eu1 in e1.table
        for u2, eu2 in e2.table
    ]
    table = []
    for g in dx.opens():
        theta = 0
        for bx, by in boxes:
            if bx & ~g == 0:
                theta |= by
        table.append((g, theta))
    return RegularOperator(dx, dy, inject, tuple(table))


def compose_operators(outer: RegularOperator, inner: RegularOperator) -> RegularOperator:
    """W -> outer(inner(W)), for X embedded in X' embedded in Z."""
    if inner.codomain != outer.domain:
        raise CarrierMismatch("inner codomain must be the outer domain")
    out_tab = outer.lookup()
    table = []
    for u, eu in inner.table:
        if eu not in out_tab:
            raise CarrierMismatch("inner image is not an open the outer operator covers")
        table.append((u, out_tab[eu]))
    inject = tuple(outer.inject[y] for y in inner.inject)
    return RegularOperator(inner.domain, outer.codomain, inject, tuple(table))


def find_regular_operator(
    x: FiniteTopSpace, y: FiniteTopSpace, inject: tuple[int, ...]
) -> RegularOperator | None:
    """Brute-force search for a regular operator witnessing the embedding.

    Backtracks over the opens of X in canonical order, assigning opens of
    Y consistent with the trace and disjointness axioms.  Exhaustive but
    only intended for small carriers (<= 6 points).
    """
    if y.n > 6:
        raise TooLarge("existence search capped at 6-point ambient spaces")
    opens_x = x.opens()
    opens_y = y.opens()
    img = lambda m: sum(1 << inject[p] for p in bits(m))
    x_img = img(x.full)
    assign: dict[int, int] = {0: 0}

    def bt(idx: int) -> bool:
        if idx == len(opens_x):
            return True
        u = opens_x[idx]
        if u == 0:
            return bt(idx + 1)
        for v in opens_y:
            if v & x_img != img(u):
                continue
            if any(not u & w and v & assign[w] for w in assign):
                continue
            assign[u] = v
            if bt(idx + 1):
                return True
            del assign[u]
        return False

    if not bt(0):
        return None
    return RegularOperator(x, y, inject, tuple(sorted(assign.items())))


# --------------------------------------------------------------------------
# Conversions between regular operators and usco maps into the superextension


@dataclass(frozen=True)
class UscoMap:
    """A set-valued map from an ambient space into a superextension."""

    space: FiniteTopSpace
    lam: Superextension
    values: tuple[tuple[MaxLinkedSystem, ...], ...]
    inject: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.space.n:
            raise InputError("one value per ambient point required")

    def is_usc(self) -> bool:
        """Finite usc criterion: r shrinks along minimal neighborhoods."""
        for y in range(self.space.n):
            ry = set(self.values[y])
            for z in bits(self.space.min_nbhd[y]):
                if not set(self.values[z]) <= ry:
                    return False
        return True


def usco_from_regular(e: RegularOperator, lam: Superextension | None = None) -> UscoMap:
    """r(y) = all systems containing the closure of every U with y in e(U).

    Points outside every e(U) get the whole superextension; embedded
    points get exactly their principal system.
    """
    check = validate_regular(e)
    if not check.ok:
        raise InvalidOperator(f"operator fails {check.axiom}")
    ground = GroundSet(e.domain.n)
    if lam is None:
        lam = enumerate_mls(ground)
    values = []
    for y in range(e.codomain.n):
        closures = [e.domain.closure(u) for u, eu in e.table if u and (eu >> y & 1)]
        if closures:
            vals = tuple(eta for eta in lam.systems if all(eta.contains(c) for c in closures))
        else:
            vals = lam.systems
        values.append(vals)
    return UscoMap(e.codomain, lam, tuple(values), e.inject)


def check_usco_map(r: UscoMap) -> None:
    """Raise unless r has nonempty values, fixes embedded points, and is usc."""
    ground = r.lam.ground
    for y, vals in enumerate(r.values):
        if not vals:
            raise NotUsco(f"empty value at point {y}")
    for x in range(ground.n):
        if r.values[r.inject[x]] != (eta_point(ground, x),):
            raise NotPointFixed(f"embedded point {x} is not sent to its principal system")
    if not r.is_usc():
        raise NotUsco("map is not upper semicontinuous")


def regular_from_usco(r: UscoMap, domain: FiniteTopSpace | None = None) -> RegularOperator:
    """e(U) = points whose value lands inside U-plus.

    U-plus is generated by the closed sets contained in U: a system lies
    in it when some closed F inside U belongs to the system.
    """
    check_usco_map(r)
    ground = r.lam.ground
    if domain is None:
        domain = FiniteTopSpace.discrete(ground.n)
    closed = [domain.full ^ o for o in domain.opens()]

    def in_uplus(eta: MaxLinkedSystem, u: int) -> bool:
        return any(f & ~u == 0 and eta.contains(f) for f in closed if f)

    table = []
    for u in domain.opens():
        if u == 0:
            table.append((0, 0))
            continue
        eu = 0
        for y in range(r.space.n):
            if all(in_uplus(eta, u) for eta in r.values[y]):
                eu |= 1 << y
        table.append((u, eu))
    return RegularOperator(domain, r.space, r.inject, tuple(table))


# --------------------------------------------------------------------------
# Serialization


def space_to_obj(space: FiniteTopSpace) -> dict:
    return {"n": space.n, "min_nbhd": [format(m, "x") for m in space.min_nbhd]}


def space_from_obj(obj: dict) -> FiniteTopSpace:
    try:
        return FiniteTopSpace(int(obj["n"]), tuple(int(s, 16) for s in obj["min_nbhd"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed space object: {exc}") from exc


def operator_to_json(e: RegularOperator) -> str:
    return json.dumps(
        {
            "X": space_to_obj(e.domain),
            "Y": space_to_obj(e.codomain),
            "inject": list(e.inject),
            "table": [[format(u, "x"), format(eu, "x")] for u, eu in e.table],
        },
        sort_keys=True,
    )


def operator_from_json(text: str) -> RegularOperator:
    try:
        obj = json.loads(text)
        return RegularOperator(
            space_from_obj(obj["X"]),
            space_from_obj(obj["Y"]),
            tuple(int(i) for i in obj["inject"]),
            tuple((int(u, 16), int(eu, 16)) for u, eu in obj["table"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed operator file: {exc}") from exc
