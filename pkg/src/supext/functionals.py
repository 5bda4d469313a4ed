"""Monotone, homogeneous, weakly additive functionals on a finite ground set.

A functional eats a point function (one rational per point) and returns a
rational.  The three defining axioms: f <= g implies u(f) <= u(g);
u(k*f) = k*u(f) for every real k; u(f + c) = u(f) + c for every constant c.

Functionals are represented by a closed term language: point evaluations,
max-min functionals of maximal linked systems, min/max over a fixed set,
probability-measure style linear terms, convex combinations, and
precompositions along point maps.  Everything evaluates in exact rationals.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .errors import (
    EqualSystems,
    GroundMismatch,
    InputError,
    Inconsistent,
    InSubspace,
    NotAnExtender,
    NotSurjective,
)
from .setkit import GroundSet, PointMap, SetFamily, Subset, bits, canonical_key
from .superext import MaxLinkedSystem, Superextension, enumerate_mls


@dataclass(frozen=True)
class PointFunction:
    """A rational-valued function on the points of a ground set."""

    ground: GroundSet
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.ground.n:
            raise InputError("one value per point required")
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    @classmethod
    def of(cls, ground: GroundSet, values: Iterable) -> "PointFunction":
        return cls(ground, tuple(Fraction(v) for v in values))

    def __call__(self, x: int) -> Fraction:
        return self.values[x]

    def shift(self, c) -> "PointFunction":
        c = Fraction(c)
        return PointFunction(self.ground, tuple(v + c for v in self.values))

    def scale(self, k) -> "PointFunction":
        k = Fraction(k)
        return PointFunction(self.ground, tuple(k * v for v in self.values))

    def plus(self, other: "PointFunction") -> "PointFunction":
        if other.ground != self.ground:
            raise GroundMismatch("point functions on different grounds")
        return PointFunction(self.ground, tuple(a + b for a, b in zip(self.values, other.values)))

    def precompose(self, pm: PointMap) -> "PointFunction":
        """self o pm, a function on pm's domain."""
        if pm.cod != self.ground:
            raise GroundMismatch("map codomain does not match function ground")
        return PointFunction(pm.dom, tuple(self.values[pm.image[x]] for x in range(pm.dom.n)))

    def min_on(self, mask: int) -> Fraction:
        return min(self.values[x] for x in bits(mask))

    def max_on(self, mask: int) -> Fraction:
        return max(self.values[x] for x in bits(mask))


# --------------------------------------------------------------------------
# The term language


class Term:
    """Base class for functional terms; subclasses carry a .ground."""

    ground: GroundSet


@dataclass(frozen=True)
class Dirac(Term):
    ground: GroundSet
    x: int

    def __post_init__(self) -> None:
        self.ground.check_point(self.x)


@dataclass(frozen=True)
class MaxMin(Term):
    """f -> max over members F of the system of min of f on F."""

    system: MaxLinkedSystem

    @property
    def ground(self) -> GroundSet:  # type: ignore[override]
        return self.system.ground


@dataclass(frozen=True)
class MinOver(Term):
    ground: GroundSet
    mask: int

    def __post_init__(self) -> None:
        self.ground.check_mask(self.mask)
        if self.mask == 0:
            raise InputError("MinOver needs a nonempty set")


@dataclass(frozen=True)
class MaxOver(Term):
    ground: GroundSet
    mask: int

    def __post_init__(self) -> None:
        self.ground.check_mask(self.mask)
        if self.mask == 0:
            raise InputError("MaxOver needs a nonempty set")


@dataclass(frozen=True)
class Linear(Term):
    """A probability-measure style term: nonnegative weights summing to 1."""

    ground: GroundSet
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        ws = tuple(Fraction(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        if len(ws) != self.ground.n:
            raise InputError("one weight per point required")
        if any(w < 0 for w in ws) or sum(ws) != 1:
            raise InputError("weights must be nonnegative and sum to 1")


@dataclass(frozen=True)
class Convex(Term):
    """A convex combination of terms on a common ground."""

    weights: tuple[Fraction, ...]
    parts: tuple[Term, ...]

    def __post_init__(self) -> None:
        ws = tuple(Fraction(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        if not self.parts or len(ws) != len(self.parts):
            raise InputError("one weight per part required")
        if any(w <= 0 for w in ws) or sum(ws) != 1:
            raise InputError("convex weights must be positive and sum to 1")
        g = self.parts[0].ground
        if any(p.ground != g for p in self.parts):
            raise GroundMismatch("convex parts on different grounds")

    @property
    def ground(self) -> GroundSet:  # type: ignore[override]
        return self.parts[0].ground


@dataclass(frozen=True)
class Precompose(Term):
    """The pushforward of ``inner`` along ``point_map``.

    Evaluating at h gives inner(h o point_map); the term lives on the
    map's codomain while inner lives on its domain.
    """

    point_map: PointMap
    inner: Term

    def __post_init__(self) -> None:
        if self.inner.ground != self.point_map.dom:
            raise GroundMismatch("inner term must live on the map's domain")

    @property
    def ground(self) -> GroundSet:  # type: ignore[override]
        return self.point_map.cod


# --------------------------------------------------------------------------
# Evaluation


def phi(eta: MaxLinkedSystem, f: PointFunction) -> Fraction:
    """max over members F of eta of min of f on F.

    Computed over the minimal antichain: the min over a superset is no
    larger, so non-minimal members never raise the max.
    """
    if f.ground != eta.ground:
        raise GroundMismatch("function and system on different grounds")
    return max(f.min_on(m) for m in eta.minimal)


def phi_minmax(eta: MaxLinkedSystem, f: PointFunction) -> Fraction:
    """min over members F of eta of max of f on F (the dual form)."""
    if f.ground != eta.ground:
        raise GroundMismatch("function and system on different grounds")
    return min(f.max_on(m) for m in eta.minimal)


def check_eq1(eta: MaxLinkedSystem, f: PointFunction) -> tuple[Fraction, Fraction, bool]:
    """Both sides of the max-min / min-max exchange; equal for maximal systems."""
    a = phi(eta, f)
    b = phi_minmax(eta, f)
    return a, b, a == b


def family_maxmin_minmax(fam: SetFamily, f: PointFunction) -> tuple[Fraction, Fraction, bool]:
    """The exchange identity evaluated on an arbitrary family as given.

    Test harness for non-maximal linked families, where the two sides
    genuinely differ; maximality is what closes the gap.
    """
    if f.ground != fam.ground:
        raise GroundMismatch("function and family on different grounds")
    if not fam.masks:
        raise InputError("family must be nonempty")
    a = max(f.min_on(m) for m in fam.masks)
    b = min(f.max_on(m) for m in fam.masks)
    return a, b, a == b


def evaluate(term: Term, f: PointFunction) -> Fraction:
    if f.ground != term.ground:
        raise GroundMismatch("function and term on different grounds")
    match term:
        case Dirac(x=x):
            return f.values[x]
        case MaxMin(system=eta):
            return phi(eta, f)
        case MinOver(mask=m):
            return f.min_on(m)
        case MaxOver(mask=m):
            return f.max_on(m)
        case Linear(weights=ws):
            return sum((w * v for w, v in zip(ws, f.values)), Fraction(0))
        case Convex(weights=ws, parts=ps):
            return sum((w * evaluate(p, f) for w, p in zip(ws, ps)), Fraction(0))
        case Precompose(point_map=pm, inner=inner):
            return evaluate(inner, f.precompose(pm))
    raise InputError(f"unknown term {term!r}")


def as_functional(term: Term) -> Callable[[PointFunction], Fraction]:
    return lambda f: evaluate(term, f)


# --------------------------------------------------------------------------
# Axiom checking


@dataclass(frozen=True)
class AxiomResult:
    ok: bool
    axiom: str | None = None
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.ok


PASS = AxiomResult(True)


def _rand_fraction(rng: random.Random, lo: int = -32, hi: int = 32, den: int = 16) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, den))


def _rand_function(rng: random.Random, ground: GroundSet) -> PointFunction:
    return PointFunction(ground, tuple(_rand_fraction(rng) for _ in ground.points()))


def axiom_check(
    target: Term | Callable[[PointFunction], Fraction],
    ground: GroundSet | None = None,
    trials: int = 500,
    seed: int = 0,
    normalized: bool = False,
) -> AxiomResult:
    """Seeded randomized check of the three functional axioms.

    Pairs f <= g are built by adding nonnegative increments; scalars
    include 0 and negative values.  With normalized=True the scaling
    axiom is replaced by u(1) = 1 (order-preserving functionals).
    An oracle that raises is reported as a counterexample.
    """
    if trials < 1:
        raise InputError("trials must be >= 1")
    if isinstance(target, Term):
        u: Callable[[PointFunction], Fraction] = as_functional(target)
        ground = target.ground
    else:
        u = target
        if ground is None:
            raise InputError("ground required for oracle functionals")

    rng = random.Random(seed)
    one = PointFunction(ground, tuple(Fraction(1) for _ in ground.points()))

    def run(f: PointFunction) -> Fraction:
        return Fraction(u(f))

    try:
        if normalized and run(one) != 1:
            return AxiomResult(False, "normalization", {"f": one.values, "u(f)": run(one)})
        for trial in range(trials):
            f = _rand_function(rng, ground)
            inc = tuple(abs(_rand_fraction(rng)) for _ in ground.points())
            g = PointFunction(ground, tuple(a + b for a, b in zip(f.values, inc)))
            uf = run(f)
            if uf > run(g):
                return AxiomResult(False, "monotonicity", {"f": f.values, "g": g.values, "u(f)": uf, "u(g)": run(g)})
            if not normalized:
                ks = [_rand_fraction(rng, -8, 8, 4)]
                if trial == 0:
                    ks += [Fraction(0), Fraction(-1)]
                for k in ks:
                    if run(f.scale(k)) != k * uf:
                        return AxiomResult(
                            False, "homogeneity", {"f": f.values, "k": k, "u(kf)": run(f.scale(k)), "k*u(f)": k * uf}
                        )
            c = _rand_fraction(rng, -8, 8, 4)
            if run(f.shift(c)) != uf + c:
                return AxiomResult(
                    False, "weak additivity", {"f": f.values, "c": c, "u(f+c)": run(f.shift(c)), "u(f)+c": uf + c}
                )
    except Exception as exc:  # oracle blew up: report, don't propagate
        return AxiomResult(False, "error", {"exception": repr(exc)})
    return PASS


# --------------------------------------------------------------------------
# Separation, support, extenders


def separating_function(eta: MaxLinkedSystem, xi: MaxLinkedSystem) -> PointFunction:
    """A 0/1 function with phi(eta, .) = 1 and phi(xi, .) = 0.

    Distinct maximal systems yield disjoint witnesses: some member of eta
    has its complement in xi.  The indicator of the first such member (in
    canonical order) separates the two functionals.
    """
    if eta.ground != xi.ground:
        raise GroundMismatch("systems on different grounds")
    if eta == xi:
        raise EqualSystems("cannot separate a system from itself")
    full = eta.ground.full
    for a in sorted(eta.ground.nonempty_subsets(), key=canonical_key):
        if eta.contains(a) and xi.contains(full ^ a):
            return PointFunction(
                eta.ground, tuple(Fraction(1 if a >> x & 1 else 0) for x in eta.ground.points())
            )
    raise EqualSystems("no separating member found; systems are equal")


def support_grid(ground: GroundSet) -> list[PointFunction]:
    """The {0,1,2}^n factorization grid."""
    vals = (Fraction(0), Fraction(1), Fraction(2))
    return [PointFunction(ground, combo) for combo in itertools.product(vals, repeat=ground.n)]


def support(term: Term) -> Subset:
    """The smallest H such that evaluation depends only on values inside H.

    Brute force: subsets in increasing cardinality, factorization tested
    exhaustively on the {0,1,2}^n grid (grid functions agreeing on H must
    evaluate equally).
    """
    ground = term.ground
    grid = support_grid(ground)
    evals = [evaluate(term, f) for f in grid]
    for h in sorted(range(ground.full + 1), key=canonical_key):
        groups: dict[tuple, Fraction] = {}
        ok = True
        for f, v in zip(grid, evals):
            key = tuple(f.values[x] for x in bits(h))
            if groups.setdefault(key, v) != v:
                ok = False
                break
        if ok:
            return Subset(ground, h)
    return Subset(ground, ground.full)


def extender_to_lambda(
    f: PointFunction, lam: Superextension | None = None
) -> dict[MaxLinkedSystem, Fraction]:
    """Extend a function on X to the superextension: eta -> phi(eta, f).

    Restricted to principal systems this returns f(x), so the assignment
    is a genuine extender.
    """
    if lam is None:
        lam = enumerate_mls(f.ground)
    return {eta: phi(eta, f) for eta in lam.systems}


def retraction_from_extender(
    u: Callable[[PointFunction], Sequence[Fraction]],
    ground: GroundSet,
    y_count: int,
    x_to_y: Sequence[int],
) -> list[Callable[[PointFunction], Fraction]]:
    """Turn an extender C(X) -> C(Y) into per-point functionals y -> (f -> u(f)(y)).

    The extender contract (u(f) restricted to X equals f) is validated on
    the {0,1,2}^n grid before anything is returned.
    """
    if len(x_to_y) != ground.n or len(set(x_to_y)) != ground.n:
        raise NotAnExtender("x_to_y must inject the ground into the ambient points")
    for f in support_grid(ground):
        uf = list(u(f))
        if len(uf) != y_count:
            raise NotAnExtender("extender output has wrong length")
        for x in ground.points():
            if Fraction(uf[x_to_y[x]]) != f.values[x]:
                raise NotAnExtender(f"u(f) does not restrict to f at point {x}")

    def at(y: int) -> Callable[[PointFunction], Fraction]:
        return lambda f: Fraction(u(f)[y])

    return [at(y) for y in range(y_count)]


def s_preimage(pm: PointMap, nu: Term) -> Term:
    """A term on the map's domain that pushes forward to ``nu``.

    Built from the section sending each codomain point to its numerically
    least preimage; evaluating the result at h o pm recovers nu(h).
    """
    if not pm.is_surjective():
        raise NotSurjective("preimage construction needs a surjective map")
    if nu.ground != pm.cod:
        raise GroundMismatch("term must live on the map's codomain")
    section = PointMap(
        pm.cod, pm.dom, tuple(min(x for x in range(pm.dom.n) if pm.image[x] == y) for y in range(pm.cod.n))
    )
    return Precompose(section, nu)


# --------------------------------------------------------------------------
# One-step extension of a partial functional


def _concave_sup(gamma: Fraction, pieces: list[tuple[Fraction, Fraction]]) -> Fraction | None:
    """sup over t of gamma*t + min_i(a_i*t + b_i); None means unbounded.

    Concave piecewise linear: bounded iff the extreme slopes bracket zero,
    and then the sup sits at a kink of the min-envelope (or anywhere on a
    flat piece, so t = 0 is always a candidate).
    """
    amin = min(a for a, _ in pieces)
    amax = max(a for a, _ in pieces)
    if gamma + amin > 0 or gamma + amax < 0:
        return None
    cands = {Fraction(0)}
    for (a1, b1), (a2, b2) in itertools.combinations(pieces, 2):
        if a1 != a2:
            cands.add(Fraction(b2 - b1, a1 - a2))
    return max(gamma * t + min(a * t + b for a, b in pieces) for t in cands)


@dataclass(frozen=True)
class GeneratedSubspace:
    """A partial functional on the orbits {k*b + c} of finitely many generators.

    Constants are always in the subspace (k = 0).  Construction validates
    that the induced assignment k*b + c -> k*v_b + c is single-valued and
    monotone across all generator pairs; inconsistent data is rejected.
    """

    ground: GroundSet
    generators: tuple[tuple[PointFunction, Fraction], ...]

    def __post_init__(self) -> None:
        gens = tuple((b, Fraction(v)) for b, v in self.generators)
        object.__setattr__(self, "generators", gens)
        for b, v in gens:
            if b.ground != self.ground:
                raise GroundMismatch("generator on wrong ground")
            if not min(b.values) <= v <= max(b.values):
                raise Inconsistent(f"value {v} outside the range of its generator")
        # Monotonicity across orbits: k*b_i + c <= k'*b_j + c' must imply
        # k*v_i + c <= k'*v_j + c'.  By positive homogeneity it suffices to
        # check the directions k = 1 and k = -1 (k = 0 is the range check).
        for bi, vi in gens:
            for bj, vj in gens:
                for sign in (1, -1):
                    s = _concave_sup(
                        -vj, [(bj.values[x], -sign * bi.values[x]) for x in self.ground.points()]
                    )
                    if s is None or sign * vi + s > 0:
                        raise Inconsistent("generator values admit no monotone extension")

    def contains(self, f: PointFunction) -> bool:
        """Whether f lies on some generator orbit k*b + c (constants included)."""
        if f.ground != self.ground:
            raise GroundMismatch("function on wrong ground")
        if len(set(f.values)) == 1:
            return True
        for b, _ in self.generators:
            pairs = [(bx, fx) for bx, fx in zip(b.values, f.values)]
            anchor = next(((b1, f1, b2, f2) for (b1, f1), (b2, f2) in itertools.combinations(pairs, 2) if b1 != b2), None)
            if anchor is None:
                continue
            b1, f1, b2, f2 = anchor
            k = (f1 - f2) / (b1 - b2)
            c = f1 - k * b1
            if all(k * bx + c == fx for bx, fx in pairs):
                return True
        return False

    def extended(self, phi0: PointFunction, p: Fraction) -> "GeneratedSubspace":
        return GeneratedSubspace(self.ground, self.generators + ((phi0, Fraction(p)),))


def admissible_interval(
    generators: Sequence[tuple[PointFunction, Fraction]], phi0: PointFunction
) -> tuple[Fraction, Fraction]:
    """The exact interval of values a monotone extension may assign to phi0.

    Per generator b with value v the lower envelope is
    sup_k [k*v + min_x(phi0(x) - k*b(x))], a concave piecewise-linear
    function of k maximized at a breakpoint where the minimizing point
    changes; the upper envelope is the dual inf.  Constants contribute
    the floor min(phi0) and ceiling max(phi0) through k = 0.
    """
    lower = min(phi0.values)
    upper = max(phi0.values)
    n = phi0.ground.n
    for b, v in generators:
        v = Fraction(v)
        lo = _concave_sup(v, [(-b.values[x], phi0.values[x]) for x in range(n)])
        hi = _concave_sup(-v, [(b.values[x], -phi0.values[x]) for x in range(n)])
        if lo is None or hi is None:
            raise Inconsistent("unbounded envelope; generator values are inconsistent")
        lower = max(lower, lo)
        upper = min(upper, -hi)
    if lower > upper:
        raise Inconsistent(f"empty admissible interval ({lower}, {upper})")
    return lower, upper


def extend_one(
    b0: GeneratedSubspace, phi0: PointFunction, choose: str = "mid"
) -> tuple[Fraction, Fraction, Fraction]:
    """Admissible interval for extending the partial functional to phi0.

    Returns (lower, upper, p) where p is the chosen extension value:
    the midpoint by default, or the interval end named by ``choose``
    ("lower" / "upper").
    """
    if phi0.ground != b0.ground:
        raise GroundMismatch("function on wrong ground")
    if b0.contains(phi0):
        raise InSubspace("function already lies in the generated subspace")
    lower, upper = admissible_interval(b0.generators, phi0)
    if choose == "mid":
        p = (lower + upper) / 2
    elif choose == "lower":
        p = lower
    elif choose == "upper":
        p = upper
    else:
        raise InputError(f"unknown choice {choose!r}")
    return lower, upper, p


# --------------------------------------------------------------------------
# Serialization


def fraction_from_str(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {s!r}: {exc}") from exc


def term_to_obj(term: Term) -> dict:
    match term:
        case Dirac(x=x):
            return {"t": "dirac", "x": x}
        case MaxMin(system=eta):
            return {"t": "maxmin", "minimal": [format(m, "x") for m in eta.minimal]}
        case MinOver(mask=m):
            return {"t": "min", "F": format(m, "x")}
        case MaxOver(mask=m):
            return {"t": "max", "F": format(m, "x")}
        case Linear(weights=ws):
            return {"t": "linear", "w": [str(w) for w in ws]}
        case Convex(weights=ws, parts=ps):
            return {"t": "convex", "w": [str(w) for w in ws], "parts": [term_to_obj(p) for p in ps]}
        case Precompose(point_map=pm, inner=inner):
            return {"t": "precompose", "map": list(pm.image), "inner": term_to_obj(inner)}
    raise InputError(f"unknown term {term!r}")


def term_from_obj(obj: dict, ground: GroundSet) -> Term:
    try:
        tag = obj["t"]
        if tag == "dirac":
            return Dirac(ground, int(obj["x"]))
        if tag == "maxmin":
            minimal = tuple(sorted((int(s, 16) for s in obj["minimal"]), key=canonical_key))
            return MaxMin(MaxLinkedSystem(ground, minimal))
        if tag == "min":
            return MinOver(ground, int(obj["F"], 16))
        if tag == "max":
            return MaxOver(ground, int(obj["F"], 16))
        if tag == "linear":
            return Linear(ground, tuple(fraction_from_str(w) for w in obj["w"]))
        if tag == "convex":
            parts = tuple(term_from_obj(p, ground) for p in obj["parts"])
            return Convex(tuple(fraction_from_str(w) for w in obj["w"]), parts)
        if tag == "precompose":
            image = tuple(int(i) for i in obj["map"])
            pm = PointMap(GroundSet(len(image)), ground, image)
            return Precompose(pm, term_from_obj(obj["inner"], pm.dom))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed term node: {exc}") from exc
    raise InputError(f"unknown term tag {obj.get('t')!r}")


def term_to_json(term: Term) -> str:
    return json.dumps(term_to_obj(term), sort_keys=True)


def term_from_json(text: str, ground: GroundSet) -> Term:
    try:
        obj = json.loads(text)
    except ValueError as exc:
        raise InputError(f"malformed term file: {exc}") from exc
    return term_from_obj(obj, ground)
