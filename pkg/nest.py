"""Nested open sets of a finite space, and prefactorization checks.

A nest family assigns an open set U(w) to index words w = (i_1, ..., i_k).
As a hyperstructure, the innermost opens (longest words) sit at level 0
and each shorter word is a bond over its one-letter extensions, so the
larger open sets bind the smaller ones.
"""

from dataclasses import dataclass, field
from itertools import chain, combinations
from typing import FrozenSet, Mapping, Tuple

from loguru import logger

from errors import (MalformedInput, NotATopology, NotContained, NotDisjoint,
                    NotNested, NotOpen, UnknownPoint, UnknownWord)
from hypercore import (ElementId, Property, Support, add_bonds, add_elements,
                       empty, observe_all)
from monoids import MultisetMonoid


@dataclass(frozen=True)
class FiniteTopology:
    """A finite set of points with an explicit list of open sets."""

    points: FrozenSet[str]
    opens: FrozenSet[FrozenSet[str]]

    def __post_init__(self):
        points = frozenset(self.points)
        opens = frozenset(frozenset(u) for u in self.opens)
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'opens', opens)

        if frozenset() not in opens or points not in opens:
            raise NotATopology("the empty set and the whole space must be open")
        for u in opens:
            if not u <= points:
                raise NotATopology("an open set mentions unknown points",
                                   open=sorted(u - points))
        for u, v in combinations(opens, 2):
            if u | v not in opens or u & v not in opens:
                raise NotATopology("opens are not closed under union and intersection",
                                   pair=[sorted(u), sorted(v)])

    @classmethod
    def discrete(cls, points):
        """Every subset open."""

        points = sorted(set(points))
        subsets = chain.from_iterable(combinations(points, r)
                                      for r in range(len(points) + 1))
        return cls(frozenset(points), frozenset(frozenset(s) for s in subsets))


def check_openness(T, s):
    """Is `s` one of the open sets of `T`?"""

    s = frozenset(s)
    unknown = s - T.points
    if unknown:
        raise UnknownPoint(f"unknown points {sorted(unknown)}",
                           points=sorted(unknown))
    return s in T.opens


def word_key(word):
    return "U(" + ",".join(str(i) for i in word) + ")"


def label(u):
    return "{" + ",".join(sorted(u)) + "}"


@dataclass(frozen=True)
class NestFamily:
    """Open sets U(w) indexed by words of length at most `depth`.

    `bounds` gives the largest index allowed at each position; when left
    empty it is inferred from the words themselves.
    """

    depth: int
    assignment: Mapping[Tuple[int, ...], FrozenSet[str]]
    bounds: Tuple[int, ...] = ()

    def __post_init__(self):
        assignment = {tuple(int(i) for i in word): frozenset(u)
                      for word, u in self.assignment.items()}
        object.__setattr__(self, 'assignment', assignment)

        if self.depth < 0:
            raise MalformedInput("nest depth must be non-negative")
        for word in assignment:
            if len(word) > self.depth:
                raise MalformedInput(f"word {word} is longer than the depth",
                                     word=list(word))
            if any(i < 1 for i in word):
                raise MalformedInput(f"word {word} has a non-positive index",
                                     word=list(word))

        bounds = tuple(self.bounds)
        if not bounds:
            bounds = tuple(max((w[p] for w in assignment if len(w) > p), default=0)
                           for p in range(self.depth))
        if len(bounds) != self.depth:
            raise MalformedInput("one bound per position is required",
                                 bounds=list(bounds))
        for word in assignment:
            for p, i in enumerate(word):
                if i > bounds[p]:
                    raise MalformedInput(f"index {i} exceeds bound {bounds[p]}",
                                         word=list(word))
        object.__setattr__(self, 'bounds', bounds)

    @property
    def words(self):
        return sorted(self.assignment, key=lambda w: (len(w), w))

    def __getitem__(self, word):
        return self.assignment[tuple(word)]

    def __contains__(self, word):
        return tuple(word) in self.assignment


def check_family(T, F):
    """Raise unless every U(w) is open and dropping any index enlarges it."""

    for word in F.words:
        u = F[word]
        if not check_openness(T, u):
            raise NotOpen(f"{word_key(word)} = {label(u)} is not open",
                          word=list(word))
        for k in range(len(word)):
            shorter = word[:k] + word[k + 1:]
            if shorter in F and not u <= F[shorter]:
                raise NotNested(f"{word_key(word)} is not inside {word_key(shorter)}",
                                word=list(word), dropped=k + 1)


def build_nest(T, F):
    """The hyperstructure of the nested opens of `F`.

    Words of length n - j sit at level j; a word with defined extensions
    is a bond over them carrying the "open" property.
    """

    check_family(T, F)
    n = F.depth

    H = empty(n)
    for length in range(n + 1):
        keys = [word_key(w) for w in F.words if len(w) == length]
        H = add_elements(H, n - length, keys)

    specs = []
    for word in F.words:
        children = [c for c in F.words
                    if len(c) == len(word) + 1 and c[:-1] == word]
        if not children:
            continue
        support = Support.of(n - len(word) - 1,
                             [word_key(c) for c in children], "open")
        specs.append((support, word_key(word), False))
    H = add_bonds(H, specs)

    H = observe_all(H, [(ElementId(n - len(w), word_key(w)),
                         Property("set", label(F[w])))
                        for w in F.words])
    logger.debug("built nest of depth {} with {} bond(s)", n, len(specs))
    return H


def nest_boundary(F, word):
    """All defined words filling the single hole (None) in `word`."""

    word = tuple(word)
    holes = [p for p, i in enumerate(word) if i is None]
    if len(holes) != 1:
        raise MalformedInput("a boundary word needs exactly one hole",
                             word=list(word))
    j = holes[0]

    fillers = frozenset(
        w for w in F.assignment
        if len(w) == len(word)
        and all(a == b for p, (a, b) in enumerate(zip(w, word)) if p != j))
    if not fillers:
        raise UnknownWord(f"no defined word fills position {j + 1} of {word}",
                          position=j + 1)
    return fillers


##############################################################################
# Prefactorization


@dataclass(frozen=True)
class MonoidAssignment:
    """Carrier values on opens plus per-open structure-map weights.

    The structure map of disjoint U_1..U_k inside V sends (x_1..x_k) to
    combine(x_1, ..., x_k, weight(V)); opens without a weight use the unit.
    """

    carrier: object
    values: Mapping[FrozenSet[str], object]
    weights: Mapping[FrozenSet[str], object] = field(default_factory=dict)

    @classmethod
    def free(cls, opens):
        """The free multiset assignment U -> {U}."""

        return cls(MultisetMonoid(), {frozenset(u): (label(u),) for u in opens})

    def value(self, u):
        try:
            return self.values[frozenset(u)]
        except KeyError:
            raise MalformedInput(f"no value assigned to {label(u)}") from None

    def weight(self, u):
        return self.weights.get(frozenset(u), self.carrier.unit)

    def combine(self, items):
        return self.carrier.combine(items)


@dataclass(frozen=True)
class PrefactorizationResult:
    """Both composites into the outer open; truthy when they agree."""

    commutes: bool
    direct: object
    routed: object

    def __bool__(self):
        return self.commutes


def _check_disjoint(opens, which):
    for u, v in combinations(opens, 2):
        if u & v:
            raise NotDisjoint(f"{which} opens {label(u)} and {label(v)} overlap",
                              pair=[sorted(u), sorted(v)])


def check_prefactorization(T, A, inner, mid, outer):
    """Does inner -> mid -> outer agree with inner -> outer?

    Each inner open must lie in exactly one mid open and every mid open in
    `outer`. The direct and the routed composite are computed separately.
    """

    inner = [frozenset(u) for u in inner]
    mid = [frozenset(v) for v in mid]
    outer = frozenset(outer)

    for s in inner + mid + [outer]:
        if not check_openness(T, s):
            raise NotOpen(f"{label(s)} is not open", open=sorted(s))
    _check_disjoint(inner, "inner")
    _check_disjoint(mid, "mid")

    host = {}
    for i, u in enumerate(inner):
        hosts = [k for k, v in enumerate(mid) if u <= v]
        if len(hosts) != 1:
            raise NotContained(f"{label(u)} lies in {len(hosts)} mid opens",
                               open=sorted(u))
        host[i] = hosts[0]
    for v in mid:
        if not v <= outer:
            raise NotContained(f"{label(v)} is not inside {label(outer)}",
                               open=sorted(v))

    direct = A.combine([A.value(u) for u in inner] + [A.weight(outer)])

    staged = []
    for k, v in enumerate(mid):
        parts = [A.value(u) for i, u in enumerate(inner) if host[i] == k]
        staged.append(A.combine(parts + [A.weight(v)]))
    routed = A.combine(staged + [A.weight(outer)])

    if direct != routed:
        logger.info("prefactorization triangle fails: {} != {}", direct, routed)
    return PrefactorizationResult(direct == routed, direct, routed)
