"""The leveled bond structure at the heart of hyperstruct.

A Hyperstructure of depth n has levels 0..n. An element of level i+1 may be
a bond: it binds a Support, that is a set of level-i elements together with
the Property observed on them. Structures are immutable; every operation
returns a new structure and leaves its input alone.
"""

from collections import Counter, defaultdict
from dataclasses import dataclass, replace
from functools import cached_property
from itertools import combinations
from typing import FrozenSet, Optional, Tuple

from loguru import logger

import config  # noqa: F401  installs the log sink
from errors import (BondClash, EmptyValue, LevelOverflow, MalformedInput,
                    UnknownElement)


@dataclass(frozen=True, order=True)
class ElementId:
    """An element of one level, named by a key unique within that level."""

    level: int
    key: str

    def __post_init__(self):
        if not isinstance(self.key, str) or not self.key:
            raise MalformedInput("element key must be a non-empty string",
                                 key=self.key)
        if self.level < 0:
            raise MalformedInput("element level must be non-negative",
                                 level=self.level)

    def __str__(self):
        return f"{self.level}:{self.key}"


@dataclass(frozen=True)
class Property:
    """An observed property: a tag plus optional free-form payload."""

    tag: str
    payload: Optional[str] = None

    def __post_init__(self):
        if not self.tag:
            raise MalformedInput("property tag must be non-empty")

    def sort_key(self):
        return (self.tag, self.payload is not None, self.payload or "")


@dataclass(frozen=True)
class Support:
    """A set of same-level elements together with their property."""

    members: FrozenSet[ElementId]
    property: Property

    def __post_init__(self):
        members = frozenset(self.members)
        object.__setattr__(self, 'members', members)

        if not members:
            raise MalformedInput("a support needs at least one member")
        if len({member.level for member in members}) != 1:
            raise MalformedInput("support members must share one level",
                                 members=sorted(str(m) for m in members))

    @classmethod
    def of(cls, level, keys, tag, payload=None):
        """Build a support from bare keys at `level`."""

        return cls(frozenset(ElementId(level, key) for key in keys),
                   Property(tag, payload))

    @property
    def level(self):
        return next(iter(self.members)).level

    @property
    def keys(self):
        return sorted(member.key for member in self.members)

    def sort_key(self):
        return (self.level, tuple(self.keys), self.property.sort_key())


@dataclass(frozen=True)
class Bond:
    """One binding: the element `id` binds `support` one level down."""

    id: ElementId
    support: Support
    is_identity: bool = False

    def sort_key(self):
        return (self.id, self.support.sort_key(), self.is_identity)


@dataclass(frozen=True)
class Hyperstructure:
    """Levels of elements, the bonds between them and observed properties."""

    depth: int
    levels: Tuple[FrozenSet[ElementId], ...]
    bonds: FrozenSet[Bond] = frozenset()
    obs: FrozenSet[Tuple[ElementId, Property]] = frozenset()

    def __post_init__(self):
        levels = tuple(frozenset(level) for level in self.levels)
        object.__setattr__(self, 'levels', levels)
        object.__setattr__(self, 'bonds', frozenset(self.bonds))
        object.__setattr__(self, 'obs', frozenset(self.obs))

        if self.depth < 0 or len(levels) != self.depth + 1:
            raise MalformedInput("a structure of depth n has n + 1 levels",
                                 depth=self.depth, levels=len(levels))
        for i, level in enumerate(levels):
            for element in level:
                if element.level != i:
                    raise MalformedInput("element filed under the wrong level",
                                         element=str(element), level=i)

    def __repr__(self):
        counts = "/".join(str(len(level)) for level in self.levels)
        return f"<Hyperstructure depth={self.depth} elements={counts} bonds={len(self.bonds)}>"

    def __contains__(self, element):
        return (0 <= element.level <= self.depth
                and element in self.levels[element.level])

    def elements(self, level=None):
        """Elements of one level (or of all levels), in canonical order."""

        if level is None:
            return sorted(e for lvl in self.levels for e in lvl)
        return sorted(self.levels[level])

    @cached_property
    def bond_index(self):
        """Map each bond id to its bond records."""

        index = defaultdict(list)
        for bond in sorted(self.bonds, key=Bond.sort_key):
            index[bond.id].append(bond)
        return {key: tuple(value) for key, value in index.items()}

    @cached_property
    def parents(self):
        """Map each element to the ids of the bonds whose support holds it."""

        index = defaultdict(set)
        for bond in self.bonds:
            for member in bond.support.members:
                index[member].add(bond.id)
        return {key: tuple(sorted(value)) for key, value in index.items()}

    def is_bond(self, element):
        return element in self.bond_index

    def bonds_at(self, level):
        """Bonds whose id lives at `level`, in canonical order."""

        return [bond for bond in sorted(self.bonds, key=Bond.sort_key)
                if bond.id.level == level]

    def properties(self, element):
        return sorted((prop for (eid, prop) in self.obs if eid == element),
                      key=Property.sort_key)


##############################################################################
# Construction


def empty(depth=0):
    """A structure with `depth` + 1 empty levels."""

    return Hyperstructure(depth, tuple(frozenset() for _ in range(depth + 1)))


def pad(H, depth):
    """Extend `H` with empty levels up to `depth`."""

    if depth < H.depth:
        raise LevelOverflow("cannot pad below the current depth",
                            depth=depth, current=H.depth)
    extra = tuple(frozenset() for _ in range(depth - H.depth))
    return replace(H, depth=depth, levels=H.levels + extra)


def add_elements(H, level, keys):
    """Add plain (unbonded) elements with `keys` at `level`."""

    if not 0 <= level <= H.depth:
        raise LevelOverflow(f"level {level} is outside 0..{H.depth}",
                            level=level, depth=H.depth)
    new = frozenset(ElementId(level, key) for key in keys)
    levels = list(H.levels)
    levels[level] = levels[level] | new
    return replace(H, levels=tuple(levels))


def observe(H, element, prop):
    """Record that `prop` was observed on `element`."""

    return observe_all(H, [(element, prop)])


def observe_all(H, observations):
    observations = list(observations)
    for element, _ in observations:
        if element not in H:
            raise UnknownElement(f"cannot observe unknown element {element}",
                                 element=str(element))
    return replace(H, obs=H.obs | frozenset(observations))


def add_bonds(H, specs):
    """Add several bonds at once.

    `specs` yields (support, id_key, is_identity) triples. Checks are the
    same as for add_bond, applied in order, so later specs see earlier ones.
    """

    levels = [set(level) for level in H.levels]
    index = {key: {(bond.support, bond.is_identity) for bond in bonds}
             for key, bonds in H.bond_index.items()}
    added = set()

    for support, id_key, is_identity in specs:
        i = support.level
        if i + 1 > H.depth:
            raise LevelOverflow(f"a bond over level {i} needs depth {i + 1}",
                                level=i + 1, depth=H.depth)
        for member in sorted(support.members):
            if member not in levels[i]:
                raise UnknownElement(f"support member {member} is not in the structure",
                                     element=str(member))
        if is_identity and len(support.members) != 1:
            raise MalformedInput("an identity bond binds exactly one element",
                                 key=id_key)

        bond_id = ElementId(i + 1, id_key)
        bound = index.setdefault(bond_id, set())
        if bound and (support, is_identity) not in bound:
            raise BondClash(f"{bond_id} already binds a different support"
                            " or identity flag", element=str(bond_id))
        bound.add((support, is_identity))
        levels[i + 1].add(bond_id)
        added.add(Bond(bond_id, support, is_identity))

    logger.debug("added {} bond(s)", len(added))
    return replace(H, levels=tuple(frozenset(level) for level in levels),
                   bonds=H.bonds | added)


def add_bond(H, support, id_key, is_identity=False):
    """Bind `support` by a new level-(i+1) element named `id_key`.

    Re-adding a key with the identical support and identity flag is
    allowed; a key already bound otherwise raises BondClash.
    """

    return add_bonds(H, [(support, id_key, is_identity)])


def identity_bond(H, element, prop=None):
    """Add the identity bond I(x) of `element`."""

    prop = prop or Property("identity")
    support = Support(frozenset({element}), prop)
    return add_bond(H, support, f"I({element.key})", is_identity=True)


##############################################################################
# Boundary maps


def boundary(H, b):
    """The support bound by the bond `b`."""

    bonds = H.bond_index.get(b)
    if not bonds:
        raise UnknownElement(f"{b} is not a bond", element=str(b))

    supports = {bond.support for bond in bonds}
    if len(supports) > 1:
        raise BondClash(f"{b} binds {len(supports)} supports", element=str(b))
    return supports.pop()


def iterated_boundary(H, element):
    """Dissolve `element` down to level 0.

    Returns a Counter of level-0 elements; the count of a leaf is the number
    of distinct bond paths from `element` down to it. Plain elements above
    level 0 dissolve to nothing.
    """

    if element not in H:
        raise UnknownElement(f"{element} is not in the structure",
                             element=str(element))
    memo = {}

    def descend(e):
        if e in memo:
            return memo[e]
        if e.level == 0:
            found = Counter({e: 1})
        elif e in H.bond_index:
            found = Counter()
            for member in boundary(H, e).members:
                found.update(descend(member))
        else:
            found = Counter()
        memo[e] = found
        return found

    return descend(element)


##############################################################################
# Validation


@dataclass(frozen=True)
class Violation:
    kind: str
    element: ElementId
    detail: str = ""

    def sort_key(self):
        return (self.element.level, self.element.key, self.kind, self.detail)


@dataclass(frozen=True)
class ValidationReport:
    """Violations found by validate; an empty report means a valid structure."""

    violations: Tuple[Violation, ...] = ()

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    @property
    def ok(self):
        return not self.violations

    def kinds(self):
        return Counter(v.kind for v in self.violations)


def validate(H):
    """Report every broken law of `H`, sorted by level then key."""

    found = []

    for bond in sorted(H.bonds, key=Bond.sort_key):
        bid, support = bond.id, bond.support
        if bid.level != support.level + 1:
            found.append(Violation("LevelMismatch", bid,
                                   f"binds level {support.level}"))
        if bid not in H:
            found.append(Violation("DanglingBond", bid, "id not in its level"))
        for member in sorted(support.members):
            if member not in H:
                found.append(Violation("UnknownMember", bid, str(member)))
        if bond.is_identity and len(support.members) != 1:
            found.append(Violation("IdentityArityViolation", bid,
                                   f"{len(support.members)} members"))

    for bid, bonds in H.bond_index.items():
        supports = {bond.support for bond in bonds}
        if len(supports) > 1:
            found.append(Violation("DisjointnessViolation", bid,
                                   f"{len(supports)} supports"))
        if len({bond.is_identity for bond in bonds}) > 1:
            found.append(Violation("IdentityFlagClash", bid,
                                   "bound both as identity and not"))

    for element, prop in H.obs:
        if element not in H:
            found.append(Violation("DanglingObservation", element, prop.tag))

    found = sorted(set(found), key=Violation.sort_key)
    if found:
        logger.info("validation found {} violation(s)", len(found))
    return ValidationReport(tuple(found))


##############################################################################
# Derived structures


def from_hyperoperation(elements, star):
    """The depth-1 structure of a hyperoperation x*y on `elements`.

    `star` is a mapping from ordered pairs (or a callable of two arguments)
    to non-empty subsets of `elements`. Every z in x*y becomes one bond over
    {x, y} whose property tag is the ordered pair "x,y".
    """

    points = sorted(set(elements))
    known = set(points)
    lookup = star if callable(star) else (lambda x, y: star.get((x, y), ()))

    specs = []
    for x in points:
        for y in points:
            outputs = set(lookup(x, y) or ())
            if not outputs:
                raise EmptyValue(f"{x}*{y} is empty", pair=[x, y])
            support = Support.of(0, {x, y}, f"{x},{y}")
            for z in sorted(outputs):
                if z not in known:
                    raise UnknownElement(f"{x}*{y} contains unknown {z}",
                                         element=z)
                specs.append((support, f"({x},{y})->{z}", False))

    H = add_elements(empty(1), 0, points)
    return add_bonds(H, specs)


def leveled_operation(values, box, depth=1, arity=2, observe_with=None):
    """Build levels of an operation applied to observed tuples.

    Level 0 holds `values` (key -> value). At each level, every unordered
    `arity`-tuple of the level below whose values pass `observe_with` (a
    callable returning a property tag, or None to refuse) is bound by a
    bond. The bond records box(values) as its "value" observation, so a
    bond over {3, 2} carries value 5 yet stays distinct from an element 5.
    """

    H = add_elements(empty(depth), 0, values)
    H = observe_all(H, [(ElementId(0, key), Property("value", str(value)))
                        for key, value in values.items()])
    current = dict(values)

    for level in range(1, depth + 1):
        specs, produced = [], {}
        for group in combinations(sorted(current), arity):
            inputs = tuple(current[key] for key in group)
            tag = observe_with(inputs) if observe_with else "bound"
            if tag is None:
                continue
            key = "box(" + ",".join(group) + ")"
            produced[key] = box(inputs)
            specs.append((Support.of(level - 1, group, tag), key, False))

        H = add_bonds(H, specs)
        H = observe_all(H, [(ElementId(level, key), Property("value", str(value)))
                            for key, value in produced.items()])
        current = produced

    return H


def push_forward(H, points, phi):
    """Induce a structure on `points` through phi: points -> level 0 of H.

    A level-1 bond over S is induced on the full preimage of S when every
    member of S is hit, so that phi(S_0) = S. Higher levels are copied;
    bonds resting on a level-1 bond that could not be induced are dropped.
    """

    points = sorted(set(points))
    lookup = phi if callable(phi) else phi.get

    preimage = defaultdict(set)
    for p in points:
        target = lookup(p)
        if target is None or ElementId(0, target) not in H:
            raise UnknownElement(f"phi({p}) = {target} is not a level-0 element",
                                 element=str(target))
        preimage[target].add(p)

    specs, dropped = [], set()
    for bond in H.bonds_at(1):
        keys = bond.support.keys
        if all(key in preimage for key in keys):
            members = set().union(*(preimage[key] for key in keys))
            prop = bond.support.property
            specs.append((Support.of(0, members, prop.tag, prop.payload),
                          bond.id.key, bond.is_identity and len(members) == 1))
        else:
            dropped.add(bond.id)

    kept_bonds = set()
    for level in range(2, H.depth + 1):
        for bond in H.bonds_at(level):
            if bond.support.members & dropped:
                dropped.add(bond.id)
            else:
                kept_bonds.add(bond)
    if dropped:
        logger.info("push-forward dropped {} bond(s) with unhit support", len(dropped))

    levels = [frozenset(ElementId(0, p) for p in points)]
    levels += [level - dropped for level in H.levels[1:]]

    obs = {(ElementId(0, p), prop)
           for (eid, prop) in H.obs if eid.level == 0
           for p in preimage.get(eid.key, ())}
    obs |= {(eid, prop) for (eid, prop) in H.obs
            if eid.level > 0 and eid not in dropped}

    induced = Hyperstructure(H.depth, tuple(levels), frozenset(kept_bonds),
                             frozenset(obs))
    return add_bonds(induced, specs)


def relabel(H, rename):
    """Rename every element with `rename(element) -> new key`.

    `rename` may also be a mapping from ElementId to key; elements it does
    not mention keep their key. Renaming must stay injective per level.
    """

    if not callable(rename):
        table = rename
        rename = lambda e: table.get(e, e.key)  # noqa: E731

    cache = {}

    def move(e):
        if e not in cache:
            cache[e] = ElementId(e.level, rename(e))
        return cache[e]

    levels = []
    for level in H.levels:
        moved = frozenset(move(e) for e in level)
        if len(moved) != len(level):
            raise MalformedInput("relabeling merged two elements of one level")
        levels.append(moved)

    bonds = frozenset(
        Bond(move(b.id),
             Support(frozenset(move(m) for m in b.support.members),
                     b.support.property),
             b.is_identity)
        for b in H.bonds)
    obs = frozenset((move(e), prop) for (e, prop) in H.obs)
    return Hyperstructure(H.depth, tuple(levels), bonds, obs)


def signature(H):
    """A relabeling-invariant summary of `H`.

    Isomorphic structures have equal signatures; the converse need not hold.
    """

    counts = tuple(len(level) for level in H.levels)
    bonds = tuple(sorted(
        (b.id.level, len(b.support.members), b.support.property.sort_key(),
         b.is_identity)
        for b in H.bonds))
    tags = tuple(sorted(prop.sort_key() for (_, prop) in H.obs))
    return (H.depth, counts, bonds, tags)


def fuse(H1, H2, add_top=False):
    """Put two structures side by side, level by level.

    Keys are prefixed "L:" and "R:"; the shallower structure is padded with
    empty levels. With `add_top`, one more level holds a single bond "top"
    over everything at the old top level.
    """

    depth = max(H1.depth, H2.depth)
    left = relabel(pad(H1, depth), lambda e: f"L:{e.key}")
    right = relabel(pad(H2, depth), lambda e: f"R:{e.key}")

    fused = Hyperstructure(
        depth,
        tuple(a | b for a, b in zip(left.levels, right.levels)),
        left.bonds | right.bonds,
        left.obs | right.obs,
    )

    if add_top:
        tops = fused.levels[depth]
        if not tops:
            raise EmptyValue("nothing at the top level to bind")
        fused = add_bond(pad(fused, depth + 1),
                         Support(tops, Property("fusion")), "top")

    return fused


##############################################################################
# Export


def _quote(element):
    text = str(element).replace('\\', '\\\\').replace('"', '\\"')
    return f'"{text}"'


def export_dot(H):
    """A deterministic Graphviz digraph of `H`.

    Elements are grouped by level into clusters; each bond points at the
    members of its support; identity bonds are dashed.
    """

    lines = ["digraph hyperstructure {"]

    for level in range(H.depth + 1):
        elements = H.elements(level)
        if not elements:
            continue
        lines.append(f"  subgraph cluster_level_{level} {{")
        lines.append(f'    label="level {level}";')
        lines.extend(f"    {_quote(e)};" for e in elements)
        lines.append("  }")

    edges = set()
    for bond in H.bonds:
        style = " [style=dashed]" if bond.is_identity else ""
        for member in bond.support.members:
            edges.add((bond.id, member, style))
    for bid, member, style in sorted(edges):
        lines.append(f"  {_quote(bid)} -> {_quote(member)}{style};")

    lines.append("}")
    return "\n".join(lines) + "\n"
