"""Multimodules over finite rings.

A module M is acted on by a family of rings R_t (t in T), the action
parametrized by a finite set W: act(w, t, r, m). All structures are finite
tables, so every axiom is checked exhaustively. Stacking action systems
level over level gives a hyperstructure whose bonds are the modules and
whose boundary is the acting family.
"""

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Optional, Tuple

import numpy as np
from loguru import logger

import config
from errors import (AxiomFailure, IndexOutOfRange, InvalidTable,
                    MalformedInput, UnknownElement)
from hypercore import Support, add_bonds, add_elements, empty
from monoids import associativity_witness, first_failure


def _labels(elements, what):
    labels = tuple(str(e) for e in elements)
    if not labels:
        raise InvalidTable(f"a {what} needs at least one element")
    if len(set(labels)) != len(labels):
        raise InvalidTable(f"{what} elements must be distinct")
    return labels


def _table(raw, n, what):
    table = np.asarray(raw, dtype=np.int64)
    if table.shape != (n, n) or table.min() < 0 or table.max() >= n:
        raise InvalidTable(f"{what} table must be {n}x{n} with values in range")
    return table


def _check_abelian_group(labels, add, zero, what):
    witness = associativity_witness(add)
    if witness:
        raise InvalidTable(f"{what} addition is not associative",
                           witness=[labels[i] for i in witness])
    witness = first_failure(add == add.T)
    if witness:
        raise InvalidTable(f"{what} addition is not commutative",
                           witness=[labels[i] for i in witness])
    idx = np.arange(len(labels))
    if not np.array_equal(add[zero], idx):
        raise InvalidTable(f"{what} zero is not an additive identity")
    missing = [labels[i] for i in idx if zero not in add[i]]
    if missing:
        raise InvalidTable(f"{what} elements lack additive inverses",
                           witness=missing[:1])


class FiniteRing:
    """A finite unital ring given by addition and multiplication tables."""

    def __init__(self, elements, add, mul, zero, one, name=None):
        self.elements = _labels(elements, "ring")
        self.index = {label: i for i, label in enumerate(self.elements)}
        n = len(self.elements)
        self.add = _table(add, n, "ring addition")
        self.mul = _table(mul, n, "ring multiplication")
        if not (0 <= zero < n and 0 <= one < n):
            raise InvalidTable("zero and one must index the elements")
        self.zero, self.one = zero, one
        self.name = name or f"ring{n}"

        _check_abelian_group(self.elements, self.add, zero, "ring")
        self._check_multiplication()

    def __repr__(self):
        return f"<FiniteRing {self.name} ({len(self)} elements)>"

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return (isinstance(other, FiniteRing)
                and self.elements == other.elements
                and np.array_equal(self.add, other.add)
                and np.array_equal(self.mul, other.mul)
                and (self.zero, self.one) == (other.zero, other.one))

    __hash__ = object.__hash__

    def _check_multiplication(self):
        A, M, labels = self.add, self.mul, self.elements
        idx = np.arange(len(labels))

        witness = associativity_witness(M)
        if witness:
            raise InvalidTable("ring multiplication is not associative",
                               witness=[labels[i] for i in witness])
        if not (np.array_equal(M[self.one], idx) and np.array_equal(M[:, self.one], idx)):
            raise InvalidTable("ring one is not a multiplicative identity")

        left = first_failure(M[idx[:, None, None], A[None, :, :]]
                             == A[M[:, :, None], M[:, None, :]])
        right = first_failure(M[A[:, :, None], idx[None, None, :]]
                              == A[M[:, None, :], M[None, :, :]])
        witness = left or right
        if witness:
            raise InvalidTable("ring multiplication does not distribute",
                               witness=[labels[i] for i in witness])


class FiniteModule:
    """A finite abelian group, the carrier acted on by rings."""

    def __init__(self, elements, add, zero, name=None):
        self.elements = _labels(elements, "module")
        self.index = {label: i for i, label in enumerate(self.elements)}
        self.add = _table(add, len(self.elements), "module addition")
        if not 0 <= zero < len(self.elements):
            raise InvalidTable("zero must index the elements")
        self.zero = zero
        self.name = name or f"module{len(self.elements)}"

        _check_abelian_group(self.elements, self.add, zero, "module")

    def __repr__(self):
        return f"<FiniteModule {self.name} ({len(self)} elements)>"

    def __len__(self):
        return len(self.elements)


class ActionSystem:
    """Actions of a ring family on one module, parametrized by W.

    `tables[w][t]` is an |R_t| x |M| index table: row r, column m holds
    the index of act(w, t, r, m).
    """

    def __init__(self, rings, params, tables, module, commuting=False):
        self.rings = tuple(rings)
        self.params = tuple(str(w) for w in params)
        self.module = module
        self.commuting = bool(commuting)

        if not self.rings or not self.params:
            raise MalformedInput("an action system needs rings and parameters")
        if len(tables) != len(self.params):
            raise MalformedInput("one table group per parameter is required")

        self.tables = []
        for w, group in enumerate(tables):
            if len(group) != len(self.rings):
                raise MalformedInput("one table per ring is required",
                                     param=self.params[w])
            row = []
            for t, raw in enumerate(group):
                table = np.asarray(raw, dtype=np.int64)
                shape = (len(self.rings[t]), len(module))
                if table.shape != shape:
                    raise MalformedInput(f"action table must be {shape[0]}x{shape[1]}",
                                         param=self.params[w], ring=t)
                if table.min() < 0 or table.max() >= len(module):
                    raise MalformedInput("action leaves the module",
                                         param=self.params[w], ring=t)
                row.append(table)
            self.tables.append(row)

    def __repr__(self):
        names = ",".join(r.name for r in self.rings)
        return f"<ActionSystem ({names}) on {self.module.name}>"

    def domain_size(self):
        """|W| * |T| * |R|^2 * |M|^2, the size of the exhaustive check."""

        biggest = max(len(r) for r in self.rings)
        return (len(self.params) * len(self.rings)
                * biggest ** 2 * len(self.module) ** 2)


def _param_index(A, w):
    if isinstance(w, int) and 0 <= w < len(A.params):
        return w
    try:
        return A.params.index(str(w))
    except ValueError:
        raise IndexOutOfRange(f"unknown action parameter {w!r}") from None


def _lookup(index, label, what):
    try:
        return index[str(label)]
    except KeyError:
        raise IndexOutOfRange(f"{label!r} is not a {what} element") from None


def act(A, w, t, r, m):
    """The module element r . m under parameter w and ring t."""

    wi = _param_index(A, w)
    if not 0 <= t < len(A.rings):
        raise IndexOutOfRange(f"ring index {t} is out of range")
    ri = _lookup(A.rings[t].index, r, "ring")
    mi = _lookup(A.module.index, m, "module")
    return A.module.elements[A.tables[wi][t][ri, mi]]


def family_act(A, w, elements, m):
    """Apply one element of every ring, in ascending ring order."""

    if len(elements) != len(A.rings):
        raise IndexOutOfRange(f"expected {len(A.rings)} ring elements, "
                              f"got {len(elements)}")
    for t, r in enumerate(elements):
        m = act(A, w, t, r, m)
    return m


##############################################################################
# Axioms


@dataclass(frozen=True)
class AxiomViolation:
    kind: str
    witness: Mapping[str, str]


@dataclass(frozen=True)
class AxiomReport:
    """The first violations found by verify_module_axioms."""

    violations: Tuple[AxiomViolation, ...] = ()
    checked: int = 0

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    @property
    def ok(self):
        return not self.violations

    def as_dict(self):
        return {"ok": self.ok, "violations": len(self),
                "witnesses": [{"kind": v.kind, **v.witness} for v in self]}


def verify_module_axioms(A, limit=None):
    """Check every module axiom of `A` over its whole domain.

    For each parameter w and ring R_t with table T:
      r.(m + m') = r.m + r.m'        (AdditivityViolation)
      (r + s).m = r.m + s.m          (RingAdditivityViolation)
      (rs).m = r.(s.m)               (CompatibilityViolation)
      1.m = m                        (UnitViolation)
    and with `commuting`, for t != t' and every parameter pair,
      r_t.(r_t'.m) = r_t'.(r_t.m)    (CommutingViolation).
    """

    limit = config.MAX_VIOLATIONS if limit is None else limit
    Madd = A.module.add
    labels = A.module.elements
    found = []

    def collect(kind, ok, describe):
        for witness in np.argwhere(~ok)[:max(limit - len(found), 0)]:
            found.append(AxiomViolation(kind, describe(*(int(i) for i in witness))))

    for wi, w in enumerate(A.params):
        for t, ring in enumerate(A.rings):
            T = A.tables[wi][t]
            R = ring.elements
            base = {"param": w, "ring": str(t)}

            collect("AdditivityViolation",
                    T[:, Madd] == Madd[T[:, :, None], T[:, None, :]],
                    lambda r, m, n: {**base, "r": R[r], "m": labels[m], "m2": labels[n]})
            collect("RingAdditivityViolation",
                    T[ring.add] == Madd[T[:, None, :], T[None, :, :]],
                    lambda r, s, m: {**base, "r": R[r], "s": R[s], "m": labels[m]})
            ridx = np.arange(len(R))
            collect("CompatibilityViolation",
                    T[ring.mul] == T[ridx[:, None, None], T[None, :, :]],
                    lambda r, s, m: {**base, "r": R[r], "s": R[s], "m": labels[m]})
            collect("UnitViolation",
                    T[ring.one] == np.arange(len(labels)),
                    lambda m: {**base, "m": labels[m]})

    if A.commuting:
        for (wi, w), (vi, v) in product(enumerate(A.params), repeat=2):
            for t, u in product(range(len(A.rings)), repeat=2):
                if t >= u:
                    continue
                S, U = A.tables[wi][t], A.tables[vi][u]
                si = np.arange(S.shape[0])
                ui = np.arange(U.shape[0])
                R, Q = A.rings[t].elements, A.rings[u].elements
                collect("CommutingViolation",
                        S[si[:, None, None], U[None, :, :]]
                        == U[ui[None, :, None], S[:, None, :]],
                        lambda r, q, m: {"param": w, "param2": v,
                                         "ring": str(t), "ring2": str(u),
                                         "r": R[r], "s": Q[q], "m": labels[m]})

    report = AxiomReport(tuple(found), A.domain_size())
    if found:
        logger.info("{} failed {} axiom check(s)", A, len(found))
    return report


##############################################################################
# Levels


@dataclass(frozen=True)
class LevelObject:
    """A module at some level, the family acting on it, and optionally its
    own ring structure so that it can act one level up."""

    name: str
    system: ActionSystem
    acting: Tuple[str, ...]
    ring: Optional[FiniteRing] = None


@dataclass(frozen=True)
class MultimoduleLevels:
    """Named rings at level 0 and named modules at levels 1..n."""

    rings: Mapping[str, FiniteRing]
    levels: Tuple[Tuple[LevelObject, ...], ...] = ()


def _acting_rings(L, k):
    """Name -> ring for the objects of level k that can act."""

    if k == 0:
        return dict(L.rings)
    return {obj.name: obj.ring for obj in L.levels[k - 1]}


def build_multimodule_hyperstructure(L):
    """The hyperstructure whose level-(k+1) bonds are modules over level k.

    Each module binds its acting family with the "acts-on" property, so the
    boundary of a module is exactly the family acting on it.
    """

    depth = len(L.levels)
    H = add_elements(empty(depth), 0, sorted(L.rings))

    for k, objects in enumerate(L.levels, start=1):
        below = _acting_rings(L, k - 1)
        H = add_elements(H, k, [obj.name for obj in objects])
        specs = []

        for obj in objects:
            if len(obj.acting) != len(obj.system.rings):
                raise MalformedInput(f"{obj.name} names {len(obj.acting)} actors "
                                     f"for {len(obj.system.rings)} rings")
            for t, name in enumerate(obj.acting):
                if name not in below:
                    raise UnknownElement(f"{name} is not an object of level {k - 1}",
                                         element=f"{k - 1}:{name}")
                if below[name] is None or below[name] != obj.system.rings[t]:
                    raise MalformedInput(f"{obj.name} is not acted on through "
                                         f"the ring of {name}")

            report = verify_module_axioms(obj.system)
            if not report.ok:
                raise AxiomFailure(f"{obj.name} fails its module axioms",
                                   report=report, object=obj.name)
            specs.append((Support.of(k - 1, obj.acting, "acts-on"), obj.name, False))

        H = add_bonds(H, specs)

    logger.debug("built multimodule hyperstructure of depth {}", depth)
    return H


##############################################################################
# Built-in rings, modules and actions


def integers_mod(n):
    """The ring Z_n."""

    a = np.arange(n)
    return FiniteRing([str(i) for i in range(n)],
                      (a[:, None] + a[None, :]) % n, np.outer(a, a) % n,
                      0, 1 % n, name=f"Z{n}")


def _tuples(p, size):
    return list(product(range(p), repeat=size))


def _label(entries):
    return ",".join(str(x) for x in entries)


def matrix_ring(p):
    """The ring M_2(Z_p) of 2x2 matrices; elements are labeled "a,b,c,d"."""

    mats = [np.array(e).reshape(2, 2) for e in _tuples(p, 4)]
    where = {tuple(m.flatten()): i for i, m in enumerate(mats)}
    n = len(mats)
    add = np.empty((n, n), dtype=np.int64)
    mul = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(mats):
        for j, y in enumerate(mats):
            add[i, j] = where[tuple(((x + y) % p).flatten())]
            mul[i, j] = where[tuple(((x @ y) % p).flatten())]
    labels = [_label(m.flatten()) for m in mats]
    return FiniteRing(labels, add, mul, where[(0, 0, 0, 0)],
                      where[(1 % p, 0, 0, 1 % p)], name=f"M2Z{p}")


def regular_module(ring):
    """A ring regarded as a module over itself."""

    return FiniteModule(ring.elements, ring.add, ring.zero, name=ring.name)


def vector_module(p, size):
    """Z_p^size under componentwise addition."""

    vectors = _tuples(p, size)
    where = {v: i for i, v in enumerate(vectors)}
    add = [[where[tuple((a + b) % p for a, b in zip(u, v))] for v in vectors]
           for u in vectors]
    return FiniteModule([_label(v) for v in vectors], add,
                        where[(0,) * size], name=f"Z{p}^{size}")


def left_multiplication(ring):
    return ring.mul.copy()


def right_multiplication(ring):
    return ring.mul.T.copy()


def bimodule(ring):
    """`ring` acting on itself from the left and from the right."""

    return ActionSystem([ring, ring], ["w"],
                        [[left_multiplication(ring), right_multiplication(ring)]],
                        regular_module(ring), commuting=True)


def double_left(ring, commuting=True):
    """`ring` acting on itself twice, both times from the left."""

    return ActionSystem([ring, ring], ["w"],
                        [[left_multiplication(ring), left_multiplication(ring)]],
                        regular_module(ring), commuting=commuting)


def scalar_action(p, size):
    """Z_p acting on Z_p^size by scalar multiplication."""

    ring, module = integers_mod(p), vector_module(p, size)
    vectors = _tuples(p, size)
    table = [[module.index[_label(tuple(r * x % p for x in v))] for v in vectors]
             for r in range(p)]
    return ring, module, table


def matrix_vector_action(p):
    """M_2(Z_p) acting on column vectors Z_p^2."""

    ring, module = matrix_ring(p), vector_module(p, 2)
    vectors = _tuples(p, 2)
    table = []
    for entries in _tuples(p, 4):
        m = np.array(entries).reshape(2, 2)
        table.append([module.index[_label(m @ np.array(v) % p)] for v in vectors])
    return ring, module, table


def builtin_ring(name):
    """Z<n> or M2Z<p>."""

    if name.startswith("M2Z") and name[3:].isdigit():
        return matrix_ring(int(name[3:]))
    if name.startswith("Z") and name[1:].isdigit():
        return integers_mod(int(name[1:]))
    raise MalformedInput(f"unknown built-in ring {name!r}")
