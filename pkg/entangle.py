"""Multilevel entanglement of pure tensor-product states.

States are unit vectors over a product of factors with dims d_1..d_m,
stored row-major. A level-k state is built by bond_k as a linear
combination of products of lower-level states, and remembers how it was
built. Entanglement order is decided independently from that record, by
testing factorization against a partition tree of the factors.
"""

from dataclasses import dataclass
from functools import reduce
from typing import NamedTuple, Optional, Tuple

import numpy as np
from loguru import logger

import config
from errors import (BadArity, BadCut, BadTree, CorruptProvenance,
                    DimMismatch, MalformedInput, NoProvenance, ObsRejection,
                    ZeroState)
from hypercore import (ElementId, Property, Support, add_bonds, add_elements,
                       empty, observe_all)


@dataclass(frozen=True)
class BondRecord:
    """How a state was bonded: sum over j of coefficients[j] times the
    tensor product of constituents[j]."""

    level: int
    coefficients: Tuple[complex, ...]
    constituents: Tuple[Tuple["TensorState", ...], ...]


@dataclass(frozen=True, eq=False)
class TensorState:
    dims: Tuple[int, ...]
    amps: np.ndarray
    provenance: Optional[BondRecord] = None

    def __repr__(self):
        dims = "x".join(str(d) for d in self.dims)
        return f"<TensorState {dims} level={self.level}>"

    @property
    def level(self):
        return self.provenance.level if self.provenance else 0

    def __len__(self):
        return len(self.dims)


def _canonical(amps, norm_tol=None):
    """Scale `amps` to unit norm with a positive real leading amplitude.

    Returns the scaled vector and the factor it was multiplied by.
    """

    norm_tol = config.NORM_TOL if norm_tol is None else norm_tol
    norm = np.linalg.norm(amps)
    if norm < norm_tol:
        raise ZeroState("the amplitudes vanish", norm=float(norm))

    lead = amps[np.argmax(np.abs(amps) > norm_tol * norm)]
    factor = np.conj(lead) / (abs(lead) * norm)
    return amps * factor, factor


def make_state(dims, amps, provenance=None):
    """A normalized, phase-fixed state over factors of the given dims."""

    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 2 for d in dims):
        raise MalformedInput("every factor needs dimension at least 2",
                             dims=list(dims))
    amps = np.asarray(amps, dtype=complex).reshape(-1)
    if amps.size != int(np.prod(dims)):
        raise DimMismatch(f"{amps.size} amplitudes for dims {list(dims)}",
                          dims=list(dims))

    amps, _ = _canonical(amps)
    amps.setflags(write=False)
    return TensorState(dims, amps, provenance)


def basis_state(dims, digits):
    """The computational basis state |digits> over `dims`."""

    amps = np.zeros(int(np.prod(dims)), dtype=complex)
    amps[np.ravel_multi_index(tuple(digits), tuple(dims))] = 1
    return make_state(dims, amps)


def tensor_product(states):
    """Kronecker product of `states`, in order."""

    states = list(states)
    if not states:
        raise BadArity("a tensor product needs at least one state")
    if len(states) == 1:
        return states[0]
    dims = tuple(d for s in states for d in s.dims)
    return make_state(dims, reduce(np.kron, (s.amps for s in states)))


def make_named(name, n):
    """GHZ_n or W_n over n qubits."""

    if n < 2:
        raise BadArity(f"{name} needs at least two factors", n=n)
    amps = np.zeros(2 ** n, dtype=complex)
    if name == "ghz":
        amps[0] = amps[-1] = 1
    elif name == "w":
        amps[[2 ** i for i in range(n)]] = 1
    else:
        raise MalformedInput(f"unknown named state {name!r}")
    return make_state((2,) * n, amps)


##############################################################################
# Factorization


class Factorization(NamedTuple):
    product: bool
    left: Optional[TensorState] = None
    right: Optional[TensorState] = None


def _matricize(s, left, right):
    """The |L| x |R| matrix of `s` for a cut given by 1-based factor indices."""

    left = sorted(int(i) for i in left)
    right = sorted(int(i) for i in right)
    m = len(s.dims)
    if not left or not right:
        raise BadCut("both sides of a cut must be non-empty")
    if set(left) & set(right):
        raise BadCut("the sides of a cut overlap", left=left, right=right)
    if sorted(left + right) != list(range(1, m + 1)):
        raise BadCut(f"a cut must split factors 1..{m}", left=left, right=right)

    order = [i - 1 for i in left + right]
    tensor = s.amps.reshape(s.dims).transpose(order)
    rows = int(np.prod([s.dims[i - 1] for i in left]))
    return tensor.reshape(rows, -1), left, right


def schmidt_coefficients(s, left, right):
    """Singular values of the matricization of `s` across a cut."""

    matrix, _, _ = _matricize(s, left, right)
    return np.linalg.svd(matrix, compute_uv=False)


def is_product(s, left, right, rank_tol=None):
    """Is `s` a product across the cut `left` | `right`?

    When it is, the factors come from the dominant singular pair and
    are normalized and phase-fixed, so s = left (x) right with the
    factors arranged in cut order.
    """

    rank_tol = config.RANK_TOL if rank_tol is None else rank_tol
    matrix, left, right = _matricize(s, left, right)
    u, sv, vh = np.linalg.svd(matrix, full_matrices=False)

    if sv[1] / sv[0] >= rank_tol:
        return Factorization(False)
    return Factorization(True,
                         make_state([s.dims[i - 1] for i in left], u[:, 0]),
                         make_state([s.dims[i - 1] for i in right], vh[0]))


def _block_cuts_pure(s, widths):
    """Is `s` a product of consecutive blocks with these factor counts?"""

    edge = 0
    for width in widths[:-1]:
        edge += width
        if not is_product(s, range(1, edge + 1),
                          range(edge + 1, len(s.dims) + 1)).product:
            return False
    return True


##############################################################################
# Observers


_OBSERVERS = {}


def register_observer(name, predicate):
    """Add an observer: predicate(state, block_widths) -> bool, False rejects."""

    _OBSERVERS[name] = predicate


def _not_pure(state, widths):
    return not _block_cuts_pure(state, widths)


register_observer("not-pure", _not_pure)


##############################################################################
# Bonds


def bond_k(k, rows, coefficients, observe=("not-pure",)):
    """Bond rows of block states into a level-k state.

    The result is the sum over j of coefficients[j] times the tensor product
    of rows[j], normalized and phase-fixed. Every observer named in
    `observe` must accept it.
    """

    if k < 1:
        raise MalformedInput("bond level must be at least 1", level=k)
    rows = [tuple(row) for row in rows]
    coefficients = [complex(c) for c in coefficients]
    if not rows or any(not row for row in rows):
        raise DimMismatch("a bond needs at least one non-empty row")
    if len(coefficients) != len(rows):
        raise DimMismatch(f"{len(coefficients)} coefficients for {len(rows)} rows")

    shape = [s.dims for s in rows[0]]
    for j, row in enumerate(rows):
        if [s.dims for s in row] != shape:
            raise DimMismatch(f"row {j + 1} has different block dims",
                              row=j + 1)

    total = sum(c * reduce(np.kron, (s.amps for s in row))
                for c, row in zip(coefficients, rows))
    amps, factor = _canonical(np.asarray(total, dtype=complex))

    record = BondRecord(k, tuple(c * factor for c in coefficients), tuple(rows))
    state = make_state([d for dims in shape for d in dims], amps, record)

    widths = [len(dims) for dims in shape]
    for name in observe:
        if name not in _OBSERVERS:
            raise MalformedInput(f"unknown observer {name!r}")
        if not _OBSERVERS[name](state, widths):
            raise ObsRejection(f"observer {name} rejects the bonded state",
                               observer=name, level=k)

    logger.debug("bonded {} row(s) into a level-{} state", len(rows), k)
    return state


def dissolve(s):
    """The rows a bonded state was built from."""

    record = s.provenance
    if record is None:
        raise NoProvenance("the state was not built by a bond")

    rebuilt = sum(c * reduce(np.kron, (q.amps for q in row))
                  for c, row in zip(record.coefficients, record.constituents))
    error = np.linalg.norm(rebuilt - s.amps)
    if error > config.RECON_TOL:
        raise CorruptProvenance("the bond record does not rebuild the state",
                                error=float(error))
    return record.constituents


##############################################################################
# Partition trees and entanglement order


@dataclass(frozen=True)
class PartitionTree:
    """A leaf (1-based factor index) or a grouping of subtrees."""

    leaf: Optional[int] = None
    children: Tuple["PartitionTree", ...] = ()

    @classmethod
    def parse(cls, nested):
        """From nested lists of integers, e.g. [[1, 2], [3, 4]]."""

        if isinstance(nested, bool):
            raise BadTree("tree leaves must be integers")
        if isinstance(nested, int):
            return cls(leaf=nested)
        if isinstance(nested, (list, tuple)) and nested:
            return cls(children=tuple(cls.parse(child) for child in nested))
        raise BadTree("a tree is an integer or a non-empty list of trees",
                      node=repr(nested))

    @property
    def is_leaf(self):
        return self.leaf is not None

    @property
    def leaves(self):
        if self.is_leaf:
            return (self.leaf,)
        return tuple(i for child in self.children for i in child.leaves)

    @property
    def height(self):
        if self.is_leaf:
            return 0
        return 1 + max(child.height for child in self.children)

    def to_nested(self):
        if self.is_leaf:
            return self.leaf
        return [child.to_nested() for child in self.children]


class OrderResult(NamedTuple):
    order: int
    witness_node: Optional[Tuple[int, ...]] = None
    factors: Tuple[TensorState, ...] = ()


def _split(s, node):
    """Peel the children of `node` off `s` left to right, or None."""

    parts, rest = [], s
    for child in node.children[:-1]:
        width = len(child.leaves)
        cut = is_product(rest, range(1, width + 1),
                         range(width + 1, len(rest.dims) + 1))
        if not cut.product:
            return None
        parts.append(cut.left)
        rest = cut.right
    parts.append(rest)
    return parts


def _order(s, node):
    if node.is_leaf:
        return OrderResult(0)

    parts = _split(s, node)
    if parts is None:
        return OrderResult(node.height, node.leaves)

    best = OrderResult(0)
    for part, child in zip(parts, node.children):
        found = _order(part, child)
        if found.order > best.order:
            best = found
    return OrderResult(best.order, best.witness_node, tuple(parts))


def entanglement_order(s, tree):
    """The height of the highest tree node across whose children `s`
    fails to factorize; 0 for a full product."""

    if isinstance(tree, (int, list, tuple)):
        tree = PartitionTree.parse(tree)
    if tree.leaves != tuple(range(1, len(s.dims) + 1)):
        raise BadTree(f"tree leaves must be 1..{len(s.dims)} in order",
                      leaves=list(tree.leaves))
    return _order(s, tree)


##############################################################################
# States as hyperstructures


def state_hyperstructure(s, key="s"):
    """Organize `s` and its bond record into levels.

    `s` sits at its own level; a bonded state is a bond over every block
    state of every row, one level down, keyed "<parent>/<row>.<block>".
    """

    H = empty(s.level)
    specs, obs = [], []

    def place(state, level, name):
        nonlocal H
        H = add_elements(H, level, [name])
        dims = "x".join(str(d) for d in state.dims)
        obs.append((ElementId(level, name), Property("dims", dims)))
        if state.provenance is None or level == 0:
            return
        members = []
        for j, row in enumerate(state.provenance.constituents, start=1):
            for i, q in enumerate(row, start=1):
                child = f"{name}/{j}.{i}"
                place(q, level - 1, child)
                members.append(child)
        specs.append((Support.of(level - 1, members, "not-pure"), name, False))

    place(s, s.level, key)
    return observe_all(add_bonds(H, specs), obs)
