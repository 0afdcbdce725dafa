"""Commutative monoids used as value carriers.

TableMonoid is finite and checked exhaustively when it is built;
MultisetMonoid is the free commutative monoid on strings. Both expose the
same small surface: unit, op, combine, parse and render.
"""

from functools import reduce

import numpy as np

from errors import InvalidTable, MalformedInput


def first_failure(ok):
    """Index tuple of the first False entry of a boolean array, or None."""

    bad = np.argwhere(~ok)
    if len(bad) == 0:
        return None
    return tuple(int(i) for i in bad[0])


def associativity_witness(T):
    """First (a, b, c) with (ab)c != a(bc) in the table `T`, or None."""

    idx = np.arange(len(T))
    left = T[T[:, :, None], idx[None, None, :]]
    right = T[idx[:, None, None], T[None, :, :]]
    return first_failure(left == right)


class TableMonoid:
    """A finite commutative monoid given by its operation table.

    Elements are string labels; `table[i][j]` is the index of the product
    of elements i and j.
    """

    commutative = True

    def __init__(self, elements, unit, table):
        self.elements = tuple(str(e) for e in elements)
        self.index = {label: i for i, label in enumerate(self.elements)}
        n = len(self.elements)

        if len(self.index) != n:
            raise InvalidTable("monoid elements must be distinct")
        self.table = np.asarray(table, dtype=np.int64)
        if self.table.shape != (n, n):
            raise InvalidTable(f"table must be {n}x{n}",
                               shape=list(self.table.shape))
        if n == 0 or self.table.min() < 0 or self.table.max() >= n:
            raise InvalidTable("table values must index the elements")
        if not 0 <= unit < n:
            raise InvalidTable("unit must index the elements", unit=unit)
        self.unit_index = unit

        self._check_laws()

    def __repr__(self):
        return f"<TableMonoid of {len(self.elements)} elements>"

    def _check_laws(self):
        T = self.table
        idx = np.arange(len(self.elements))

        witness = associativity_witness(T)
        if witness:
            raise InvalidTable("operation is not associative",
                               witness=[self.elements[i] for i in witness])

        witness = first_failure(T == T.T)
        if witness:
            raise InvalidTable("operation is not commutative",
                               witness=[self.elements[i] for i in witness])

        u = self.unit_index
        if not (np.array_equal(T[u, :], idx) and np.array_equal(T[:, u], idx)):
            raise InvalidTable("unit does not act as identity",
                               unit=self.elements[u])

    @property
    def unit(self):
        return self.elements[self.unit_index]

    def op(self, a, b):
        return self.elements[self.table[self.index[a], self.index[b]]]

    def combine(self, values):
        return reduce(self.op, values, self.unit)

    def parse(self, raw):
        label = str(raw)
        if label not in self.index:
            raise MalformedInput(f"{label!r} is not a monoid element",
                                 value=label)
        return label

    def render(self, value):
        return value


class MultisetMonoid:
    """The free commutative monoid: multisets of strings under union.

    A multiset is stored as a sorted tuple.
    """

    commutative = True
    unit = ()

    def __repr__(self):
        return "<MultisetMonoid>"

    def op(self, a, b):
        return tuple(sorted(a + b))

    def combine(self, values):
        return reduce(self.op, values, self.unit)

    def parse(self, raw):
        if isinstance(raw, str) or not isinstance(raw, (list, tuple)):
            raise MalformedInput("a multiset is a list of strings", value=raw)
        return tuple(sorted(str(item) for item in raw))

    def render(self, value):
        return list(value)


def cyclic_monoid(n, operation="mul"):
    """Z_n under multiplication or addition mod n."""

    if n < 1:
        raise InvalidTable("modulus must be positive", modulus=n)
    a = np.arange(n)
    if operation == "mul":
        table, unit = np.outer(a, a) % n, 1 % n
    elif operation == "add":
        table, unit = (a[:, None] + a[None, :]) % n, 0
    else:
        raise MalformedInput(f"unknown operation {operation!r}")
    return TableMonoid([str(i) for i in range(n)], unit, table)
