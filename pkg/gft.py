"""General field theories over a hyperstructure.

An assignment puts a recipient value on every level-0 element of a source
structure. Globalizing walks the levels upward: each bond takes the
combination of the values of its support. When several bond paths reach
the same leaf the walk may count it twice, and that is reported as a
gluing inconsistency instead of a global value.
"""

from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Any, Mapping, NamedTuple, Optional, Tuple

import numpy as np
from loguru import logger

from entangle import TensorState, tensor_product
from errors import (LevelOutOfRange, MalformedInput, MissingLeaf, NoGlobal,
                    NoTop, NotGlobalized, UnknownLeaf, UnvalidatedSource)
from hypercore import ElementId, boundary, iterated_boundary, validate
from monoids import MultisetMonoid


class MonoidRecipient:
    """Values in a commutative monoid."""

    kind = "monoid"
    commutative = True

    def __init__(self, carrier):
        self.carrier = carrier

    def __repr__(self):
        return f"<{self.__class__.__name__} {self.carrier!r}>"

    def combine(self, values):
        return self.carrier.combine(values)

    def parse(self, value):
        return self.carrier.parse(value)

    def same(self, a, b):
        return a == b


class MultisetRecipient(MonoidRecipient):
    """Values in the free commutative monoid on strings."""

    kind = "multiset"

    def __init__(self):
        super().__init__(MultisetMonoid())


class TensorRecipient:
    """Tensor states; members are combined in canonical order."""

    kind = "tensor"
    commutative = False

    def __repr__(self):
        return "<TensorRecipient>"

    def combine(self, values):
        return tensor_product(values)

    def parse(self, value):
        if not isinstance(value, TensorState):
            raise MalformedInput("a tensor value must be a state",
                                 value=repr(value))
        return value

    def same(self, a, b):
        return a.dims == b.dims and np.allclose(a.amps, b.amps)


@dataclass(frozen=True)
class Assignment:
    source: Any
    recipient: Any
    leaf_values: Mapping[ElementId, Any]
    cache: dict = field(default_factory=dict, compare=False, repr=False)


@dataclass(frozen=True)
class GlueIssue:
    element: ElementId
    detail: str


class GlobalizeResult(NamedTuple):
    level_values: Tuple[Mapping[ElementId, Any], ...]
    global_value: Optional[Any]
    glue_report: Tuple[GlueIssue, ...]

    @property
    def ok(self):
        return not self.glue_report


class TunnelResult(NamedTuple):
    old: Any
    new: Any


def _leaf_id(key):
    return key if isinstance(key, ElementId) else ElementId(0, str(key))


def assign(H, recipient, leaf_values):
    """Attach `leaf_values` (keyed by level-0 id or bare key) to `H`."""

    values = {_leaf_id(key): recipient.parse(value)
              for key, value in leaf_values.items()}
    leaves = set(H.elements(0))

    extra = sorted(set(values) - leaves)
    if extra:
        raise UnknownLeaf(f"{extra[0]} is not a level-0 element",
                          element=str(extra[0]))
    missing = sorted(leaves - set(values))
    if missing:
        raise MissingLeaf(f"no value for {missing[0]}", element=str(missing[0]))

    return Assignment(H, recipient, values)


def with_edits(A, edits):
    """A new assignment with some leaf values replaced."""

    edits = {_leaf_id(key): A.recipient.parse(value)
             for key, value in edits.items()}
    for leaf in sorted(edits):
        if leaf not in A.leaf_values:
            raise UnknownLeaf(f"{leaf} is not a level-0 element",
                              element=str(leaf))
    return replace(A, leaf_values={**A.leaf_values, **edits}, cache={})


def _glue_issues(H, R, values):
    issues = []
    for level in range(1, H.depth + 1):
        for e in H.elements(level):
            if e not in values:
                continue
            paths = iterated_boundary(H, e)
            repeated = sorted(leaf for leaf, count in paths.items() if count > 1)
            if not repeated:
                continue
            if not R.commutative:
                issues.append(GlueIssue(e, f"{repeated[0]} reached by "
                                           f"{paths[repeated[0]]} paths"))
                continue
            direct = R.combine([values[leaf] for leaf in sorted(paths)])
            if not R.same(direct, values[e]):
                issues.append(GlueIssue(e, f"paths give {values[e]!r}, "
                                           f"leaves give {direct!r}"))
    return tuple(issues)


def globalize(A):
    """Push the leaf values up through every level of the source."""

    if "result" in A.cache:
        return A.cache["result"]

    H, R = A.source, A.recipient
    report = validate(H)
    if not report.ok:
        raise UnvalidatedSource(f"source has {len(report)} violation(s)",
                                kinds=dict(report.kinds()))
    tops = H.elements(H.depth)
    if len(tops) != 1:
        raise NoTop(f"{len(tops)} elements at the top level", count=len(tops))

    values = dict(A.leaf_values)
    unvalued = []
    for level in range(1, H.depth + 1):
        for e in H.elements(level):
            if not H.is_bond(e):
                continue
            members = sorted(boundary(H, e).members)
            missing = [m for m in members if m not in values]
            if missing:
                unvalued.append(GlueIssue(e, f"member {missing[0]} has no value"))
                continue
            values[e] = R.combine([values[m] for m in members])

    top = tops[0]
    if top not in values and not any(issue.element == top for issue in unvalued):
        unvalued.append(GlueIssue(top, "the top element has no value"))

    issues = tuple(sorted(unvalued + list(_glue_issues(H, R, values)),
                          key=lambda issue: (issue.element, issue.detail)))
    if issues:
        logger.info("globalizing found {} gluing issue(s)", len(issues))

    per_level = tuple(MappingProxyType({e: values[e] for e in H.elements(level)
                                        if e in values})
                      for level in range(H.depth + 1))
    global_value = values[top] if not issues else None

    result = GlobalizeResult(per_level, global_value, issues)
    A.cache["result"] = result
    return result


def level_values(A, level):
    """The values globalize computed at `level`."""

    result = A.cache.get("result")
    if result is None:
        raise NotGlobalized("globalize the assignment first")
    if not 0 <= level <= A.source.depth:
        raise LevelOutOfRange(f"level {level} is outside 0..{A.source.depth}",
                              level=level)
    return dict(result.level_values[level])


def tunnel(A, edits):
    """The global value before and after editing some leaves."""

    before = globalize(A)
    if before.global_value is None:
        raise NoGlobal("the assignment has no global value",
                       issues=len(before.glue_report))
    after = globalize(with_edits(A, edits))
    return TunnelResult(before.global_value, after.global_value)
