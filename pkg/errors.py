"""Exceptions raised by hyperstruct.

Domain errors (a law or contract was broken by well-formed data) derive
from HyperError directly. Errors about the shape of the input itself derive
from InputError; the command line maps those to exit code 2.
"""


class HyperError(Exception):
    """Base class for every hyperstruct error."""

    exit_code = 1

    def __init__(self, message="", **details):
        super().__init__(message or self.__class__.__name__)
        self.details = details

    @property
    def name(self):
        return self.__class__.__name__


class InputError(HyperError):
    """The input does not have the shape a module expects."""

    exit_code = 2


class MalformedInput(InputError):
    """A file or argument could not be parsed."""


class InvalidTable(InputError):
    """An operation table fails the axioms of its structure."""


class NotATopology(InputError):
    """A family of subsets is not closed under union and intersection."""


class BadTree(InputError):
    """A partition tree does not cover the factors of a state."""


class DimMismatch(InputError):
    """Bonded rows or coefficients do not line up."""


##############################################################################
# hypercore


class UnknownElement(HyperError):
    """An element id is not present at its level."""


class LevelOverflow(HyperError):
    """A bond would sit above the top level of the structure."""


class BondClash(HyperError):
    """A bond id is already bound to a different support."""


class EmptyValue(HyperError):
    """A hyperoperation produced an empty set."""


##############################################################################
# nest


class UnknownPoint(HyperError):
    """A subset mentions a point outside the space."""


class NotOpen(HyperError):
    """A set assigned by a family is not open."""


class NotNested(HyperError):
    """A nest family is not monotone under inclusion."""


class UnknownWord(HyperError):
    """No defined word fills the given hole."""


class NotDisjoint(HyperError):
    """Opens that must be pairwise disjoint overlap."""


class NotContained(HyperError):
    """An open is not contained where a nesting requires it."""


##############################################################################
# multimod


class IndexOutOfRange(HyperError):
    """An action index lies outside its table."""


class AxiomFailure(HyperError):
    """An action system fails its module axioms."""

    def __init__(self, message="", report=None, **details):
        super().__init__(message, **details)
        self.report = report


##############################################################################
# entangle


class BadCut(HyperError):
    """A bipartition does not split the factors of a state."""


class ZeroState(HyperError):
    """A linear combination cancelled to the zero vector."""


class ObsRejection(HyperError):
    """An observer refused a bonded state."""


class NoProvenance(HyperError):
    """A state carries no record of how it was bonded."""


class CorruptProvenance(HyperError):
    """A bond record no longer reconstructs its state."""


class BadArity(HyperError):
    """A named state or product was asked for with too few factors."""


##############################################################################
# gft


class MissingLeaf(HyperError):
    """A level-0 element has no assigned value."""


class UnknownLeaf(HyperError):
    """An edit names something that is not a level-0 element."""


class NoTop(HyperError):
    """The source has no unique top element."""


class UnvalidatedSource(HyperError):
    """The source hyperstructure fails validation."""


class NoGlobal(HyperError):
    """Gluing failed so there is no global value to tunnel from."""


class NotGlobalized(HyperError):
    """Level values were requested before globalizing."""


class LevelOutOfRange(NotGlobalized):
    """Level values were requested for a level the source does not have."""
