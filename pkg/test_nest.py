"""Nest family and prefactorization tests."""

# run these tests like:
#
#    python -m unittest test_nest.py


import random
from unittest import TestCase

from errors import (MalformedInput, NotATopology, NotContained, NotDisjoint,
                    NotNested, NotOpen, UnknownPoint, UnknownWord)
from generator.helpers import random_nest_family, random_nesting
from hypercore import ElementId, Property, boundary, validate
from monoids import cyclic_monoid
from nest import (FiniteTopology, MonoidAssignment, NestFamily, build_nest,
                  check_openness, check_prefactorization, nest_boundary)


def chain_topology():
    """{}, {a}, {a,b} and the whole space {a,b,c,d}."""

    points = frozenset("abcd")
    opens = [frozenset(), frozenset("a"), frozenset("ab"), points]
    return FiniteTopology(points, frozenset(opens))


def two_level_family():
    return NestFamily(2, {
        (): frozenset("abcd"),
        (1,): frozenset("ab"),
        (1, 1): frozenset("a"),
        (1, 2): frozenset(),
    })


class TopologyTestCase(TestCase):
    """Finite topologies and openness."""

    def test_openness(self):
        """Are the empty set and the space open, and {b} not?"""

        T = chain_topology()
        self.assertTrue(check_openness(T, set()))
        self.assertTrue(check_openness(T, "abcd"))
        self.assertFalse(check_openness(T, {"b"}))

    def test_unknown_point(self):
        """Is a point outside the space refused?"""

        with self.assertRaises(UnknownPoint):
            check_openness(chain_topology(), {"z"})

    def test_not_a_topology(self):
        """Are families missing a union refused?"""

        points = frozenset("abc")
        with self.assertRaises(NotATopology):
            FiniteTopology(points, frozenset([frozenset(), frozenset("a"),
                                              frozenset("b"), points]))
        with self.assertRaises(NotATopology):
            FiniteTopology(points, frozenset([frozenset("a"), points]))

    def test_discrete(self):
        """Does the discrete topology hold every subset?"""

        T = FiniteTopology.discrete("abc")
        self.assertEqual(len(T.opens), 8)


class BuildNestTestCase(TestCase):
    """The hyperstructure of nested opens."""

    def test_single_inclusion(self):
        """Does U(1) inside U() give one bond?"""

        T = chain_topology()
        F = NestFamily(1, {(): frozenset("abcd"), (1,): frozenset("a")})
        H = build_nest(T, F)

        self.assertEqual(H.depth, 1)
        self.assertEqual(len(H.bonds), 1)
        self.assertEqual(boundary(H, ElementId(1, "U()")).keys, ["U(1)"])

    def test_two_levels(self):
        """Do U(1) and U() bind their one-letter extensions?"""

        H = build_nest(chain_topology(), two_level_family())

        self.assertEqual(boundary(H, ElementId(1, "U(1)")).keys, ["U(1,1)", "U(1,2)"])
        self.assertEqual(boundary(H, ElementId(2, "U()")).keys, ["U(1)"])
        self.assertEqual(boundary(H, ElementId(2, "U()")).property, Property("open"))
        self.assertEqual(H.properties(ElementId(0, "U(1,1)")), [Property("set", "{a}")])
        self.assertTrue(validate(H).ok)

    def test_not_nested(self):
        """Is U(1,1) outside U(1) refused?"""

        F = NestFamily(2, {(1,): frozenset("a"), (1, 1): frozenset("ab")})
        with self.assertRaises(NotNested):
            build_nest(chain_topology(), F)

    def test_not_open(self):
        """Is a non-open set refused?"""

        F = NestFamily(1, {(): frozenset("abcd"), (1,): frozenset("b")})
        with self.assertRaises(NotOpen):
            build_nest(chain_topology(), F)

    def test_bad_words(self):
        """Are long words, zero indices and out-of-bound indices refused?"""

        with self.assertRaises(MalformedInput):
            NestFamily(1, {(1, 1): frozenset()})
        with self.assertRaises(MalformedInput):
            NestFamily(1, {(0,): frozenset()})
        with self.assertRaises(MalformedInput):
            NestFamily(1, {(3,): frozenset()}, bounds=(2,))

    def test_random_families(self):
        """Do intersected random families always build and validate?"""

        rng = random.Random(13)
        for _ in range(100):
            points = list("abcde")[:rng.randint(1, 5)]
            T, F = random_nest_family(rng, points, rng.randint(0, 3), rng.randint(1, 3))
            H = build_nest(T, F)
            self.assertTrue(validate(H).ok)

            for word in F.words:
                for j in range(len(word)):
                    hole = word[:j] + (None,) + word[j + 1:]
                    self.assertIn(word, nest_boundary(F, hole))


class NestBoundaryTestCase(TestCase):
    """Hole filling."""

    def test_two_fillers(self):
        """Does U(1, .) give both defined extensions?"""

        self.assertEqual(nest_boundary(two_level_family(), (1, None)),
                         frozenset({(1, 1), (1, 2)}))

    def test_single_filler(self):
        """Does U(., 2) give a singleton?"""

        self.assertEqual(nest_boundary(two_level_family(), (None, 2)),
                         frozenset({(1, 2)}))

    def test_no_filler(self):
        """Is a hole nothing fills refused?"""

        with self.assertRaises(UnknownWord):
            nest_boundary(two_level_family(), (2, None))
        with self.assertRaises(MalformedInput):
            nest_boundary(two_level_family(), (1, 1))


class PrefactorizationTestCase(TestCase):
    """The inner, mid and outer triangle."""

    def test_free_monoid_commutes(self):
        """Does the free multiset assignment commute on random nestings?"""

        rng = random.Random(17)
        points = list("abcdefg")
        T = FiniteTopology.discrete(points)
        A = MonoidAssignment.free(T.opens)

        for _ in range(100):
            inner, mid, outer = random_nesting(rng, points)
            result = check_prefactorization(T, A, inner, mid, outer)
            self.assertTrue(result)
            self.assertEqual(result.direct, result.routed)
            self.assertEqual(len(result.direct), len(inner))

    def test_weighted_z6_fails(self):
        """Does a mid weight of 3 in (Z_6, *) break the triangle?"""

        T = FiniteTopology.discrete("abc")
        a, ab, abc = frozenset("a"), frozenset("ab"), frozenset("abc")
        A = MonoidAssignment(cyclic_monoid(6), {a: "2", ab: "1", abc: "1"},
                             weights={ab: "3"})

        result = check_prefactorization(T, A, [a], [ab], abc)
        self.assertFalse(result)
        self.assertEqual((result.direct, result.routed), ("2", "0"))

    def test_unweighted_z6_commutes(self):
        """Without weights, does (Z_6, *) commute?"""

        T = FiniteTopology.discrete("abc")
        a, b = frozenset("a"), frozenset("b")
        A = MonoidAssignment(cyclic_monoid(6), {a: "2", b: "3"})
        self.assertTrue(check_prefactorization(T, A, [a, b], [a | b], frozenset("abc")))

    def test_overlap(self):
        """Are overlapping inner opens refused?"""

        T = FiniteTopology.discrete("abc")
        A = MonoidAssignment.free(T.opens)
        with self.assertRaises(NotDisjoint):
            check_prefactorization(T, A, ["ab", "bc"], ["abc"], "abc")

    def test_not_contained(self):
        """Are stray inner opens and oversized mids refused?"""

        T = FiniteTopology.discrete("abc")
        A = MonoidAssignment.free(T.opens)
        with self.assertRaises(NotContained):
            check_prefactorization(T, A, ["c"], ["ab"], "abc")
        with self.assertRaises(NotContained):
            check_prefactorization(T, A, ["a"], ["abc"], "ab")

    def test_not_open(self):
        """Are non-open sets refused?"""

        A = MonoidAssignment.free(chain_topology().opens)
        with self.assertRaises(NotOpen):
            check_prefactorization(chain_topology(), A, ["b"], ["ab"], "abcd")
