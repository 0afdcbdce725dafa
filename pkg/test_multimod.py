"""Multimodule tests."""

# run these tests like:
#
#    python -m unittest test_multimod.py


import random
from unittest import TestCase

import numpy as np

from errors import (AxiomFailure, IndexOutOfRange, InvalidTable,
                    MalformedInput, UnknownElement)
from hypercore import ElementId, boundary, validate
from monoids import cyclic_monoid
from multimod import (ActionSystem, FiniteModule, FiniteRing, LevelObject,
                      MultimoduleLevels, act, bimodule,
                      build_multimodule_hyperstructure, builtin_ring,
                      double_left, family_act, integers_mod, matrix_ring,
                      matrix_vector_action, regular_module,
                      scalar_action, verify_module_axioms)


def vector_space_system():
    """Z_2 scalars and M_2(Z_2) acting on Z_2^2."""

    z2, module, scalars = scalar_action(2, 2)
    m2, _, matrices = matrix_vector_action(2)
    return ActionSystem([z2, m2], ["w"], [[scalars, matrices]], module,
                        commuting=True)


def crt_system():
    """Z_2 and Z_3 acting on the CRT coordinates of Z_6."""

    z2, z3, z6 = integers_mod(2), integers_mod(3), integers_mod(6)

    def glue(x2, x3):
        return next(x for x in range(6) if x % 2 == x2 and x % 3 == x3)

    on_two = [[glue(r * m % 2, m % 3) for m in range(6)] for r in range(2)]
    on_three = [[glue(m % 2, r * m % 3) for m in range(6)] for r in range(3)]
    return ActionSystem([z2, z3], ["w"], [[on_two, on_three]],
                        regular_module(z6), commuting=True)


class RingTestCase(TestCase):
    """Finite rings and modules."""

    def test_integers(self):
        """Is Z_6 a ring with the expected products?"""

        z6 = integers_mod(6)
        self.assertEqual(len(z6), 6)
        self.assertEqual(z6.elements[z6.mul[2, 3]], "0")
        self.assertEqual(z6.elements[z6.add[4, 5]], "3")

    def test_matrix_ring(self):
        """Does M_2(Z_2) have 16 elements and fail to commute?"""

        m2 = matrix_ring(2)
        self.assertEqual(len(m2), 16)
        self.assertEqual(m2.elements[m2.one], "1,0,0,1")
        self.assertFalse(np.array_equal(m2.mul, m2.mul.T))

    def test_builtin_names(self):
        """Are Z<n> and M2Z<p> resolved, and other names refused?"""

        self.assertEqual(builtin_ring("Z5"), integers_mod(5))
        self.assertEqual(builtin_ring("M2Z2"), matrix_ring(2))
        with self.assertRaises(MalformedInput):
            builtin_ring("Q7")

    def test_invalid_tables(self):
        """Are tables failing the ring axioms refused?"""

        z3 = cyclic_monoid(3, "add").table
        with self.assertRaises(InvalidTable):
            # addition used as multiplication: 1 is no multiplicative unit
            FiniteRing("012", z3, z3, 0, 1)

        with self.assertRaises(InvalidTable):
            FiniteModule("ab", [[0, 0], [0, 0]], 0)


class ActTestCase(TestCase):
    """Table lookups."""

    def setUp(self):
        self.system = bimodule(integers_mod(6))

    def test_act(self):
        """Is 2 acting on 3 in Z_6 equal to 0?"""

        self.assertEqual(act(self.system, 0, 0, 2, 3), "0")
        self.assertEqual(act(self.system, "w", 1, "5", "5"), "1")

    def test_unit_and_zero(self):
        """Do 1 and 0 act as identity and as zero?"""

        for m in self.system.module.elements:
            for t in (0, 1):
                self.assertEqual(act(self.system, 0, t, "1", m), m)
                self.assertEqual(act(self.system, 0, t, "0", m), "0")

    def test_out_of_range(self):
        """Are bad parameters, rings and elements refused?"""

        with self.assertRaises(IndexOutOfRange):
            act(self.system, "v", 0, "1", "1")
        with self.assertRaises(IndexOutOfRange):
            act(self.system, 0, 2, "1", "1")
        with self.assertRaises(IndexOutOfRange):
            act(self.system, 0, 0, "7", "1")
        with self.assertRaises(IndexOutOfRange):
            family_act(self.system, 0, ["1"], "1")

    def test_family_act(self):
        """Does (2, 3) acting on 1 give 2 * 1 * 3 = 0?"""

        self.assertEqual(family_act(self.system, 0, ["2", "3"], "1"), "0")
        self.assertEqual(family_act(self.system, 0, ["1", "1"], "4"), "4")

    def test_commuting_order(self):
        """Is the order of a verified commuting family irrelevant?"""

        self.assertTrue(verify_module_axioms(self.system).ok)
        reversed_system = ActionSystem(self.system.rings[::-1], ["w"],
                                       [self.system.tables[0][::-1]],
                                       self.system.module)
        elements = self.system.rings[0].elements
        for r in elements:
            for s in elements:
                for m in self.system.module.elements:
                    self.assertEqual(family_act(self.system, 0, [r, s], m),
                                     family_act(reversed_system, 0, [s, r], m))


class VerifyTestCase(TestCase):
    """Exhaustive axiom checks."""

    def test_bimodule(self):
        """Does Z_6 acting left and right pass every axiom?"""

        report = verify_module_axioms(bimodule(integers_mod(6)))
        self.assertTrue(report.ok)
        self.assertEqual(report.checked, 1 * 2 * 36 * 36)

    def test_double_left(self):
        """Does M_2(Z_2) acting twice from the left fail to commute?"""

        report = verify_module_axioms(double_left(matrix_ring(2)))
        self.assertFalse(report.ok)
        self.assertLessEqual(len(report), 10)
        self.assertEqual({v.kind for v in report}, {"CommutingViolation"})

        witness = report.violations[0].witness
        system = double_left(matrix_ring(2))
        one_way = act(system, 0, 0, witness["r"], act(system, 0, 1, witness["s"], witness["m"]))
        other = act(system, 0, 1, witness["s"], act(system, 0, 0, witness["r"], witness["m"]))
        self.assertNotEqual(one_way, other)

    def test_double_left_order_matters(self):
        """Without commuting, does the family order change some result?"""

        system = double_left(matrix_ring(2), commuting=False)
        self.assertTrue(verify_module_axioms(system).ok)
        elements = system.rings[0].elements
        differs = any(family_act(system, 0, [r, s], m) != family_act(system, 0, [s, r], m)
                      for r in elements for s in elements
                      for m in system.module.elements)
        self.assertTrue(differs)

    def test_unit_violation(self):
        """Is 1 . m != m reported as a unit violation?"""

        z3 = integers_mod(3)
        table = z3.mul.copy()
        table[1] = [0, 2, 1]
        system = ActionSystem([z3], ["w"], [[table]], regular_module(z3))

        report = verify_module_axioms(system, limit=100)
        self.assertIn("UnitViolation", {v.kind for v in report})

    def test_corruption_fuzz(self):
        """Is any single corrupted cell of the bimodule caught?"""

        rng = random.Random(19)
        z6 = integers_mod(6)
        for _ in range(100):
            system = bimodule(z6)
            tables = [[t.copy() for t in system.tables[0]]]
            t, r, m = rng.randrange(2), rng.randrange(6), rng.randrange(6)
            old = tables[0][t][r, m]
            tables[0][t][r, m] = rng.choice([v for v in range(6) if v != old])

            corrupted = ActionSystem(system.rings, system.params, tables,
                                     system.module, commuting=True)
            self.assertFalse(verify_module_axioms(corrupted).ok)

    def test_limit(self):
        """Are reports truncated at the limit?"""

        report = verify_module_axioms(double_left(matrix_ring(2)), limit=3)
        self.assertEqual(len(report), 3)
        self.assertEqual(report.as_dict()["violations"], 3)

    def test_action_leaving_module(self):
        """Are tables pointing outside the module refused?"""

        z2 = integers_mod(2)
        with self.assertRaises(MalformedInput):
            ActionSystem([z2], ["w"], [[[[0, 0], [0, 2]]]], regular_module(z2))


class LevelsTestCase(TestCase):
    """Multimodule hyperstructures."""

    def test_depth_one(self):
        """Does Z_2^2 bind the scalars and the matrices acting on it?"""

        system = vector_space_system()
        levels = MultimoduleLevels(
            {"Z2": integers_mod(2), "M2Z2": matrix_ring(2)},
            ((LevelObject("V", system, ("Z2", "M2Z2")),),))
        H = build_multimodule_hyperstructure(levels)

        self.assertEqual(H.depth, 1)
        self.assertTrue(validate(H).ok)
        support = boundary(H, ElementId(1, "V"))
        self.assertEqual(support.keys, ["M2Z2", "Z2"])
        self.assertEqual(support.property.tag, "acts-on")

    def test_depth_two(self):
        """Can a module with its own ring act one level up?"""

        z6 = integers_mod(6)
        inner = LevelObject("Z6-bimodule", bimodule(z6), ("Z6", "Z6"), ring=z6)
        outer = LevelObject("Z6-over-bimodule", bimodule(z6),
                            ("Z6-bimodule", "Z6-bimodule"))
        H = build_multimodule_hyperstructure(
            MultimoduleLevels({"Z6": z6}, ((inner,), (outer,))))

        self.assertEqual(H.depth, 2)
        self.assertEqual(boundary(H, ElementId(2, "Z6-over-bimodule")).keys,
                         ["Z6-bimodule"])
        self.assertTrue(validate(H).ok)

    def test_depth_zero(self):
        """Is a bare ring family a structure without bonds?"""

        H = build_multimodule_hyperstructure(
            MultimoduleLevels({"Z2": integers_mod(2), "Z3": integers_mod(3)}))
        self.assertEqual(H.depth, 0)
        self.assertEqual(len(H.bonds), 0)
        self.assertEqual(len(H.levels[0]), 2)

    def test_crt_action_fails(self):
        """Does the componentwise Z_2, Z_3 action on Z_6 fail its axioms?"""

        levels = MultimoduleLevels(
            {"Z2": integers_mod(2), "Z3": integers_mod(3)},
            ((LevelObject("Z6", crt_system(), ("Z2", "Z3")),),))

        with self.assertRaises(AxiomFailure) as cm:
            build_multimodule_hyperstructure(levels)
        self.assertFalse(cm.exception.report.ok)
        self.assertIn("RingAdditivityViolation", {v.kind for v in cm.exception.report})

    def test_unknown_actor(self):
        """Is an acting name missing from the level below refused?"""

        levels = MultimoduleLevels(
            {"Z6": integers_mod(6)},
            ((LevelObject("M", bimodule(integers_mod(6)), ("Z6", "Z7")),),))
        with self.assertRaises(UnknownElement):
            build_multimodule_hyperstructure(levels)

    def test_ring_mismatch(self):
        """Is an actor whose ring differs from the system's refused?"""

        levels = MultimoduleLevels(
            {"Z6": integers_mod(6), "Z2": integers_mod(2)},
            ((LevelObject("M", bimodule(integers_mod(6)), ("Z6", "Z2")),),))
        with self.assertRaises(MalformedInput):
            build_multimodule_hyperstructure(levels)
