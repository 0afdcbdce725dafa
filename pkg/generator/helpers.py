"""Random instances for the test suites and the fixture script."""

from itertools import product

import numpy as np

from entangle import make_state
from hypercore import Support, add_bonds, add_elements, empty, identity_bond
from nest import FiniteTopology, NestFamily


def random_hyperstructure(rng, depth=None, max_elements=200, identities=True):
    """A law-abiding structure with random supports at every level.

    `rng` is a random.Random. Every level stays non-empty, and the total
    element count stays at or below `max_elements`.
    """

    depth = rng.randint(0, 4) if depth is None else depth
    budget = max_elements // (depth + 1)

    keys = [f"x{i}" for i in range(rng.randint(1, min(12, budget)))]
    H = add_elements(empty(depth), 0, keys)

    for level in range(1, depth + 1):
        below = [e.key for e in H.elements(level - 1)]
        specs = []
        for j in range(rng.randint(1, max(1, min(8, budget - len(below))))):
            members = rng.sample(below, rng.randint(1, len(below)))
            specs.append((Support.of(level - 1, members, rng.choice("pqr")),
                          f"b{level}.{j}", False))
        H = add_bonds(H, specs)
        if identities and rng.random() < 0.5:
            H = identity_bond(H, rng.choice(H.elements(level - 1)))

    return H


def chain_hyperstructure(leaves, depth):
    """One bond per level: the first binds every leaf, each next the one below."""

    H = add_elements(empty(depth), 0, leaves)
    specs = [(Support.of(0, leaves, "chain"), "c1", False)]
    specs += [(Support.of(k - 1, [f"c{k - 1}"], "chain"), f"c{k}", False)
              for k in range(2, depth + 1)]
    return add_bonds(H, specs)


def tree_hyperstructure(rng, depth, leaves=8):
    """Every element has at most one parent; a single element on top."""

    keys = [f"x{i}" for i in range(leaves)]
    H = add_elements(empty(depth), 0, keys)

    for level in range(1, depth + 1):
        below = [e.key for e in H.elements(level - 1)]
        rng.shuffle(below)
        if level == depth:
            groups = [below]
        else:
            cuts = sorted(rng.sample(range(1, len(below)),
                                     rng.randint(0, len(below) - 1)))
            groups = [below[a:b] for a, b in zip([0] + cuts, cuts + [len(below)])]
        H = add_bonds(H, [(Support.of(level - 1, group, "tree"), f"t{level}.{j}", False)
                          for j, group in enumerate(groups)])

    return H


def random_nest_family(rng, points, depth, bound):
    """A nested family on the discrete topology.

    Each index i gets a random subset O_i and U(w) is the intersection of
    O_i over the letters of w, so dropping a letter can only enlarge U(w).
    """

    T = FiniteTopology.discrete(points)
    chosen = {i: frozenset(p for p in points if rng.random() < 0.7)
              for i in range(1, bound + 1)}
    everything = frozenset(points)

    assignment = {}
    for length in range(depth + 1):
        for word in product(range(1, bound + 1), repeat=length):
            assignment[word] = everything.intersection(*(chosen[i] for i in word))
    return T, NestFamily(depth, assignment, (bound,) * depth)


def random_nesting(rng, points):
    """Disjoint inner opens grouped into disjoint mid opens inside an outer one."""

    pool = list(points)
    rng.shuffle(pool)
    used = pool[:rng.randint(1, len(pool))]

    cuts = sorted(rng.sample(range(1, len(used)), rng.randint(0, len(used) - 1)))
    inner = [frozenset(used[a:b]) for a, b in zip([0] + cuts, cuts + [len(used)])]

    mid, current = [], frozenset()
    for u in inner:
        current |= u
        if rng.random() < 0.5:
            mid.append(current)
            current = frozenset()
    if current:
        mid.append(current)

    outer = frozenset(used) | frozenset(p for p in pool if rng.random() < 0.3)
    return inner, mid, outer


def random_amps(gen, dims):
    """Complex Gaussian amplitudes; `gen` is a numpy Generator."""

    size = int(np.prod(dims))
    return gen.normal(size=size) + 1j * gen.normal(size=size)


def random_state(gen, dims):
    return make_state(dims, random_amps(gen, dims))


def random_product_state(gen, dims):
    amps = np.ones(1, dtype=complex)
    for d in dims:
        amps = np.kron(amps, random_amps(gen, [d]))
    return make_state(dims, amps)
