"""Write sample input files for the hyperstruct command line.

Nobody needs to run this to use the library; it only produces example
files to try the commands on, e.g.

    python -m generator.create_fixtures
    python cli.py globalize generator/fixtures/assignment.json \
        --hyper generator/fixtures/pair.json
"""

import json
import os

import numpy as np
from faker import Faker

from entangle import make_named, tensor_product
from hypercore import Support, add_bond, add_elements, empty
from loaders import dump_hyperstructure, dump_state, dumps
from multimod import integers_mod

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")

fake = Faker()
Faker.seed(4)


def write(name, data):
    path = os.path.join(FIXTURES, name)
    with open(path, "w", encoding="utf-8") as f:
        f.write(dumps(data) + "\n")
    print(f"wrote {path}")


def main():
    os.makedirs(FIXTURES, exist_ok=True)
    left, right = fake.unique.word(), fake.unique.word()

    # Two leaves under one bond, valued 2 and 3 in (Z_10, *)
    H = add_elements(empty(1), 0, [left, right])
    H = add_bond(H, Support.of(0, [left, right], "pair"), fake.unique.word())
    write("pair.json", dump_hyperstructure(H))
    write("assignment.json", {
        "recipient": {"kind": "monoid", "modulus": 10, "operation": "mul"},
        "leaves": {left: "2", right: "3"},
    })

    points = [fake.unique.word() for _ in range(3)]
    write("topology.json", {
        "points": points,
        "opens": [[], points[:1], points[:2], points],
    })
    write("family.json", {
        "depth": 2,
        "words": {"": points, "1": points[:2], "1,1": points[:1], "1,2": []},
    })

    bell = make_named("ghz", 2)
    write("bell_bell.json", dump_state(tensor_product([bell, bell])))
    write("two_blocks.json", [[1, 2], [3, 4]])

    z6 = integers_mod(6)
    write("bimodule.json", {
        "params": ["w"],
        "tables": [[z6.mul.tolist(), np.transpose(z6.mul).tolist()]],
    })


if __name__ == "__main__":
    main()
