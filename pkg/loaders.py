"""JSON file formats.

Each load_* function takes already-decoded JSON (dicts and lists) and
returns a domain object; anything missing or of the wrong type becomes
MalformedInput. Each dump_* function returns canonical JSON-ready data,
with every array sorted so that equal structures dump identically.
"""

import json
from contextlib import contextmanager

from entangle import PartitionTree, make_state
from errors import HyperError, MalformedInput
from gft import MonoidRecipient, MultisetRecipient, TensorRecipient
from hypercore import Bond, ElementId, Hyperstructure, Property, Support
from monoids import TableMonoid, cyclic_monoid
from multimod import (ActionSystem, FiniteModule, FiniteRing, builtin_ring,
                      regular_module)
from nest import FiniteTopology, NestFamily


@contextmanager
def reading(what):
    """Turn parse failures inside the block into MalformedInput."""

    try:
        yield
    except HyperError:
        raise
    except (KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
        raise MalformedInput(f"bad {what}: {exc}") from exc


def read_json(path):
    with reading(path):
        with open(path, encoding="utf-8") as f:
            return json.load(f)


def dumps(data):
    return json.dumps(data, sort_keys=True, indent=2)


##############################################################################
# Hyperstructures


def _property(raw):
    if isinstance(raw, str):
        return Property(raw)
    payload = raw.get("payload")
    return Property(str(raw["tag"]), None if payload is None else str(payload))


def _dump_property(prop):
    return {"tag": prop.tag, "payload": prop.payload}


def load_hyperstructure(data):
    """Build a structure from its file form without enforcing its laws,
    so that validate can report what is broken."""

    with reading("hyperstructure"):
        depth = int(data["depth"])
        raw_levels = data["levels"]
        if len(raw_levels) != depth + 1:
            raise MalformedInput(f"depth {depth} needs {depth + 1} levels")
        levels = tuple(frozenset(ElementId(i, str(key)) for key in keys)
                       for i, keys in enumerate(raw_levels))

        bonds = set()
        for raw in data.get("bonds", []):
            level = int(raw["level"])
            if level < 1:
                raise MalformedInput("a bond id lives at level 1 or above",
                                     bond=raw.get("id"))
            support = Support(frozenset(ElementId(level - 1, str(k))
                                        for k in raw["members"]),
                              _property(raw.get("property", "bound")))
            bonds.add(Bond(ElementId(level, str(raw["id"])), support,
                           bool(raw.get("identity", False))))

        obs = set()
        for name, props in data.get("obs", {}).items():
            level, _, key = name.partition(":")
            for prop in props:
                obs.add((ElementId(int(level), key), _property(prop)))

        return Hyperstructure(depth, levels, frozenset(bonds), frozenset(obs))


def dump_hyperstructure(H):
    bonds = sorted(
        ({"id": b.id.key, "level": b.id.level, "members": b.support.keys,
          "property": _dump_property(b.support.property),
          "identity": b.is_identity}
         for b in H.bonds),
        key=lambda b: (b["level"], b["id"], b["members"],
                       b["property"]["tag"], b["property"]["payload"] or ""))
    data = {
        "depth": H.depth,
        "levels": [[e.key for e in H.elements(i)] for i in range(H.depth + 1)],
        "bonds": bonds,
    }
    if H.obs:
        obs = {}
        for element, prop in H.obs:
            obs.setdefault(str(element), []).append(prop)
        data["obs"] = {name: [_dump_property(p)
                              for p in sorted(props, key=Property.sort_key)]
                       for name, props in sorted(obs.items())}
    return data


##############################################################################
# Topologies and nest families


def load_topology(data):
    with reading("topology"):
        return FiniteTopology(frozenset(str(p) for p in data["points"]),
                              frozenset(frozenset(str(p) for p in u)
                                        for u in data["opens"]))


def _word(key):
    return tuple(int(i) for i in key.split(",")) if key else ()


def load_family(data):
    with reading("nest family"):
        words = {_word(key): frozenset(str(p) for p in u)
                 for key, u in data["words"].items()}
        return NestFamily(int(data["depth"]), words,
                          tuple(int(b) for b in data.get("bounds", ())))


##############################################################################
# Rings, modules and actions


def load_ring(data):
    """A ring file or the name of a built-in ring."""

    if isinstance(data, str):
        return builtin_ring(data)
    with reading("ring"):
        return FiniteRing(data["elements"], data["add"], data["mul"],
                          int(data["zero"]), int(data["one"]), data.get("name"))


def load_module(data):
    """A module file, or a built-in ring regarded as a module over itself."""

    if isinstance(data, str):
        return regular_module(builtin_ring(data))
    with reading("module"):
        return FiniteModule(data["elements"], data["add"], int(data["zero"]),
                            data.get("name"))


def load_action(data, rings, module, commuting=False):
    """Action tables indexed [w][t][r][m], bare or as {"params", "tables"}."""

    with reading("action"):
        if isinstance(data, dict):
            params, tables = data["params"], data["tables"]
        else:
            params, tables = [str(w) for w in range(len(data))], data
        return ActionSystem(rings, params, tables, module, commuting)


##############################################################################
# States and trees


def load_state(data):
    with reading("state"):
        amps = [complex(float(re), float(im)) for re, im in data["amps"]]
        return make_state(data["dims"], amps)


def dump_state(s):
    return {"dims": list(s.dims),
            "amps": [[float(a.real), float(a.imag)] for a in s.amps]}


def load_tree(data):
    return PartitionTree.parse(data)


##############################################################################
# Assignments


def load_recipient(data):
    with reading("recipient"):
        kind = data["kind"]
        if kind == "multiset":
            return MultisetRecipient()
        if kind == "tensor":
            return TensorRecipient()
        if kind != "monoid":
            raise MalformedInput(f"unknown recipient kind {kind!r}")
        if "modulus" in data:
            return MonoidRecipient(cyclic_monoid(int(data["modulus"]),
                                                 data.get("operation", "mul")))
        return MonoidRecipient(TableMonoid(data["elements"], int(data["unit"]),
                                           data["table"]))


def load_value(recipient, raw):
    if recipient.kind == "tensor":
        return load_state(raw)
    return recipient.carrier.parse(raw)


def parse_edit_value(recipient, text):
    """A value typed on the command line: a bare label for table monoids,
    JSON for the other recipients."""

    if recipient.kind == "monoid":
        return load_value(recipient, text)
    with reading("edit value"):
        return load_value(recipient, json.loads(text))


def dump_value(recipient, value):
    if recipient.kind == "tensor":
        return dump_state(value)
    return recipient.carrier.render(value)


def load_assignment_file(data):
    """The recipient and raw leaf values of an assignment file."""

    with reading("assignment"):
        recipient = load_recipient(data["recipient"])
        leaves = {str(key): load_value(recipient, raw)
                  for key, raw in data["leaves"].items()}
        return recipient, leaves
