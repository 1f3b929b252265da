"""JSON instance documents: constructor trees for rings/modules plus named subsets.

Example::

    {
      "ring": {"zmod": 12},
      "module": {"regular": {"zmod": 12}},
      "subsets": {
        "S": {"kind": "msystem", "elements": [4]},
        "P": {"kind": "submodule", "elements": [0, 6]}
      }
    }
"""

import json
from dataclasses import dataclass, field
from importlib import resources

import jsonschema

from .bits import mask_of
from .errors import SPrimeError, StructureError
from .structures import (FiniteRightModule, FiniteRing, direct_sum, make_matrix_ring,
                         make_upper_triangular, make_zmod, module_spec, product_module,
                         product_ring, quotient_module, quotient_ring, regular_module,
                         ring_spec, zero_module)
from .substructures import (Ideal, MSystem, Submodule, Subset, is_right_ideal_mask,
                            is_submodule_mask, is_two_sided_ideal_mask, make_msystem)

INSTANCE_SCHEMA_VERSION = "sprime-instance/1"
SUBSET_KINDS = ("ideal", "right_ideal", "submodule", "msystem", "subset")


class ParseError(SPrimeError):
    """Malformed document: bad JSON, schema violation, unknown names."""


class ValidationError(SPrimeError):
    """Well-formed document whose structures fail validation."""

    def __init__(self, location, message):
        super().__init__(f"{location}: {message}")
        self.location = location


def load_schema(name):
    text = resources.files("sprime.schemas").joinpath(name).read_text()
    return json.loads(text)


def build_ring(spec) -> FiniteRing:
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ParseError(f"ring spec must be a one-key object, got {spec!r}")
    (kind, arg), = spec.items()
    if kind == "zmod":
        return make_zmod(int(arg))
    if kind == "matrix":
        return make_matrix_ring(build_ring(arg["base"]), int(arg["k"]))
    if kind == "upper_triangular":
        return make_upper_triangular(build_ring(arg["base"]), int(arg["k"]))
    if kind == "product":
        return product_ring(build_ring(arg[0]), build_ring(arg[1]))
    if kind == "quotient":
        return quotient_ring(build_ring(arg["ring"]), arg["ideal"])
    if kind == "tables":
        r = FiniteRing(arg["add"], arg["mul"], zero=arg.get("zero", 0), one=arg.get("one", 1),
                       label=arg.get("label", "R"), names=arg.get("names"))
        r.cache["spec"] = {"tables": {"add": r.add.tolist(), "mul": r.mul.tolist(),
                                      "zero": r.zero, "one": r.one}}
        return r
    raise ParseError(f"unknown ring constructor {kind!r}")


def build_module(spec) -> FiniteRightModule:
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ParseError(f"module spec must be a one-key object, got {spec!r}")
    (kind, arg), = spec.items()
    if kind == "regular":
        return regular_module(build_ring(arg))
    if kind == "zero":
        return zero_module(build_ring(arg))
    if kind == "product":
        return product_module(build_module(arg[0]), build_module(arg[1]))
    if kind == "direct_sum":
        m1 = build_module(arg[0])
        m2 = build_module(arg[1])
        if not m1.ring.same_tables(m2.ring):
            raise ParseError("direct_sum summands must share a ring")
        if m2.ring is not m1.ring:
            m2 = _rebase(m2, m1.ring)
        return direct_sum(m1, m2)
    if kind == "quotient":
        return quotient_module(build_module(arg["module"]), arg["submodule"])
    if kind == "tables":
        ring = build_ring(arg["ring"])
        m = FiniteRightModule(ring, arg["add"], arg["act"], zero=arg.get("zero", 0),
                              label=arg.get("label", "M"), names=arg.get("names"))
        return m
    raise ParseError(f"unknown module constructor {kind!r}")


def _rebase(m, ring):
    out = FiniteRightModule(ring, m.add, m.act, zero=m.zero, label=m.label, names=m.names,
                            validate=False)
    out.cache["spec"] = module_spec(m)
    return out


def dump_ring(r: FiniteRing, tables=False) -> dict:
    if tables:
        return {"tables": {"add": r.add.tolist(), "mul": r.mul.tolist(),
                           "zero": r.zero, "one": r.one}}
    return ring_spec(r)


def dump_module(m: FiniteRightModule, tables=False) -> dict:
    if tables:
        return {"tables": {"ring": dump_ring(m.ring, tables=True), "add": m.add.tolist(),
                           "act": m.act.tolist(), "zero": m.zero}}
    return module_spec(m)


@dataclass
class Instance:
    ring: FiniteRing
    module: FiniteRightModule
    subsets: dict = field(default_factory=dict)

    def get(self, name) -> Subset:
        try:
            return self.subsets[name]
        except KeyError:
            raise ParseError(f"undefined subset name {name!r}") from None


def _subset(inst_ring, inst_module, name, entry):
    kind = entry["kind"]
    elements = entry["elements"]
    loc = f"subset {name}"
    if kind == "msystem":
        if not elements:
            raise ValidationError(loc, "an m-system must be nonempty")
        bad = [e for e in elements if not 0 <= e < inst_ring.order]
        if bad:
            raise ValidationError(loc, f"elements out of range: {bad}")
        try:
            return make_msystem(inst_ring, elements)
        except SPrimeError as exc:
            raise ValidationError(f"msystem {name}", str(exc)) from None
    owner = inst_module if kind == "submodule" else inst_ring
    if entry.get("owner") == "module":
        owner = inst_module
    bad = [e for e in elements if not 0 <= e < owner.order]
    if bad:
        raise ValidationError(loc, f"elements out of range: {bad}")
    bits = mask_of(elements)
    if kind == "ideal":
        if not is_two_sided_ideal_mask(inst_ring, bits):
            raise ValidationError(f"ideal {name}", "not a two-sided ideal")
        return Ideal(inst_ring, bits)
    if kind == "right_ideal":
        if not is_right_ideal_mask(inst_ring, bits):
            raise ValidationError(f"right_ideal {name}", "not a right ideal")
        return Ideal(inst_ring, bits, kind="right")
    if kind == "submodule":
        if not is_submodule_mask(inst_module, bits):
            raise ValidationError(f"submodule {name}", "not a submodule")
        return Submodule(inst_module, bits)
    return Subset(owner, bits)


def parse_document(doc) -> Instance:
    try:
        jsonschema.validate(doc, load_schema("instance.schema.json"))
    except jsonschema.ValidationError as exc:
        raise ParseError(f"schema: {exc.message}") from None
    try:
        ring = build_ring(doc["ring"]) if "ring" in doc else None
        module = build_module(doc["module"]) if "module" in doc else None
    except (StructureError, ValueError) as exc:
        raise ValidationError("structure", str(exc)) from None
    except (KeyError, TypeError, IndexError) as exc:
        raise ParseError(f"malformed constructor: {exc!r}") from None
    if module is not None and ring is not None:
        if not module.ring.same_tables(ring):
            raise ValidationError("module", "module ring differs from the declared ring")
    if module is None:
        if ring is None:
            raise ParseError("document declares neither ring nor module")
        module = regular_module(ring)
    ring = module.ring
    subsets = {name: _subset(ring, module, name, entry)
               for name, entry in doc.get("subsets", {}).items()}
    return Instance(ring, module, subsets)


def parse_instance(path) -> Instance:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return parse_document(doc)


def dump_instance(ring=None, module=None, subsets=None, tables=False) -> dict:
    doc = {"schema": INSTANCE_SCHEMA_VERSION}
    if ring is not None:
        doc["ring"] = dump_ring(ring, tables)
    if module is not None:
        doc["module"] = dump_module(module, tables)
    if subsets:
        out = {}
        for name, sub in subsets.items():
            if isinstance(sub, MSystem):
                kind = "msystem"
            elif isinstance(sub, Ideal):
                kind = "ideal" if sub.kind == "two-sided" else "right_ideal"
            elif isinstance(sub, Submodule):
                kind = "submodule"
            else:
                kind = "subset"
            out[name] = {"kind": kind, "elements": sub.elements()}
        doc["subsets"] = out
    return doc
