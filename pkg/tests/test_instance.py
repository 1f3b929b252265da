import json

import numpy as np
import pytest

from sprime.harness import Corpus
from sprime.instance import (ParseError, ValidationError, build_module, build_ring,
                             dump_instance, dump_module, dump_ring, parse_document,
                             parse_instance)
from sprime.structures import direct_sum, quotient_module, regular_module
from sprime.substructures import Submodule, make_msystem

Z12_DOC = {
    "ring": {"zmod": 12},
    "module": {"regular": {"zmod": 12}},
    "subsets": {"S": {"kind": "msystem", "elements": [4]},
                "P": {"kind": "submodule", "elements": [0, 6]}},
}


def test_parse_z12():
    inst = parse_document(Z12_DOC)
    assert inst.ring.order == 12
    assert inst.get("P").elements() == [0, 6]
    assert inst.get("S").elements() == [4]


def test_module_defaults_to_regular():
    inst = parse_document({"ring": {"zmod": 5}})
    assert inst.module is regular_module(inst.ring)


def test_bad_msystem_diagnostic():
    doc = {"ring": {"zmod": 4}, "subsets": {"S": {"kind": "msystem", "elements": [2]}}}
    with pytest.raises(ValidationError) as e:
        parse_document(doc)
    assert "not an m-system" in str(e.value)
    assert "(2, 2)" in str(e.value) or "(2,2)" in str(e.value)


def test_empty_msystem():
    doc = {"ring": {"zmod": 4}, "subsets": {"S": {"kind": "msystem", "elements": []}}}
    with pytest.raises((ValidationError, ParseError)):
        parse_document(doc)


def test_schema_errors():
    with pytest.raises(ParseError):
        parse_document({"ring": {"zmod": "twelve"}})
    with pytest.raises(ParseError):
        parse_document({"ring": {"hyperbolic": 3}})
    with pytest.raises(ParseError):
        parse_document({"subsets": {}})


def test_not_a_submodule():
    doc = dict(Z12_DOC, subsets={"P": {"kind": "submodule", "elements": [0, 5]}})
    with pytest.raises(ValidationError):
        parse_document(doc)


def test_unknown_name():
    with pytest.raises(ParseError):
        parse_document(Z12_DOC).get("Q")


def test_parse_file(tmp_path):
    p = tmp_path / "z12.json"
    p.write_text(json.dumps(Z12_DOC))
    assert parse_instance(p).get("P").elements() == [0, 6]
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        parse_instance(bad)
    with pytest.raises(ParseError):
        parse_instance(tmp_path / "missing.json")


def _same_module(a, b):
    return (np.array_equal(a.add, b.add) and np.array_equal(a.act, b.act)
            and a.ring.same_tables(b.ring))


def test_round_trip_corpus_constructors():
    c = Corpus()
    for r in c.rings:
        assert build_ring(dump_ring(r)).same_tables(r)
        assert build_ring(dump_ring(r, tables=True)).same_tables(r)
    for r, m, _ in c.cases():
        if m.order > 36:
            continue
        assert _same_module(build_module(dump_module(m)), m)
        assert _same_module(build_module(dump_module(m, tables=True)), m)


def test_round_trip_document(tmp_path, z12, m12):
    subsets = {"S": make_msystem(z12, [4]), "P": Submodule(m12, 0b1000001)}
    doc = dump_instance(z12, m12, subsets)
    inst = parse_document(json.loads(json.dumps(doc)))
    assert inst.get("P").bits == subsets["P"].bits
    assert inst.get("S").bits == subsets["S"].bits
    assert _same_module(inst.module, m12)


def test_direct_sum_and_quotient_specs(m12):
    d = direct_sum(m12, quotient_module(m12, [0, 6]))
    assert _same_module(build_module(dump_module(d)), d)
