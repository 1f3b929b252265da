import pytest

from sprime.bits import mask_of
from sprime.errors import StructureError
from sprime.maps import (ModuleHom, canonical_projection, identity_map, image_submodule,
                         inclusion, is_epimorphism, kernel, preimage_submodule,
                         submodule_as_module, validate_hom, zero_map)
from sprime.structures import make_zmod, regular_module, zero_module
from sprime.substructures import Submodule, enumerate_submodules


def sub(m, *els):
    return Submodule(m, mask_of(els))


def test_identity(m12):
    f = identity_map(m12)
    assert validate_hom(f).holds
    assert kernel(f).elements() == [0]
    assert is_epimorphism(f)
    p = sub(m12, 0, 4, 8)
    assert image_submodule(f, p) == p


def test_projection(m12):
    l = sub(m12, 0, 6)
    f = canonical_projection(m12, l)
    assert kernel(f) == l
    assert is_epimorphism(f)
    img = image_submodule(f, sub(m12, 0, 3, 6, 9))
    assert len(img) == 2   # {0,3,6,9}/{0,6}
    assert preimage_submodule(f, img).elements() == [0, 3, 6, 9]


def test_projection_by_zero_is_bijective(m12):
    f = canonical_projection(m12, sub(m12, 0))
    assert sorted(f.table) == list(range(12))


def test_zero_map(m12):
    z = zero_module(m12.ring)
    f = zero_map(m12, z)
    assert validate_hom(f).holds and is_epimorphism(f)
    g = zero_map(m12, m12)
    assert kernel(g).elements() == list(range(12))
    assert not is_epimorphism(g)


def test_preimage_of_zero_is_kernel(m12):
    f = canonical_projection(m12, sub(m12, 0, 4, 8))
    assert preimage_submodule(f, Submodule(f.target, 1 << f.target.zero)) == kernel(f)


def test_inclusion_preimage_is_intersection(m12):
    n = sub(m12, 0, 2, 4, 6, 8, 10)
    f = inclusion(n)
    assert validate_hom(f).holds
    for p in enumerate_submodules(m12):
        pre = preimage_submodule(f, p)
        assert sorted(f.table[i] for i in pre) == sorted(set(p.elements()) & set(n.elements()))


def test_inclusion_of_zero(m12):
    f = inclusion(sub(m12, 0))
    assert f.source.order == 1
    assert f.table == (0,)


def test_submodule_as_module_cached(m12):
    n = sub(m12, 0, 3, 6, 9)
    a = submodule_as_module(n)
    assert a is submodule_as_module(n)
    assert a.embedding == (0, 3, 6, 9)


def test_invalid_hom_detected(m12):
    bad = ModuleHom(m12, m12, tuple((2 * x + 1) % 12 for x in range(12)))
    v = validate_hom(bad)
    assert not v.holds and v.counterexample["axiom"] == "f(0) = 0"
    square = ModuleHom(m12, m12, tuple((x * x) % 12 for x in range(12)))
    assert not validate_hom(square).holds


def test_ring_mismatch():
    with pytest.raises(StructureError):
        ModuleHom(regular_module(make_zmod(2)), regular_module(make_zmod(3)), (0, 0))
