import numpy as np
import pytest

from sprime import config
from sprime.errors import CapExceeded, StructureError
from sprime.structures import (FiniteRightModule, FiniteRing, direct_sum, make_matrix_ring,
                               make_upper_triangular, make_zmod, pair, product_module,
                               product_ring, quotient_module, quotient_ring, regular_module,
                               unpair, validate_module, validate_ring, zero_module)


@pytest.mark.parametrize("n", [1, 2, 5, 12, 24])
def test_zmod_valid(n):
    r = make_zmod(n)
    assert r.order == n
    assert validate_ring(r).holds
    assert r.is_commutative()


def test_zmod_units():
    assert make_zmod(12).units() == [1, 5, 7, 11]


def test_matrix_ring_shape(m2z2):
    assert m2z2.order == 16
    assert not m2z2.is_commutative()
    assert m2z2.render(m2z2.one) == "[1,0;0,1]"
    assert validate_ring(m2z2).holds


def test_matrix_identity_index_mz4():
    r = make_matrix_ring(make_zmod(4), 2)
    # row-major digits, first entry most significant: 1*64 + 0 + 0 + 1
    assert r.one == 65
    assert r.render(65) == "[1,0;0,1]"


def test_upper_triangular(t2z2, t2z4):
    assert t2z2.order == 8
    assert t2z4.order == 64
    assert not t2z2.is_commutative()
    # strictly upper matrices square to zero
    e12 = next(i for i in range(8) if t2z2.render(i) == "[0,1;0,0]")
    assert t2z2.mul[e12, e12] == t2z2.zero


def test_product_ring_indices():
    r = product_ring(make_zmod(2), make_zmod(3))
    assert r.order == 6
    x = pair(r, 1, 2)
    assert unpair(r, x) == (1, 2)
    assert r.mul[x, x] == pair(r, 1, 1)
    assert r.one == pair(r, 1, 1)


def test_quotient_ring():
    z12 = make_zmod(12)
    q = quotient_ring(z12, [0, 4, 8])
    assert q.order == 4
    assert validate_ring(q).holds
    assert q.projection[5] == q.projection[1]


def test_quotient_ring_rejects_improper_and_non_ideals():
    z4 = make_zmod(4)
    with pytest.raises(StructureError):
        quotient_ring(z4, range(4))
    with pytest.raises(StructureError):
        quotient_ring(z4, [0, 1])


def test_quotient_ring_needs_two_sided(m2z2):
    # first-row matrices form a right ideal but not a left ideal
    row = [i for i in range(16) if m2z2.render(i).endswith(";0,0]")]
    with pytest.raises(StructureError):
        quotient_ring(m2z2, row)


def _ring_triple_fails(add, mul, ce):
    a, b, c = ce["a"], ce["b"], ce["c"]
    checks = {
        "multiplicative associativity": mul[mul[a][b]][c] == mul[a][mul[b][c]],
        "left distributivity": mul[a][add[b][c]] == add[mul[a][b]][mul[a][c]],
        "right distributivity": mul[add[a][b]][c] == add[mul[a][c]][mul[b][c]],
    }
    return not checks[ce["axiom"]]


def test_corrupted_ring_table_located():
    r = make_zmod(5)
    mul = r.mul.astype(int).copy()
    mul[2, 3] = mul[3, 2] = 0
    with pytest.raises(StructureError):
        FiniteRing(r.add, mul)
    v = validate_ring(FiniteRing(r.add, mul, validate=False))
    assert not v.holds
    assert _ring_triple_fails(r.add.tolist(), mul.tolist(), v.counterexample)


def test_corrupted_add_reports_associativity_or_identity():
    add = np.array([[0, 1, 2], [1, 2, 0], [2, 0, 0]])
    v = validate_ring(FiniteRing(add, np.zeros((3, 3), int), one=0, validate=False))
    assert not v.holds


def test_out_of_range_entries_rejected():
    with pytest.raises(StructureError):
        FiniteRing([[0, 1], [1, 2]], [[0, 0], [0, 1]])
    with pytest.raises(StructureError):
        FiniteRing([[0, 1], [1, -1]], [[0, 0], [0, 1]])


def test_tables_read_only():
    r = make_zmod(3)
    with pytest.raises(ValueError):
        r.add[0, 0] = 1


def test_regular_module_cached(z12):
    assert regular_module(z12) is regular_module(z12)
    assert validate_module(regular_module(z12)).holds


def test_zero_module():
    z = zero_module(make_zmod(6))
    assert z.order == 1
    assert validate_module(z).holds


def test_quotient_module(m12):
    q = quotient_module(m12, [0, 6])
    assert q.order == 6
    assert validate_module(q).holds
    assert q.projection[7] == q.projection[1]


def test_quotient_module_accepts_bitmask(m12):
    assert quotient_module(m12, 0b1000001).order == 6


def test_direct_sum_and_product():
    z6 = make_zmod(6)
    m = regular_module(z6)
    d = direct_sum(m, quotient_module(m, [0, 2, 4]))
    assert d.order == 12 and validate_module(d).holds
    r = product_ring(make_zmod(2), make_zmod(3))
    p = product_module(regular_module(r.factors[0]), regular_module(r.factors[1]), ring=r)
    assert p.order == 6 and validate_module(p).holds


def test_product_module_rejects_foreign_ring():
    r = product_ring(make_zmod(2), make_zmod(3))
    with pytest.raises(StructureError):
        product_module(regular_module(make_zmod(2)), regular_module(make_zmod(3)), ring=r)


def test_corrupted_module_located(z12):
    m = regular_module(z12)
    act = m.act.astype(int).copy()
    act[5, 7] = (act[5, 7] + 1) % 12
    v = validate_module(FiniteRightModule(z12, m.add, act, validate=False))
    assert not v.holds
    assert v.counterexample["axiom"]
    with pytest.raises(StructureError):
        FiniteRightModule(z12, m.add, act)


def test_ring_cap(monkeypatch):
    monkeypatch.setattr(config, "RING_ORDER_CAP", 10)
    with pytest.raises(CapExceeded):
        make_zmod(11)
