"""Finite unital rings and finite right modules given by Cayley tables.

Elements are dense indices ``0..order-1``; every operation is a table lookup.
Constructors build the tables with numpy and validate them eagerly.
"""

from itertools import product as cartesian

import numpy as np

from . import config
from .bits import indices_of, mask_of
from .errors import CapExceeded, StructureError
from .verdict import Verdict


def _dtype(n):
    return np.min_scalar_type(max(n - 1, 0))


def _freeze(table, n):
    arr = np.array(table, dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise StructureError(f"table entries must lie in 0..{n - 1}")
    arr = arr.astype(_dtype(n))
    arr.setflags(write=False)
    return arr


class FiniteRing:
    """Associative ring with identity on ``{0..order-1}``.

    ``add`` and ``mul`` are ``order x order`` tables; ``neg`` is derived from
    ``add`` when omitted.  ``names`` gives a display string per element.
    """

    def __init__(self, add, mul, zero=0, one=1, neg=None, label="R", names=None,
                 validate=True):
        add = np.asarray(add)
        n = add.shape[0]
        if n < 1:
            raise StructureError("a ring needs at least one element")
        if n > config.RING_ORDER_CAP:
            raise CapExceeded(f"ring order {n} exceeds cap {config.RING_ORDER_CAP}")
        self.order = n
        self.add = _freeze(add, n)
        self.mul = _freeze(mul, n)
        self.zero = int(zero)
        self.one = int(one)
        if neg is None:
            neg = _negation(self.add, self.zero)
        self.neg = _freeze(neg, n)
        self.label = label
        self.names = tuple(names) if names is not None else tuple(str(i) for i in range(n))
        # derived data (principal ideals, enumerations, probes) lives here
        self.cache = {}
        if validate:
            v = validate_ring(self)
            if not v.holds:
                raise StructureError(f"{label}: {v.counterexample}")

    def __repr__(self):
        return f"<FiniteRing {self.label} order={self.order}>"

    def render(self, i):
        return self.names[i]

    @property
    def elements(self):
        return range(self.order)

    def is_commutative(self):
        return bool(np.array_equal(self.mul, self.mul.T))

    def units(self) -> list[int]:
        one = self.one
        left = self.mul == one
        both = left & left.T
        return [int(u) for u in np.nonzero(both.any(axis=1))[0]]

    def same_tables(self, other) -> bool:
        return (self.order == other.order and self.zero == other.zero
                and self.one == other.one
                and np.array_equal(self.add, other.add)
                and np.array_equal(self.mul, other.mul))


class FiniteRightModule:
    """Right module over a :class:`FiniteRing`; ``act[m, r]`` is ``m·r``."""

    def __init__(self, ring, add, act, zero=0, neg=None, label="M", names=None,
                 validate=True):
        add = np.asarray(add)
        n = add.shape[0]
        if n < 1:
            raise StructureError("a module needs at least one element")
        if n > config.MODULE_ORDER_CAP:
            raise CapExceeded(f"module order {n} exceeds cap {config.MODULE_ORDER_CAP}")
        self.ring = ring
        self.order = n
        self.add = _freeze(add, n)
        self.act = _freeze(act, n)
        self.zero = int(zero)
        if neg is None:
            neg = _negation(self.add, self.zero)
        self.neg = _freeze(neg, n)
        self.label = label
        self.names = tuple(names) if names is not None else tuple(str(i) for i in range(n))
        self.cache = {}
        if validate:
            v = validate_module(self)
            if not v.holds:
                raise StructureError(f"{label}: {v.counterexample}")

    def __repr__(self):
        return f"<FiniteRightModule {self.label} order={self.order} over {self.ring.label}>"

    def render(self, i):
        return self.names[i]

    @property
    def elements(self):
        return range(self.order)

    def same_tables(self, other) -> bool:
        return (self.order == other.order and self.zero == other.zero
                and self.ring.same_tables(other.ring)
                and np.array_equal(self.add, other.add)
                and np.array_equal(self.act, other.act))


def _negation(add, zero):
    n = add.shape[0]
    neg = np.full(n, -1, dtype=np.int64)
    rows, cols = np.nonzero(add == zero)
    neg[rows] = cols
    if (neg < 0).any():
        bad = int(np.nonzero(neg < 0)[0][0])
        raise StructureError(f"element {bad} has no additive inverse")
    return neg


# ---------------------------------------------------------------------------
# validation

def _first(mask_array):
    idx = np.argwhere(mask_array)
    return tuple(int(v) for v in idx[0])


def _check_tables(add, zero, neg, n):
    if add.shape != (n, n):
        return Verdict(False, counterexample={"axiom": "add table shape"})
    if add.min() < 0 or add.max() >= n or not (0 <= zero < n):
        return Verdict(False, counterexample={"axiom": "index out of range"})
    return None


def _check_abelian_group(add, zero, neg, n):
    ar = np.arange(n)
    bad = add[zero, :] != ar
    if bad.any():
        return Verdict(False, counterexample={"axiom": "additive identity",
                                              "a": int(np.argmax(bad))})
    bad = add[ar, neg] != zero
    if bad.any():
        return Verdict(False, counterexample={"axiom": "additive inverse",
                                              "a": int(np.argmax(bad))})
    bad = add != add.T
    if bad.any():
        a, b = _first(bad)
        return Verdict(False, counterexample={"axiom": "additive commutativity", "a": a, "b": b})
    for a in range(n):
        lhs = add[add[a, :], :]          # (a+b)+c over (b, c)
        rhs = add[a, add]                # a+(b+c)
        bad = lhs != rhs
        if bad.any():
            b, c = _first(bad)
            return Verdict(False, counterexample={"axiom": "additive associativity",
                                                  "a": a, "b": b, "c": c})
    return None


def validate_ring(r) -> Verdict:
    """Exhaustive axiom check; reports the first failing triple."""
    n = r.order
    add, mul = r.add, r.mul
    v = _check_tables(add, r.zero, r.neg, n)
    if v is not None:
        return v
    if mul.shape != (n, n) or mul.max() >= n or not (0 <= r.one < n):
        return Verdict(False, counterexample={"axiom": "mul table shape/range"})
    v = _check_abelian_group(add, r.zero, r.neg, n)
    if v is not None:
        return v
    ar = np.arange(n)
    bad = (mul[r.one, :] != ar) | (mul[:, r.one] != ar)
    if bad.any():
        return Verdict(False, counterexample={"axiom": "multiplicative identity",
                                              "a": int(np.argmax(bad))})
    for a in range(n):
        lhs = mul[mul[a, :], :]          # (ab)c
        rhs = mul[a, mul]                # a(bc)
        bad = lhs != rhs
        if bad.any():
            b, c = _first(bad)
            return Verdict(False, counterexample={"axiom": "multiplicative associativity",
                                                  "a": a, "b": b, "c": c})
        # a(b+c) = ab+ac
        lhs = mul[a, add]
        rhs = add[mul[a, :][:, None], mul[a, :][None, :]]
        bad = lhs != rhs
        if bad.any():
            b, c = _first(bad)
            return Verdict(False, counterexample={"axiom": "left distributivity",
                                                  "a": a, "b": b, "c": c})
        # (b+c)a = ba+ca
        lhs = mul[add, a]
        rhs = add[mul[:, a][:, None], mul[:, a][None, :]]
        bad = lhs != rhs
        if bad.any():
            b, c = _first(bad)
            return Verdict(False, counterexample={"axiom": "right distributivity",
                                                  "a": b, "b": c, "c": a})
    return Verdict(True)


def validate_module(m) -> Verdict:
    """Exhaustive check of the abelian group and right-action axioms."""
    n = m.order
    R = m.ring
    v = _check_tables(m.add, m.zero, m.neg, n)
    if v is not None:
        return v
    act = m.act
    if act.shape != (n, R.order) or act.max() >= n:
        return Verdict(False, counterexample={"axiom": "act table shape/range"})
    v = _check_abelian_group(m.add, m.zero, m.neg, n)
    if v is not None:
        return v
    ar = np.arange(n)
    bad = act[:, R.one] != ar
    if bad.any():
        return Verdict(False, counterexample={"axiom": "m·1 = m", "m": int(np.argmax(bad))})
    add = m.add
    for x in range(n):
        # (x r) r' = x (r r')
        lhs = act[act[x, :], :]
        rhs = act[x, R.mul]
        bad = lhs != rhs
        if bad.any():
            r, s = _first(bad)
            return Verdict(False, counterexample={"axiom": "action associativity",
                                                  "m": x, "r": r, "s": s})
        # x (r + r') = x r + x r'
        lhs = act[x, R.add]
        rhs = add[act[x, :][:, None], act[x, :][None, :]]
        bad = lhs != rhs
        if bad.any():
            r, s = _first(bad)
            return Verdict(False, counterexample={"axiom": "distributivity over ring addition",
                                                  "m": x, "r": r, "s": s})
        # (x + y) r = x r + y r
        lhs = act[add[x, :], :]
        rhs = add[act[x, :][None, :], act]
        bad = lhs != rhs
        if bad.any():
            y, r = _first(bad)
            return Verdict(False, counterexample={"axiom": "distributivity over module addition",
                                                  "m": x, "n": y, "r": r})
    return Verdict(True)


# ---------------------------------------------------------------------------
# ring constructors

def make_zmod(n: int) -> FiniteRing:
    if n < 1:
        raise ValueError("make_zmod needs n >= 1")
    if n > config.RING_ORDER_CAP:
        raise CapExceeded(f"Z_{n} exceeds ring cap {config.RING_ORDER_CAP}")
    ar = np.arange(n)
    r = FiniteRing((ar[:, None] + ar[None, :]) % n, (ar[:, None] * ar[None, :]) % n,
                   zero=0, one=1 % n, label=f"Z_{n}")
    r.cache["spec"] = {"zmod": n}
    return r


def _matrix_like(base, k, positions, label, spec):
    q = base.order
    npos = len(positions)
    if q ** npos > config.RING_ORDER_CAP:
        raise CapExceeded(f"{label} has order {q ** npos} > cap {config.RING_ORDER_CAP}")
    N = q ** npos
    # entries[e, p]: digit of element e at position p (first position most significant)
    digits = np.array(list(cartesian(range(q), repeat=npos)), dtype=np.int64).reshape(N, npos)
    weights = q ** np.arange(npos - 1, -1, -1)
    pos_index = {p: j for j, p in enumerate(positions)}
    badd, bmul = base.add.astype(np.int64), base.mul.astype(np.int64)

    add_entries = badd[digits[:, None, :], digits[None, :, :]]
    add = (add_entries * weights).sum(axis=2)

    mul_entries = np.empty((N, N, npos), dtype=np.int64)
    for (i, j), col in pos_index.items():
        acc = np.full((N, N), base.zero, dtype=np.int64)
        for l in range(k):
            if (i, l) in pos_index and (l, j) in pos_index:
                x = digits[:, pos_index[(i, l)]]
                y = digits[:, pos_index[(l, j)]]
                acc = badd[acc, bmul[x[:, None], y[None, :]]]
        mul_entries[:, :, col] = acc
    mul = (mul_entries * weights).sum(axis=2)

    def idx_of(entries):
        return int(sum(e * w for e, w in zip(entries, weights)))

    zero = idx_of([base.zero] * npos)
    one = idx_of([base.one if i == j else base.zero for (i, j) in positions])
    names = []
    for e in range(N):
        grid = [[base.zero] * k for _ in range(k)]
        for (i, j), col in pos_index.items():
            grid[i][j] = int(digits[e, col])
        names.append("[" + ";".join(",".join(base.render(v) for v in row) for row in grid) + "]")
    r = FiniteRing(add, mul, zero=zero, one=one, label=label, names=names)
    r.cache["spec"] = spec
    r.cache["positions"] = tuple(positions)
    return r


def make_matrix_ring(base: FiniteRing, k: int) -> FiniteRing:
    """Full ``k x k`` matrices over ``base``; row-major digit indexing."""
    if k < 1:
        raise ValueError("k must be >= 1")
    positions = [(i, j) for i in range(k) for j in range(k)]
    spec = {"matrix": {"base": ring_spec(base), "k": k}}
    return _matrix_like(base, k, positions, f"M_{k}({base.label})", spec)


def make_upper_triangular(base: FiniteRing, k: int) -> FiniteRing:
    if k < 1:
        raise ValueError("k must be >= 1")
    positions = [(i, j) for i in range(k) for j in range(k) if i <= j]
    spec = {"upper_triangular": {"base": ring_spec(base), "k": k}}
    return _matrix_like(base, k, positions, f"T_{k}({base.label})", spec)


def product_ring(r1: FiniteRing, r2: FiniteRing) -> FiniteRing:
    """Componentwise ring ``r1 x r2``; element ``(a, b)`` has index ``a*|r2| + b``."""
    n1, n2 = r1.order, r2.order
    if n1 * n2 > config.RING_ORDER_CAP:
        raise CapExceeded(f"product order {n1 * n2} exceeds cap {config.RING_ORDER_CAP}")
    a = np.repeat(np.arange(n1), n2)
    b = np.tile(np.arange(n2), n1)
    add = r1.add[a[:, None], a[None, :]].astype(np.int64) * n2 + r2.add[b[:, None], b[None, :]]
    mul = r1.mul[a[:, None], a[None, :]].astype(np.int64) * n2 + r2.mul[b[:, None], b[None, :]]
    names = [f"({r1.render(int(x))},{r2.render(int(y))})" for x, y in zip(a, b)]
    r = FiniteRing(add, mul, zero=r1.zero * n2 + r2.zero, one=r1.one * n2 + r2.one,
                   label=f"{r1.label}x{r2.label}", names=names)
    r.factors = (r1, r2)
    r.cache["spec"] = {"product": [ring_spec(r1), ring_spec(r2)]}
    return r


def pair(r, a, b):
    """Index of ``(a, b)`` in a product ring or product module."""
    return a * r.factors[1].order + b


def unpair(r, x):
    return divmod(x, r.factors[1].order)


def _cosets(add, sub_elems, n):
    rep_of = np.full(n, -1, dtype=np.int64)
    reps = []
    for x in range(n):
        if rep_of[x] >= 0:
            continue
        coset = add[x, sub_elems]
        rep_of[coset] = len(reps)
        reps.append(x)
    return reps, rep_of


def quotient_ring(r: FiniteRing, ideal) -> FiniteRing:
    """Ring of cosets ``r/ideal``; ``.projection`` maps elements to cosets."""
    from .substructures import is_two_sided_ideal_mask
    bits = ideal.bits if hasattr(ideal, "bits") else mask_of(ideal)
    if not is_two_sided_ideal_mask(r, bits):
        raise StructureError("quotient_ring needs a two-sided ideal")
    if bits == (1 << r.order) - 1:
        raise StructureError("improper ideal: quotient by the whole ring is excluded")
    elems = np.array(indices_of(bits))
    reps, proj = _cosets(r.add, elems, r.order)
    reps_a = np.array(reps)
    add = proj[r.add[reps_a[:, None], reps_a[None, :]]]
    mul = proj[r.mul[reps_a[:, None], reps_a[None, :]]]
    names = [r.render(x) + "+I" if len(elems) > 1 else r.render(x) for x in reps]
    q = FiniteRing(add, mul, zero=int(proj[r.zero]), one=int(proj[r.one]),
                   label=f"{r.label}/I", names=names)
    # well-definedness: proj must be a ring homomorphism
    ar = np.arange(r.order)
    if not (np.array_equal(proj[r.add], q.add[proj[ar][:, None], proj[ar][None, :]])
            and np.array_equal(proj[r.mul], q.mul[proj[ar][:, None], proj[ar][None, :]])):
        raise StructureError("coset operations are not well defined")
    q.projection = tuple(int(v) for v in proj)
    q.cache["spec"] = {"quotient": {"ring": ring_spec(r), "ideal": indices_of(bits)}}
    return q


def ring_spec(r):
    """Constructor tree for ``r`` or, failing that, its explicit tables."""
    spec = r.cache.get("spec")
    if spec is not None:
        return spec
    return {"tables": {"add": r.add.tolist(), "mul": r.mul.tolist(),
                       "zero": r.zero, "one": r.one}}


# ---------------------------------------------------------------------------
# module constructors

def regular_module(r: FiniteRing) -> FiniteRightModule:
    """``R_R``; cached on the ring so derived data is shared."""
    m = r.cache.get("regular")
    if m is None:
        m = FiniteRightModule(r, r.add, r.mul, zero=r.zero, neg=r.neg,
                              label=f"{r.label}_{r.label}", names=r.names, validate=False)
        m.cache["spec"] = {"regular": ring_spec(r)}
        r.cache["regular"] = m
    return m


def zero_module(r: FiniteRing) -> FiniteRightModule:
    m = FiniteRightModule(r, [[0]], [[0] * r.order], label="0", names=["0"])
    m.cache["spec"] = {"zero": ring_spec(r)}
    return m


def product_module(m1, m2, ring=None) -> FiniteRightModule:
    """``m1 x m2`` over ``m1.ring x m2.ring`` with componentwise action.

    Pass ``ring`` to reuse an existing product ring built from the same factors.
    """
    if ring is None:
        ring = product_ring(m1.ring, m2.ring)
    r1, r2 = ring.factors
    if not (r1 is m1.ring and r2 is m2.ring):
        raise StructureError("product ring factors must be the module rings")
    n1, n2 = m1.order, m2.order
    if n1 * n2 > config.MODULE_ORDER_CAP:
        raise CapExceeded(f"product module order {n1 * n2} exceeds cap")
    x = np.repeat(np.arange(n1), n2)
    y = np.tile(np.arange(n2), n1)
    ra, rb = np.repeat(np.arange(r1.order), r2.order), np.tile(np.arange(r2.order), r1.order)
    add = m1.add[x[:, None], x[None, :]].astype(np.int64) * n2 + m2.add[y[:, None], y[None, :]]
    act = m1.act[x[:, None], ra[None, :]].astype(np.int64) * n2 + m2.act[y[:, None], rb[None, :]]
    names = [f"({m1.render(int(a))},{m2.render(int(b))})" for a, b in zip(x, y)]
    m = FiniteRightModule(ring, add, act, zero=m1.zero * n2 + m2.zero,
                          label=f"{m1.label}x{m2.label}", names=names)
    m.factors = (m1, m2)
    m.cache["spec"] = {"product": [module_spec(m1), module_spec(m2)]}
    return m


def direct_sum(m1, m2) -> FiniteRightModule:
    """``m1 ⊕ m2`` over their common ring; ``(x, y)`` has index ``x*|m2| + y``."""
    if m1.ring is not m2.ring:
        raise StructureError("direct sum needs modules over the same ring")
    n1, n2 = m1.order, m2.order
    if n1 * n2 > config.MODULE_ORDER_CAP:
        raise CapExceeded(f"direct sum order {n1 * n2} exceeds cap")
    x = np.repeat(np.arange(n1), n2)
    y = np.tile(np.arange(n2), n1)
    add = m1.add[x[:, None], x[None, :]].astype(np.int64) * n2 + m2.add[y[:, None], y[None, :]]
    act = m1.act[x, :].astype(np.int64) * n2 + m2.act[y, :]
    names = [f"({m1.render(int(a))},{m2.render(int(b))})" for a, b in zip(x, y)]
    m = FiniteRightModule(m1.ring, add, act, zero=m1.zero * n2 + m2.zero,
                          label=f"{m1.label}+{m2.label}", names=names)
    m.cache["spec"] = {"direct_sum": [module_spec(m1), module_spec(m2)]}
    return m


def quotient_module(m: FiniteRightModule, sub) -> FiniteRightModule:
    """Module of cosets ``m/sub``; ``.projection`` maps elements to cosets."""
    from .substructures import is_submodule_mask
    if hasattr(sub, "bits"):
        bits = sub.bits
    elif isinstance(sub, int):
        bits = sub
    else:
        bits = mask_of(sub)
    if not is_submodule_mask(m, bits):
        raise StructureError("quotient_module needs a submodule")
    elems = np.array(indices_of(bits))
    reps, proj = _cosets(m.add, elems, m.order)
    reps_a = np.array(reps)
    add = proj[m.add[reps_a[:, None], reps_a[None, :]]]
    act = proj[m.act[reps_a, :]]
    names = [m.render(x) + "+L" if len(elems) > 1 else m.render(x) for x in reps]
    q = FiniteRightModule(m.ring, add, act, zero=int(proj[m.zero]),
                          label=f"{m.label}/L", names=names)
    ar = np.arange(m.order)
    if not (np.array_equal(proj[m.add], q.add[proj[ar][:, None], proj[ar][None, :]])
            and np.array_equal(proj[m.act], q.act[proj[ar], :])):
        raise StructureError("coset action is not well defined")
    q.projection = tuple(int(v) for v in proj)
    q.cache["spec"] = {"quotient": {"module": module_spec(m), "submodule": indices_of(bits)}}
    return q


def module_spec(m):
    spec = m.cache.get("spec")
    if spec is not None:
        return spec
    return {"tables": {"ring": ring_spec(m.ring), "add": m.add.tolist(),
                       "act": m.act.tolist(), "zero": m.zero}}
