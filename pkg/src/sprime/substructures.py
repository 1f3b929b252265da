"""Subsets of rings and modules: generation, colons, products, enumeration.

Subsets are bitmasks over element indices.  Closures run a fixpoint over the
bitset: absorb under the ring action first, then close under addition.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import config
from .bits import full, indices_of, lowest, mask_of, order_key, rows_from_bool, to_bool, from_bool
from .errors import CapExceeded, NotMSystemError, StructureError
from .structures import FiniteRightModule, FiniteRing, regular_module
from .verdict import Verdict


@dataclass(frozen=True)
class Subset:
    """A subset of the carrier of ``owner`` (a ring or a module)."""

    owner: object
    bits: int

    def __contains__(self, i):
        return (self.bits >> int(i)) & 1 == 1

    def __iter__(self):
        return iter(indices_of(self.bits))

    def __len__(self):
        return bin(self.bits).count("1")

    def elements(self) -> list[int]:
        return indices_of(self.bits)

    def issubset(self, other) -> bool:
        other_bits = other.bits if isinstance(other, Subset) else other
        return self.bits & ~other_bits == 0

    @property
    def is_proper(self) -> bool:
        return self.bits != full(self.owner.order)

    def sort_key(self):
        return order_key(self.bits, self.owner.order)

    def __repr__(self):
        return f"{type(self).__name__}({self.elements()})"


@dataclass(frozen=True, repr=False)
class Ideal(Subset):
    kind: str = "two-sided"


@dataclass(frozen=True, repr=False)
class Submodule(Subset):
    pass


@dataclass(frozen=True, repr=False)
class MSystem(Subset):
    pass


def _bits(x) -> int:
    if isinstance(x, Subset):
        return x.bits
    if isinstance(x, int):
        raise TypeError("pass an iterable of element indices or a Subset, not a bare int")
    return mask_of(x)


def _idx(mask: int, n: int) -> np.ndarray:
    return np.nonzero(to_bool(mask, n))[0]


# ---------------------------------------------------------------------------
# closure machinery

def _close(n, add, zero, seed_mask, right=None, left=None) -> int:
    """Smallest subset containing the seed and zero closed under the given
    actions and addition.  ``right[x]`` lists every ``x·r``; ``left[:, x]``
    lists every ``r·x``."""
    g = to_bool(seed_mask, n)
    g[zero] = True
    while True:
        new = g.copy()
        idx = np.nonzero(g)[0]
        if right is not None:
            new[right[idx].ravel()] = True
        if left is not None:
            new[left[:, idx].ravel()] = True
        idx = np.nonzero(new)[0]
        new[add[np.ix_(idx, idx)].ravel()] = True
        if np.array_equal(new, g):
            return from_bool(g)
        g = new


def _join(n, add, a: int, b: int) -> int:
    """Sum of two additive subgroups: ``{x + y}``."""
    ia, ib = _idx(a, n), _idx(b, n)
    out = np.zeros(n, dtype=bool)
    out[add[np.ix_(ia, ib)].ravel()] = True
    return from_bool(out)


def additive_closure(structure, mask: int) -> int:
    return _close(structure.order, structure.add, structure.zero, mask)


def is_two_sided_ideal_mask(r: FiniteRing, bits: int) -> bool:
    return bits >> r.zero & 1 == 1 and _close(
        r.order, r.add, r.zero, bits, right=r.mul, left=r.mul) == bits


def is_right_ideal_mask(r: FiniteRing, bits: int) -> bool:
    return bits >> r.zero & 1 == 1 and _close(r.order, r.add, r.zero, bits, right=r.mul) == bits


def is_submodule_mask(m: FiniteRightModule, bits: int) -> bool:
    return bits >> m.zero & 1 == 1 and _close(m.order, m.add, m.zero, bits, right=m.act) == bits


# ---------------------------------------------------------------------------
# generation

def generate_two_sided_ideal(r: FiniteRing, gens=()) -> Ideal:
    return Ideal(r, _close(r.order, r.add, r.zero, _bits(gens), right=r.mul, left=r.mul))


def principal_masks(r: FiniteRing) -> list[int]:
    """``[<s> for s in R]`` as bitmasks, computed once per ring."""
    out = r.cache.get("principal")
    if out is None:
        out = [_close(r.order, r.add, r.zero, 1 << s, right=r.mul, left=r.mul)
               for s in range(r.order)]
        r.cache["principal"] = out
    return out


def principal_bool(r: FiniteRing) -> np.ndarray:
    """Boolean matrix whose row ``s`` marks the elements of ``<s>``."""
    out = r.cache.get("principal_bool")
    if out is None:
        out = np.array([to_bool(m, r.order) for m in principal_masks(r)])
        out.setflags(write=False)
        r.cache["principal_bool"] = out
    return out


def principal_ideal(r: FiniteRing, s: int) -> Ideal:
    """The two-sided ideal ``<s> = RsR`` (finite sums of ``x·s·y``)."""
    return Ideal(r, principal_masks(r)[s])


def generate_right_ideal(r: FiniteRing, gens=()) -> Ideal:
    return Ideal(r, _close(r.order, r.add, r.zero, _bits(gens), right=r.mul), kind="right")


def generate_submodule(m: FiniteRightModule, gens=()) -> Submodule:
    return Submodule(m, _close(m.order, m.add, m.zero, _bits(gens), right=m.act))


def cyclic_masks(m: FiniteRightModule) -> list[int]:
    """``[xR for x in M]`` as bitmasks."""
    out = m.cache.get("cyclic")
    if out is None:
        out = [_close(m.order, m.add, m.zero, 1 << x, right=m.act) for x in range(m.order)]
        m.cache["cyclic"] = out
    return out


# ---------------------------------------------------------------------------
# colons and products

def colon_ring_mask(m: FiniteRightModule, p_bits: int) -> int:
    in_p = to_bool(p_bits, m.order)
    return from_bool(in_p[m.act].all(axis=0))


def colon_ring(p: Submodule, m: FiniteRightModule = None) -> Ideal:
    """``(P :_R M) = {r : M·r ⊆ P}``.  May be the whole ring; check ``is_proper``."""
    m = p.owner if m is None else m
    q = Ideal(m.ring, colon_ring_mask(m, p.bits))
    if __debug__ and not is_two_sided_ideal_mask(m.ring, q.bits):
        raise StructureError("colon ideal is not two-sided")
    return q


def colon_module(p: Submodule, j) -> Submodule:
    """``(P :_M J) = {m : m·J ⊆ P}``."""
    m = p.owner
    jidx = _idx(_bits(j), m.ring.order)
    in_p = to_bool(p.bits, m.order)
    bits = from_bool(in_p[m.act[:, jidx]].all(axis=1))
    if __debug__ and not is_submodule_mask(m, bits):
        raise StructureError("colon submodule is not a submodule")
    return Submodule(m, bits)


def ideal_product(a: Ideal, b: Ideal) -> Ideal:
    """``AB``: additive closure of all products ``x·y``."""
    r = a.owner
    vals = r.mul[np.ix_(_idx(a.bits, r.order), _idx(b.bits, r.order))].ravel()
    bits = additive_closure(r, mask_of(np.unique(vals)))
    kind = "two-sided" if a.kind == b.kind == "two-sided" else "right"
    if kind == "two-sided" and not is_two_sided_ideal_mask(r, bits):
        raise StructureError("product of ideals is not an ideal")
    return Ideal(r, bits, kind=kind)


def submodule_ideal_product_mask(m: FiniteRightModule, n_bits: int, j_bits: int) -> int:
    vals = m.act[np.ix_(_idx(n_bits, m.order), _idx(j_bits, m.ring.order))].ravel()
    return additive_closure(m, mask_of(np.unique(vals)))


def submodule_ideal_product(n: Submodule, j: Ideal) -> Submodule:
    """``NJ``: additive closure of all ``x·a`` with ``x`` in N and ``a`` in J."""
    m = n.owner
    bits = submodule_ideal_product_mask(m, n.bits, j.bits)
    if not is_submodule_mask(m, bits):
        raise StructureError("NJ is not a submodule (is J a right ideal?)")
    return Submodule(m, bits)


def annihilator(m: FiniteRightModule) -> Ideal:
    return colon_ring(Submodule(m, 1 << m.zero), m)


# ---------------------------------------------------------------------------
# enumeration

def _join_closure(n, add, zero, cyclic):
    cyc = sorted(set(cyclic))
    seen = {1 << zero}
    seen.update(cyc)
    queue = list(seen)
    while queue:
        x = queue.pop()
        for c in cyc:
            if c & ~x == 0:
                continue
            y = _join(n, add, x, c)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen, key=lambda b: order_key(b, n))


def _check_enum_cap(structure):
    if structure.order > config.ENUM_CAP:
        raise CapExceeded(f"order {structure.order} exceeds enumeration cap {config.ENUM_CAP}")


def submodule_masks(m: FiniteRightModule) -> list[int]:
    out = m.cache.get("submodules")
    if out is None:
        _check_enum_cap(m)
        out = _join_closure(m.order, m.add, m.zero, cyclic_masks(m))
        m.cache["submodules"] = out
    return out


def enumerate_submodules(m: FiniteRightModule) -> list[Submodule]:
    return [Submodule(m, b) for b in submodule_masks(m)]


def two_sided_ideal_masks(r: FiniteRing) -> list[int]:
    out = r.cache.get("ideals")
    if out is None:
        _check_enum_cap(r)
        out = _join_closure(r.order, r.add, r.zero, principal_masks(r))
        r.cache["ideals"] = out
    return out


def enumerate_two_sided_ideals(r: FiniteRing) -> list[Ideal]:
    return [Ideal(r, b) for b in two_sided_ideal_masks(r)]


def enumerate_right_ideals(r: FiniteRing) -> list[Ideal]:
    return [Ideal(r, b, kind="right") for b in submodule_masks(regular_module(r))]


# ---------------------------------------------------------------------------
# m-systems

def xry_masks(r: FiniteRing) -> list[list[int]]:
    """``out[x][y]`` is the bitmask of ``xRy = {x·t·y : t in R}``."""
    out = r.cache.get("xry")
    if out is None:
        n = r.order
        rows = np.broadcast_to(np.arange(n)[:, None], (n, n))
        out = []
        for x in range(n):
            vals = r.mul[r.mul[x, :], :].T        # [y, t] -> x t y
            hit = np.zeros((n, n), dtype=bool)
            hit[rows, vals] = True
            out.append(rows_from_bool(hit))
        r.cache["xry"] = out
    return out


def _msystem_failure(r, bits):
    xry = xry_masks(r)
    elems = indices_of(bits)
    for a in elems:
        for b in elems:
            if xry[a][b] & bits == 0:
                return a, b
    return None


def is_msystem(r: FiniteRing, s) -> Verdict:
    """Every pair ``a, b`` in S has some ``t`` with ``a·t·b`` in S."""
    bits = _bits(s)
    if bits == 0:
        raise NotMSystemError("the empty set is not accepted as an m-system")
    bad = _msystem_failure(r, bits)
    if bad is not None:
        return Verdict(False, counterexample={"a": bad[0], "b": bad[1]})
    mults = []
    elems = indices_of(bits)
    for a in elems:
        for b in elems:
            t = next(t for t in range(r.order) if (bits >> int(r.mul[r.mul[a, t], b])) & 1)
            mults.append([a, b, t])
    return Verdict(True, witness={"multipliers": mults})


def make_msystem(r: FiniteRing, elements) -> MSystem:
    """Validated :class:`MSystem`; raises :class:`NotMSystemError` otherwise."""
    bits = _bits(elements)
    if bits == 0:
        raise NotMSystemError("the empty set is not accepted as an m-system")
    bad = _msystem_failure(r, bits)
    if bad is not None:
        raise NotMSystemError(f"not an m-system: fails at pair {bad}")
    return MSystem(r, bits)


def enumerate_msystems(r: FiniteRing, max_size: int = 3) -> list[MSystem]:
    """All m-systems with at most ``max_size`` elements, by size then elements."""
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    xry = xry_masks(r)
    out = []
    for size in range(1, max_size + 1):
        for combo in combinations(range(r.order), size):
            bits = mask_of(combo)
            if all(xry[a][b] & bits for a in combo for b in combo):
                out.append(MSystem(r, bits))
    return out


def product_msystem(ring, s1: MSystem, s2: MSystem) -> MSystem:
    """``S1 x S2`` inside ``ring = R1 x R2`` (not validated here)."""
    n2 = ring.factors[1].order
    return MSystem(ring, mask_of(a * n2 + b for a in s1 for b in s2))


def product_subset_mask(n2: int, a_bits: int, b_bits: int) -> int:
    bs = indices_of(b_bits)
    return mask_of(a * n2 + b for a in indices_of(a_bits) for b in bs)
