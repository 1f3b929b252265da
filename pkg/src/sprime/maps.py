"""Module homomorphisms as explicit tables, with images, preimages and kernels."""

from dataclasses import dataclass

import numpy as np

from .bits import from_bool, indices_of, mask_of, to_bool
from .errors import StructureError
from .structures import FiniteRightModule
from .substructures import Submodule, is_submodule_mask
from .verdict import Verdict


@dataclass(frozen=True)
class ModuleHom:
    source: FiniteRightModule
    target: FiniteRightModule
    table: tuple

    def __post_init__(self):
        if self.source.ring is not self.target.ring and not self.source.ring.same_tables(self.target.ring):
            raise StructureError("homomorphism between modules over different rings")
        if len(self.table) != self.source.order:
            raise StructureError("map table must cover the source carrier")

    def __call__(self, x):
        return self.table[x]


def validate_hom(f: ModuleHom) -> Verdict:
    src, tgt = f.source, f.target
    t = np.asarray(f.table)
    if t.min() < 0 or t.max() >= tgt.order:
        return Verdict(False, counterexample={"axiom": "image out of range"})
    if t[src.zero] != tgt.zero:
        return Verdict(False, counterexample={"axiom": "f(0) = 0"})
    bad = t[src.add] != tgt.add[t[:, None], t[None, :]]
    if bad.any():
        x, y = (int(v) for v in np.argwhere(bad)[0])
        return Verdict(False, counterexample={"axiom": "additivity", "m": x, "n": y})
    bad = t[src.act] != tgt.act[t, :]
    if bad.any():
        x, r = (int(v) for v in np.argwhere(bad)[0])
        return Verdict(False, counterexample={"axiom": "R-linearity", "m": x, "r": r})
    return Verdict(True)


def kernel(f: ModuleHom) -> Submodule:
    return Submodule(f.source, mask_of(i for i, v in enumerate(f.table) if v == f.target.zero))


def is_epimorphism(f: ModuleHom) -> bool:
    return len(set(f.table)) == f.target.order


def image_submodule(f: ModuleHom, p: Submodule) -> Submodule:
    """``f(P)``.  Always a submodule for a homomorphism; checked anyway."""
    bits = mask_of(f.table[x] for x in p)
    if not is_submodule_mask(f.target, bits):
        raise StructureError("image is not a submodule")
    return Submodule(f.target, bits)


def preimage_submodule(f: ModuleHom, p: Submodule) -> Submodule:
    in_p = to_bool(p.bits, f.target.order)
    return Submodule(f.source, from_bool(in_p[np.asarray(f.table)]))


def identity_map(m: FiniteRightModule) -> ModuleHom:
    return ModuleHom(m, m, tuple(range(m.order)))


def zero_map(src: FiniteRightModule, tgt: FiniteRightModule) -> ModuleHom:
    return ModuleHom(src, tgt, (tgt.zero,) * src.order)


def canonical_projection(m: FiniteRightModule, l: Submodule) -> ModuleHom:
    """``m ↦ m + L`` onto the cached quotient module ``M/L``."""
    q = quotient_of(m, l.bits)
    f = ModuleHom(m, q, q.projection)
    if __debug__ and not validate_hom(f):
        raise StructureError("projection is not a homomorphism")
    return f


def quotient_of(m: FiniteRightModule, l_bits: int) -> FiniteRightModule:
    from .structures import quotient_module
    cache = m.cache.setdefault("quotients", {})
    q = cache.get(l_bits)
    if q is None:
        q = cache[l_bits] = quotient_module(m, l_bits)
    return q


def submodule_as_module(n: Submodule) -> FiniteRightModule:
    """Materialise N with re-indexed carrier; ``.embedding[i]`` is the
    element of the ambient module behind index ``i``."""
    m = n.owner
    cache = m.cache.setdefault("as_module", {})
    out = cache.get(n.bits)
    if out is not None:
        return out
    elems = indices_of(n.bits)
    e = np.array(elems)
    where = np.full(m.order, -1, dtype=np.int64)
    where[e] = np.arange(len(elems))
    add = where[m.add[np.ix_(e, e)]]
    act = where[m.act[e, :]]
    if (add < 0).any() or (act < 0).any():
        raise StructureError("not a submodule")
    out = FiniteRightModule(m.ring, add, act, zero=int(where[m.zero]),
                            label=f"N<{m.label}", names=[m.render(x) for x in elems])
    out.embedding = tuple(elems)
    cache[n.bits] = out
    return out


def inclusion(n: Submodule, m: FiniteRightModule = None) -> ModuleHom:
    src = submodule_as_module(n)
    f = ModuleHom(src, n.owner if m is None else m, src.embedding)
    if __debug__ and not validate_hom(f):
        raise StructureError("inclusion is not a homomorphism")
    return f
