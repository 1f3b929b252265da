"""Decision procedures for prime / S-prime and related module predicates.

Everything that does not depend on the m-system is computed once per
(module, submodule) pair by :func:`probe` and cached on the module, so a
sweep over many m-systems only pays for cheap mask operations.

Witness modes:

``uniform``
    one ``s`` in S must serve every pair ``(m, a)``.
``per-pair``
    ``s`` may depend on the pair.
"""

from itertools import combinations

import numpy as np

from .bits import from_bool, full, indices_of, lowest, mask_of, rows_from_bool, to_bool
from .errors import ImproperError, NotDisjointError, NotMSystemError
from .structures import FiniteRightModule, FiniteRing, regular_module
from .substructures import (Ideal, MSystem, Submodule, Subset, _join, cyclic_masks,
                            principal_bool, principal_masks, submodule_ideal_product_mask,
                            submodule_masks, two_sided_ideal_masks, _msystem_failure)
from .verdict import Verdict

UNIFORM = "uniform"
PER_PAIR = "per-pair"
MODES = (UNIFORM, PER_PAIR)


class Probe:
    """m-system independent data for a submodule ``P`` of ``M``.

    Attributes (boolean arrays; ``R`` the ring, ``M`` the module):

    ``K[m, x]``   ``m·x ∈ P``
    ``colon[r]``  ``r ∈ (P :_R M)``
    ``C[m, a]``   ``mRa ⊆ P``
    ``A[s, a]``   ``a<s> ⊆ (P :_R M)``
    ``B[s, m]``   ``m<s> ⊆ P``  (so row ``s`` is ``(P :_M <s>)``)
    ``good[s]``   the S-prime implication holds with the single witness ``s``
    """

    def __init__(self, m: FiniteRightModule, bits: int):
        R = m.ring
        self.module = m
        self.bits = bits
        self.in_p = to_bool(bits, m.order)
        act = m.act
        self.K = self.in_p[act]
        self.colon = self.K.all(axis=0)
        self.colon_bits = from_bool(self.colon)
        self.C = self.K[act].all(axis=1)
        ideal = principal_bool(R).astype(np.float32)
        la = self.colon[R.mul]
        self.A = (ideal @ (~la).T.astype(np.float32)) == 0
        self.B = (ideal @ (~self.K).T.astype(np.float32)) == 0
        outside = self.C.astype(np.float32) @ (~self.A).T.astype(np.float32) > 0   # [m, s]
        self.good = ~(outside & ~self.B.T).any(axis=0)
        self.good_bits = from_bool(self.good)
        self._b_rows = None

    @property
    def proper(self):
        return self.bits != full(self.module.order)

    @property
    def b_rows(self) -> list[int]:
        """``(P :_M <s>)`` as a bitmask for every ``s``."""
        if self._b_rows is None:
            self._b_rows = rows_from_bool(self.B)
        return self._b_rows

    def prime_failure(self):
        """First ``(m, a)`` with ``mRa ⊆ P``, ``a ∉ (P:M)``, ``m ∉ P``; else None."""
        bad = (~self.in_p)[:, None] & self.C & ~self.colon[None, :]
        if not bad.any():
            return None
        m, a = np.argwhere(bad)[0]
        return int(m), int(a)

    def is_prime(self) -> bool:
        return self.proper and self.prime_failure() is None

    def uniform_failure(self, s):
        """First pair defeating witness ``s``, or None."""
        bad = self.C & ~self.A[s][None, :] & ~self.B[s][:, None]
        if not bad.any():
            return None
        m, a = np.argwhere(bad)[0]
        return int(m), int(a)

    def per_pair_failure(self, s_idx):
        s_idx = list(s_idx)
        a_any = self.A[s_idx].any(axis=0)
        b_any = self.B[s_idx].any(axis=0)
        bad = self.C & ~a_any[None, :] & ~b_any[:, None]
        if not bad.any():
            return None
        m, a = np.argwhere(bad)[0]
        return int(m), int(a)

    def holds(self, s_bits: int, mode=UNIFORM) -> bool:
        """S-prime test without the guards (no disjointness/properness check)."""
        if mode == UNIFORM:
            return self.good_bits & s_bits != 0
        return self.per_pair_failure(indices_of(s_bits)) is None


def probe(m: FiniteRightModule, p) -> Probe:
    bits = p.bits if isinstance(p, Subset) else p
    cache = m.cache.setdefault("probes", {})
    pr = cache.get(bits)
    if pr is None:
        pr = cache[bits] = Probe(m, bits)
    return pr


def _s_bits(s_set) -> int:
    bits = s_set.bits if isinstance(s_set, Subset) else mask_of(s_set)
    if bits == 0:
        raise NotMSystemError("empty m-system")
    return bits


def _check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _guard(pr: Probe, s_bits: int, what: str):
    if not pr.proper:
        raise ImproperError(f"{what} must be proper")
    hit = pr.colon_bits & s_bits
    if hit:
        raise NotDisjointError(f"S meets the colon ideal at {lowest(hit)}")


def in_spec_s(m: FiniteRightModule, p, s_set, mode=UNIFORM) -> bool:
    """Boolean membership in Spec_S(M): guards count as ``False``."""
    pr = probe(m, p)
    s_bits = _s_bits(s_set)
    return pr.proper and pr.colon_bits & s_bits == 0 and pr.holds(s_bits, mode)


def in_spec(m: FiniteRightModule, p) -> bool:
    return probe(m, p).is_prime()


# ---------------------------------------------------------------------------
# ideals

def _ideal_probe(r: FiniteRing, p) -> Probe:
    pr = probe(regular_module(r), p)
    if pr.colon_bits != pr.bits:
        # for a two-sided ideal of a unital ring (P :_R R) = P
        raise ValueError("expected a two-sided ideal")
    return pr


def is_prime_ideal(r: FiniteRing, p: Ideal) -> Verdict:
    """``aRb ⊆ P`` forces ``a ∈ P`` or ``b ∈ P``."""
    pr = _ideal_probe(r, p)
    if not pr.proper:
        raise ImproperError("prime ideals are proper")
    bad = pr.prime_failure()
    if bad is None:
        return Verdict(True)
    return Verdict(False, counterexample={"a": bad[0], "b": bad[1]})


def _s_prime_verdict(pr, s_bits, mode, names):
    a_name, b_name = names
    if mode == UNIFORM:
        if pr.good_bits & s_bits:
            return Verdict(True, witness={"s": lowest(pr.good_bits & s_bits)})
        fails = []
        for s in indices_of(s_bits):
            x, y = pr.uniform_failure(s)
            fails.append({"s": s, a_name: x, b_name: y})
        return Verdict(False, counterexample={"failures": fails})
    bad = pr.per_pair_failure(indices_of(s_bits))
    if bad is not None:
        return Verdict(False, counterexample={a_name: bad[0], b_name: bad[1]})
    # smallest s per witnessing pair is not summarised; report the uniform one when present
    witness = {"per_pair": True}
    if pr.good_bits & s_bits:
        witness["s"] = lowest(pr.good_bits & s_bits)
    return Verdict(True, witness=witness)


def is_s_prime_ideal(r: FiniteRing, p: Ideal, s_set, mode=UNIFORM) -> Verdict:
    """Element form: ``aRb ⊆ P`` forces ``a<s> ⊆ P`` or ``b<s> ⊆ P``."""
    _check_mode(mode)
    pr = _ideal_probe(r, p)
    s_bits = _s_bits(s_set)
    _guard(pr, s_bits, "P")
    # pair (m, a) of the regular module is the pair (a, b) of the ring
    return _s_prime_verdict(pr, s_bits, mode, ("a", "b"))


def is_s_prime_ideal_by_ideals(r: FiniteRing, p: Ideal, s_set) -> Verdict:
    """Ideal form: some ``s`` with ``AB ⊆ P ⇒ A<s> ⊆ P or B<s> ⊆ P`` for all ideals."""
    pr = _ideal_probe(r, p)
    s_bits = _s_bits(s_set)
    _guard(pr, s_bits, "P")
    ideals = two_sided_ideal_masks(r)
    n = r.order
    principal = principal_masks(r)
    from .substructures import ideal_product
    pairs = []
    for a in ideals:
        for b in ideals:
            if ideal_product(Ideal(r, a), Ideal(r, b)).bits & ~p.bits == 0:
                pairs.append((a, b))
    last = None
    for s in indices_of(s_bits):
        ok_a = [_set_times_ideal_inside(r, a, principal[s], p.bits) for a in ideals]
        for a, b in pairs:
            if not (ok_a[ideals.index(a)] or ok_a[ideals.index(b)]):
                last = {"s": s, "A": indices_of(a), "B": indices_of(b)}
                break
        else:
            return Verdict(True, witness={"s": s})
    return Verdict(False, counterexample=last)


def _set_times_ideal_inside(r, a_bits, i_bits, target):
    ia, ii = to_bool(a_bits, r.order), to_bool(i_bits, r.order)
    vals = r.mul[np.ix_(np.nonzero(ia)[0], np.nonzero(ii)[0])]
    return bool(to_bool(target, r.order)[vals].all())


def in_spec_s_ideal(r: FiniteRing, p, s_set, mode=UNIFORM) -> bool:
    return in_spec_s(regular_module(r), p, s_set, mode)


# ---------------------------------------------------------------------------
# submodules

def is_prime_submodule(m: FiniteRightModule, p: Submodule) -> Verdict:
    """``mRa ⊆ P`` forces ``a ∈ (P :_R M)`` or ``m ∈ P``."""
    pr = probe(m, p)
    if not pr.proper:
        raise ImproperError("prime submodules are proper")
    bad = pr.prime_failure()
    if bad is None:
        return Verdict(True)
    return Verdict(False, counterexample={"m": bad[0], "a": bad[1]})


def is_s_prime_submodule(m: FiniteRightModule, p: Submodule, s_set, mode=UNIFORM) -> Verdict:
    """``mRa ⊆ P`` forces ``a<s> ⊆ (P :_R M)`` or ``m<s> ⊆ P``."""
    _check_mode(mode)
    pr = probe(m, p)
    s_bits = _s_bits(s_set)
    _guard(pr, s_bits, "P")
    return _s_prime_verdict(pr, s_bits, mode, ("m", "a"))


def by_ideals_holds(m: FiniteRightModule, p, s: int) -> tuple[bool, tuple | None]:
    """For each submodule N and ideal J with ``NJ ⊆ P``:
    ``J<s> ⊆ (P :_R M)`` or ``N<s> ⊆ P``.  Returns (holds, failing (N, J))."""
    pr = probe(m, p)
    ideals = two_sided_ideal_masks(m.ring)
    a_bits = from_bool(pr.A[s])
    b_bits = pr.b_rows[s]
    k_rows = m.cache.setdefault("_k_rows", {})
    krow = k_rows.get(pr.bits)
    if krow is None:
        krow = k_rows[pr.bits] = rows_from_bool(pr.K)
    for n_bits in submodule_masks(m):
        if n_bits & ~b_bits == 0:
            continue
        # ring elements j with N·j ⊆ P
        allowed = full(m.ring.order)
        for x in indices_of(n_bits):
            allowed &= krow[x]
        for j_bits in ideals:
            if j_bits & ~allowed == 0 and j_bits & ~a_bits:
                return False, (n_bits, j_bits)
    return True, None


def is_s_prime_submodule_by_ideals(m: FiniteRightModule, p: Submodule, s_set, s: int) -> Verdict:
    """Ideal/submodule characterisation at the fixed witness ``s``."""
    pr = probe(m, p)
    s_bits = _s_bits(s_set)
    if not (s_bits >> s) & 1:
        raise ValueError(f"{s} is not in S")
    _guard(pr, s_bits, "P")
    ok, bad = by_ideals_holds(m, p, s)
    if ok:
        return Verdict(True, witness={"s": s})
    return Verdict(False, counterexample={"N": indices_of(bad[0]), "J": indices_of(bad[1])})


def is_s_prime_via_colon(m: FiniteRightModule, p: Submodule, s_set) -> Verdict:
    """Some ``s`` in S makes ``(P :_M <s>)`` a prime submodule."""
    pr = probe(m, p)
    s_bits = _s_bits(s_set)
    _guard(pr, s_bits, "P")
    for s in indices_of(s_bits):
        col = pr.b_rows[s]
        if probe(m, col).is_prime():
            return Verdict(True, witness={"s": s, "colon": indices_of(col)})
    return Verdict(False, counterexample={
        "colons": {str(s): indices_of(pr.b_rows[s]) for s in indices_of(s_bits)}})


# ---------------------------------------------------------------------------
# multiplication modules

def m_times_colon(m: FiniteRightModule, n_bits: int) -> int:
    """``M·(N :_R M)``."""
    cache = m.cache.setdefault("m_times_colon", {})
    out = cache.get(n_bits)
    if out is None:
        out = cache[n_bits] = submodule_ideal_product_mask(
            m, full(m.order), probe(m, n_bits).colon_bits)
    return out


def is_multiplication_module(m: FiniteRightModule) -> Verdict:
    """Every submodule ``P`` equals ``M·(P :_R M)``."""
    for bits in submodule_masks(m):
        if m_times_colon(m, bits) != bits:
            return Verdict(False, counterexample={"P": indices_of(bits),
                                                  "M(P:M)": indices_of(m_times_colon(m, bits))})
    return Verdict(True)


def s_multiplication_masks(m: FiniteRightModule) -> list[tuple[int, int]]:
    """``[(N, good)]`` where ``good`` marks every ``s`` with ``N<s> ⊆ M(N :_R M)``."""
    out = m.cache.get("smult")
    if out is None:
        out = []
        for n_bits in submodule_masks(m):
            target = probe(m, m_times_colon(m, n_bits))
            nb = to_bool(n_bits, m.order)
            out.append((n_bits, from_bool(target.B[:, nb].all(axis=1))))
        m.cache["smult"] = out
    return out


def is_s_multiplication_module(m: FiniteRightModule, s_set) -> Verdict:
    """Every submodule ``N`` has ``s`` in S and an ideal ``I`` with
    ``N<s> ⊆ MI ⊆ N``; decided through ``I = (N :_R M)``."""
    s_bits = _s_bits(s_set)
    witnesses = []
    for n_bits, good in s_multiplication_masks(m):
        hit = good & s_bits
        if not hit:
            return Verdict(False, counterexample={"N": indices_of(n_bits)})
        witnesses.append({"N": indices_of(n_bits), "s": lowest(hit),
                          "I": indices_of(probe(m, n_bits).colon_bits)})
    return Verdict(True, witness={"per_submodule": witnesses})


# ---------------------------------------------------------------------------
# S-finite / S-Noetherian

def _generated(m, gens_cache, gens):
    key = gens
    out = gens_cache.get(key)
    if out is None:
        if not gens:
            out = 1 << m.zero
        else:
            out = _join(m.order, m.add, _generated(m, gens_cache, gens[:-1]),
                        cyclic_masks(m)[gens[-1]])
        gens_cache[key] = out
    return out


def s_finite_candidates(m: FiniteRightModule, n_bits: int, max_gens):
    """``[(gens, F, good)]`` in search order: generator count, then
    lexicographic generator tuple.  ``good`` marks every ``s`` with
    ``N<s> ⊆ F``.  Independent of S, so cached per (N, max_gens)."""
    cache = m.cache.setdefault("sfinite", {})
    key = (n_bits, max_gens)
    out = cache.get(key)
    if out is not None:
        return out
    gens_cache = m.cache.setdefault("gens", {})
    elems = indices_of(n_bits)
    nb = to_bool(n_bits, m.order)
    limit = len(elems) if max_gens is None else min(max_gens, len(elems))
    out = []
    seen = set()
    for g in range(0, limit + 1):
        for gens in combinations(elems, g):
            f = _generated(m, gens_cache, gens)
            if f in seen:
                continue
            seen.add(f)
            good = from_bool(probe(m, f).B[:, nb].all(axis=1))
            if good:
                out.append((gens, f, good))
        if n_bits in seen:
            # F = N already reached: N<s> ⊆ N for every s, so larger sets add nothing
            break
    cache[key] = out
    return out


def s_finite_mask(m: FiniteRightModule, n_bits: int, max_gens) -> int:
    """Every ``s`` for which some admissible F gives ``N<s> ⊆ F ⊆ N``."""
    acc = 0
    for _, _, good in s_finite_candidates(m, n_bits, max_gens):
        acc |= good
    return acc


def s_finite_search(m: FiniteRightModule, n_bits: int, s_bits: int, max_gens):
    """Minimal certificate ``(s, gens, F)`` with ``N<s> ⊆ F ⊆ N`` or None.

    Search order: generator count, then lexicographic generator tuple, then s.
    """
    for gens, f, good in s_finite_candidates(m, n_bits, max_gens):
        if good & s_bits:
            return lowest(good & s_bits), list(gens), f
    return None


def is_s_finite(n: Submodule, s_set, max_gens=None) -> Verdict:
    """``N<s> ⊆ F ⊆ N`` for some s in S and F generated by ``<= max_gens``
    elements of N (``None``: no bound)."""
    m = n.owner
    s_bits = _s_bits(s_set)
    found = s_finite_search(m, n.bits, s_bits, max_gens)
    if found is None:
        return Verdict(False, counterexample={"N": n.elements(), "max_gens": max_gens})
    s, gens, f = found
    return Verdict(True, witness={"s": s, "generators": gens, "F": indices_of(f)})


def is_s_principal(n: Submodule, s_set) -> Verdict:
    return is_s_finite(n, s_set, max_gens=1)


def is_s_noetherian_module(m: FiniteRightModule, s_set, max_gens=None) -> Verdict:
    """Every submodule is S-finite; the first failure is reported."""
    s_bits = _s_bits(s_set)
    certs = []
    for n_bits in submodule_masks(m):
        found = s_finite_search(m, n_bits, s_bits, max_gens)
        if found is None:
            return Verdict(False, counterexample={"N": indices_of(n_bits), "max_gens": max_gens})
        certs.append({"N": indices_of(n_bits), "s": found[0], "generators": found[1]})
    return Verdict(True, witness={"certificates": certs})


def is_right_s_noetherian_ring(r: FiniteRing, s_set, max_gens=None) -> Verdict:
    """Every right ideal is S-finite as a right module."""
    return is_s_noetherian_module(regular_module(r), s_set, max_gens)
