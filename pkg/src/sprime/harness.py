"""Corpus generation and one executable verifier per statement.

Every verifier walks the corpus, instantiates the hypotheses and checks the
conclusion.  Results land in a :class:`TheoremReport`; a report with no
violations is a pass.  Nothing here knows the expected outcome: failures are
reported as found.

Instances are visited in a fixed order and all sampling goes through
``random.Random`` seeded from the corpus seed plus the statement id, so a
report is a pure function of (corpus spec, seed).
"""

import hashlib
import json
import random
import time
from dataclasses import asdict, dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .bits import from_bool, full, indices_of, lowest, mask_of, rows_from_bool, to_bool
from .instance import build_ring
from .maps import quotient_of, submodule_as_module
from .predicates import (PER_PAIR, UNIFORM, m_times_colon, probe, s_finite_candidates,
                         s_finite_mask, s_multiplication_masks)
from .structures import FiniteRing, direct_sum, product_module, regular_module
from .substructures import (_msystem_failure, enumerate_msystems, principal_masks,
                            product_subset_mask, submodule_ideal_product_mask,
                            submodule_masks, two_sided_ideal_masks)

MAX_LISTED = 25          # violations / witnesses kept per report

_T2 = {"upper_triangular": {"base": {"zmod": 2}, "k": 2}}
_M2 = {"matrix": {"base": {"zmod": 2}, "k": 2}}


def default_rings():
    return ([{"zmod": n} for n in range(2, 25)]
            + [_M2, _T2, {"upper_triangular": {"base": {"zmod": 4}, "k": 2}}])


def default_products():
    out = [[{"zmod": a}, {"zmod": b}]
           for a in range(2, 19) for b in range(a, 19) if a * b <= 36]
    out += [[{"zmod": a}, _T2] for a in (2, 3, 4)]
    out.append([{"zmod": 2}, _M2])
    return out


@dataclass
class CorpusSpec:
    """What to sweep.  Serialises to JSON for ``verify --corpus``."""

    rings: list = field(default_factory=default_rings)
    products: list = field(default_factory=default_products)
    # "regular", "quotients" (R/L for right ideals L), "sums" (pairwise direct sums)
    module_kinds: list = field(default_factory=lambda: ["regular", "quotients", "sums"])
    sum_ring_max: int = 8
    sum_max_order: int = 36
    msystem_max_size: int = 2
    msystem_sample3: int = 3
    seed: int = 0
    n_max: int = 4
    exhaustive_n: int = 3
    budget: int = 400
    max_gens: int = 1
    mode: str = PER_PAIR

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown corpus fields: {sorted(extra)}")
        return cls(**d)

    def digest(self):
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]


class Corpus:
    """Lazily built rings, modules and m-systems for a :class:`CorpusSpec`."""

    def __init__(self, spec: CorpusSpec = None):
        self.spec = spec or CorpusSpec()
        self._rings = None
        self._modules = {}
        self._msystems = {}

    @property
    def rings(self) -> list[FiniteRing]:
        if self._rings is None:
            rs = [build_ring(s) for s in self.spec.rings]
            rs += [build_ring({"product": p}) for p in self.spec.products]
            self._rings = rs
        return self._rings

    @property
    def product_rings(self):
        return [r for r in self.rings if hasattr(r, "factors")]

    def msystems(self, r: FiniteRing) -> list[int]:
        """m-system bitmasks: all up to the size bound plus a seeded sample of size 3."""
        key = id(r)
        out = self._msystems.get(key)
        if out is None:
            out = [s.bits for s in enumerate_msystems(r, self.spec.msystem_max_size)]
            k = self.spec.msystem_sample3
            if k and self.spec.msystem_max_size < 3:
                threes = [s.bits for s in enumerate_msystems(r, 3) if len(indices_of(s.bits)) == 3]
                rng = random.Random(f"{self.spec.seed}:msystems:{r.label}")
                out += sorted(rng.sample(threes, min(k, len(threes))))
            self._msystems[key] = out
        return out

    def factor_modules(self, r: FiniteRing):
        """Regular module of ``r`` and its quotients by proper nonzero right ideals."""
        reg = regular_module(r)
        mods = [reg]
        if "quotients" in self.spec.module_kinds:
            zero = 1 << r.zero
            for bits in submodule_masks(reg):
                if bits != zero and bits != full(r.order):
                    q = quotient_of(reg, bits)
                    q.label = f"{r.label}/{{{','.join(r.render(x) for x in indices_of(bits))}}}"
                    mods.append(q)
        return mods

    def modules(self, r: FiniteRing):
        key = id(r)
        out = self._modules.get(key)
        if out is not None:
            return out
        base = self.factor_modules(r)
        kinds = self.spec.module_kinds
        out = base[:1] if "regular" in kinds else []
        out += base[1:]
        if "sums" in self.spec.module_kinds and r.order <= self.spec.sum_ring_max:
            for i, a in enumerate(base):
                for b in base[i:]:
                    if a.order * b.order <= self.spec.sum_max_order:
                        d = direct_sum(a, b)
                        d.label = f"{a.label}+{b.label}"
                        out.append(d)
        self._modules[key] = out
        return out

    def cases(self):
        """``(ring, module, msystems)`` in corpus order."""
        for r in self.rings:
            ms = self.msystems(r)
            for m in self.modules(r):
                yield r, m, ms


@dataclass
class TheoremReport:
    theorem: str
    statement: str
    seed: int
    corpus: dict = field(default_factory=dict)
    instances: int = 0
    violation_count: int = 0
    violations: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    elapsed_s: float = 0.0

    @property
    def passed(self):
        return self.violation_count == 0

    def violate(self, **where):
        self.violation_count += 1
        if len(self.violations) < MAX_LISTED:
            self.violations.append(where)

    def witness(self, **w):
        if len(self.witnesses) < MAX_LISTED:
            self.witnesses.append(w)

    def count(self, key, k=1):
        self.notes[key] = self.notes.get(key, 0) + k

    def to_dict(self, include_timing=False):
        out = {"schema": "sprime-theorem/1", "theorem": self.theorem,
               "statement": self.statement, "passed": self.passed,
               "instances": self.instances, "violation_count": self.violation_count,
               "violations": self.violations, "witnesses": self.witnesses,
               "notes": dict(sorted(self.notes.items())), "seed": self.seed,
               "corpus": self.corpus}
        if include_timing:
            out["elapsed_s"] = round(self.elapsed_s, 3)
        return out


# ---------------------------------------------------------------------------
# shared helpers

def _ix(bits):
    return indices_of(bits)


def _where(m, s=None, **extra):
    d = {"ring": m.ring.label, "module": m.label}
    if s is not None:
        d["S"] = _ix(s)
    for k, v in extra.items():
        d[k] = _ix(v) if k in ("P", "N", "L", "I", "J", "P1", "P2", "Pi", "image", "preimage") else v
    return d


def _sp(m, p_bits, s_bits, mode=PER_PAIR) -> bool:
    """Membership in Spec_S with the guards read as False; memoised per probe."""
    pr = probe(m, p_bits)
    if not pr.proper or pr.colon_bits & s_bits:
        return False
    if mode == UNIFORM or s_bits & (s_bits - 1) == 0:
        return pr.good_bits & s_bits != 0
    memo = pr.__dict__.setdefault("_pp", {})
    v = memo.get(s_bits)
    if v is None:
        v = memo[s_bits] = pr.holds(s_bits, PER_PAIR)
    return v


def _disjoint(m, p_bits, s_bits):
    return probe(m, p_bits).colon_bits & s_bits == 0


def _proper_subs(m):
    top = full(m.order)
    return [b for b in submodule_masks(m) if b != top]


def _is_multiplication(m):
    v = m.cache.get("h_mult")
    if v is None:
        v = m.cache["h_mult"] = all(m_times_colon(m, b) == b for b in submodule_masks(m))
    return v


def _smult_ok(m, s_bits):
    return all(good & s_bits for _, good in s_multiplication_masks(m))


def _ideal_form_mask(m, p_bits):
    """Every ``s`` at which the ideal/submodule form holds: for all N, J with
    ``NJ ⊆ P``, ``J<s> ⊆ (P:M)`` or ``N<s> ⊆ P``."""
    pr = probe(m, p_bits)
    cached = pr.__dict__.get("_ideal_form")
    if cached is not None:
        return cached
    r = m.ring
    ideals = two_sided_ideal_masks(r)
    krow = rows_from_bool(pr.K)
    a_rows = rows_from_bool(pr.A)
    b_rows = pr.b_rows
    pairs = []
    for n_bits in submodule_masks(m):
        allowed = full(r.order)
        for x in indices_of(n_bits):
            allowed &= krow[x]
        u = 0
        for j in ideals:
            if j & ~allowed == 0:
                u |= j
        pairs.append((n_bits, u))
    ok = 0
    for s in range(r.order):
        if all(n & ~b_rows[s] == 0 or u & ~a_rows[s] == 0 for n, u in pairs):
            ok |= 1 << s
    pr._ideal_form = ok
    return ok


def _prime_colon_mask(m, p_bits):
    """Every ``s`` with ``(P :_M <s>)`` prime."""
    pr = probe(m, p_bits)
    cached = pr.__dict__.get("_prime_colon")
    if cached is None:
        cached = 0
        for s, row in enumerate(pr.b_rows):
            if probe(m, row).is_prime():
                cached |= 1 << s
        pr._prime_colon = cached
    return cached


def _image_bits(q, proj, p_bits):
    return from_bool(np.bincount(proj[_bool_idx(p_bits)], minlength=q.order) > 0)


def _bool_idx(bits):
    return np.array(indices_of(bits), dtype=np.int64)


def _preimage_bits(proj, q_bits, q_order):
    return from_bool(to_bool(q_bits, q_order)[proj])


def _restrict(emb, p_bits):
    """Mask of ``P ∩ N`` in the re-indexed carrier of N."""
    return mask_of(i for i, x in enumerate(emb) if (p_bits >> x) & 1)


def _colon_over(m, n_bits, p_bits):
    """``(P :_R N) = {r : N r ⊆ P}``."""
    pr = probe(m, p_bits)
    rows = pr.__dict__.get("_krows")
    if rows is None:
        rows = pr._krows = rows_from_bool(pr.K)
    acc = full(m.ring.order)
    for x in indices_of(n_bits):
        acc &= rows[x]
    return acc


def _quotients(m):
    """``[(L, M/L, projection array)]`` over proper submodules L."""
    out = m.cache.get("h_quot")
    if out is None:
        out = []
        for l_bits in _proper_subs(m):
            q = quotient_of(m, l_bits)
            if not getattr(q, "_labelled", False):
                q.label = f"({m.label})/{{{','.join(str(x) for x in indices_of(l_bits))}}}"
                q._labelled = True
            out.append((l_bits, q, np.array(q.projection, dtype=np.int64)))
        m.cache["h_quot"] = out
    return out


def _submodules_as_modules(m):
    out = m.cache.get("h_subs")
    if out is None:
        out = []
        for n_bits in submodule_masks(m):
            if n_bits == 1 << m.zero:
                continue
            nm = submodule_as_module_bits(m, n_bits)
            out.append((n_bits, nm))
        m.cache["h_subs"] = out
    return out


def submodule_as_module_bits(m, n_bits):
    from .substructures import Submodule
    nm = submodule_as_module(Submodule(m, n_bits))
    nm.label = f"{{{','.join(str(x) for x in indices_of(n_bits))}}}<{m.label}"
    return nm


# ---------------------------------------------------------------------------
# verifiers

def verify_ex_2_3(corpus, rep, drop=()):
    """prime ∧ disjoint ⟹ S-prime;  S ⊆ units ∧ S-prime ⟹ prime."""
    mode = corpus.spec.mode
    for r, m, ms in corpus.cases():
        units = mask_of(r.units())
        for p in _proper_subs(m):
            prime = probe(m, p).is_prime()
            for s in ms:
                if not _disjoint(m, p, s):
                    continue
                rep.instances += 1
                sp = _sp(m, p, s, mode)
                if prime and not sp:
                    rep.violate(**_where(m, s, P=p), direction="prime => S-prime")
                if s & ~units == 0 and sp and not prime:
                    rep.violate(**_where(m, s, P=p), direction="units: S-prime => prime")
                if sp and not prime:
                    rep.count("s_prime_not_prime")


def verify_thm_2_5(corpus, rep, drop=()):
    """Element form at s ⟺ ideal/submodule form at s (uniform witness)."""
    for r, m, ms in corpus.cases():
        for p in _proper_subs(m):
            pr = probe(m, p)
            elem = pr.good_bits
            ideal = _ideal_form_mask(m, p)
            for s in ms:
                if pr.colon_bits & s:
                    continue
                for x in indices_of(s):
                    rep.instances += 1
                    a, b = (elem >> x) & 1, (ideal >> x) & 1
                    if a != b:
                        rep.violate(**_where(m, s, P=p), s=x, element_form=bool(a),
                                    ideal_form=bool(b))
            if elem != ideal:
                rep.count("mask_mismatch_any_s")


def verify_thm_2_6(corpus, rep, drop=()):
    """P ∈ Spec_S(M) ⟺ (P :_M <s>) prime for some s ∈ S."""
    mode = corpus.spec.mode
    for r, m, ms in corpus.cases():
        for p in _proper_subs(m):
            pr = probe(m, p)
            pc = _prime_colon_mask(m, p)
            for s in ms:
                if pr.colon_bits & s:
                    continue
                rep.instances += 1
                lhs = _sp(m, p, s, mode)
                rhs = pc & s != 0
                if lhs != rhs:
                    rep.violate(**_where(m, s, P=p), s_prime=lhs, colon_prime=rhs)
                # per-s agreement with the uniform witness set
                if (pr.good_bits & s) != (pc & s):
                    rep.count("witness_sets_differ")


def verify_prop_2_7(corpus, rep, drop=()):
    """P ∈ Spec_S(M) ⟹ (P :_R M) right S-prime ideal."""
    mode = corpus.spec.mode
    for r, m, ms in corpus.cases():
        reg = regular_module(r)
        for p in _proper_subs(m):
            col = probe(m, p).colon_bits
            for s in ms:
                if not _sp(m, p, s, mode):
                    continue
                rep.instances += 1
                if not _sp(reg, col, s, mode):
                    rep.violate(**_where(m, s, P=p), colon=_ix(col))


def _colon_ideal_vs_sp(corpus, rep, which):
    mode = corpus.spec.mode
    for r, m, ms in corpus.cases():
        reg = regular_module(r)
        mult = _is_multiplication(m)
        if which != "smult" and not mult:
            continue
        for p in _proper_subs(m):
            col = probe(m, p).colon_bits
            for s in ms:
                if which == "smult" and not _smult_ok(m, s):
                    continue
                ideal_sp = _sp(reg, col, s, mode)
                sp = _sp(m, p, s, mode)
                if which == "prop-2.8":
                    if not ideal_sp:
                        continue
                    rep.instances += 1
                    if not sp:
                        rep.violate(**_where(m, s, P=p), colon=_ix(col))
                    continue
                rep.instances += 1
                if ideal_sp != sp:
                    rep.violate(**_where(m, s, P=p), colon=_ix(col),
                                colon_s_prime=ideal_sp, s_prime=sp)


def verify_prop_2_8(corpus, rep, drop=()):
    """M multiplication, (P :_R M) right S-prime ⟹ P ∈ Spec_S(M)."""
    _colon_ideal_vs_sp(corpus, rep, "prop-2.8")


def verify_cor_2_9(corpus, rep, drop=()):
    """(1) on multiplication modules: colon S-prime ⟺ P S-prime.
    (2) P S-prime ⟹ Ann(M) ⊆ (P :_R M) and the colon is right S-prime."""
    _colon_ideal_vs_sp(corpus, rep, "cor-2.9")
    mode = corpus.spec.mode
    for r, m, ms in corpus.cases():
        reg = regular_module(r)
        ann = probe(m, 1 << m.zero).colon_bits
        for p in _proper_subs(m):
            col = probe(m, p).colon_bits
            for s in ms:
                if not _sp(m, p, s, mode):
                    continue
                rep.instances += 1
                if ann & ~col or not _sp(reg, col, s, mode):
                    rep.violate(**_where(m, s, P=p), part=2, ann=_ix(ann), colon=_ix(col))


def verify_ex_2_11(corpus, rep, drop=()):
    """multiplication ⟹ S-multiplication; Ann(M) ∩ S ≠ ∅ ⟹ S-multiplication;
    S ⊆ units: S-multiplication ⟺ multiplication."""
    for r, m, ms in corpus.cases():
        mult = _is_multiplication(m)
        ann = probe(m, 1 << m.zero).colon_bits
        units = mask_of(r.units())
        for s in ms:
            rep.instances += 1
            sm = _smult_ok(m, s)
            if mult and not sm:
                rep.violate(**_where(m, s), part="multiplication => S-multiplication")
            if ann & s and not sm:
                rep.violate(**_where(m, s), part="Ann meets S => S-multiplication")
            if s & ~units == 0 and sm != mult:
                rep.violate(**_where(m, s), part="units: S-multiplication <=> multiplication")
            if sm and not mult:
                rep.count("s_multiplication_not_multiplication")


def verify_thm_2_12(corpus, rep, drop=()):
    """M S-multiplication: (P :_R M) right S-prime ⟺ P ∈ Spec_S(M)."""
    if "smult" in drop:
        _colon_ideal_vs_sp_all(corpus, rep)
        return
    _colon_ideal_vs_sp(corpus, rep, "smult")


def _colon_ideal_vs_sp_all(corpus, rep):
    mode = corpus.spec.mode
    for r, m, ms in corpus.cases():
        reg = regular_module(r)
        for p in _proper_subs(m):
            col = probe(m, p).colon_bits
            for s in ms:
                rep.instances += 1
                a, b = _sp(reg, col, s, mode), _sp(m, p, s, mode)
                if a != b:
                    rep.violate(**_where(m, s, P=p), colon_s_prime=a, s_prime=b,
                                s_multiplication=_smult_ok(m, s))


def verify_prop_2_14(corpus, rep, drop=()):
    """P S-prime, (N :_R M) ∩ S ≠ ∅ ⟹ P(N :_R M) S-prime."""
    mode = corpus.spec.mode
    for r, m, ms in corpus.cases():
        colons = sorted({probe(m, n).colon_bits for n in submodule_masks(m)})
        _products_stay_s_prime(m, ms, colons, rep, mode, "colon")


def verify_cor_2_15(corpus, rep, drop=()):
    """P S-prime, I ideal with I ∩ S ≠ ∅ ⟹ PI S-prime."""
    mode = corpus.spec.mode
    for r, m, ms in corpus.cases():
        _products_stay_s_prime(m, ms, two_sided_ideal_masks(r), rep, mode, "I")


def _products_stay_s_prime(m, ms, ideals, rep, mode, name):
    memo = {}
    for p in _proper_subs(m):
        for s in ms:
            if not _sp(m, p, s, mode):
                continue
            for i in ideals:
                if not i & s:
                    continue
                x = memo.get((p, i))
                if x is None:
                    x = memo[(p, i)] = submodule_ideal_product_mask(m, p, i)
                rep.instances += 1
                if not _sp(m, x, s, mode):
                    rep.violate(**_where(m, s, P=p, I=i), product=_ix(x), role=name)


def verify_thm_2_13(corpus, rep, drop=(), n_max=None):
    """M S-multiplication, P_1..P_n with ≥ n−2 S-prime, P ⊆ ∪P_i ⟹ P<s> ⊆ P_i."""
    spec = corpus.spec
    n_max = spec.n_max if n_max is None else n_max
    mode = spec.mode
    need_smult = "smult" not in drop
    need_sprime = "sprime" not in drop
    reverified = 0
    only_via_colon = 0
    nontrivial_seen = 0
    for r, m, ms in corpus.cases():
        subs = submodule_masks(m)
        k = len(subs)
        sub_f = np.array([to_bool(b, m.order) for b in subs], dtype=np.float32)
        inside = (sub_f @ (1 - sub_f).T) == 0          # inside[p, i]: P_p ⊆ P_i
        # P<s> ⊆ P for every (P, s): the trivial witness ingredient, checked directly
        self_ok = {}
        pm = principal_masks(r)
        for pi, p in enumerate(subs):
            for s in range(r.order):
                self_ok[(pi, s)] = submodule_ideal_product_mask(m, p, pm[s]) & ~p == 0
        if not all(self_ok.values()):
            rep.violate(**_where(m), problem="P<s> not inside P")
        g_cache = {}
        direct = {}
        eligible = [s for s in ms if not need_smult or _smult_ok(m, s)]
        if not eligible:
            continue
        sp_vec = {s: np.array([_sp(m, b, s, mode) for b in subs]) for s in eligible}
        for n in range(2, n_max + 1):
            if n > k:
                break
            tuples = _tuples(k, n, spec, f"{spec.seed}:thm-2.13:{m.label}:{n}")
            if comb(k, n) > len(tuples):
                rep.count(f"sampled_n{n}")
            else:
                rep.count(f"exhaustive_n{n}")
            t = np.array(tuples, dtype=np.int64)                     # [T, n]
            union = (sub_f[t].sum(axis=1) > 0).astype(np.float32)   # [T, |M|]
            covered = (sub_f @ (1 - union).T).T == 0                 # [T, k]
            trivial = inside[:, t].any(axis=2).T                     # [T, k]
            nontriv = np.argwhere(covered & ~trivial)
            nontrivial_seen += len(nontriv)
            cov_count = covered.sum(axis=1)
            for s in eligible:
                if need_sprime:
                    q = sp_vec[s][t].sum(axis=1) >= n - 2
                else:
                    q = np.ones(len(t), dtype=bool)
                rep.instances += int(cov_count[q].sum())
                for ti, pi in nontriv:
                    if not q[ti]:
                        continue
                    rep.count("nontrivial_instances")
                    hit = None
                    for i in t[ti]:
                        g = g_cache.get((pi, i))
                        if g is None:
                            col = probe(m, subs[i])
                            g = g_cache[(pi, i)] = from_bool(
                                col.B[:, to_bool(subs[pi], m.order)].all(axis=1))
                        if g & s:
                            hit = (lowest(g & s), int(i))
                            break
                    if hit is None:
                        rep.violate(**_where(m, s, P=subs[pi]), tuple=[_ix(subs[i]) for i in t[ti]],
                                    n=n)
                        continue
                    sx, i = hit
                    key = (pi, sx, i)
                    ok = direct.get(key)
                    if ok is None:
                        ok = direct[key] = submodule_ideal_product_mask(
                            m, subs[pi], pm[sx]) & ~subs[i] == 0
                        reverified += 1
                    if not ok:
                        rep.violate(**_where(m, s, P=subs[pi]), problem="witness fails re-check",
                                    s=sx, Pi=subs[i])
                    if _only_via_colon(m, subs, g_cache, pi, t[ti], s):
                        only_via_colon += 1
                    rep.witness(**_where(m, s, P=subs[pi]), n=n, s=sx, Pi=subs[i])
    rep.notes["nontrivial_configurations"] = int(nontrivial_seen)
    rep.notes["witnesses_reverified"] = reverified
    rep.notes["holds_only_via_s_in_colon"] = only_via_colon


def _only_via_colon(m, subs, g_cache, pi, members, s):
    """Every witness (x, i) of this configuration has x ∈ (P_i :_R M)."""
    for i in members:
        g = g_cache.get((pi, i))
        if g is None:
            g = g_cache[(pi, i)] = from_bool(
                probe(m, subs[i]).B[:, to_bool(subs[pi], m.order)].all(axis=1))
        if g & s & ~probe(m, subs[i]).colon_bits:
            return False
    return True


def _tuples(k, n, spec, seed_key):
    total = comb(k, n)
    if n <= spec.exhaustive_n or total <= spec.budget:
        return list(combinations(range(k), n))
    rng = random.Random(seed_key)
    seen = set()
    while len(seen) < spec.budget:
        seen.add(tuple(sorted(rng.sample(range(k), n))))
    return sorted(seen)


def verify_thm_2_16(corpus, rep, drop=()):
    """f: M → M/L epi, ker f = L ⊆ P, P S-prime ⟹ f(P) S-prime."""
    mode = corpus.spec.mode
    need_ker = "ker" not in drop
    for r, m, ms in corpus.cases():
        subs = _proper_subs(m)
        for l_bits, q, proj in _quotients(m):
            for p in subs:
                if need_ker and l_bits & ~p:
                    continue
                img = _image_bits(q, proj, p)
                for s in ms:
                    if not _sp(m, p, s, mode):
                        continue
                    rep.instances += 1
                    if not _sp(q, img, s, mode):
                        rep.violate(**_where(m, s, P=p, L=l_bits, image=img),
                                    disjoint=_disjoint(q, img, s),
                                    proper=img != full(q.order))


def verify_thm_2_17(corpus, rep, drop=()):
    """P S-prime in the target, (f⁻¹(P) :_R M_1) ∩ S = ∅ ⟹ f⁻¹(P) S-prime.
    Runs over canonical projections and inclusions of submodules."""
    mode = corpus.spec.mode
    for r, m, ms in corpus.cases():
        for l_bits, q, proj in _quotients(m):
            for p2 in _proper_subs(q):
                pre = _preimage_bits(proj, p2, q.order)
                for s in ms:
                    if not _sp(q, p2, s, mode) or not _disjoint(m, pre, s):
                        continue
                    rep.instances += 1
                    if not _sp(m, pre, s, mode):
                        rep.violate(**_where(m, s, L=l_bits, preimage=pre), map="projection",
                                    P=_ix(p2))
        subs = _proper_subs(m)
        for n_bits, nm in _submodules_as_modules(m):
            for p in subs:
                pre = _restrict(nm.embedding, p)
                for s in ms:
                    if not _sp(m, p, s, mode) or not _disjoint(nm, pre, s):
                        continue
                    rep.instances += 1
                    if not _sp(nm, pre, s, mode):
                        rep.violate(**_where(m, s, N=n_bits, P=p), map="inclusion")


def verify_thm_2_18(corpus, rep, drop=()):
    """L ⊆ P: P ∈ Spec_S(M) ⟺ P/L ∈ Spec_S(M/L)."""
    mode = corpus.spec.mode
    for r, m, ms in corpus.cases():
        subs = _proper_subs(m)
        for l_bits, q, proj in _quotients(m):
            for p in subs:
                if l_bits & ~p:
                    continue
                img = _image_bits(q, proj, p)
                for s in ms:
                    rep.instances += 1
                    a, b = _sp(m, p, s, mode), _sp(q, img, s, mode)
                    if a != b:
                        rep.violate(**_where(m, s, P=p, L=l_bits), in_M=a, in_quotient=b)


def verify_cor_2_19(corpus, rep, drop=()):
    """P S-prime in M, (P :_R N) ∩ S = ∅ ⟹ P ∩ N S-prime in N."""
    mode = corpus.spec.mode
    for r, m, ms in corpus.cases():
        subs = _proper_subs(m)
        for n_bits, nm in _submodules_as_modules(m):
            for p in subs:
                col = _colon_over(m, n_bits, p)
                pre = _restrict(nm.embedding, p)
                for s in ms:
                    if col & s or not _sp(m, p, s, mode):
                        continue
                    rep.instances += 1
                    if not _sp(nm, pre, s, mode):
                        rep.violate(**_where(m, s, N=n_bits, P=p))


def _factor_msystems(corpus, r):
    return corpus.msystems(r.factors[0]), corpus.msystems(r.factors[1])


def verify_lemma_2_20(corpus, rep, drop=()):
    """S_1, S_2 m-systems ⟹ S_1 × S_2 m-system of R_1 × R_2."""
    for r in corpus.product_rings:
        m1, m2 = _factor_msystems(corpus, r)
        n2 = r.factors[1].order
        for a in m1:
            for b in m2:
                rep.instances += 1
                bad = _msystem_failure(r, product_subset_mask(n2, a, b))
                if bad is not None:
                    rep.violate(ring=r.label, S1=_ix(a), S2=_ix(b), pair=list(bad))


def verify_lemma_2_21(corpus, rep, drop=()):
    """P_1 × P_2 ∈ Spec_S(R) ⟺ (P_1 ∈ Spec_{S_1} and P_2 ∩ S_2 ≠ ∅)
    or (P_2 ∈ Spec_{S_2} and P_1 ∩ S_1 ≠ ∅)."""
    mode = corpus.spec.mode
    for r in corpus.product_rings:
        r1, r2 = r.factors
        g1, g2 = regular_module(r1), regular_module(r2)
        reg = regular_module(r)
        m1s, m2s = _factor_msystems(corpus, r)
        n2 = r2.order
        i1s, i2s = two_sided_ideal_masks(r1), two_sided_ideal_masks(r2)
        for p1 in i1s:
            for p2 in i2s:
                pb = product_subset_mask(n2, p1, p2)
                if pb == full(r.order):
                    continue
                for a in m1s:
                    for b in m2s:
                        s = product_subset_mask(n2, a, b)
                        rep.instances += 1
                        lhs = _sp(reg, pb, s, mode)
                        rhs = ((_sp(g1, p1, a, mode) and p2 & b != 0)
                               or (_sp(g2, p2, b, mode) and p1 & a != 0))
                        if lhs != rhs:
                            rep.violate(ring=r.label, P1=_ix(p1), P2=_ix(p2), S1=_ix(a),
                                        S2=_ix(b), product_side=lhs, factor_side=rhs)


def verify_thm_2_22(corpus, rep, drop=()):
    """P_1 × P_2 ∈ Spec_S(M_1 × M_2) ⟺ (P_1 ∈ Spec_{S_1}(M_1) and (P_2 : M_2) ∩ S_2 ≠ ∅)
    or (P_2 ∈ Spec_{S_2}(M_2) and (P_1 : M_1) ∩ S_1 ≠ ∅)."""
    mode = corpus.spec.mode
    for r in corpus.product_rings:
        r1, r2 = r.factors
        m1s, m2s = _factor_msystems(corpus, r)
        pairs = [(a, b, product_subset_mask(r2.order, a, b)) for a in m1s for b in m2s]
        for mod1 in corpus.factor_modules(r1):
            for mod2 in corpus.factor_modules(r2):
                m = _product_module(r, mod1, mod2)
                subs1, subs2 = submodule_masks(mod1), submodule_masks(mod2)
                top = full(m.order)
                for p1 in subs1:
                    c1 = probe(mod1, p1).colon_bits
                    for p2 in subs2:
                        pb = product_subset_mask(mod2.order, p1, p2)
                        if pb == top:
                            continue
                        c2 = probe(mod2, p2).colon_bits
                        for a, b, s in pairs:
                            rep.instances += 1
                            lhs = _sp(m, pb, s, mode)
                            rhs = ((_sp(mod1, p1, a, mode) and c2 & b != 0)
                                   or (_sp(mod2, p2, b, mode) and c1 & a != 0))
                            if lhs != rhs:
                                rep.violate(ring=r.label, module=m.label, P1=_ix(p1),
                                            P2=_ix(p2), S1=_ix(a), S2=_ix(b),
                                            product_side=lhs, factor_side=rhs)


def _product_module(r, mod1, mod2):
    cache = r.cache.setdefault("h_prodmods", {})
    key = (id(mod1), id(mod2))
    m = cache.get(key)
    if m is None:
        m = product_module(mod1, mod2, ring=r)
        m.label = f"{mod1.label}x{mod2.label}"
        cache[key] = (m, mod1, mod2)       # hold references so ids stay valid
        return m
    return m[0]


def _noetherian_masks(m, k):
    """Per-submodule masks of admissible ``s`` for S-finiteness."""
    cache = m.cache.setdefault("h_noeth", {})
    out = cache.get(k)
    if out is None:
        out = cache[k] = [s_finite_mask(m, n, k) for n in submodule_masks(m)]
    return out


def _noetherian(m, s, k):
    return all(g & s for g in _noetherian_masks(m, k))


def verify_rem_3_1(corpus, rep, drop=()):
    """S-Noetherian passes to submodules; S_1 ⊆ S_2 ⟹ S_1-Noetherian is S_2-Noetherian."""
    k = corpus.spec.max_gens
    for r, m, ms in corpus.cases():
        noeth = {s: _noetherian(m, s, k) for s in ms}
        for s1 in ms:
            if not noeth[s1]:
                continue
            for s2 in ms:
                if s1 & ~s2 == 0 and s1 != s2:
                    rep.instances += 1
                    if not noeth[s2]:
                        rep.violate(**_where(m, s1), part="monotonicity", S2=_ix(s2))
        subs = _submodules_as_modules(m)
        for s in ms:
            if not noeth[s]:
                rep.count("not_s_noetherian")
                continue
            for n_bits, nm in subs:
                rep.instances += 1
                if not _noetherian(nm, s, k):
                    rep.violate(**_where(m, s, N=n_bits), part="heredity")


def verify_prop_3_2(corpus, rep, drop=()):
    """M multiplication: all S-prime submodules S-finite ⟹ all prime submodules S-finite.
    Also the argument: for prime N with s ∈ (N :_R M) ∩ S, N<s> ⊆ M<s> ⊆ N;
    for prime N with (N :_R M) ∩ S = ∅, N is S-prime."""
    mode = corpus.spec.mode
    pm = None
    for r, m, ms in corpus.cases():
        if not _is_multiplication(m):
            continue
        pm = principal_masks(r)
        top = full(m.order)
        subs = _proper_subs(m)
        primes = [p for p in subs if probe(m, p).is_prime()]
        fin = {p: s_finite_mask(m, p, None) for p in subs}
        for s in ms:
            hyp = all(fin[p] & s for p in subs if _sp(m, p, s, mode))
            if hyp:
                rep.instances += 1
                if not all(fin[p] & s for p in primes):
                    rep.violate(**_where(m, s), part="statement")
            for p in primes:
                col = probe(m, p).colon_bits
                rep.instances += 1
                if col & s:
                    x = lowest(col & s)
                    ms_ = submodule_ideal_product_mask(m, top, pm[x])
                    ns_ = submodule_ideal_product_mask(m, p, pm[x])
                    if ns_ & ~ms_ or ms_ & ~p:
                        rep.violate(**_where(m, s, P=p), part="chain", s=x)
                elif not _sp(m, p, s, mode):
                    rep.violate(**_where(m, s, P=p), part="prime and disjoint => S-prime")


def verify_cor_3_3(corpus, rep, drop=()):
    """M multiplication: if (N :_R M) is S-finite with witness (s, I), then
    N<s> ⊆ M·I ⊆ N, so N is S-finite."""
    for r, m, ms in corpus.cases():
        if not _is_multiplication(m):
            continue
        reg = regular_module(r)
        pm = principal_masks(r)
        top = full(m.order)
        for n in submodule_masks(m):
            col = probe(m, n).colon_bits
            cands = s_finite_candidates(reg, col, None)
            for s in ms:
                cert = next(((gens, i, good) for gens, i, good in cands if good & s), None)
                if cert is None:
                    rep.count("colon_not_s_finite")
                    continue
                gens, i_bits, good = cert
                x = lowest(good & s)
                rep.instances += 1
                mi = submodule_ideal_product_mask(m, top, i_bits)
                ns = submodule_ideal_product_mask(m, n, pm[x])
                if ns & ~mi or mi & ~n:
                    rep.violate(**_where(m, s, N=n, I=i_bits), s=x)
                elif not s_finite_mask(m, n, None) & s:
                    rep.violate(**_where(m, s, N=n), part="N not S-finite")


def verify_modes(corpus, rep, drop=()):
    """uniform ⟹ per-pair on every instance; disagreements are counted."""
    for r, m, ms in corpus.cases():
        for p in _proper_subs(m):
            for s in ms:
                if not _disjoint(m, p, s):
                    continue
                rep.instances += 1
                u = _sp(m, p, s, UNIFORM)
                pp = _sp(m, p, s, PER_PAIR)
                if u and not pp:
                    rep.violate(**_where(m, s, P=p))
                if u != pp:
                    rep.count("mode_disagreements")
    rep.notes.setdefault("mode_disagreements", 0)


VERIFIERS = {
    "ex-2.3": (verify_ex_2_3, "prime and disjoint implies S-prime; with S inside the units S-prime implies prime"),
    "thm-2.5": (verify_thm_2_5, "element form at s iff submodule/ideal form at s"),
    "thm-2.6": (verify_thm_2_6, "S-prime iff (P :_M <s>) is prime for some s in S"),
    "prop-2.7": (verify_prop_2_7, "P S-prime implies (P :_R M) right S-prime"),
    "prop-2.8": (verify_prop_2_8, "multiplication M, (P :_R M) right S-prime implies P S-prime"),
    "cor-2.9": (verify_cor_2_9, "multiplication M: colon S-prime iff P S-prime; Ann(M) inside an S-prime colon"),
    "ex-2.11": (verify_ex_2_11, "multiplication or Ann(M) meeting S gives S-multiplication; units reduce to multiplication"),
    "thm-2.12": (verify_thm_2_12, "S-multiplication M: (P :_R M) right S-prime iff P S-prime"),
    "thm-2.13": (verify_thm_2_13, "S-multiplication M, P covered by P_1..P_n with n-2 S-prime: P<s> inside some P_i"),
    "prop-2.14": (verify_prop_2_14, "P S-prime, (N :_R M) meets S implies P(N :_R M) S-prime"),
    "cor-2.15": (verify_cor_2_15, "P S-prime, ideal I meets S implies PI S-prime"),
    "thm-2.16": (verify_thm_2_16, "epimorphic image of an S-prime P containing the kernel is S-prime"),
    "thm-2.17": (verify_thm_2_17, "preimage of an S-prime submodule with disjoint colon is S-prime"),
    "thm-2.18": (verify_thm_2_18, "L inside P: P S-prime in M iff P/L S-prime in M/L"),
    "cor-2.19": (verify_cor_2_19, "P S-prime, (P :_R N) disjoint from S implies P meet N S-prime in N"),
    "lemma-2.20": (verify_lemma_2_20, "product of m-systems is an m-system of the product ring"),
    "lemma-2.21": (verify_lemma_2_21, "S-prime ideals of R_1 x R_2 decompose factorwise"),
    "thm-2.22": (verify_thm_2_22, "S-prime submodules of M_1 x M_2 decompose factorwise"),
    "rem-3.1": (verify_rem_3_1, "S-Noetherian heredity to submodules and monotonicity in S"),
    "prop-3.2": (verify_prop_3_2, "multiplication M: S-prime submodules S-finite implies prime submodules S-finite"),
    "cor-3.3": (verify_cor_3_3, "multiplication M: colon S-finite with (s, I) gives N<s> inside MI inside N"),
    "modes": (verify_modes, "uniform witness implies per-pair witness"),
}

# hypothesis toggles for search_counterexamples: "<id>/<flag>"
DROPPABLE = {
    "thm-2.12/smult": ("thm-2.12", "smult"),
    "thm-2.13/smult": ("thm-2.13", "smult"),
    "thm-2.13/sprime": ("thm-2.13", "sprime"),
    "thm-2.16/ker": ("thm-2.16", "ker"),
    "def-2.2/disjoint": (None, "disjoint"),
}


def theorem_ids():
    return list(VERIFIERS)


def run_theorem(tid, corpus: Corpus = None, drop=(), **kwargs) -> TheoremReport:
    corpus = corpus or Corpus()
    try:
        fn, statement = VERIFIERS[tid]
    except KeyError:
        raise KeyError(f"unknown theorem id {tid!r}") from None
    rep = TheoremReport(tid, statement, corpus.spec.seed,
                        corpus={"digest": corpus.spec.digest(),
                                "rings": len(corpus.rings), "mode": corpus.spec.mode})
    t0 = time.perf_counter()
    fn(corpus, rep, drop=frozenset(drop), **kwargs)
    rep.elapsed_s = time.perf_counter() - t0
    return rep


def run_verify(which="all", corpus: Corpus = None, n_max=None):
    """Yield one report per statement in registry order."""
    corpus = corpus or Corpus()
    ids = theorem_ids() if which == "all" else [which]
    for tid in ids:
        kw = {"n_max": n_max} if tid == "thm-2.13" and n_max is not None else {}
        yield run_theorem(tid, corpus, **kw)


def search_counterexamples(statement, corpus: Corpus = None) -> TheoremReport:
    """Re-run a verifier with one hypothesis removed; violations are the product."""
    corpus = corpus or Corpus()
    try:
        tid, flag = DROPPABLE[statement]
    except KeyError:
        raise KeyError(f"unknown toggle {statement!r}; choose from {sorted(DROPPABLE)}") from None
    if tid is None:
        return _search_disjointness(corpus, statement)
    rep = run_theorem(tid, corpus, drop={flag})
    rep.theorem = statement
    rep.statement = f"{rep.statement} [without {flag}]"
    return rep


def _search_disjointness(corpus, statement):
    """Feed non-disjoint (M, P, S) to the S-prime predicate; each guard error is a finding."""
    from .errors import NotDisjointError
    from .predicates import is_s_prime_submodule
    from .substructures import MSystem, Submodule
    rep = TheoremReport(statement, "S-prime check without the disjointness precondition",
                        corpus.spec.seed, corpus={"digest": corpus.spec.digest()})
    t0 = time.perf_counter()
    for r, m, ms in corpus.cases():
        for p in _proper_subs(m):
            for s in ms:
                if _disjoint(m, p, s):
                    continue
                rep.instances += 1
                try:
                    is_s_prime_submodule(m, Submodule(m, p), MSystem(r, s))
                except NotDisjointError as exc:
                    rep.violate(**_where(m, s, P=p), error=type(exc).__name__)
    rep.elapsed_s = time.perf_counter() - t0
    return rep
