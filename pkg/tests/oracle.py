"""Brute-force reference evaluator.

Works on plain nested lists (``radd``, ``rmul``, ``madd``, ``act``) and Python
sets, straight from the definitions.  Imports nothing from ``sprime``.
"""

from itertools import combinations


class Oracle:
    def __init__(self, radd, rmul, madd, act, rzero=0, mzero=0):
        self.radd, self.rmul = radd, rmul
        self.madd, self.act = madd, act
        self.R = range(len(radd))
        self.M = range(len(madd))
        self.rzero, self.mzero = rzero, mzero
        self._ideal_cache = {}
        self._ideals = None
        self._subs = None
        self._memo = {}

    # closures -----------------------------------------------------------

    def _add_close(self, xs, add):
        xs = set(xs)
        while True:
            new = {add[a][b] for a in xs for b in xs} - xs
            if not new:
                return frozenset(xs)
            xs |= new

    def ideal_gen(self, s):
        """Smallest two-sided ideal containing s."""
        if s in self._ideal_cache:
            return self._ideal_cache[s]
        xs = {s, self.rzero}
        while True:
            new = set()
            for x in xs:
                for r in self.R:
                    new.add(self.rmul[r][x])
                    new.add(self.rmul[x][r])
            for a in xs:
                for b in xs:
                    new.add(self.radd[a][b])
            if new <= xs:
                break
            xs |= new
        self._ideal_cache[s] = frozenset(xs)
        return self._ideal_cache[s]

    def submodule_gen(self, gens):
        xs = set(gens) | {self.mzero}
        while True:
            new = {self.act[x][r] for x in xs for r in self.R}
            new |= {self.madd[a][b] for a in xs for b in xs}
            if new <= xs:
                return frozenset(xs)
            xs |= new

    # enumeration by filtering every subset -------------------------------

    def _all_subsets_with_zero(self, universe, zero):
        rest = [x for x in universe if x != zero]
        for k in range(len(rest) + 1):
            for c in combinations(rest, k):
                yield frozenset((zero,) + c)

    def submodules(self):
        if self._subs is None:
            out = []
            for s in self._all_subsets_with_zero(self.M, self.mzero):
                if all(self.madd[a][b] in s for a in s for b in s) and \
                        all(self.act[x][r] in s for x in s for r in self.R):
                    out.append(s)
            self._subs = out
        return self._subs

    def ideals(self):
        """Two-sided ideals: brute-force filter for small rings, otherwise every
        sum of principal ideals (each ideal is the sum of the <x> it contains)."""
        if self._ideals is None:
            if len(self.R) <= 12:
                out = []
                for s in self._all_subsets_with_zero(self.R, self.rzero):
                    if all(self.radd[a][b] in s for a in s for b in s) and \
                            all(self.rmul[x][r] in s and self.rmul[r][x] in s
                                for x in s for r in self.R):
                        out.append(s)
            else:
                found = {frozenset({self.rzero})}
                frontier = list(found)
                principal = {self.ideal_gen(x) for x in self.R}
                while frontier:
                    nxt = []
                    for a in frontier:
                        for b in principal:
                            j = self._add_close(a | b, self.radd)
                            if j not in found:
                                found.add(j)
                                nxt.append(j)
                    frontier = nxt
                out = list(found)
            self._ideals = out
        return self._ideals

    # definitions ----------------------------------------------------------

    def colon(self, P):
        key = ("colon", P)
        if key not in self._memo:
            self._memo[key] = frozenset(r for r in self.R if all(self.act[m][r] in P for m in self.M))
        return self._memo[key]

    def pairs(self, P):
        """All (m, a) with mRa ⊆ P."""
        key = ("pairs", P)
        if key not in self._memo:
            self._memo[key] = [(m, a) for m in self.M for a in self.R if self.mRa_in(P, m, a)]
        return self._memo[key]

    def mRa_in(self, P, m, a):
        return all(self.act[m][self.rmul[r][a]] in P for r in self.R)

    def is_msystem(self, S):
        return all(any(self.rmul[self.rmul[a][r]][b] in S for r in self.R) for a in S for b in S)

    def is_prime(self, P):
        if len(P) == len(self.M):
            return False
        col = self.colon(P)
        return all(a in col or m in P for m, a in self.pairs(P))

    def _ok_at(self, P, col, m, a, s):
        I = self.ideal_gen(s)
        a_side = all(self.rmul[a][x] in col for x in I)
        m_side = all(self.act[m][x] in P for x in I)
        return a_side or m_side

    def is_s_prime(self, P, S, mode):
        """None when the definition does not apply (improper or S meets the colon)."""
        col = self.colon(P)
        if len(P) == len(self.M) or col & set(S):
            return None
        pairs = self.pairs(P)
        if mode == "uniform":
            return any(all(self._ok_at(P, col, m, a, s) for m, a in pairs) for s in S)
        return all(any(self._ok_at(P, col, m, a, s) for s in S) for m, a in pairs)

    def module_times_ideal(self, N, I):
        return self._add_close({self.act[n][x] for n in N for x in I} | {self.mzero}, self.madd)

    def is_multiplication(self):
        full = frozenset(self.M)
        return all(self.module_times_ideal(full, self.colon(P)) == P for P in self.submodules())

    def is_s_multiplication(self, S):
        full = frozenset(self.M)
        products = {I: self.module_times_ideal(full, I) for I in self.ideals()}
        for N in self.submodules():
            found = False
            for s in S:
                ns = self.module_times_ideal(N, self.ideal_gen(s))
                if any(ns <= MI <= N for MI in products.values()):
                    found = True
                    break
            if not found:
                return False
        return True

    def is_s_finite(self, N, S, max_gens):
        limit = len(N) if max_gens is None else max_gens
        for s in S:
            ns = self.module_times_ideal(N, self.ideal_gen(s))
            for k in range(limit + 1):
                for gens in combinations(sorted(N), k):
                    F = self.submodule_gen(gens)
                    if ns <= F <= N:
                        return True
        return False


class RingOracle:
    """Ideal-level definitions for a ring given by plain tables."""

    def __init__(self, radd, rmul, zero=0):
        self.o = Oracle(radd, rmul, radd, rmul, zero, zero)
        self.mul = rmul

    def is_prime_ideal(self, P):
        R = self.o.R
        if len(P) == len(R):
            return False
        return all(a in P or b in P for a in R for b in R
                   if all(self.mul[self.mul[a][r]][b] in P for r in R))

    def _pairs(self, P):
        R = self.o.R
        key = ("ring-pairs", P)
        if key not in self.o._memo:
            self.o._memo[key] = [(a, b) for a in R for b in R
                                 if all(self.mul[self.mul[a][r]][b] in P for r in R)]
        return self.o._memo[key]

    def is_s_prime_ideal(self, P, S, mode):
        """Element form: aRb ⊆ P forces a<s> ⊆ P or b<s> ⊆ P."""
        R = self.o.R
        if len(P) == len(R) or set(P) & set(S):
            return None
        pairs = self._pairs(P)

        def ok(a, b, s):
            I = self.o.ideal_gen(s)
            return all(self.mul[a][x] in P for x in I) or all(self.mul[b][x] in P for x in I)

        if mode == "uniform":
            return any(all(ok(a, b, s) for a, b in pairs) for s in S)
        return all(any(ok(a, b, s) for s in S) for a, b in pairs)

    def product(self, A, B):
        return self.o._add_close({self.mul[a][b] for a in A for b in B} | {self.o.rzero},
                                 self.o.radd)

    def is_s_prime_ideal_by_ideals(self, P, S):
        """Ideal form: some s with AB ⊆ P forcing A<s> ⊆ P or B<s> ⊆ P."""
        if len(P) == len(self.o.R) or set(P) & set(S):
            return None
        ideals = self.o.ideals()
        pairs = [(A, B) for A in ideals for B in ideals if self.product(A, B) <= P]
        for s in S:
            I = self.o.ideal_gen(s)
            if all(self.product(A, I) <= P or self.product(B, I) <= P for A, B in pairs):
                return True
        return False
