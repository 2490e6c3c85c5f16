"""Permutation groups given by generators, with a Schreier-Sims stabilizer chain.

Permutations are tuples in image form: ``p[i]`` is the image of ``i``.
Composition follows function composition, ``compose(a, b)[i] == a[b[i]]``
(apply ``b`` first).
"""

from __future__ import annotations

import itertools
import json
import math
from functools import cached_property

from grt._validation import check_permutation
from grt.errors import CapExceededError

DEFAULT_CAP = 10**6


def identity(n):
    return tuple(range(n))


def compose(a, b):
    return tuple(a[x] for x in b)


def inverse(a):
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


def is_identity(p):
    return all(i == x for i, x in enumerate(p))


def cycles(p):
    """Non-trivial cycles of ``p``, each starting at its smallest point."""
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        out.append(tuple(cyc))
    return out


class _StabChain:
    """Deterministic Schreier-Sims: base, strong generators, transversals."""

    def __init__(self, n, generators, base_prefix=()):
        self.n = n
        self.base = list(base_prefix)
        self.strong = []
        for g in generators:
            if is_identity(g):
                continue
            if all(g[b] == b for b in self.base):
                self._new_base_point(g)
            self.strong.append(g)
        self.transversals = [self._transversal(i) for i in range(len(self.base))]
        self._complete()

    def _new_base_point(self, g):
        self.base.append(next(i for i in range(self.n) if g[i] != i and i not in self.base))

    def level_generators(self, i):
        fixed = self.base[:i]
        return [s for s in self.strong if all(s[b] == b for b in fixed)]

    def _transversal(self, i):
        gens = self.level_generators(i)
        root = self.base[i]
        trans = {root: identity(self.n)}
        queue = [root]
        for p in queue:
            u = trans[p]
            for s in gens:
                q = s[p]
                if q not in trans:
                    trans[q] = compose(s, u)
                    queue.append(q)
        return trans

    def sift(self, g, start=0):
        for i in range(start, len(self.base)):
            beta = g[self.base[i]]
            u = self.transversals[i].get(beta)
            if u is None:
                return g, i
            g = compose(inverse(u), g)
        return g, len(self.base)

    def _complete(self):
        i = len(self.base) - 1
        while i >= 0:
            restarted = False
            gens = self.level_generators(i)
            trans = self.transversals[i]
            for beta, u in list(trans.items()):
                for x in gens:
                    h = compose(inverse(trans[x[beta]]), compose(x, u))
                    residue, j = self.sift(h, i + 1)
                    if is_identity(residue):
                        continue
                    if j == len(self.base):
                        self._new_base_point(residue)
                        self.transversals.append(None)
                    self.strong.append(residue)
                    for level in range(j + 1):
                        self.transversals[level] = self._transversal(level)
                    i = j
                    restarted = True
                    break
                if restarted:
                    break
            if not restarted:
                i -= 1

    @property
    def order(self):
        return math.prod(len(t) for t in self.transversals)

    def contains(self, g):
        residue, _ = self.sift(tuple(g))
        return is_identity(residue)


class PermGroup:
    """Permutation group on ``{0..n-1}`` generated by ``generators``.

    The order comes from a Schreier-Sims stabilizer chain, so no full
    enumeration is needed; :attr:`elements` enumerates on demand and refuses
    when the order exceeds ``cap``.
    """

    def __init__(self, n, generators=(), cap=DEFAULT_CAP):
        self.n = int(n)
        gens = []
        for g in generators:
            p = check_permutation(g, self.n)
            if not is_identity(p) and p not in gens:
                gens.append(p)
        self.generators = tuple(gens)
        self.cap = cap

    def __repr__(self):
        return f"PermGroup(n={self.n}, generators={len(self.generators)}, order={self.order})"

    @cached_property
    def _chain(self):
        return _StabChain(self.n, self.generators)

    @property
    def order(self):
        return self._chain.order

    def __contains__(self, perm):
        return self._chain.contains(check_permutation(perm, self.n))

    @cached_property
    def elements(self):
        """All elements, deterministic order, identity first."""
        if self.order > self.cap:
            raise CapExceededError(f"group order {self.order} exceeds enumeration cap {self.cap}")
        levels = [[t[k] for k in sorted(t)] for t in self._chain.transversals]
        out = []
        for combo in itertools.product(*levels):
            g = identity(self.n)
            for u in combo:
                g = compose(g, u)
            out.append(g)
        out.sort(key=lambda p: (not is_identity(p), p))
        return tuple(out)

    def orbit(self, i):
        seen = {i}
        queue = [i]
        for p in queue:
            for g in self.generators:
                q = g[p]
                if q not in seen:
                    seen.add(q)
                    queue.append(q)
        return sorted(seen)

    def stabilizer(self, i):
        """Point stabilizer, generated by the strong generators fixing ``i``."""
        chain = _StabChain(self.n, self.generators, base_prefix=(i,))
        return PermGroup(self.n, chain.level_generators(1), self.cap)

    def subgroup(self, generators):
        return PermGroup(self.n, generators, self.cap)

    def to_json(self):
        return json.dumps({"n": self.n, "order": self.order,
                           "generators": [list(g) for g in self.generators]})

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        return cls(obj["n"], [tuple(g) for g in obj["generators"]])
