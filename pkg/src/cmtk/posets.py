"""Finite posets and lattices: order complexes, Möbius functions, ranks,
geometric-lattice recognition and characteristic polynomials.

The order relation is kept as reflexive up-set and down-set bitmasks per
element, computed once from the cover relation at construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Iterable

from .complex import SimplicialComplex, bits, label_key
from .errors import CmtkError


@dataclass(frozen=True)
class Polynomial:
    """Polynomial in z with exact coefficients, ``coeffs[k]`` multiplies z^k."""

    coeffs: tuple

    @classmethod
    def from_terms(cls, terms: dict[int, int | Fraction]) -> "Polynomial":
        if not terms:
            return cls(())
        out = [0] * (max(terms) + 1)
        for k, c in terms.items():
            out[k] += c
        while out and out[-1] == 0:
            out.pop()
        return cls(tuple(out))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        return sum(c * z**k for k, c in enumerate(self.coeffs))

    def __str__(self):
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            num = str(mag) if (mag != 1 or k == 0) else ""
            term = num + mono
            if not parts:
                parts.append(("-" if c < 0 else "") + term)
            else:
                parts.append(f" {sign} {term}")
        return "".join(parts) or "0"


class FinitePoset:
    """Finite poset given by its cover relation.

    ``rank`` optionally fixes the rank function (used for subposets that
    inherit ranks from an ambient lattice); otherwise ranks are heights above
    the minimal elements, defined when the poset is graded.
    """

    def __init__(self, elements: Iterable[Hashable], covers: Iterable[tuple], rank: dict | None = None):
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise CmtkError("duplicate poset elements")
        n = len(self.elements)
        self._up_cov: list[list[int]] = [[] for _ in range(n)]
        self._down_cov: list[list[int]] = [[] for _ in range(n)]
        cover_set = set()
        for a, b in covers:
            try:
                i, j = self.index[a], self.index[b]
            except KeyError as exc:
                raise CmtkError(f"cover mentions unknown element {exc.args[0]!r}") from None
            if i == j:
                raise CmtkError(f"element {a!r} covers itself")
            if (i, j) in cover_set:
                continue
            cover_set.add((i, j))
            self._up_cov[i].append(j)
            self._down_cov[j].append(i)
        self._topo = self._toposort()
        self.up = [0] * n
        for i in reversed(self._topo):
            m = 1 << i
            for j in self._up_cov[i]:
                m |= self.up[j]
            self.up[i] = m
        self.down = [0] * n
        for i in self._topo:
            m = 1 << i
            for j in self._down_cov[i]:
                m |= self.down[j]
            self.down[i] = m
        for i, j in cover_set:
            if any(self.up[k] >> j & 1 for k in self._up_cov[i] if k != j):
                raise CmtkError(
                    f"({self.elements[i]!r}, {self.elements[j]!r}) is implied by other covers"
                )
        self._rank_override = None if rank is None else dict(rank)
        self._mobius_rows: dict[int, dict[int, int]] = {}
        self._height = self._heights()

    def _toposort(self) -> list[int]:
        n = len(self.elements)
        indeg = [len(self._down_cov[i]) for i in range(n)]
        order = [i for i in range(n) if indeg[i] == 0]
        k = 0
        while k < len(order):
            for j in self._up_cov[order[k]]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    order.append(j)
            k += 1
        if len(order) != n:
            raise CmtkError("cover relation has a cycle")
        return order

    def _heights(self) -> list[int]:
        h = [0] * len(self.elements)
        for i in self._topo:
            for j in self._up_cov[i]:
                h[j] = max(h[j], h[i] + 1)
        return h

    @classmethod
    def from_order(cls, elements: Iterable[Hashable], less: callable, rank: dict | None = None) -> "FinitePoset":
        """Build from a strict order predicate; covers are computed."""
        elements = list(elements)
        lt = {(a, b) for a in elements for b in elements if a != b and less(a, b)}
        covers = [
            (a, b) for (a, b) in lt
            if not any((a, c) in lt and (c, b) in lt for c in elements)
        ]
        return cls(elements, covers, rank)

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"{type(self).__name__}({len(self.elements)} elements)"

    @property
    def covers(self) -> list[tuple]:
        return [
            (self.elements[i], self.elements[j])
            for i in range(len(self.elements)) for j in self._up_cov[i]
        ]

    def leq(self, x, y) -> bool:
        return bool(self.up[self.index[x]] >> self.index[y] & 1)

    def lt(self, x, y) -> bool:
        return x != y and self.leq(x, y)

    def minimal(self) -> list:
        return [self.elements[i] for i in range(len(self.elements)) if not self._down_cov[i]]

    def maximal(self) -> list:
        return [self.elements[i] for i in range(len(self.elements)) if not self._up_cov[i]]

    def _elements_of(self, mask: int) -> list:
        return [self.elements[i] for i in bits(mask)]

    def induced(self, subset: Iterable[Hashable], rank: dict | None = None) -> "FinitePoset":
        """Induced subposet; covers are recomputed from the order."""
        keep = [x for x in self.elements if x in set(subset)]
        mask = sum(1 << self.index[x] for x in keep)
        covers = []
        for x in keep:
            i = self.index[x]
            above = self.up[i] & mask & ~(1 << i)
            for j in bits(above):
                between = above & self.down[j] & ~(1 << j)
                if not between:
                    covers.append((x, self.elements[j]))
        if rank is None and self._rank_override is not None:
            rank = {x: self._rank_override[x] for x in keep}
        return FinitePoset(keep, covers, rank)

    def maximal_chains(self) -> list[list]:
        chains = []
        stack = [[i] for i in range(len(self.elements)) if not self._down_cov[i]]
        while stack:
            chain = stack.pop()
            ups = self._up_cov[chain[-1]]
            if not ups:
                chains.append([self.elements[i] for i in chain])
            for j in ups:
                stack.append(chain + [j])
        return chains

    def is_graded(self) -> bool:
        """All maximal chains have the same length."""
        n = len(self.elements)
        if n == 0:
            return True
        lo = [0] * n
        hi = [0] * n
        for i in reversed(self._topo):
            ups = self._up_cov[i]
            if ups:
                lo[i] = 1 + min(lo[j] for j in ups)
                hi[i] = 1 + max(hi[j] for j in ups)
        mins = [i for i in range(n) if not self._down_cov[i]]
        return min(lo[i] for i in mins) == max(hi[i] for i in mins)

    def rank(self, x) -> int:
        if self._rank_override is not None:
            return self._rank_override[x]
        return self._height[self.index[x]]

    def _require_graded(self, what: str):
        if self._rank_override is None and not self.is_graded():
            raise CmtkError(f"{what} requires a graded poset")

    def mobius(self, x, y) -> int:
        """μ(x, y) by the downward recursion, one cached row per lower element."""
        if not self.leq(x, y):
            raise CmtkError(f"mobius requires {x!r} <= {y!r}")
        i = self.index[x]
        row = self._mobius_rows.get(i)
        if row is None:
            row = self._mobius_row(i)
            self._mobius_rows[i] = row
        return row[self.index[y]]

    def _mobius_row(self, i: int) -> dict[int, int]:
        row = {i: 1}
        above = self.up[i]
        for k in self._topo:
            if k == i or not above >> k & 1:
                continue
            row[k] = -sum(row[w] for w in bits(above & self.down[k] & ~(1 << k)))
        return row

    def interval(self, x, y) -> "FinitePoset":
        if not self.leq(x, y):
            raise CmtkError(f"interval requires {x!r} <= {y!r}")
        mask = self.up[self.index[x]] & self.down[self.index[y]]
        return self.induced(self._elements_of(mask))

    def to_json(self) -> dict:
        return {"elements": list(self.elements), "covers": [list(c) for c in self.covers]}


class Lattice(FinitePoset):
    """Finite lattice with precomputed join and meet tables.

    Construction fails with CmtkError if some pair lacks a join or a meet.
    """

    def __init__(self, elements, covers, rank=None):
        super().__init__(elements, covers, rank)
        n = len(self.elements)
        if n == 0:
            raise CmtkError("not a lattice: empty poset")
        self._join = [[0] * n for _ in range(n)]
        self._meet = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                self._join[i][j] = self._join[j][i] = self._extremum(self.up[i] & self.up[j], self.up, "join", i, j)
                self._meet[i][j] = self._meet[j][i] = self._extremum(self.down[i] & self.down[j], self.down, "meet", i, j)
        mins, maxs = self.minimal(), self.maximal()
        self.bottom, self.top = mins[0], maxs[0]
        self.atoms = [self.elements[j] for j in self._up_cov[self.index[self.bottom]]]

    def _extremum(self, common: int, cone: list[int], what: str, i: int, j: int) -> int:
        for k in bits(common):
            if cone[k] & common == common:
                return k
        raise CmtkError(
            f"not a lattice: no {what} of {self.elements[i]!r} and {self.elements[j]!r}"
        )

    def join(self, x, y):
        return self.elements[self._join[self.index[x]][self.index[y]]]

    def meet(self, x, y):
        return self.elements[self._meet[self.index[x]][self.index[y]]]

    @property
    def rank_of_top(self) -> int:
        return self.rank(self.top)

    def interval(self, x, y) -> "Lattice":
        p = super().interval(x, y)
        return Lattice(p.elements, p.covers)


def order_complex(p: FinitePoset) -> SimplicialComplex:
    """Chains of P; the facets are the maximal chains."""
    return SimplicialComplex(p.maximal_chains())


def mobius(p: FinitePoset, x, y) -> int:
    return p.mobius(x, y)


def is_geometric(lat: Lattice) -> bool:
    """Semimodular (rank inequality on all pairs) and atomistic."""
    if not lat.is_graded():
        return False
    els = lat.elements
    rk = {x: lat.rank(x) for x in els}
    for a in range(len(els)):
        for b in range(a + 1, len(els)):
            x, y = els[a], els[b]
            if rk[x] + rk[y] < rk[lat.meet(x, y)] + rk[lat.join(x, y)]:
                return False
    for x in els:
        acc = lat.bottom
        for a in lat.atoms:
            if lat.leq(a, x):
                acc = lat.join(acc, a)
        if acc != x:
            return False
    return True


def characteristic_polynomial(lat: Lattice) -> Polynomial:
    """Σ_x μ(0̂, x) z^{r - ρ(x)}."""
    lat._require_graded("characteristic_polynomial")
    r = lat.rank(lat.top)
    terms: dict[int, int] = {}
    for x in lat.elements:
        k = r - lat.rank(x)
        terms[k] = terms.get(k, 0) + lat.mobius(lat.bottom, x)
    return Polynomial.from_terms(terms)


def rank_selection(p: FinitePoset, keep_ranks: Iterable[int]) -> FinitePoset:
    p._require_graded("rank_selection")
    keep = set(keep_ranks)
    return p.induced([x for x in p.elements if p.rank(x) in keep])


def proper_part(lat: Lattice) -> FinitePoset:
    """Strip 0̂ and 1̂; the remaining elements keep their lattice ranks."""
    lat._require_graded("proper_part")
    rest = [x for x in lat.elements if x != lat.bottom and x != lat.top]
    return lat.induced(rest, rank={x: lat.rank(x) for x in rest})


def interval(p: FinitePoset, x, y) -> FinitePoset:
    return p.interval(x, y)


def boolean_lattice(n: int) -> Lattice:
    """Subsets of {1..n} ordered by inclusion."""
    from itertools import combinations

    els = [frozenset(c) for k in range(n + 1) for c in combinations(range(1, n + 1), k)]
    covers = [(a, a | {v}) for a in els for v in range(1, n + 1) if v not in a]
    return Lattice(sorted(els, key=label_key), covers)


def poset_from_json(obj: dict) -> FinitePoset:
    try:
        elements = obj["elements"]
        covers = [tuple(c) for c in obj.get("covers", [])]
    except (KeyError, TypeError):
        raise CmtkError("poset JSON needs 'elements' and 'covers'") from None
    for c in covers:
        if len(c) != 2:
            raise CmtkError(f"cover {list(c)!r} is not a pair")
    return FinitePoset(elements, covers)
