"""Geometric lattices of flats and their weight filtrations.

Lattices come from exact rational point configurations (affine matroids),
simple graphs (cycle matroids) or uniform matroids. A weight on the atoms
extends additively to flats; the filtered poset keeps the flats whose weight
exceeds a threshold.
"""
from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Callable, Hashable, Iterable, Sequence

from .cm import Tri, is_cm, is_homotopy_cm
from .complex import bits, label_key
from .errors import CmtkError, NonGenericWeights, TheoremViolation
from .homology import ZZ
from .posets import FinitePoset, Lattice, Polynomial, order_complex


def exact_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank of a list of rational vectors by Gaussian elimination."""
    m = [list(map(Fraction, r)) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pr = m[rank]
        for i in range(rank + 1, len(m)):
            if m[i][c]:
                f = m[i][c] / pr[c]
                m[i] = [a - f * b for a, b in zip(m[i], pr)]
        rank += 1
    return rank


@dataclass(frozen=True)
class PointConfiguration:
    labels: tuple
    coords: tuple  # tuple of tuples of Fraction

    def __post_init__(self):
        if not self.labels:
            raise CmtkError("a point configuration needs at least one point")
        if len(set(self.labels)) != len(self.labels):
            raise CmtkError("point labels must be distinct")
        if len(self.coords) != len(self.labels):
            raise CmtkError("one coordinate vector per label")
        if len({len(c) for c in self.coords}) != 1:
            raise CmtkError("all coordinate vectors must have the same length")

    @classmethod
    def from_points(cls, points: dict | Iterable[tuple]) -> "PointConfiguration":
        items = list(points.items()) if isinstance(points, dict) else list(points)
        return cls(
            tuple(lbl for lbl, _ in items),
            tuple(tuple(Fraction(x) for x in c) for _, c in items),
        )

    def homogenized(self, i: int) -> tuple:
        return (Fraction(1),) + self.coords[i]

    def rank(self, idx: Iterable[int]) -> int:
        idx = list(idx)
        return exact_rank([self.homogenized(i) for i in idx]) if idx else 0


class GeometricLatticeOfFlats:
    """Lattice of flats of a simple matroid on ``atoms``.

    Flats are frozensets of atom labels. The underlying order is exposed as a
    :class:`Lattice` through :attr:`lattice`.
    """

    def __init__(self, atoms: Sequence[Hashable], closure: Callable[[int], int], name: str = ""):
        self.atoms = tuple(atoms)
        self.name = name
        self._closure_mask = closure
        self._index = {a: i for i, a in enumerate(self.atoms)}
        bottom = closure(0)
        if bottom:
            raise CmtkError("matroid has loops")
        for i, a in enumerate(self.atoms):
            if closure(1 << i) != 1 << i:
                raise CmtkError(f"matroid is not simple: {a!r} has a parallel element")
        rank = {0: 0}
        covers = set()
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for i in range(len(self.atoms)):
                    if x >> i & 1:
                        continue
                    y = closure(x | 1 << i)
                    covers.add((x, y))
                    if y not in rank:
                        rank[y] = rank[x] + 1
                        nxt.append(y)
            frontier = nxt
        self._masks = sorted(rank, key=lambda m: (rank[m], sorted(bits(m))))
        self._rank = rank
        self._covers = covers
        self.r = max(rank.values())

    def to_flat(self, mask: int) -> frozenset:
        return frozenset(self.atoms[i] for i in bits(mask))

    def to_mask(self, labels: Iterable[Hashable]) -> int:
        try:
            return sum(1 << self._index[a] for a in set(labels))
        except KeyError as exc:
            raise CmtkError(f"unknown atom {exc.args[0]!r}") from None

    @property
    def flats(self) -> list[frozenset]:
        return [self.to_flat(m) for m in self._masks]

    def rank(self, flat: Iterable[Hashable]) -> int:
        return self._rank[self.to_mask(flat)]

    def closure(self, labels: Iterable[Hashable]) -> frozenset:
        return self.to_flat(self._closure_mask(self.to_mask(labels)))

    def flats_of_rank(self, k: int) -> list[frozenset]:
        return [self.to_flat(m) for m in self._masks if self._rank[m] == k]

    @property
    def top(self) -> frozenset:
        return self.to_flat(self._masks[-1])

    @cached_property
    def lattice(self) -> Lattice:
        return Lattice(self.flats, [(self.to_flat(x), self.to_flat(y)) for x, y in self._covers])

    def __repr__(self):
        return f"GeometricLatticeOfFlats({self.name or len(self.atoms)} atoms, rank {self.r})"


def lattice_of_flats_from_points(config: PointConfiguration, name: str = "") -> GeometricLatticeOfFlats:
    """Affine matroid: rank of S is the linear rank of {(1, p) : p in S}."""
    n = len(config.labels)
    cache: dict[int, int] = {}

    def rank(mask: int) -> int:
        if mask not in cache:
            cache[mask] = config.rank(bits(mask))
        return cache[mask]

    def closure(mask: int) -> int:
        r = rank(mask)
        out = mask
        for i in range(n):
            if not mask >> i & 1 and rank(mask | 1 << i) == r:
                out |= 1 << i
        return out

    return GeometricLatticeOfFlats(config.labels, closure, name)


def lattice_of_flats_graphic(edges: Iterable[tuple], name: str = "") -> GeometricLatticeOfFlats:
    """Cycle matroid of a simple graph; atoms are edges ``(u, v)`` with u < v."""
    atoms = []
    for u, v in edges:
        if u == v:
            raise CmtkError(f"loop at {u!r}: graph must be simple")
        e = tuple(sorted((u, v), key=label_key))
        if e in atoms:
            raise CmtkError(f"multi-edge {e!r}: graph must be simple")
        atoms.append(e)

    def closure(mask: int) -> int:
        parent: dict = {}

        def find(x):
            while parent.get(x, x) != x:
                x = parent[x]
            return x

        for i in bits(mask):
            u, v = atoms[i]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        out = 0
        for i, (u, v) in enumerate(atoms):
            if mask >> i & 1 or find(u) == find(v):
                out |= 1 << i
        return out

    return GeometricLatticeOfFlats(atoms, closure, name)


def complete_graph_edges(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(1, n + 1), 2))


def uniform_matroid(n: int, r: int) -> GeometricLatticeOfFlats:
    """U_{r,n} on atoms 1..n: flats are sets of size < r and the full set."""
    if not 1 <= r <= n:
        raise CmtkError(f"uniform matroid needs 1 <= r <= n, got r={r}, n={n}")
    full = (1 << n) - 1

    def closure(mask: int) -> int:
        return mask if mask.bit_count() < r else full

    return GeometricLatticeOfFlats(tuple(range(1, n + 1)), closure, f"U_{r},{n}")


# -- weight filtrations ----------------------------------------------------


@dataclass(frozen=True)
class WeightedFiltration:
    """Atom weights on a lattice of flats plus a threshold t.

    With ``check_generic`` the constructor rejects weights under which two
    distinct nonempty flats share a weight.
    """

    lattice: GeometricLatticeOfFlats
    weights: dict
    threshold: Fraction = Fraction(0)
    check_generic: bool = True
    _flat_weights: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        weights = {a: Fraction(w) for a, w in self.weights.items()}
        missing = set(self.lattice.atoms) - set(weights)
        if missing:
            raise CmtkError(f"no weight for atoms {sorted(missing, key=label_key)}")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "threshold", Fraction(self.threshold))
        fw = {X: sum((weights[a] for a in X), Fraction(0)) for X in self.lattice.flats}
        object.__setattr__(self, "_flat_weights", fw)
        if self.check_generic:
            pair = self.collision()
            if pair:
                raise NonGenericWeights(pair[0], pair[1], fw[pair[0]])

    def weight(self, flat: Iterable[Hashable]) -> Fraction:
        return self._flat_weights[frozenset(flat)]

    @property
    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def collision(self) -> tuple[frozenset, frozenset] | None:
        """First pair of distinct nonempty flats with equal weight, if any."""
        seen: dict[Fraction, frozenset] = {}
        for X in self.lattice.flats:
            if not X:
                continue
            w = self._flat_weights[X]
            if w in seen:
                return seen[w], X
            seen[w] = X
        return None

    def all_collisions(self) -> list[tuple[frozenset, frozenset]]:
        groups: dict[Fraction, list] = {}
        for X in self.lattice.flats:
            if X:
                groups.setdefault(self._flat_weights[X], []).append(X)
        return [(g[0], Y) for g in groups.values() for Y in g[1:]]

    @property
    def is_generic(self) -> bool:
        return self.collision() is None

    def negated(self) -> "WeightedFiltration":
        return WeightedFiltration(
            self.lattice, {a: -w for a, w in self.weights.items()}, self.threshold, self.check_generic
        )

    def with_threshold(self, t) -> "WeightedFiltration":
        return WeightedFiltration(self.lattice, self.weights, Fraction(t), self.check_generic)

    def is_positive(self, flat) -> bool:
        return self.weight(flat) > self.threshold


def filtered_poset(w: WeightedFiltration) -> FinitePoset:
    """Flats of weight above t, always excluding 0̂, with lattice ranks kept."""
    lat = w.lattice
    keep = [X for X in lat.flats if X and w.weight(X) > w.threshold]
    return lat.lattice.induced(keep, rank={X: lat.rank(X) for X in keep})


def filtered_characteristic_polynomial(w: WeightedFiltration) -> Polynomial:
    """Σ_{x} μ(0̂, x) z^{r - ρ(x)} over the filtered poset with a bottom adjoined.

    The empty flat serves as the adjoined bottom; ρ is the rank in L.
    """
    lat = w.lattice
    keep = [X for X in lat.flats if X and w.weight(X) > w.threshold]
    bottom = frozenset()
    p = lat.lattice.induced([bottom] + keep)
    terms: dict[int, int] = {}
    for x in p.elements:
        k = lat.r - lat.rank(x)
        terms[k] = terms.get(k, 0) + p.mobius(bottom, x)
    return Polynomial.from_terms(terms)


@dataclass(frozen=True)
class FilteredCMReport:
    cm_over_z: bool
    dim_preserved: bool
    homotopy_status: Tri
    dimension: int
    expected_dimension: int

    def to_json(self) -> dict:
        return {
            "cm_over_z": self.cm_over_z,
            "dim_preserved": self.dim_preserved,
            "homotopy_status": self.homotopy_status.value,
            "dimension": self.dimension,
            "expected_dimension": self.expected_dimension,
        }


def check_filtered_cm(w: WeightedFiltration) -> FilteredCMReport:
    """Test that the filtered poset is CM over Z, homotopy CM, and full-dimensional.

    Requires t <= min(0, total weight). The comparison dimension is r - 2
    (chains of proper flats), or r - 1 when the top flat survives the filter.
    """
    lat = w.lattice
    bound = min(Fraction(0), w.total)
    if w.threshold > bound:
        raise CmtkError(f"threshold {w.threshold} exceeds min(0, total weight) = {bound}")
    p = filtered_poset(w)
    cx = order_complex(p)
    expected = lat.r - 2 + (1 if lat.top in p.index else 0)
    return FilteredCMReport(
        cm_over_z=is_cm(cx, ZZ),
        dim_preserved=cx.dim == expected,
        homotopy_status=is_homotopy_cm(cx),
        dimension=cx.dim,
        expected_dimension=expected,
    )


check_theorem_3_2 = check_filtered_cm


# -- walks among positive points --------------------------------------------


def positive_flat_graph(w: WeightedFiltration, k: int = 2) -> dict[Hashable, set]:
    """Graph on atoms above the threshold; p ~ q when some rank-k flat above
    the threshold contains both (for k = 2: the line through p and q)."""
    lat = w.lattice
    if not 1 < k < lat.r:
        raise CmtkError(f"rank k must satisfy 1 < k < {lat.r}, got {k}")
    verts = [a for a in lat.atoms if w.weight({a}) > w.threshold]
    adj: dict = {a: set() for a in verts}
    for X in lat.flats_of_rank(k):
        if w.weight(X) <= w.threshold:
            continue
        inside = [a for a in verts if a in X]
        for p, q in combinations(inside, 2):
            adj[p].add(q)
            adj[q].add(p)
    return adj


def _bfs(adj: dict, src) -> dict:
    dist = {src: 0}
    prev = {src: None}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in sorted(adj[u], key=label_key):
            if v not in dist:
                dist[v] = dist[u] + 1
                prev[v] = u
                queue.append(v)
    return prev


def _components(adj: dict) -> list[list]:
    seen: set = set()
    comps = []
    for s in sorted(adj, key=label_key):
        if s in seen:
            continue
        comp = list(_bfs(adj, s))
        seen.update(comp)
        comps.append(sorted(comp, key=label_key))
    return comps


def _require_connected(adj: dict):
    comps = _components(adj)
    if len(comps) > 1:
        raise TheoremViolation(
            f"positive flat graph is disconnected ({len(comps)} components)", components=comps
        )


def safe_walk(w: WeightedFiltration, p, q, k: int = 2) -> list:
    """Shortest walk between positive atoms through positive rank-k flats."""
    adj = positive_flat_graph(w, k)
    for x in (p, q):
        if x not in adj:
            raise CmtkError(f"{x!r} is not a positive atom")
    prev = _bfs(adj, p)
    if q not in prev:
        _require_connected(adj)
    path = [q]
    while path[-1] != p:
        path.append(prev[path[-1]])
    return path[::-1]


def diameter(w: WeightedFiltration, k: int = 2) -> int:
    adj = positive_flat_graph(w, k)
    _require_connected(adj)
    best = 0
    for s in adj:
        dist = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        best = max(best, max(dist.values()))
    return best


def point_line_graph(config: PointConfiguration, weights: dict) -> dict[Hashable, set]:
    """Positive point-line graph computed directly from collinearity.

    Independent of the lattice machinery: lines are maximal sets of points
    whose homogenized vectors have rank 2.
    """
    n = len(config.labels)
    wt = {a: Fraction(x) for a, x in weights.items()}
    lines = set()
    for i, j in combinations(range(n), 2):
        line = frozenset(
            k for k in range(n) if k in (i, j) or config.rank([i, j, k]) == 2
        )
        lines.add(line)
    pos = [i for i in range(n) if wt[config.labels[i]] > 0]
    adj = {config.labels[i]: set() for i in pos}
    for line in lines:
        if sum(wt[config.labels[k]] for k in line) <= 0:
            continue
        for i, j in combinations([k for k in line if k in pos], 2):
            adj[config.labels[i]].add(config.labels[j])
            adj[config.labels[j]].add(config.labels[i])
    return adj


# -- random weights and the diameter experiment -----------------------------


def random_generic_weights(
    lat: GeometricLatticeOfFlats, rng: random.Random, zero_sum: bool = True, spread: int = 10
) -> dict:
    """Integer atom weights, generic over flats, summing to zero if asked.

    Draws from [-spread, spread] and widens the range after repeated
    rejections.
    """
    atoms = lat.atoms
    tries = 0
    while True:
        ws = [rng.randint(-spread, spread) for _ in atoms]
        if zero_sum:
            ws[-1] = -sum(ws[:-1])
        cand = dict(zip(atoms, ws))
        if WeightedFiltration(lat, cand, check_generic=False).is_generic:
            return cand
        tries += 1
        if tries % 20 == 0:
            spread *= 2


def diameter_experiment(
    lattices: GeometricLatticeOfFlats | Iterable[GeometricLatticeOfFlats],
    n_draws: int,
    seed: int,
    k: int = 2,
) -> dict:
    """Diameters of positive flat graphs over seeded random zero-sum weights."""
    if isinstance(lattices, GeometricLatticeOfFlats):
        lattices = [lattices]
    rng = random.Random(seed)
    hist: Counter = Counter()
    per: dict[str, int] = {}
    for lat in lattices:
        for _ in range(n_draws):
            w = WeightedFiltration(lat, random_generic_weights(lat, rng))
            d = diameter(w, k)
            hist[d] += 1
            name = lat.name or repr(lat)
            per[name] = max(per.get(name, 0), d)
    return {
        "draws": sum(hist.values()),
        "max_diameter": max(hist) if hist else 0,
        "histogram": {str(d): c for d, c in sorted(hist.items())},
        "max_by_lattice": per,
    }
