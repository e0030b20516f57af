"""Finite abstract simplicial complexes.

A complex is stored by its facets only. Vertices are opaque labels kept in
a canonical sorted order; every face is a bitmask over that order (bit ``i``
set means ``vertices[i]`` is in the face). Python ints are unbounded, so the
same representation serves complexes of any size.
"""
from __future__ import annotations

from collections import Counter, deque
from math import comb
from typing import Hashable, Iterable, Iterator

from .errors import CmtkError, NotAFace, NotPure

Label = Hashable


def label_key(v):
    """Total order on the label types we accept: ints, strings, tuples, sets."""
    if isinstance(v, bool):
        raise TypeError("bool is not a valid vertex label")
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    if isinstance(v, (frozenset, set)):
        return (2, tuple(sorted(label_key(x) for x in v)))
    if isinstance(v, tuple):
        return (3, tuple(label_key(x) for x in v))
    raise TypeError(f"unsupported vertex label {v!r}")


def submasks(m: int) -> Iterator[int]:
    s = m
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & m


def bits(m: int) -> Iterator[int]:
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def maximal_masks(masks: Iterable[int]) -> frozenset[int]:
    """Inclusion-maximal members of a family of bitmasks."""
    kept: list[int] = []
    for m in sorted(set(masks), key=lambda x: -x.bit_count()):
        if not any(m & k == m for k in kept):
            kept.append(m)
    return frozenset(kept)


def all_faces(masks: Iterable[int]) -> set[int]:
    out: set[int] = set()
    for f in masks:
        if f in out:
            continue
        out.update(submasks(f))
    return out


def compress(masks: Iterable[int]) -> tuple[int, frozenset[int], list[int]]:
    """Relabel masks onto 0..k-1 over the bits actually used.

    Returns (k, new masks, list of old bit positions in order).
    """
    masks = list(masks)
    used = 0
    for m in masks:
        used |= m
    old = list(bits(used))
    pos = {b: i for i, b in enumerate(old)}
    new = frozenset(sum(1 << pos[b] for b in bits(m)) for m in masks)
    return len(old), new, old


class SimplicialComplex:
    """Immutable simplicial complex given by its facets.

    The empty complex ``{∅}`` (one empty facet, no vertices) is the smallest
    complex; the void complex with no faces at all is not representable.
    """

    __slots__ = ("_vertices", "_index", "_facets", "_hash")

    def __init__(self, facets: Iterable[Iterable[Label]] = (), vertices: Iterable[Label] | None = None):
        facet_sets = [frozenset(f) for f in facets]
        used = set().union(*facet_sets) if facet_sets else set()
        if vertices is not None:
            vertices = list(vertices)
            if len(set(vertices)) != len(vertices):
                raise CmtkError("duplicate vertex labels")
            extra = set(vertices) - used
            if extra:
                raise CmtkError(f"vertices not in any facet: {sorted(extra, key=label_key)}")
            missing = used - set(vertices)
            if missing:
                raise CmtkError(f"facets use undeclared vertices: {sorted(missing, key=label_key)}")
        verts = tuple(sorted(used, key=label_key))
        index = {v: i for i, v in enumerate(verts)}
        masks = [sum(1 << index[v] for v in f) for f in facet_sets] or [0]
        self._set(verts, maximal_masks(masks))

    def _set(self, verts, masks):
        self._vertices = verts
        self._index = {v: i for i, v in enumerate(verts)}
        self._facets = masks
        self._hash = None

    @classmethod
    def _from_masks(cls, vertices: tuple, masks: frozenset[int]) -> "SimplicialComplex":
        # masks must already be an antichain covering every vertex
        obj = cls.__new__(cls)
        obj._set(tuple(vertices), masks if masks else frozenset([0]))
        return obj

    @classmethod
    def from_facets(cls, candidate_facets: Iterable[Iterable[Label]]) -> "SimplicialComplex":
        return cls(candidate_facets)

    # basic accessors

    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def facet_masks(self) -> frozenset[int]:
        return self._facets

    @property
    def key(self) -> tuple[int, frozenset[int]]:
        """Label-free structural key, used for memoizing homology."""
        return (len(self._vertices), self._facets)

    def to_mask(self, face: Iterable[Label]) -> int:
        try:
            return sum(1 << self._index[v] for v in set(face))
        except KeyError as exc:
            raise NotAFace(f"not a face: unknown vertex {exc.args[0]!r}") from None

    def to_face(self, mask: int) -> frozenset:
        return frozenset(self._vertices[i] for i in bits(mask))

    @property
    def facets(self) -> frozenset[frozenset]:
        return frozenset(self.to_face(m) for m in self._facets)

    def sorted_facets(self) -> list[list]:
        out = [sorted(self.to_face(m), key=label_key) for m in self._facets]
        return sorted(out, key=lambda f: [label_key(v) for v in f])

    @property
    def dim(self) -> int:
        return max(m.bit_count() for m in self._facets) - 1

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._vertices == other._vertices and self._facets == other._facets

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._vertices, self._facets))
        return self._hash

    def __repr__(self):
        return f"SimplicialComplex({self.sorted_facets()!r})"

    # faces

    def is_face(self, face: Iterable[Label]) -> bool:
        face = set(face)
        if not face <= set(self._vertices):
            return False
        m = self.to_mask(face)
        return any(m & f == m for f in self._facets)

    def face_masks(self) -> set[int]:
        return all_faces(self._facets)

    def faces(self, k: int | None = None) -> set[frozenset]:
        """All faces, or only those of dimension ``k``."""
        masks = self.face_masks()
        if k is not None:
            masks = {m for m in masks if m.bit_count() == k + 1}
        return {self.to_face(m) for m in masks}

    def f_vector(self) -> list[int]:
        """(f_{-1}, f_0, ..., f_dim)."""
        counts = Counter(m.bit_count() for m in self.face_masks())
        return [counts[s] for s in range(self.dim + 2)]

    # constructions

    def _sub(self, masks: Iterable[int]) -> "SimplicialComplex":
        k, new, old = compress(masks)
        return SimplicialComplex._from_masks(tuple(self._vertices[b] for b in old), new)

    def link_mask(self, f: int) -> "SimplicialComplex":
        if not any(f & m == f for m in self._facets):
            raise NotAFace(f"not a face: {sorted(self.to_face(f), key=label_key)}")
        return self._sub(m & ~f for m in self._facets if m & f == f)

    def link(self, face: Iterable[Label]) -> "SimplicialComplex":
        face = set(face)
        if not face <= set(self._vertices):
            raise NotAFace(f"not a face: {sorted(face, key=label_key)}")
        return self.link_mask(self.to_mask(face))

    def induced_mask(self, e: int) -> "SimplicialComplex":
        return self._sub(maximal_masks(m & e for m in self._facets))

    def induced(self, subset: Iterable[Label]) -> "SimplicialComplex":
        subset = set(subset)
        if not subset <= set(self._vertices):
            raise CmtkError(f"not a vertex subset: {sorted(subset - set(self._vertices), key=label_key)}")
        return self.induced_mask(self.to_mask(subset))

    def cone(self, apex: Label) -> "SimplicialComplex":
        if apex in self._index:
            raise CmtkError(f"apex {apex!r} is already a vertex")
        return SimplicialComplex(f | {apex} for f in self.facets)

    def join(self, other: "SimplicialComplex") -> "SimplicialComplex":
        clash = set(self._vertices) & set(other.vertices)
        if clash:
            raise CmtkError(f"vertex label collision in join: {sorted(clash, key=label_key)}")
        return SimplicialComplex(f | g for f in self.facets for g in other.facets)

    # combinatorial predicates

    def is_pure(self) -> bool:
        return len({m.bit_count() for m in self._facets}) == 1

    def _codim_one_counts(self) -> Counter:
        counts: Counter = Counter()
        for m in self._facets:
            for b in bits(m):
                counts[m & ~(1 << b)] += 1
        return counts

    def is_thin(self) -> bool:
        """Every codimension-one face lies in exactly two facets."""
        if not self.is_pure():
            raise NotPure("is_thin")
        return all(c == 2 for c in self._codim_one_counts().values())

    def dual_graph(self) -> dict[frozenset, set[frozenset]]:
        """Facets adjacent when they share a face of codimension one in both."""
        facets = list(self._facets)
        adj = {f: set() for f in facets}
        for i, f in enumerate(facets):
            for g in facets[i + 1:]:
                s = f.bit_count()
                if g.bit_count() == s and (f & g).bit_count() == s - 1:
                    adj[f].add(g)
                    adj[g].add(f)
        return {self.to_face(f): {self.to_face(g) for g in nb} for f, nb in adj.items()}

    def is_dually_connected(self) -> bool:
        adj = self.dual_graph()
        start = next(iter(adj))
        seen = {start}
        queue = deque([start])
        while queue:
            for g in adj[queue.popleft()]:
                if g not in seen:
                    seen.add(g)
                    queue.append(g)
        return len(seen) == len(adj)

    def is_pseudomanifold(self) -> bool:
        if not self.is_pure():
            raise NotPure("is_pseudomanifold")
        return self.is_thin() and self.is_dually_connected()

    def is_connected(self) -> bool:
        """Connectivity of the underlying space; ``{∅}`` counts as disconnected."""
        if not self._vertices:
            return False
        comp = 0
        frontier = next(iter(self._facets))
        while frontier:
            comp |= frontier
            frontier = 0
            for m in self._facets:
                if m & comp and m & ~comp:
                    frontier |= m
        return comp == (1 << len(self._vertices)) - 1

    def reduced_euler_characteristic(self) -> int:
        # f_vector()[k] counts faces of dimension k - 1
        return sum(f if k % 2 else -f for k, f in enumerate(self.f_vector()))

    def h_vector(self) -> list[int]:
        if not self.is_pure():
            raise NotPure("h_vector")
        f = self.f_vector()
        d = self.dim + 1
        return [
            sum((-1) ** (k - i) * comb(d - i, k - i) * f[i] for i in range(k + 1))
            for k in range(d + 1)
        ]


def from_facets(candidate_facets: Iterable[Iterable[Label]]) -> SimplicialComplex:
    return SimplicialComplex(candidate_facets)


def link(cx: SimplicialComplex, face: Iterable[Label]) -> SimplicialComplex:
    return cx.link(face)


def induced(cx: SimplicialComplex, subset: Iterable[Label]) -> SimplicialComplex:
    return cx.induced(subset)


def cone(cx: SimplicialComplex, apex: Label) -> SimplicialComplex:
    return cx.cone(apex)


def join(a: SimplicialComplex, b: SimplicialComplex) -> SimplicialComplex:
    return a.join(b)
