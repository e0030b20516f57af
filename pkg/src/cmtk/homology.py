"""Reduced simplicial homology over Z, Q and F_p.

Everything is exact: boundary maps are sparse integer matrices, integral
homology comes from the Smith normal form, field homology from ranks computed
by exact elimination (fraction-free over Q, modular over F_p).
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

from .complex import SimplicialComplex, all_faces, bits
from .errors import CmtkError


@dataclass(frozen=True)
class Coeff:
    """Coefficient ring: ``Z``, ``Q`` or ``F_p``."""

    kind: str  # "Z", "Q" or "F"
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "F"):
            raise CmtkError(f"unknown coefficient kind {self.kind!r}")
        if self.kind == "F":
            if not 2 <= self.p < 2**31 or not _is_prime(self.p):
                raise CmtkError(f"F_p needs a prime p < 2^31, got {self.p}")
        elif self.p:
            raise CmtkError("p only applies to F_p")

    @classmethod
    def parse(cls, text: str) -> "Coeff":
        """Accepts ``z``, ``q``, ``f<p>`` and ``fp:<p>`` (case-insensitive)."""
        t = text.strip().lower()
        if t == "z":
            return ZZ
        if t == "q":
            return QQ
        for prefix in ("fp:", "f"):
            if t.startswith(prefix) and t[len(prefix):].isdigit():
                return cls("F", int(t[len(prefix):]))
        raise CmtkError(f"cannot parse coefficient spec {text!r}")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def characteristic(self) -> int:
        return self.p

    def __str__(self):
        return {"Z": "z", "Q": "q"}.get(self.kind) or f"f{self.p}"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


ZZ = Coeff("Z")
QQ = Coeff("Q")


def GF(p: int) -> Coeff:
    return Coeff("F", p)


@dataclass(frozen=True)
class IntegerMatrix:
    """Sparse integer matrix; ``entries`` maps (row, col) to a nonzero int."""

    rows: int
    cols: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise CmtkError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
            if v == 0 or not isinstance(v, int):
                raise CmtkError("entries must be nonzero ints")

    @classmethod
    def from_dense(cls, rows: list[list[int]]) -> "IntegerMatrix":
        m = len(rows)
        n = len(rows[0]) if m else 0
        return cls(m, n, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def columns(self) -> list[dict[int, int]]:
        cols: list[dict[int, int]] = [{} for _ in range(self.cols)]
        for (i, j), v in self.entries.items():
            cols[j][i] = v
        return cols

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise CmtkError("dimension mismatch")
        by_row: dict[int, list] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        acc: dict = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                acc[i, j] = acc.get((i, j), 0) + a * b
        return IntegerMatrix(self.rows, other.cols, {key: v for key, v in acc.items() if v})

    def is_zero(self) -> bool:
        return not self.entries


# -- ranks and Smith normal form ------------------------------------------


def _rank_mod_p(vectors: list[dict[int, int]], p: int) -> int:
    pivots: dict[int, dict[int, int]] = {}
    for vec in vectors:
        v = {k: x % p for k, x in vec.items() if x % p}
        while v:
            c = min(v)
            piv = pivots.get(c)
            if piv is None:
                inv = pow(v[c], -1, p)
                pivots[c] = {k: x * inv % p for k, x in v.items()}
                break
            f = v[c]
            for k, x in piv.items():
                y = (v.get(k, 0) - f * x) % p
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
    return len(pivots)


def _rank_rational(vectors: list[dict[int, int]]) -> int:
    # fraction-free elimination; rows are kept primitive to bound growth
    pivots: dict[int, dict[int, int]] = {}
    for vec in vectors:
        v = dict(vec)
        while v:
            c = min(v)
            piv = pivots.get(c)
            if piv is None:
                pivots[c] = v
                break
            a, b = piv[c], v[c]
            w = {}
            for k in v.keys() | piv.keys():
                y = a * v.get(k, 0) - b * piv.get(k, 0)
                if y:
                    w[k] = y
            g = 0
            for y in w.values():
                g = gcd(g, y)
            v = {k: y // g for k, y in w.items()} if g > 1 else w
    return len(pivots)


def matrix_rank(m: IntegerMatrix, coeff: Coeff = QQ) -> int:
    """Rank over Q (also the rank over Z) or over F_p."""
    if coeff.kind == "F":
        return _rank_mod_p(m.columns(), coeff.p)
    return _rank_rational(m.columns())


@dataclass(frozen=True)
class SmithForm:
    invariant_factors: tuple[int, ...]
    rank: int


def _snf_dense(a: list[list[int]]) -> list[int]:
    m = len(a)
    n = len(a[0]) if m else 0
    diag: list[int] = []
    t = 0
    while t < m and t < n:
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        a[t], a[i] = a[i], a[t]
        if j != t:
            for row in a:
                row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                x = a[i][t]
                if x:
                    q = x // p
                    ri, rt = a[i], a[t]
                    for j in range(t, n):
                        if rt[j]:
                            ri[j] -= q * rt[j]
                    if ri[t]:
                        clean = False
            rt = a[t]
            for j in range(t + 1, n):
                x = rt[j]
                if x:
                    q = x // p
                    for row in a[t:]:
                        if row[t]:
                            row[j] -= q * row[t]
                    if rt[j]:
                        clean = False
            if clean:
                bad = next(
                    (i for i in range(t + 1, m) if any(a[i][j] % p for j in range(t + 1, n))),
                    None,
                )
                if bad is None:
                    break
                for j in range(t, n):
                    a[t][j] += a[bad][j]
                continue
            # a smaller remainder appeared in row t or column t: make it the pivot
            cand = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
            cand += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
            _, i, j = min(cand)
            a[t], a[i] = a[i], a[t]
            if j != t:
                for row in a:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def smith_normal_form(m: IntegerMatrix) -> SmithForm:
    """Invariant factors d_1 | d_2 | ... | d_r (all positive) and the rank r.

    Pivots on the entry of least absolute value to keep intermediate entries
    small.
    """
    if not m.entries:
        return SmithForm((), 0)
    # drop empty rows/columns; they do not affect the factors
    rows = sorted({i for i, _ in m.entries})
    cols = sorted({j for _, j in m.entries})
    ri = {r: k for k, r in enumerate(rows)}
    ci = {c: k for k, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in rows]
    for (i, j), v in m.entries.items():
        dense[ri[i]][ci[j]] = v
    diag = _snf_dense(dense)
    return SmithForm(tuple(diag), len(diag))


# -- boundary maps and homology --------------------------------------------


def _faces_by_dim(masks) -> list[list[int]]:
    faces = all_faces(masks)
    top = max(f.bit_count() for f in faces)
    out: list[list[int]] = [[] for _ in range(top + 1)]
    for f in faces:
        out[f.bit_count()].append(f)
    # lexicographic order of sorted vertex-index tuples
    for lst in out:
        lst.sort(key=lambda f: list(bits(f)))
    return out  # out[s] holds faces with s vertices, i.e. dimension s - 1


def _boundaries(masks) -> tuple[list[list[int]], list[IntegerMatrix]]:
    by_size = _faces_by_dim(masks)
    mats = []
    for s in range(1, len(by_size)):
        lower = {f: i for i, f in enumerate(by_size[s - 1])}
        entries = {}
        for j, f in enumerate(by_size[s]):
            for pos, b in enumerate(bits(f)):
                entries[lower[f & ~(1 << b)], j] = -1 if pos % 2 else 1
        mats.append(IntegerMatrix(len(by_size[s - 1]), len(by_size[s]), entries))
    return by_size, mats


def boundary_matrices(cx: SimplicialComplex) -> list[IntegerMatrix]:
    """[∂_0, ∂_1, ..., ∂_dim]; ∂_0 is the augmentation onto the empty face.

    ∂_k has rows indexed by (k-1)-faces and columns by k-faces, both in
    lexicographic order of sorted vertex indices; omitting the i-th smallest
    vertex carries sign (-1)^i.
    """
    return _boundaries(cx.facet_masks)[1]


@dataclass(frozen=True)
class HomologyProfile:
    """Reduced homology in dimensions -1..dim.

    ``groups[i]`` is ``(rank, torsion)`` for dimension ``i``; over a field the
    rank is the Betti number and torsion is always empty.
    """

    coeff: Coeff
    groups: dict

    @property
    def dims(self) -> list[int]:
        return sorted(self.groups)

    def rank(self, i: int) -> int:
        return self.groups.get(i, (0, ()))[0]

    def torsion(self, i: int) -> tuple[int, ...]:
        return self.groups.get(i, (0, ()))[1]

    betti = rank

    def vanishes(self, i: int) -> bool:
        r, t = self.groups.get(i, (0, ()))
        return r == 0 and not t

    def is_acyclic(self) -> bool:
        return all(self.vanishes(i) for i in self.groups)

    def to_json(self) -> dict:
        return {str(i): {"rank": r, "torsion": list(t)} for i, (r, t) in sorted(self.groups.items())}


@lru_cache(maxsize=500_000)
def homology_from_key(key: tuple[int, frozenset[int]], coeff: Coeff) -> HomologyProfile:
    """Homology of the complex with structural key ``(n, facet masks)``."""
    by_size, mats = _boundaries(key[1])
    top = len(by_size) - 1  # dim + 1
    ranks = [0] * (top + 2)  # ranks[s] = rank of ∂ leaving dimension s-1
    factors: list[tuple[int, ...]] = [()] * (top + 2)
    for s, mat in enumerate(mats, start=1):
        if coeff.kind == "Z":
            snf = smith_normal_form(mat)
            ranks[s] = snf.rank
            factors[s] = tuple(d for d in snf.invariant_factors if d > 1)
        else:
            ranks[s] = matrix_rank(mat, coeff)
    groups = {}
    for s in range(top + 1):
        free = len(by_size[s]) - ranks[s] - ranks[s + 1]
        groups[s - 1] = (free, factors[s + 1])
    return HomologyProfile(coeff, groups)


def reduced_homology(cx: SimplicialComplex, coeff: Coeff = ZZ) -> HomologyProfile:
    return homology_from_key(cx.key, coeff)


# -- fundamental group -----------------------------------------------------


class PiOne(enum.Enum):
    TRIVIAL = "trivial"
    NONTRIVIAL = "nontrivial"
    UNKNOWN = "unknown"


def _reduce(word: list[int]) -> list[int]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    # cyclic reduction
    i, j = 0, len(out) - 1
    while i < j and out[i] == -out[j]:
        i += 1
        j -= 1
    return out[i:j + 1]


def _inverse(word: list[int]) -> list[int]:
    return [-x for x in reversed(word)]


def edge_path_presentation(cx: SimplicialComplex) -> tuple[int, list[list[int]]]:
    """Generators (non-tree edges, numbered from 1) and triangle relators."""
    by_size = _faces_by_dim(cx.facet_masks)
    edges = [tuple(bits(e)) for e in (by_size[2] if len(by_size) > 2 else [])]
    adj: dict[int, list[int]] = {v: [] for v in range(cx.n)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    tree = set()
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                tree.add((min(u, v), max(u, v)))
                queue.append(v)
    gen = {}
    for e in edges:
        if e not in tree:
            gen[e] = len(gen) + 1

    def word(u, v):
        g = gen.get((u, v))
        return [g] if g else []

    relators = []
    for tri in by_size[3] if len(by_size) > 3 else []:
        a, b, c = bits(tri)
        r = _reduce(word(a, b) + word(b, c) + _inverse(word(a, c)))
        if r:
            relators.append(r)
    return len(gen), relators


def _tietze_trivial(ngens: int, relators: list[list[int]], max_passes: int, max_length: int) -> bool:
    alive = set(range(1, ngens + 1))
    rels = [r for r in relators if r]
    for _ in range(max_passes):
        if not alive:
            return True
        rels.sort(key=len)
        done = False
        for idx, r in enumerate(rels):
            counts: dict[int, int] = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            once = [g for g, c in counts.items() if c == 1]
            if not once:
                continue
            g = once[0]
            k = next(i for i, x in enumerate(r) if abs(x) == g)
            u, v = r[:k], r[k + 1:]
            # u g v = 1  =>  g = u^-1 v^-1 ; u g^-1 v = 1  =>  g = v u
            image = _inverse(u) + _inverse(v) if r[k] > 0 else v + u
            image_inv = _inverse(image)
            new_rels = []
            for j, s in enumerate(rels):
                if j == idx:
                    continue
                w = []
                for x in s:
                    if x == g:
                        w.extend(image)
                    elif x == -g:
                        w.extend(image_inv)
                    else:
                        w.append(x)
                w = _reduce(w)
                if len(w) > max_length:
                    break
                if w:
                    new_rels.append(w)
            else:
                rels = new_rels
                alive.discard(g)
                done = True
                break
        if not done:
            return not alive
    return not alive


def fundamental_group_status(cx: SimplicialComplex, max_passes: int = 10_000, max_relator_length: int = 400) -> PiOne:
    """Sound but incomplete decision of whether π_1 is trivial.

    NONTRIVIAL is reported only when H_1(Δ; Z) ≠ 0; TRIVIAL only when the
    edge-path presentation collapses under bounded Tietze moves. Anything
    else is UNKNOWN.
    """
    if not cx.is_connected():
        raise CmtkError("fundamental_group_status requires a connected complex")
    h = reduced_homology(cx, ZZ)
    if not h.vanishes(1):
        return PiOne.NONTRIVIAL
    ngens, relators = edge_path_presentation(cx)
    if _tietze_trivial(ngens, relators, max_passes, max_relator_length):
        return PiOne.TRIVIAL
    return PiOne.UNKNOWN
