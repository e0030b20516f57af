"""Stanley-Reisner ideals and graded Betti numbers via Hochster's formula.

No free resolution is ever built: β_{i,j} is the sum, over vertex subsets E
with |E| = j, of the reduced Betti number of the induced subcomplex in degree
j - i - 1. Depth, projective dimension and type are read off the table.
"""
from __future__ import annotations

import os
from collections import Counter, namedtuple
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb

from .complex import SimplicialComplex, bits, compress, maximal_masks
from .errors import CmtkError
from .homology import QQ, Coeff, homology_from_key

DEFAULT_MAX_VERTICES = 20
_PARALLEL_MIN_VERTICES = 14

DepthType = namedtuple("DepthType", "depth pd type d")


@dataclass(frozen=True)
class MonomialIdeal:
    """Squarefree monomial ideal given by the supports of its generators."""

    generators: frozenset[frozenset]


def minimal_nonfaces(cx: SimplicialComplex) -> MonomialIdeal:
    faces = cx.face_masks()
    out = set()
    for f in faces:
        for v in range(cx.n):
            g = f | 1 << v
            if g in faces or g == f:
                continue
            if all(g & ~(1 << b) in faces for b in bits(g)):
                out.add(g)
    return MonomialIdeal(frozenset(cx.to_face(g) for g in out))


@dataclass(frozen=True)
class BettiTable:
    n: int
    entries: dict  # (i, j) -> beta_{i,j}, zero entries omitted

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries.get(ij, 0)

    @property
    def pd(self) -> int:
        return max(i for i, _ in self.entries)

    def total(self, i: int) -> int:
        return sum(b for (k, _), b in self.entries.items() if k == i)

    def k_polynomial(self) -> list[int]:
        """Coefficients of Σ (-1)^i β_{i,j} t^j, indexed by j = 0..n."""
        out = [0] * (self.n + 1)
        for (i, j), b in self.entries.items():
            out[j] += (-1) ** i * b
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "pd": self.pd,
            "betti": [[i, j, b] for (i, j), b in sorted(self.entries.items())],
        }

    def to_text(self) -> str:
        """Macaulay-style grid: row j - i, column i."""
        rows = sorted({j - i for i, j in self.entries})
        cols = range(self.pd + 1)
        cells = {(j - i, i): b for (i, j), b in self.entries.items()}
        width = max(len(str(self.total(i))) for i in cols) + 1
        lines = [" " * 6 + "".join(f"{i:>{width}}" for i in cols)]
        lines.append(" " * 6 + "".join(f"{'-':>{width}}" for _ in cols))
        for r in rows:
            line = f"{r:>5}:" + "".join(f"{cells[r, i] if (r, i) in cells else '.':>{width}}" for i in cols)
            lines.append(line)
        lines.append("total:" + "".join(f"{self.total(i):>{width}}" for i in cols))
        return "\n".join(lines)


def _check(cx: SimplicialComplex, coeff: Coeff, max_vertices: int):
    if not coeff.is_field:
        raise CmtkError("field required: Hochster's formula uses dimensions over a field")
    if cx.n > max_vertices:
        raise CmtkError(f"complex has {cx.n} vertices, above the cap of {max_vertices}")


def _betti_range(facets: frozenset[int], coeff: Coeff, start: int, stop: int) -> Counter:
    acc: Counter = Counter()
    for e in range(start, stop):
        j = e.bit_count()
        key = compress(maximal_masks(m & e for m in facets))[:2]
        h = homology_from_key(key, coeff)
        for k, (rank, _) in h.groups.items():
            if rank:
                acc[j - k - 1, j] += rank
    return acc


def _betti_job(args) -> Counter:
    return _betti_range(*args)


def _workers(requested: int | None) -> int:
    if requested is not None:
        return max(1, requested)
    env = os.environ.get("CMTK_THREADS")
    return max(1, int(env)) if env and env.isdigit() else 1


def hochster_betti(
    cx: SimplicialComplex,
    coeff: Coeff = QQ,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    workers: int | None = None,
) -> BettiTable:
    """Graded Betti numbers of k[Δ] by enumerating all 2^n induced subcomplexes.

    Work is split into contiguous subset ranges whose partial tables are
    summed; ``workers`` (default: env ``CMTK_THREADS``, else 1) processes are
    used once n is large enough to pay for them.
    """
    _check(cx, coeff, max_vertices)
    total = 1 << cx.n
    nw = _workers(workers)
    if nw > 1 and cx.n >= _PARALLEL_MIN_VERTICES:
        step = -(-total // (nw * 4))
        jobs = [(cx.facet_masks, coeff, s, min(s + step, total)) for s in range(0, total, step)]
        acc: Counter = Counter()
        with ProcessPoolExecutor(nw) as pool:
            for part in pool.map(_betti_job, jobs):
                acc.update(part)
    else:
        acc = _betti_range(cx.facet_masks, coeff, 0, total)
    return BettiTable(cx.n, {ij: b for ij, b in acc.items() if b})


def depth_type(cx: SimplicialComplex, coeff: Coeff = QQ, max_vertices: int = DEFAULT_MAX_VERTICES) -> DepthType:
    table = hochster_betti(cx, coeff, max_vertices)
    pd = table.pd
    return DepthType(depth=cx.n - pd, pd=pd, type=table.total(pd), d=cx.dim + 1)


def is_cm_algebraic(cx: SimplicialComplex, coeff: Coeff = QQ, max_vertices: int = DEFAULT_MAX_VERTICES) -> bool:
    dt = depth_type(cx, coeff, max_vertices)
    return dt.depth == dt.d


def is_gorenstein_algebraic(cx: SimplicialComplex, coeff: Coeff = QQ, max_vertices: int = DEFAULT_MAX_VERTICES) -> bool:
    dt = depth_type(cx, coeff, max_vertices)
    return dt.depth == dt.d and dt.type == 1


def is_gorenstein_star_algebraic(cx: SimplicialComplex, coeff: Coeff = QQ, max_vertices: int = DEFAULT_MAX_VERTICES) -> bool:
    table = hochster_betti(cx, coeff, max_vertices)
    pd = table.pd
    if cx.n - pd != cx.dim + 1 or table.total(pd) != 1:
        return False
    # E = V is the only subset of size n, so column j = n holds H̃(Δ)
    return any(b for (_, j), b in table.entries.items() if j == cx.n)


def hilbert_numerator(cx: SimplicialComplex) -> list[int]:
    """Numerator of the Hilbert series over the denominator (1 - t)^n.

    Σ_i f_{i-1} t^i / (1 - t)^i, cleared to (1 - t)^n, from face counts alone.
    """
    n = cx.n
    out = [0] * (n + 1)
    for i, f in enumerate(cx.f_vector()):
        # f * t^i * (1 - t)^(n - i)
        for k in range(n - i + 1):
            out[i + k] += f * comb(n - i, k) * (-1) ** k
    return out
