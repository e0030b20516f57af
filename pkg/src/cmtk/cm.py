"""Cohen-Macaulay, Gorenstein* and related properties of complexes.

The tests here are topological: every property is decided from the reduced
homology of links (Reisner's criterion and its Gorenstein* analogue), with a
second structural route for Gorenstein* (CM + thin [+ Euler characteristic])
used as a cross-check.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .complex import SimplicialComplex, bits, compress
from .errors import NotPure, OracleDisagreement
from .homology import GF, QQ, ZZ, Coeff, HomologyProfile, PiOne, fundamental_group_status, homology_from_key

DEFAULT_SHELLING_BUDGET = 10**6


class Tri(enum.Enum):
    """Three-valued truth: partial checks answer UNKNOWN instead of guessing."""

    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, value: bool) -> "Tri":
        return cls.TRUE if value else cls.FALSE

    @property
    def definite(self) -> bool:
        return self is not Tri.UNKNOWN

    def __and__(self, other: "Tri") -> "Tri":
        return tri_all([self, other])

    def __bool__(self):
        raise TypeError("Tri has no boolean value; compare against Tri.TRUE")


def tri_all(values: Iterable[Tri]) -> Tri:
    out = Tri.TRUE
    for v in values:
        if v is Tri.FALSE:
            return Tri.FALSE
        if v is Tri.UNKNOWN:
            out = Tri.UNKNOWN
    return out


def _links(cx: SimplicialComplex, include_facets: bool = False) -> Iterator[tuple[int, tuple]]:
    """(face mask, structural key of its link), faces by decreasing dimension."""
    facets = cx.facet_masks
    seen: set[int] = set()
    faces = sorted(cx.face_masks(), key=lambda m: -m.bit_count())
    for f in faces:
        if f in facets and not include_facets:
            continue
        if f in seen:
            continue
        seen.add(f)
        n, masks, _ = compress(m & ~f for m in facets if m & f == f)
        yield f, (n, masks if masks else frozenset([0]))


def _link_dim(key) -> int:
    return max(m.bit_count() for m in key[1]) - 1


def _below_top_vanishes(h: HomologyProfile, top: int) -> bool:
    return all(h.vanishes(i) for i in range(-1, top))


def is_cm(cx: SimplicialComplex, coeff: Coeff = QQ) -> bool:
    """Reisner: all links have vanishing reduced homology below their dimension.

    Over Z vanishing means the trivial group (no free part, no torsion).
    Facets have link {∅} and pass trivially.
    """
    for _, key in _links(cx):
        if not _below_top_vanishes(homology_from_key(key, coeff), _link_dim(key)):
            return False
    return True


def _sphere_like(h: HomologyProfile, top: int) -> bool:
    return _below_top_vanishes(h, top) and h.rank(top) == 1 and not h.torsion(top)


def is_gorenstein_star(cx: SimplicialComplex, coeff: Coeff = QQ) -> bool:
    """Every link has the coefficient-homology of a sphere of its own dimension."""
    for _, key in _links(cx):
        if not _sphere_like(homology_from_key(key, coeff), _link_dim(key)):
            return False
    return True


def euler_condition(cx: SimplicialComplex) -> bool:
    """reduced Euler characteristic == (-1)^dim"""
    d = cx.dim
    return cx.reduced_euler_characteristic() == (1 if d % 2 == 0 else -1)


def is_gorenstein_star_v2(cx: SimplicialComplex, coeff: Coeff = QQ) -> bool:
    """Structural route: CM and thin, plus the Euler condition when char ≠ 2.

    Non-pure complexes are not thin and give False.
    """
    if not cx.is_pure() or not cx.is_thin():
        return False
    if coeff.kind != "Z" and coeff.p != 2 and not euler_condition(cx):
        return False
    return is_cm(cx, coeff)


def gorenstein_core(cx: SimplicialComplex) -> tuple[SimplicialComplex, int]:
    """Strip cone points (vertices lying in every facet)."""
    common = ~0
    for m in cx.facet_masks:
        common &= m
    common &= (1 << cx.n) - 1
    core = cx.induced_mask(((1 << cx.n) - 1) & ~common)
    return core, common.bit_count()


def is_gorenstein(cx: SimplicialComplex, coeff: Coeff = QQ) -> bool:
    core, _ = gorenstein_core(cx)
    return core.n == 0 or is_gorenstein_star(core, coeff)


def is_homotopy_cm(cx: SimplicialComplex, max_passes: int = 10_000) -> Tri:
    """CM over Z and every link of dimension >= 2 simply connected."""
    if not is_cm(cx, ZZ):
        return Tri.FALSE
    verdict = Tri.TRUE
    # CM over Z already forces links of dimension >= 1 to be connected
    for f, key in _links(cx):
        if _link_dim(key) < 2:
            continue
        status = _pi_one_of_key(key, max_passes)
        if status is PiOne.NONTRIVIAL:
            return Tri.FALSE
        if status is PiOne.UNKNOWN:
            verdict = Tri.UNKNOWN
    return verdict


_PI_CACHE: dict = {}


def _pi_one_of_key(key, max_passes: int) -> PiOne:
    hit = _PI_CACHE.get((key, max_passes))
    if hit is None:
        link = SimplicialComplex._from_masks(tuple(range(key[0])), key[1])
        hit = fundamental_group_status(link, max_passes=max_passes)
        if len(_PI_CACHE) > 100_000:
            _PI_CACHE.clear()
        _PI_CACHE[key, max_passes] = hit
    return hit


def is_homotopy_gorenstein_star(cx: SimplicialComplex, max_passes: int = 10_000) -> Tri:
    if not cx.is_pure() or not cx.is_thin():
        return Tri.FALSE
    return is_homotopy_cm(cx, max_passes)


# -- shellability ----------------------------------------------------------


@dataclass(frozen=True)
class ShellingResult:
    status: Tri
    order: tuple[frozenset, ...] | None
    nodes: int


def is_shellable(cx: SimplicialComplex, budget: int = DEFAULT_SHELLING_BUDGET) -> ShellingResult:
    """Backtracking search for a shelling order.

    A facet may follow a set of facets when its intersection with their union
    is pure of codimension one in it. That condition depends only on the set
    already placed, so dead-end sets are memoized.
    """
    if not cx.is_pure():
        raise NotPure("is_shellable")
    facets = sorted(cx.facet_masks, key=lambda m: list(bits(m)))
    m = len(facets)
    size = facets[0].bit_count()
    full = (1 << m) - 1
    dead: set[int] = set()
    nodes = 0
    order: list[int] = []

    def fits(g: int, placed: int) -> bool:
        meets = {facets[i] & facets[g] for i in bits(placed)}
        ridges = [x for x in meets if x.bit_count() == size - 1]
        return all(any(x & r == x for r in ridges) for x in meets)

    def search(placed: int) -> bool | None:
        nonlocal nodes
        if placed == full:
            return True
        if placed in dead:
            return False
        nodes += 1
        if nodes > budget:
            return None
        cands = [g for g in range(m) if not placed >> g & 1 and (not placed or fits(g, placed))]
        unknown = False
        for g in cands:
            order.append(g)
            res = search(placed | 1 << g)
            if res:
                return True
            order.pop()
            if res is None:
                unknown = True
                break
        if unknown:
            return None
        dead.add(placed)
        return False

    import sys

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, m + 100))
    try:
        res = search(0)
    finally:
        sys.setrecursionlimit(limit)
    if res:
        return ShellingResult(Tri.TRUE, tuple(cx.to_face(facets[g]) for g in order), nodes)
    return ShellingResult(Tri.FALSE if res is False else Tri.UNKNOWN, None, nodes)


# -- classification --------------------------------------------------------

HIERARCHY = ("a", "b", "c", "d", "e", "f", "g", "h")
CHAIN = ("a", "c", "e", "f", "g", "h")  # (b) and (d) are never decided


def torsion_primes(cx: SimplicialComplex) -> set[int]:
    """Primes dividing some torsion coefficient of some link's integral homology."""
    primes: set[int] = set()
    for _, key in _links(cx):
        for dims in homology_from_key(key, ZZ).groups.values():
            for t in dims[1]:
                p = 2
                while t > 1:
                    if t % p == 0:
                        primes.add(p)
                        t //= p
                    else:
                        p += 1
    return primes


def gorenstein_star_some_field(cx: SimplicialComplex) -> bool:
    """Gorenstein* over at least one field.

    Link homology over F_p agrees with Q unless p divides link torsion, so
    Q and those finitely many primes cover every characteristic.
    """
    return any(is_gorenstein_star(cx, c) for c in [QQ] + [GF(p) for p in sorted(torsion_primes(cx))])


@dataclass
class ClassificationReport:
    cm_over: dict[Coeff, bool]
    gorenstein_star_over: dict[Coeff, bool]
    homotopy_cm: Tri
    homotopy_gorenstein_star: Tri
    pure: bool
    thin: bool
    pseudomanifold: bool
    euler_condition: bool
    shellable: Tri
    hierarchy: dict[str, Tri]
    shelling_order: tuple | None = None
    gorenstein_over: dict[Coeff, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        def fmap(d):
            return {str(k): v for k, v in d.items()}

        return {
            "cm_over": fmap(self.cm_over),
            "gorenstein_star_over": fmap(self.gorenstein_star_over),
            "gorenstein_over": fmap(self.gorenstein_over),
            "homotopy_cm": self.homotopy_cm.value,
            "homotopy_gorenstein_star": self.homotopy_gorenstein_star.value,
            "pure": self.pure,
            "thin": self.thin,
            "pseudomanifold": self.pseudomanifold,
            "euler_condition": self.euler_condition,
            "shellable": self.shellable.value,
            "hierarchy": {k: v.value for k, v in self.hierarchy.items()},
        }


def check_chain(hierarchy: dict[str, Tri]) -> None:
    """Raise if a definite TRUE is followed by a definite FALSE further down."""
    for i, a in enumerate(CHAIN):
        if hierarchy[a] is not Tri.TRUE:
            continue
        for b in CHAIN[i + 1:]:
            if hierarchy[b] is Tri.FALSE:
                raise OracleDisagreement(f"hierarchy violated: ({a}) holds but ({b}) fails")


def classify(
    cx: SimplicialComplex,
    fields: Iterable[Coeff] = (QQ, GF(2), ZZ),
    shelling_budget: int = DEFAULT_SHELLING_BUDGET,
) -> ClassificationReport:
    fields = list(dict.fromkeys(fields))
    pure = cx.is_pure()
    thin = pure and cx.is_thin()
    pseudo = thin and cx.is_dually_connected()
    euler = euler_condition(cx)

    cm_over, gstar_over, gor_over = {}, {}, {}
    for c in fields:
        cm_over[c] = is_cm(cx, c)
        a = is_gorenstein_star(cx, c)
        b = is_gorenstein_star_v2(cx, c)
        if a != b:
            raise OracleDisagreement(f"Gorenstein* over {c}: link route {a}, structural route {b}")
        if a and not (cm_over[c] and pseudo):
            raise OracleDisagreement(f"Gorenstein* over {c} without CM and pseudomanifold")
        gstar_over[c] = a
        gor_over[c] = is_gorenstein(cx, c)

    if pure:
        shell = is_shellable(cx, shelling_budget)
    else:
        shell = ShellingResult(Tri.FALSE, None, 0)
    hcm = is_homotopy_cm(cx)
    hgs = hcm & Tri.of(thin)
    gstar_z = gstar_over[ZZ] if ZZ in gstar_over else is_gorenstein_star(cx, ZZ)

    hierarchy = {
        "a": Tri.of(thin) & shell.status,
        "b": Tri.UNKNOWN,
        "c": hgs,
        "d": Tri.UNKNOWN,
        "e": Tri.of(gstar_z),
        "f": Tri.of(gorenstein_star_some_field(cx)),
        "g": Tri.of(pseudo and euler),
        "h": Tri.of(thin),
    }
    check_chain(hierarchy)
    return ClassificationReport(
        cm_over=cm_over,
        gorenstein_star_over=gstar_over,
        homotopy_cm=hcm,
        homotopy_gorenstein_star=hgs,
        pure=pure,
        thin=thin,
        pseudomanifold=pseudo,
        euler_condition=euler,
        shellable=shell.status,
        hierarchy=hierarchy,
        shelling_order=shell.order,
        gorenstein_over=gor_over,
    )
