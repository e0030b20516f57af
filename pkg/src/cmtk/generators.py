"""Standard complexes, bundled example data and random test corpora."""
from __future__ import annotations

import json
import random
from importlib import resources
from itertools import combinations

from .complex import SimplicialComplex

# Minimal 6-vertex triangulation of the real projective plane.
RP2_6_FACETS = [
    (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
    (2, 3, 5), (3, 4, 6), (2, 4, 5), (3, 5, 6), (2, 4, 6),
]


def simplex(n_vertices: int) -> SimplicialComplex:
    return SimplicialComplex([range(1, n_vertices + 1)])


def simplex_boundary(d: int) -> SimplicialComplex:
    """Boundary of the d-simplex: a (d-1)-sphere on d + 1 vertices."""
    verts = range(1, d + 2)
    return SimplicialComplex(combinations(verts, d))


def cycle(n: int) -> SimplicialComplex:
    return SimplicialComplex((i, i % n + 1) for i in range(1, n + 1))


def cross_polytope(d: int) -> SimplicialComplex:
    """Boundary of the d-dimensional cross-polytope, vertices ±1..±d."""
    facets = [[]]
    for i in range(1, d + 1):
        facets = [f + [s * i] for f in facets for s in (1, -1)]
    return SimplicialComplex(facets)


def rp2_6() -> SimplicialComplex:
    return SimplicialComplex(RP2_6_FACETS)


def bundled(name: str) -> dict:
    """Raw JSON of a bundled example (``rp2_6`` or ``paper_fig3``)."""
    text = resources.files("cmtk.data").joinpath(f"{name}.json").read_text()
    return json.loads(text)


def random_complex(rng: random.Random, max_vertices: int = 6) -> SimplicialComplex:
    n = rng.randint(1, max_vertices)
    verts = list(range(1, n + 1))
    k = rng.randint(1, 2 * n)
    facets = [rng.sample(verts, rng.randint(1, n)) for _ in range(k)]
    return SimplicialComplex(facets)


def random_pure_complex(rng: random.Random, max_vertices: int = 6) -> SimplicialComplex:
    n = rng.randint(2, max_vertices)
    d = rng.randint(1, min(3, n - 1))
    pool = list(combinations(range(1, n + 1), d + 1))
    k = rng.randint(1, len(pool))
    return SimplicialComplex(rng.sample(pool, k))


def named_complexes() -> dict[str, SimplicialComplex]:
    out = {
        "empty": SimplicialComplex(),
        "point": simplex(1),
        "S0": simplex_boundary(1),
        "edge": simplex(2),
        "solid_triangle": simplex(3),
        "hollow_triangle": simplex_boundary(2),
        "square": cycle(4),
        "pentagon": cycle(5),
        "boundary_3simplex": simplex_boundary(3),
        "boundary_4simplex": simplex_boundary(4),
        "octahedron": cross_polytope(3),
        "rp2_6": rp2_6(),
        "two_edges": SimplicialComplex([(1, 2), (3, 4)]),
        "two_triangles": SimplicialComplex([(1, 2, 3), (4, 5, 6)]),
        "bowtie": SimplicialComplex([(1, 2, 3), (1, 4, 5)]),
        "cone_square": cycle(4).cone(5),
        "suspended_square": cycle(4).join(SimplicialComplex([("a",), ("b",)])),
        "triangle_with_tail": SimplicialComplex([(1, 2, 3), (3, 4)]),
    }
    return out


def corpus(seed: int = 0, size: int = 1000, max_vertices: int = 6) -> list[SimplicialComplex]:
    """Named complexes plus seeded random ones on at most ``max_vertices`` vertices.

    Half of the random complexes are pure, which raises the share of CM and
    Gorenstein* examples well above what uniform facet sampling gives.
    """
    rng = random.Random(seed)
    out = [c for c in named_complexes().values() if c.n <= max_vertices]
    while len(out) < size:
        if rng.random() < 0.5:
            out.append(random_pure_complex(rng, max_vertices))
        else:
            out.append(random_complex(rng, max_vertices))
    return out
