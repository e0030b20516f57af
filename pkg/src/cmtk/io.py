"""JSON exchange formats and canonical output."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .complex import SimplicialComplex, label_key
from .errors import CmtkError
from .flats import PointConfiguration


def parse_rational(value) -> Fraction:
    """Exact rational from an int or a string such as ``"-3/4"``; floats are refused."""
    if isinstance(value, bool) or isinstance(value, float):
        raise CmtkError(f"rationals must be ints or 'p/q' strings, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise CmtkError(f"cannot parse rational {value!r}")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def load_json(path: str | Path) -> object:
    """Read a JSON document, turning syntax errors into line/column diagnostics."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CmtkError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CmtkError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _check_label(v):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise CmtkError(f"vertex labels must be ints or strings, got {v!r}")
    return v


def complex_from_json(obj) -> SimplicialComplex:
    if not isinstance(obj, dict) or not isinstance(obj.get("facets"), list):
        raise CmtkError("complex JSON needs a 'facets' list")
    facets = []
    for f in obj["facets"]:
        if not isinstance(f, list):
            raise CmtkError(f"facet {f!r} is not a list")
        facets.append([_check_label(v) for v in f])
    verts = obj.get("vertices")
    if verts is not None:
        if not isinstance(verts, list):
            raise CmtkError("'vertices' must be a list")
        verts = [_check_label(v) for v in verts]
    return SimplicialComplex(facets, verts)


def complex_to_json(cx: SimplicialComplex) -> dict:
    return {"vertices": list(cx.vertices), "facets": cx.sorted_facets()}


def points_from_json(obj) -> tuple[PointConfiguration, dict | None]:
    """Point configuration plus weights (None unless every point has one)."""
    if not isinstance(obj, dict) or not isinstance(obj.get("points"), list):
        raise CmtkError("point configuration JSON needs a 'points' list")
    labels, coords, weights = [], [], {}
    for p in obj["points"]:
        if not isinstance(p, dict) or "label" not in p or "coords" not in p:
            raise CmtkError(f"point entry {p!r} needs 'label' and 'coords'")
        lbl = _check_label(p["label"])
        labels.append(lbl)
        coords.append(tuple(parse_rational(x) for x in p["coords"]))
        if "weight" in p:
            weights[lbl] = parse_rational(p["weight"])
    config = PointConfiguration(tuple(labels), tuple(coords))
    return config, (weights if len(weights) == len(labels) else None)


def points_to_json(config: PointConfiguration, weights: dict | None = None) -> dict:
    pts = []
    for lbl, c in zip(config.labels, config.coords):
        entry = {"label": lbl, "coords": [format_rational(x) for x in c]}
        if weights is not None:
            entry["weight"] = format_rational(weights[lbl])
        pts.append(entry)
    return {"points": pts}


def flat_to_json(flat) -> list:
    return sorted(flat, key=label_key)
