"""Command-line entry point: ``cmtk <subcommand> ...``.

Exit status is 0 on success, 1 on bad input, 2 when two internal oracles
disagree or a theorem check fails (both indicate a bug).
"""
from __future__ import annotations

import argparse
import sys
import time

from . import __version__
from .cm import DEFAULT_SHELLING_BUDGET, classify
from .complex import label_key
from .errors import CmtkError, OracleDisagreement, TheoremViolation
from .flats import (
    WeightedFiltration,
    check_filtered_cm,
    diameter,
    diameter_experiment,
    filtered_characteristic_polynomial,
    filtered_poset,
    lattice_of_flats_from_points,
    safe_walk,
)
from .generators import bundled, cross_polytope, cycle, simplex, simplex_boundary
from .homology import Coeff, reduced_homology
from .io import (
    canonical_dumps,
    complex_from_json,
    complex_to_json,
    flat_to_json,
    format_rational,
    load_json,
    parse_rational,
    points_from_json,
)
from .posets import Lattice, characteristic_polynomial, order_complex, poset_from_json
from .stanley_reisner import DEFAULT_MAX_VERTICES, hochster_betti


def _manifest(args, inputs: list[str], seed=None, elapsed: float | None = None) -> dict:
    skip = {"func", "command", "file", "text", "timing"}
    flags = {}
    for k, v in sorted(vars(args).items()):
        if k in skip or k.startswith("_") or v is None or v is False:
            continue
        flags[k] = v if isinstance(v, (int, str, bool)) else [str(x) for x in v] if isinstance(v, list) else str(v)
    out = {
        "tool": "cmtk",
        "version": __version__,
        "subcommand": args.command,
        "inputs": inputs,
        "flags": flags,
        "seed": seed,
    }
    if elapsed is not None:
        out["wall_time_s"] = round(elapsed, 6)
    return out


def _emit(args, payload: dict, text: str | None, inputs: list[str], seed=None):
    if args.text and text is not None:
        sys.stdout.write(text.rstrip("\n") + "\n")
        return
    elapsed = time.perf_counter() - args._start if args.timing else None
    payload = dict(payload)
    payload["manifest"] = _manifest(args, inputs, seed, elapsed)
    sys.stdout.write(canonical_dumps(payload))


def _group_name(coeff: Coeff, rank: int, torsion) -> str:
    base = {"Z": "Z", "Q": "Q"}.get(coeff.kind) or f"F{coeff.p}"
    parts = [base if rank == 1 else f"{base}^{rank}"] if rank else []
    parts += [f"Z/{t}" for t in torsion]
    return " + ".join(parts) or "0"


def cmd_homology(args):
    cx = complex_from_json(load_json(args.file))
    coeff = Coeff.parse(args.coeff)
    h = reduced_homology(cx, coeff)
    text = "\n".join(f"H~_{i} = {_group_name(coeff, r, t)}" for i, (r, t) in sorted(h.groups.items()))
    _emit(args, {"coeff": str(coeff), "homology": h.to_json()}, text, [args.file])


def cmd_classify(args):
    cx = complex_from_json(load_json(args.file))
    fields = [Coeff.parse(f) for f in args.fields.split(",") if f.strip()]
    report = classify(cx, fields, args.shelling_budget)
    payload = {"report": report.to_json()}
    if report.shelling_order is not None:
        payload["shelling_order"] = [sorted(f, key=label_key) for f in report.shelling_order]
    lines = [f"{k}: {v}" for k, v in sorted(report.to_json().items())]
    _emit(args, payload, "\n".join(lines), [args.file])


def cmd_betti(args):
    cx = complex_from_json(load_json(args.file))
    coeff = Coeff.parse(args.field)
    table = hochster_betti(cx, coeff, args.max_vertices)
    pd = table.pd
    payload = {
        "field": str(coeff),
        "table": table.to_json(),
        "pd": pd,
        "depth": cx.n - pd,
        "type": table.total(pd),
        "d": cx.dim + 1,
    }
    _emit(args, payload, table.to_text(), [args.file])


def _resolve(poset, name: str):
    for x in poset.elements:
        if str(x) == name:
            return x
    raise CmtkError(f"no poset element named {name!r}")


def cmd_poset(args):
    obj = load_json(args.file)
    p = poset_from_json(obj)
    payload, lines = {}, []
    if args.mobius:
        x, y = (_resolve(p, s) for s in args.mobius)
        mu = p.mobius(x, y)
        payload["mobius"] = mu
        lines.append(str(mu))
    if args.charpoly:
        lat = Lattice(p.elements, p.covers)
        chi = str(characteristic_polynomial(lat))
        payload["charpoly"] = chi
        lines.append(chi)
    if args.order_complex:
        oc = complex_to_json(order_complex(p))
        payload["order_complex"] = oc
        lines.append(canonical_dumps(oc))
    if not payload:
        raise CmtkError("poset: choose at least one of --mobius, --charpoly, --order-complex")
    _emit(args, payload, "\n".join(lines), [args.file])


def cmd_filtered(args):
    config, weights = points_from_json(load_json(args.file))
    lat = lattice_of_flats_from_points(config, name=args.file)
    payload: dict = {"rank": lat.r, "flats": len(lat.flats)}
    lines = []
    seed = None
    wants_weights = args.charpoly or args.check_thm32 or args.walk or args.diameter or not args.experiment
    if wants_weights:
        if weights is None:
            raise CmtkError("every point needs a 'weight' for this action")
        w = WeightedFiltration(lat, weights, parse_rational(args.threshold), check_generic=args.strict_generic)
        if args.negate:
            w = w.negated()
        payload["threshold"] = format_rational(w.threshold)
        payload["generic"] = w.is_generic
        payload["negated"] = bool(args.negate)
        if args.charpoly:
            chi = str(filtered_characteristic_polynomial(w))
            payload["charpoly"] = chi
            lines.append(chi)
        if args.check_thm32:
            rep = check_filtered_cm(w).to_json()
            payload["check_thm32"] = rep
            lines.append(" ".join(f"{k}={v}" for k, v in sorted(rep.items())))
        if args.walk:
            path = safe_walk(w, *(_resolve_atom(lat, s) for s in args.walk), k=args.k)
            payload["walk"] = path
            lines.append(" -> ".join(map(str, path)))
        if args.diameter:
            d = diameter(w, args.k)
            payload["diameter"] = d
            lines.append(str(d))
        if not (args.charpoly or args.check_thm32 or args.walk or args.diameter):
            p = filtered_poset(w)
            payload["filtered_poset"] = [
                {"flat": flat_to_json(X), "rank": lat.rank(X), "weight": format_rational(w.weight(X))}
                for X in p.elements
            ]
            lines.extend(
                f"{''.join(map(str, flat_to_json(X)))} rank={lat.rank(X)} weight={format_rational(w.weight(X))}"
                for X in p.elements
            )
    if args.experiment:
        seed = args.seed
        stats = diameter_experiment(lat, args.experiment, seed, args.k)
        stats["max_by_lattice"] = {"input": stats["max_by_lattice"].get(args.file, 0)}
        payload["experiment"] = stats
        lines.append(f"draws={stats['draws']} max_diameter={stats['max_diameter']} histogram={stats['histogram']}")
    _emit(args, payload, "\n".join(lines), [args.file], seed)


def _resolve_atom(lat, name: str):
    for a in lat.atoms:
        if str(a) == name:
            return a
    raise CmtkError(f"no point labelled {name!r}")


GENERATORS = {
    "simplex-boundary": simplex_boundary,
    "simplex": simplex,
    "cycle": cycle,
    "cross-polytope": cross_polytope,
}


def cmd_generate(args):
    if args.kind in ("rp2", "rp2-6"):
        doc = bundled("rp2_6")
    elif args.kind in ("paper-fig3", "fig3"):
        doc = bundled("paper_fig3")
    else:
        if args.n is None:
            raise CmtkError(f"generate {args.kind} needs a size argument")
        doc = complex_to_json(GENERATORS[args.kind](args.n))
    _emit(args, doc, canonical_dumps(doc), [])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    out = common.add_mutually_exclusive_group()
    out.add_argument("--json", dest="text", action="store_false", default=False, help="JSON output (default)")
    out.add_argument("--text", dest="text", action="store_true", help="plain text output")
    common.add_argument("--timing", action="store_true", help="record wall time in the manifest")

    parser = argparse.ArgumentParser(prog="cmtk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cmtk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", parents=[common], help="reduced homology of a complex")
    p.add_argument("file")
    p.add_argument("--coeff", default="z", help="z, q or fp:<p>")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("classify", parents=[common], help="CM / Gorenstein* report")
    p.add_argument("file")
    p.add_argument("--fields", default="q,f2,z", help="comma list of z, q, f<p>")
    p.add_argument("--shelling-budget", type=int, default=DEFAULT_SHELLING_BUDGET)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("betti", parents=[common], help="graded Betti numbers via Hochster's formula")
    p.add_argument("file")
    p.add_argument("--field", default="q", help="q or fp:<p>")
    p.add_argument("--max-vertices", type=int, default=DEFAULT_MAX_VERTICES)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("poset", parents=[common], help="Möbius function, characteristic polynomial, order complex")
    p.add_argument("file")
    p.add_argument("--mobius", nargs=2, metavar=("X", "Y"))
    p.add_argument("--charpoly", action="store_true")
    p.add_argument("--order-complex", action="store_true")
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("filtered", parents=[common], help="weight-filtered lattice of flats of a point configuration")
    p.add_argument("file")
    p.add_argument("--threshold", default="0")
    p.add_argument("--negate", action="store_true", help="use the negated weights")
    p.add_argument("--charpoly", action="store_true")
    p.add_argument("--check-thm32", action="store_true", help="CM / dimension check of the filtered poset")
    p.add_argument("--walk", nargs=2, metavar=("P", "Q"))
    p.add_argument("--diameter", action="store_true")
    p.add_argument("--k", type=int, default=2, help="flat rank used for walks")
    p.add_argument("--experiment", type=int, metavar="N", help="random zero-sum weight draws")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict-generic", action="store_true", help="reject non-generic weights")
    p.set_defaults(func=cmd_filtered)

    p = sub.add_parser("generate", parents=[common], help="emit bundled or standard examples")
    p.add_argument("kind", choices=sorted(GENERATORS) + ["rp2", "rp2-6", "paper-fig3", "fig3"])
    p.add_argument("n", nargs="?", type=int)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 1
    args._start = time.perf_counter()
    try:
        args.func(args)
    except CmtkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except TheoremViolation as exc:
        print(f"theorem violation: {exc}; components: {exc.components}", file=sys.stderr)
        return 2
    except OracleDisagreement as exc:
        print(f"oracle disagreement: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
