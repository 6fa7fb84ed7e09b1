"""Command line interface.

Exit codes: 0 success, 2 unreadable or invalid input (report on stderr),
3 an invariant that must always hold was violated, or a catalogue value
did not match its expectation.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from pathlib import Path

from . import __version__, io
from .catalogue import DEFAULT_SEED, catalogue, run
from .chain_complex import cohomology, cone, cone_les, symplectic_model, validate_chain_map, validate_complex
from .double_complex import seven_term_extract, spectral_pages, validate_double
from .exact_linalg import rank
from .finite_groupoid import check_simplicial_identities, differentiable_complex, validate_groupoid
from .lie_theory import ce_complex, deformation_complex, validate_lie
from .poisson import PolyMultivector, format_multivector, is_poisson, linear_poisson, poisson_complex, weight_plan
from .reports import Report, ValidationError

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 2, 3


class InvariantViolation(RuntimeError):
    """A check that holds for every valid input failed."""


def _color(text: str, code: str, stream) -> str:
    if os.environ.get("NO_COLOR") is not None or not getattr(stream, "isatty", lambda: False)():
        return text
    return f"\033[{code}m{text}\033[0m"


def _weights(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?", text)
    if not m:
        raise argparse.ArgumentTypeError(f"weights must look like A..B, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) is not None else lo
    if hi < lo:
        raise argparse.ArgumentTypeError("empty weight range")
    return lo, hi


def _load(path: str):
    doc, raw = io.read_json(path)
    kind, obj = io.parse_any(doc, Path(path).parent)
    return kind, obj, io.sha256(raw)


def _emit(table: io.ResultTable, args) -> None:
    text = io.render(table.sorted(), getattr(args, "format", "json") or "json")
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cohomology_rows(name: str, c, weight=None) -> list[tuple]:
    return [(name, k, weight, g.dim, g.truncated) for k, g in cohomology(c).items()]


_COH_COLUMNS = ["object", "degree", "weight", "dimension", "truncated"]


# ---------------------------------------------------------------------------
# commands

def cmd_validate(args) -> int:
    kind, obj, _ = _load(args.input)
    rep = {
        "lie": validate_lie,
        "groupoid": validate_groupoid,
        "double": validate_double,
        "chain-map": validate_chain_map,
        "complex": validate_complex,
    }.get(kind)
    if kind == "multivector":
        report = Report("multivector")
        if obj.degree == 2:
            ok, w = is_poisson(obj)
            if not ok:
                report.fail(f"not Poisson: [pi, pi] = {format_multivector(w)}")
    elif kind == "matrix":
        report = Report("matrix")
    else:
        report = rep(obj)
        if kind == "groupoid" and report.ok:
            sub = check_simplicial_identities(obj, 2)
            report.failures += sub.failures
    if not report.ok:
        raise ValidationError(report)
    print(f"{kind}: ok")
    return EXIT_OK


def cmd_cohomology(args) -> int:
    kind, obj, digest = _load(args.input)
    rows = []
    name = getattr(obj, "name", "") or Path(args.input).stem
    if args.kind in ("ce", "defm"):
        if kind != "lie":
            raise io.InputError(f"--kind {args.kind} needs a Lie algebra file, got {kind}")
        k_max = obj.dim if args.max_degree is None else min(args.max_degree, obj.dim)
        if args.kind == "ce":
            c = ce_complex(obj, args.rep or "trivial", k_max)
        else:
            c = deformation_complex(obj, k_max)
        rows = _cohomology_rows(name, c)
    elif args.kind == "groupoid":
        if kind != "groupoid":
            raise io.InputError(f"--kind groupoid needs a groupoid file, got {kind}")
        k_max = 4 if args.max_degree is None else args.max_degree
        rows = _cohomology_rows(name, differentiable_complex(obj, k_max))
    elif args.kind == "poisson":
        if kind == "lie":
            validate_lie(obj).raise_if_failed()
            pi = linear_poisson(obj)
        elif kind == "multivector":
            pi = obj
        else:
            raise io.InputError(f"--kind poisson needs a Lie algebra or bivector file, got {kind}")
        rows = _poisson_rows(name, pi, args)
    elif args.kind == "complex":
        if kind != "complex":
            raise io.InputError(f"--kind complex needs a complex file, got {kind}")
        rows = _cohomology_rows(name, obj)
    meta = io.metadata(digest, command="cohomology", kind=args.kind)
    _emit(io.ResultTable(_COH_COLUMNS, rows, meta), args)
    return EXIT_OK


def _poisson_rows(name: str, pi: PolyMultivector, args) -> list[tuple]:
    if pi.degree != 2 and pi.terms:
        raise io.InputError("Poisson cohomology needs a bivector")
    n = pi.space.n
    k_max = n if args.max_degree is None else min(args.max_degree, n)
    lo, hi = args.weights or (0, 2)
    plan = weight_plan(pi)
    if plan.mode != "homogeneous":
        c = poisson_complex(pi, k_max=k_max, weights=(lo, hi))
        return [(name, k, f"{lo}..{hi}", g.dim, True) for k, g in cohomology(c).items()]
    rows, cache = [], {}
    for k in range(k_max + 1):
        for w in range(lo, hi + 1):
            anchor = w - k * plan.shift
            if anchor < 0:
                continue
            if anchor not in cache:
                cache[anchor] = cohomology(poisson_complex(pi, anchor, k_max))
            g = cache[anchor][k]
            rows.append((name, k, w, g.dim, g.truncated))
    return rows


def _need_map(path: str):
    kind, f, digest = _load(path)
    if kind != "chain-map":
        raise io.InputError(f"expected a chain map file, got {kind}")
    validate_chain_map(f).raise_if_failed()
    return f, digest


def cmd_cone(args) -> int:
    f, digest = _need_map(args.map)
    if args.symplectic_model:
        c = symplectic_model(f.source, f.target, f)
    else:
        c = cone(f)
    table = io.ResultTable(_COH_COLUMNS, _cohomology_rows("cone", c),
                           io.metadata(digest, command="cone", symplectic_model=bool(args.symplectic_model)),
                           {"complex": io.dump_complex(c)})
    _emit(table, args)
    return EXIT_OK


def cmd_les(args) -> int:
    f, digest = _need_map(args.map)
    les = cone_les(f)
    rows = [(i, n.label, n.dim, ok) for i, (n, ok) in enumerate(zip(les.nodes, les.exact))]
    extra = {"connecting_is_induced": les.connecting_is_induced, "exact": les.is_exact,
             "maps": [io.dump_matrix(m) for m in les.maps]}
    _emit(io.ResultTable(["position", "node", "dimension", "exact"], rows,
                         io.metadata(digest, command="les"), extra), args)
    if not (les.is_exact and les.connecting_is_induced):
        raise InvariantViolation("cone sequence is not exact or the connecting map differs from H(f)")
    return EXIT_OK


def cmd_spectral(args) -> int:
    kind, dc, digest = _load(args.input)
    if kind != "double":
        raise io.InputError(f"expected a double complex file, got {kind}")
    validate_double(dc).raise_if_failed()
    pages = spectral_pages(dc, args.direction, args.pages)
    rows = []
    for pg in pages:
        for (p, q), d in pg.entries.items():
            rows.append((pg.r, p, q, d, rank(pg.differentials[(p, q)])))
    _emit(io.ResultTable(["page", "p", "q", "dimension", "rank_d"], rows,
                         io.metadata(digest, command="spectral", direction=args.direction)), args)
    return EXIT_OK


def cmd_seven_term(args) -> int:
    f, digest = _need_map(args.map)
    ts = seven_term_extract(cone_les(f), args.vanishing_from)
    nodes = ts.sequence.nodes
    rows = [(i, n.label, n.dim, ok) for i, (n, ok) in enumerate(zip(nodes, ts.sequence.exact))]
    extra = {"length": ts.length, "isomorphisms_ok": ts.isomorphisms_ok,
             "isomorphisms": {str(k): io.dump_matrix(m) for k, m in ts.isomorphisms.items()}}
    _emit(io.ResultTable(["position", "node", "dimension", "exact"], rows,
                         io.metadata(digest, command="seven-term", vanishing_from=args.vanishing_from), extra), args)
    if not ts.ok:
        raise InvariantViolation("truncated sequence is not exact or an isomorphism failed")
    return EXIT_OK


def cmd_catalogue(args) -> int:
    if args.action == "list":
        cat = catalogue(args.seed)
        rows = [(e.name, e.kind, len(e.expected)) for e in cat.values()]
        _emit(io.ResultTable(["entry", "kind", "checks"], rows, io.metadata(None, command="catalogue list")), args)
        return EXIT_OK
    names = None if args.name == "all" else [args.name]
    try:
        checks = run(names, seed=args.seed, jobs=args.jobs)
    except KeyError as exc:
        raise io.InputError(f"no catalogue entry named {exc.args[0]!r}") from None
    rows = [(c.entry, c.quantity, c.expected, c.actual, c.tag, "pass" if c.passed else "FAIL") for c in checks]
    failed = [c for c in checks if not c.passed]
    meta = io.metadata(None, command="catalogue run", seed=args.seed, entries=len({c.entry for c in checks}),
                       checks=len(checks), failed=len(failed))
    _emit(io.ResultTable(["entry", "quantity", "expected", "actual", "provenance", "status"], rows, meta), args)
    verdict = _color("FAIL", "31", sys.stderr) if failed else _color("PASS", "32", sys.stderr)
    print(f"{verdict}: {len(checks) - len(failed)}/{len(checks)} checks", file=sys.stderr)
    for c in failed:
        print(f"  {c.entry}: {c.quantity} expected {c.expected} got {c.actual}", file=sys.stderr)
    return EXIT_INVARIANT if failed else EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="defcohom", description="Exact deformation-cohomology workbench.")
    ap.add_argument("--version", action="version", version=f"defcohom {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def out_opts(p):
        p.add_argument("--out", help="write the result here instead of stdout")
        p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("validate", help="check a document against its laws")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cohomology", help="cohomology dimensions")
    p.add_argument("--kind", required=True, choices=["ce", "defm", "poisson", "groupoid", "complex"])
    p.add_argument("--input", required=True)
    p.add_argument("--rep", choices=["trivial", "adjoint", "coadjoint"])
    p.add_argument("--max-degree", type=int)
    p.add_argument("--weights", type=_weights)
    out_opts(p)
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("cone", help="mapping cone of a chain map")
    p.add_argument("--map", required=True)
    p.add_argument("--symplectic-model", action="store_true", help="use the cone of minus the map")
    out_opts(p)
    p.set_defaults(func=cmd_cone)

    p = sub.add_parser("les", help="long exact sequence of the cone")
    p.add_argument("--map", required=True)
    out_opts(p)
    p.set_defaults(func=cmd_les)

    p = sub.add_parser("spectral", help="spectral sequence pages of a double complex")
    p.add_argument("--input", required=True)
    p.add_argument("--direction", choices=["rows", "cols"], required=True)
    p.add_argument("--pages", type=int, required=True)
    out_opts(p)
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("seven-term", help="truncate the cone sequence under vanishing")
    p.add_argument("--map", required=True)
    p.add_argument("--vanishing-from", type=int, required=True)
    out_opts(p)
    p.set_defaults(func=cmd_seven_term)

    p = sub.add_parser("catalogue", help="list or run the example catalogue")
    p.add_argument("action", choices=["list", "run"])
    p.add_argument("name", nargs="?", default="all")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--jobs", type=int, default=1)
    out_opts(p)
    p.set_defaults(func=cmd_catalogue)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(exc.report.summary(), file=sys.stderr)
        return EXIT_INPUT
    except (io.InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvariantViolation, AssertionError) as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
