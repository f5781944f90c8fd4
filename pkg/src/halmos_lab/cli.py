"""Command-line front end.

Subcommands: generate | diagnose | index | approx | experiment | crt.
Machine-readable outputs are written atomically (temp file + rename) in
canonical JSON (sorted keys, %.17g floats) or RFC-4180 CSV; a short human
summary goes to stdout.  Exit codes: 0 success, 2 usage, 3 domain error,
4 I/O error.  All randomness flows from one 64-bit seed through a
counter-based splittable generator, so reruns are byte-identical in
single-threaded mode.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import crt
from .approx import (
    EXPERIMENT_COLUMNS,
    ApproxOptions,
    ApproxResult,
    halmos_experiment,
    nearest_commuting,
)
from .diagnostics import diagnose
from .errors import DomainError, GapTooSmall, HalmosLabError, PresentationError
from .generate import GeneratorSpec, rng_stream
from .indices import compute_index
from .structured import (
    SymmetryClass,
    load_tuple,
    matrix_to_json,
    tuple_to_json,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4


def canonical_json(obj) -> str:
    """Canonical JSON: sorted keys, %.17g floats, no whitespace drift."""
    if obj is None or obj is True or obj is False:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format(float(obj), ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: kv[0])
        return "{" + ",".join(json.dumps(str(k)) + ":" + canonical_json(v)
                              for k, v in items) + "}"
    raise DomainError(f"cannot serialize {type(obj).__name__}")


def atomic_write(path: str, data: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".halmos-lab-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_table(rows, fmt: str, columns=None) -> str:
    """Render homogeneous rows as RFC-4180 CSV or canonical JSON."""
    if fmt == "json":
        return canonical_json(list(rows))
    if fmt != "csv":
        raise DomainError(f"unknown table format {fmt!r}")
    if columns is None:
        columns = list(rows[0].keys()) if rows else []
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(columns)
    for row in rows:
        out = []
        for c in columns:
            v = row.get(c, "")
            if isinstance(v, (float, np.floating)):
                out.append(format(float(v), ".17g"))
            elif isinstance(v, (bool, np.bool_)):
                out.append("true" if v else "false")
            else:
                out.append(v)
        writer.writerow(out)
    return buf.getvalue()


def _thread_count(args) -> int:
    if getattr(args, "threads", None):
        return max(1, int(args.threads))
    env = os.environ.get("HALMOS_LAB_THREADS", "")
    return max(1, int(env)) if env.isdigit() else 1


# ---------------------------------------------------------------------------
# Subcommands.
# ---------------------------------------------------------------------------

def _cmd_generate(args) -> int:
    spec = GeneratorSpec(
        kind=args.kind,
        symmetry=SymmetryClass.from_label(args.klass),
        d=args.d,
        L=args.L,
        npoints=args.npoints,
        noise=args.noise,
        seed=args.seed,
    )
    t = spec.build()
    atomic_write(args.out, canonical_json(tuple_to_json(t)))
    print(f"generate: wrote {t.symmetry.value} {t.d}-tuple of dimension {t.n} to {args.out}")
    return EXIT_OK


def _cmd_diagnose(args) -> int:
    t = load_tuple(args.infile)
    report = diagnose(t)
    atomic_write(args.out, canonical_json(report.to_json()))
    print(
        "diagnose: commutator_defect={:.6g} sphere_defect={:.6g} contraction_defect={:.6g}"
        .format(report.commutator_defect, report.sphere_defect, report.contraction_defect)
    )
    return EXIT_OK


def _cmd_index(args) -> int:
    t = load_tuple(args.infile)
    result = compute_index(t, method=args.method, gap_threshold=args.gap_threshold)
    atomic_write(args.out, canonical_json(result.to_json()))
    print(f"index: group={result.group} value={result.value} gap={result.gap:.6g} "
          f"valid={result.valid}")
    return EXIT_OK


def _approx_result_json(res: ApproxResult) -> dict:
    return {
        "distance": res.distance,
        "distance_fro": res.distance_fro,
        "sweeps_used": res.sweeps_used,
        "converged": res.converged,
        "restart_id": res.restart_id,
        "offdiag_energy": res.offdiag,
        "K": tuple_to_json(res.K),
        "frame": matrix_to_json(res.frame),
    }


def _cmd_approx(args) -> int:
    t = load_tuple(args.infile)
    opts = ApproxOptions(max_sweeps=args.sweeps, restarts=args.restarts,
                         tol_offdiag=args.tol, seed=args.seed)
    threads = _thread_count(args)
    if threads > 1 and opts.restarts > 1:
        from .approx import _run_single

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda k: _run_single(t, opts, k),
                                    range(opts.restarts)))
        res = min(results, key=lambda r: (r.distance, r.restart_id))
    else:
        res = nearest_commuting(t, opts)
    atomic_write(args.out, canonical_json(_approx_result_json(res)))
    print(f"approx: distance={res.distance:.6g} (frobenius {res.distance_fro:.6g}) "
          f"sweeps={res.sweeps_used} converged={res.converged}")
    return EXIT_OK


def _load_experiment_config(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    known = {"version", "families", "optimizer", "gap_threshold", "seed"}
    unknown = set(obj) - known
    if unknown:
        raise DomainError(f"experiment config: unknown fields {sorted(unknown)}")
    if "families" not in obj or not isinstance(obj["families"], list):
        raise DomainError("experiment config needs a 'families' list")
    opt = obj.get("optimizer", {})
    unknown = set(opt) - {"max_sweeps", "restarts", "tol_offdiag"}
    if unknown:
        raise DomainError(f"experiment optimizer: unknown fields {sorted(unknown)}")
    opts = ApproxOptions(
        max_sweeps=int(opt.get("max_sweeps", 60)),
        restarts=int(opt.get("restarts", 4)),
        tol_offdiag=float(opt.get("tol_offdiag", 1e-12)),
        seed=int(obj.get("seed", 0)),
    )
    specs = []
    master = int(obj.get("seed", 0))
    for i, fam in enumerate(obj["families"]):
        fam = dict(fam)
        if "seed" not in fam:
            fam["seed"] = int(rng_stream(master, 4, i).integers(0, 2 ** 62))
        specs.append(GeneratorSpec.from_json(fam))
    return specs, opts, float(obj.get("gap_threshold", 1e-6))


def _cmd_experiment(args) -> int:
    specs, opts, gap_threshold = _load_experiment_config(args.grid)
    rows = halmos_experiment(specs, opts, gap_threshold=gap_threshold)
    atomic_write(args.out, emit_table(rows, "csv", EXPERIMENT_COLUMNS))
    failures = sum(1 for r in rows if r["error"])
    print(f"experiment: {len(rows)} families, {failures} per-row errors -> {args.out}")
    return EXIT_OK


def _cmd_crt(args) -> int:
    if args.check:
        module = crt.make_base_module(args.check)
        relations = crt.check_relations(module)
        exactness = crt.check_acyclicity(module)
        bad = [r for r in relations if not r.passed]
        bad_exact = [r for r in exactness if not r.passed]
        if args.out:
            payload = {
                "algebra": args.check,
                "relations_checked": len(relations),
                "relations_failed": [
                    {"relation": r.name, "degree": r.degree} for r in bad
                ],
                "exactness_checked": len(exactness),
                "exactness_failed": [
                    {"sequence": r.sequence, "position": r.position, "degree": r.degree}
                    for r in bad_exact
                ],
                "module": crt.module_to_json(module),
            }
            atomic_write(args.out, canonical_json(payload))
        if bad or bad_exact:
            for r in bad:
                print(f"FAIL relation {r.name} at degree {r.degree}")
            for r in bad_exact:
                print(f"FAIL exactness seq {r.sequence} pos {r.position} degree {r.degree}")
            raise PresentationError(f"crt.check_relations: base module {args.check} failed")
        print(f"crt --check {args.check}: all relations pass "
              f"({len(relations)} relation checks, {len(exactness)} exactness checks)")
        return EXIT_OK
    if args.degree_table:
        table = crt.degree_table(args.degree_table, args.max)
        rows = [{"d": d, "obstruction_possible": ok} for d, ok in table]
        atomic_write(args.out, emit_table(rows, "csv", ["d", "obstruction_possible"]))
        hits = [d for d, ok in table if ok]
        print(f"crt --degree-table {args.degree_table}: obstruction at d = "
              f"{hits[:8]}... -> {args.out}")
        return EXIT_OK
    raise DomainError("crt: nothing to do (use --check or --degree-table)")


# ---------------------------------------------------------------------------
# Parser and entry point.
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="halmos-lab",
        description="Almost commuting structured matrices: generators, diagnostics, "
                    "obstruction indices, commuting approximation, exact module tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a matrix tuple")
    g.add_argument("--kind", choices=["point", "dirac", "perturbed"], required=True)
    g.add_argument("--class", dest="klass", required=True,
                   help="R | C | H (or the long class labels)")
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--L", type=int, default=2)
    g.add_argument("--npoints", type=int, default=8)
    g.add_argument("--noise", type=float, default=0.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_generate)

    d = sub.add_parser("diagnose", help="defect report for a tuple")
    d.add_argument("--in", dest="infile", required=True)
    d.add_argument("--out", required=True)
    d.set_defaults(func=_cmd_diagnose)

    i = sub.add_parser("index", help="obstruction index of a tuple")
    i.add_argument("--in", dest="infile", required=True)
    i.add_argument("--method", choices=["det", "bott", "auto"], default="auto")
    i.add_argument("--gap-threshold", type=float, default=1e-6)
    i.add_argument("--out", required=True)
    i.set_defaults(func=_cmd_index)

    a = sub.add_parser("approx", help="nearest exactly commuting tuple")
    a.add_argument("--in", dest="infile", required=True)
    a.add_argument("--restarts", type=int, default=4)
    a.add_argument("--sweeps", type=int, default=60)
    a.add_argument("--tol", type=float, default=1e-12)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--threads", type=int, default=0)
    a.add_argument("--out", required=True)
    a.set_defaults(func=_cmd_approx)

    e = sub.add_parser("experiment", help="run a family grid to a CSV table")
    e.add_argument("--grid", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--threads", type=int, default=0)
    e.set_defaults(func=_cmd_experiment)

    c = sub.add_parser("crt", help="exact module checks and degree tables")
    c.add_argument("--check", choices=list(crt.ALGEBRAS), default=None)
    c.add_argument("--degree-table", choices=["R", "H"], dest="degree_table")
    c.add_argument("--max", type=int, default=64)
    c.add_argument("--out", default="")
    c.set_defaults(func=_cmd_crt)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GapTooSmall as exc:
        print(f"error (index.gap): {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (HalmosLabError, ValueError) as exc:
        print(f"error ({args.command}): {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (OSError, json.JSONDecodeError) as exc:
        print(f"i/o error ({args.command}): {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
