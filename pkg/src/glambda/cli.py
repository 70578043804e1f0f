"""Command-line front end: ``glambda <subcommand> ...``.

Every output is UTF-8 JSON (or CSV for tables) with rationals written as ``"p/q"``.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__
from .asm6v import enumerate_asm, sixv_to_asm, statistics
from .density import q_functional_check, rho_table, write_csv
from .errors import DivisionByZero, GLambdaError, SchemaError, WindowTooSmall, ZeroFaceLabel
from .exact import format_rational, parse_rational
from .linalg import determinant
from .lambdadet import DEFAULT_METHODS, METHODS, asm_sum, cross_check, random_instance, vandermonde_matrix
from .network import build_network, enumerate_families, family_to_sixv, partition_matrix
from .tsystem import CoeffWindow, InitialData, cluster_mutation_check, evolve

ALL_METHODS = tuple(METHODS)
DEGENERATE = (DivisionByZero.__name__, ZeroFaceLabel.__name__, ZeroDivisionError.__name__)


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------


def _rational(value, path: str) -> Fraction:
    try:
        return parse_rational(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(path, str(exc)) from None


def _load_json(path: str | Path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from None


def parse_matrix(data) -> list[list[Fraction]]:
    if not isinstance(data, dict):
        raise SchemaError("$", "expected an object with keys 'n' and 'entries'")
    n = data.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise SchemaError("$.n", "expected a non-negative integer")
    rows = data.get("entries")
    if not isinstance(rows, list) or len(rows) != n:
        raise SchemaError("$.entries", f"expected {n} rows")
    out = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise SchemaError(f"$.entries[{r}]", f"expected {n} entries")
        out.append([_rational(v, f"$.entries[{r}][{c}]") for c, v in enumerate(row)])
    return out


def parse_coeffs(data) -> CoeffWindow:
    if not isinstance(data, dict):
        raise SchemaError("$", "expected an object with keys 'lambda' and 'mu'")
    seqs = {}
    for key in ("lambda", "mu"):
        block = data.get(key)
        if not isinstance(block, dict):
            raise SchemaError(f"$.{key}", "expected an object keyed by integer offsets")
        seq = {}
        for k, v in block.items():
            try:
                idx = int(k)
            except ValueError:
                raise SchemaError(f"$.{key}", f"offset {k!r} is not an integer") from None
            val = _rational(v, f"$.{key}.{k}")
            if val == 0:
                raise SchemaError(f"$.{key}.{k}", "coefficients must be non-zero")
            seq[idx] = val
        seqs[key] = seq
    return CoeffWindow(seqs["lambda"], seqs["mu"])


def parse_init(data) -> InitialData:
    """``{"n": N, "t": {"i,j": "p/q", ...}}`` over the size-``N`` diamond."""
    if not isinstance(data, dict) or not isinstance(data.get("n"), int):
        raise SchemaError("$.n", "expected an integer")
    block = data.get("t")
    if not isinstance(block, dict):
        raise SchemaError("$.t", "expected an object keyed by 'i,j'")
    t = {}
    for k, v in block.items():
        try:
            i, j = (int(s) for s in k.split(","))
        except ValueError:
            raise SchemaError("$.t", f"key {k!r} is not 'i,j'") from None
        t[(i, j)] = _rational(v, f"$.t.{k}")
    try:
        return InitialData(data["n"], t)
    except ValueError as exc:
        raise SchemaError("$.t", str(exc)) from None


def coeffs_to_json(coeffs: CoeffWindow) -> dict:
    return {
        "lambda": {str(a): format_rational(v) for a, v in sorted(coeffs.lambdas.items())},
        "mu": {str(b): format_rational(v) for b, v in sorted(coeffs.mus.items())},
    }


def matrix_to_json(A) -> dict:
    return {"n": len(A), "entries": [[format_rational(v) for v in row] for row in A]}


def _fraction_list(text: str) -> list[Fraction]:
    return [parse_rational(s.strip()) for s in text.split(",") if s.strip()]


# ---------------------------------------------------------------------------
# instances and reports
# ---------------------------------------------------------------------------


@dataclass
class InstanceSpec:
    matrix: list[list[Fraction]]
    coeffs: CoeffWindow
    methods: tuple[str, ...] = DEFAULT_METHODS
    source: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.matrix)

    def echo(self) -> dict:
        return {"source": self.source, "matrix": matrix_to_json(self.matrix), "coefficients": coeffs_to_json(self.coeffs)}


@dataclass
class RunReport:
    instance: dict
    values: dict[str, str]
    errors: dict[str, str]
    timings: dict[str, float]
    agreement: bool
    degenerate: bool = False

    @property
    def value(self) -> str | None:
        return next(iter(self.values.values()), None)

    def to_json(self, timings: bool = True) -> dict:
        out: dict[str, Any] = {"value": self.value, "values": self.values, "errors": self.errors}
        if timings:
            out["method_timings"] = {m: round(t, 6) for m, t in self.timings.items()}
        out["agreement"] = self.agreement
        if self.degenerate:
            out["degenerate"] = True
        out["instance"] = self.instance
        out["version"] = __version__
        return out


def _coeff_source(args, n: int) -> tuple[CoeffWindow, dict]:
    radius = max(n - 1, 1)
    if getattr(args, "coeffs", None):
        return parse_coeffs(_load_json(args.coeffs)), {"coefficients": "file"}
    if getattr(args, "homogeneous", None):
        vals = _fraction_list(args.homogeneous)
        if len(vals) != 2:
            raise SchemaError("--homogeneous", "expected 'lambda,mu'")
        return CoeffWindow.homogeneous(vals[0], vals[1], radius), {"coefficients": "homogeneous"}
    if getattr(args, "q", None) is not None:
        return CoeffWindow.q_power(parse_rational(args.q), radius), {"coefficients": "q-power"}
    if getattr(args, "coeff_seed", None) is not None:
        return CoeffWindow.random(random.Random(args.coeff_seed), radius), {"coefficients": "random", "seed": args.coeff_seed}
    return CoeffWindow.homogeneous(1, 1, radius), {"coefficients": "homogeneous"}


def parse_instance(args) -> InstanceSpec:
    """Build and validate an instance from parsed ``compute``/``network`` arguments."""
    if getattr(args, "matrix", None):
        A = parse_matrix(_load_json(args.matrix))
        src = {"matrix": "file"}
    elif getattr(args, "all_ones", None) is not None:
        A = [[Fraction(1)] * args.all_ones for _ in range(args.all_ones)]
        src = {"matrix": "all-ones"}
    elif getattr(args, "vandermonde", None):
        A = vandermonde_matrix(_fraction_list(args.vandermonde))
        src = {"matrix": "vandermonde"}
    elif getattr(args, "random_n", None) is not None:
        A, _ = random_instance(args.random_n, random.Random(args.seed))
        src = {"matrix": "random", "seed": args.seed}
    else:
        raise SchemaError("$", "no matrix source given")
    coeffs, csrc = _coeff_source(args, len(A))
    src.update(csrc)
    coeffs.require(len(A))
    method = getattr(args, "method", "all") or "all"
    methods = DEFAULT_METHODS if method == "all" else (method,)
    return InstanceSpec(A, coeffs, methods, src)


def run(spec: InstanceSpec) -> RunReport:
    rep = cross_check(spec.matrix, spec.coeffs, spec.methods)
    values = {m: format_rational(v) for m, v in rep.values.items()}
    degenerate = bool(rep.errors) and all(e.split(":")[0] in DEGENERATE for e in rep.errors.values())
    return RunReport(spec.echo(), values, dict(rep.errors), dict(rep.timings), rep.agreement, degenerate)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _emit(obj, out) -> None:
    out.write(json.dumps(obj, sort_keys=False, ensure_ascii=False) + "\n")


def cmd_compute(args, out) -> int:
    report = run(parse_instance(args))
    _emit(report.to_json(timings=not args.no_timings), out)
    return 0 if report.agreement else 1


def cmd_verify(args, out) -> int:
    methods = tuple(args.methods) if args.methods else DEFAULT_METHODS
    rng = random.Random(args.seed)
    agreed = disagreed = degenerate = 0
    # trials run in order on one generator so each report depends only on (seed, trial)
    for trial in range(args.trials):
        A, coeffs = random_instance(args.n, rng)
        spec = InstanceSpec(A, coeffs, methods, {"matrix": "random", "seed": args.seed, "trial": trial})
        report = run(spec)
        if report.agreement:
            agreed += 1
        elif report.degenerate and _partial(report):
            degenerate += 1
        else:
            disagreed += 1
        if not args.quiet:
            body = report.to_json(timings=args.timings)
            body["trial"] = trial
            _emit(body, out)
    summary = {"summary": {"n": args.n, "trials": args.trials, "seed": args.seed, "methods": list(methods),
                           "agreed": agreed, "degenerate": degenerate, "disagreed": disagreed}}
    _emit(summary, out)
    return 0 if disagreed == 0 else 1


def _partial(report: RunReport) -> bool:
    vals = list(report.values.values())
    return all(v == vals[0] for v in vals[1:])


def cmd_asm(args, out) -> int:
    rows = []
    for B in enumerate_asm(args.n):
        if args.stats:
            st = statistics(B)
            rows.append({
                "asm": [list(r) for r in B.entries],
                "inv": st.inv,
                "minus": st.minus_count,
                "counts": dict(sorted(st.counts.items())),
                "I": {str(a): v for a, v in sorted(st.I.items())},
                "I_prime": {str(a): v for a, v in sorted(st.I_prime.items())},
            })
        else:
            rows.append([list(r) for r in B.entries])
    if args.format == "json":
        _emit(rows, out)
        return 0
    header = ["index", "rows"]
    if args.stats:
        header += ["inv", "minus"] + [f"n_{k}" for k in ("a1", "a2", "b1", "b2", "c1", "c2")]
    out.write(",".join(header) + "\n")
    for idx, r in enumerate(rows):
        mat = r["asm"] if args.stats else r
        line = [str(idx), ";".join(" ".join(str(x) for x in row) for row in mat)]
        if args.stats:
            line += [str(r["inv"]), str(r["minus"])] + [str(r["counts"].get(k, 0)) for k in ("a1", "a2", "b1", "b2", "c1", "c2")]
        out.write(",".join(line) + "\n")
    return 0


def cmd_symbolic(args, out) -> int:
    poly = asm_sum(None, None, mode="symbolic", n=args.n)
    _emit(poly.to_json(), out)
    return 0


def cmd_network(args, out) -> int:
    spec = parse_instance(args)
    net = build_network(spec.matrix, spec.coeffs)
    Z = partition_matrix(net)
    body: dict[str, Any] = {
        "n": net.n,
        "acyclic": net.is_acyclic(),
        "vertices": len(net.vertices),
        "edges": [{"from": list(e.src), "to": list(e.dst), "kind": e.kind, "weight": format_rational(e.weight)} for e in net.edges()],
        "partition_matrix": [[format_rational(v) for v in row] for row in Z],
        "value": format_rational(determinant(Z)),
    }
    if args.enumerate:
        fams = []
        for f in enumerate_families(net):
            grid, m, _ = family_to_sixv(net, f)
            fams.append({
                "weight": format_rational(f.weight),
                "asm": [list(r) for r in sixv_to_asm(grid).entries],
                "minus": m,
                "paths": [[list(f.starts[k])] + [list(e.dst) for e in p] for k, p in enumerate(f.paths)],
            })
        body["families"] = fams
    if args.emit_dot:
        Path(args.emit_dot).write_text(net.to_dot(), encoding="utf-8")
    _emit(body, out)
    return 0


def cmd_tsystem(args, out) -> int:
    init = parse_init(_load_json(args.init))
    try:
        target = tuple(int(s) for s in args.target.split(","))
    except ValueError:
        raise SchemaError("--target", "expected 'i,j,k'") from None
    if len(target) != 3:
        raise SchemaError("--target", "expected 'i,j,k'")
    coeffs, _ = _coeff_source(args, init.n + 1)
    value = evolve(init, coeffs, target)
    _emit({"target": list(target), "value": format_rational(value)}, out)
    return 0


def cmd_cluster(args, out) -> int:
    rep = cluster_mutation_check(args.radius)
    _emit({"radius": rep.radius, "order_independent": rep.order_independent, "flipped": rep.flipped,
           "restored": rep.restored, "compared_entries": rep.compared_entries,
           "mismatches": rep.mismatches, "ok": rep.ok}, out)
    return 0 if rep.ok else 1


def cmd_density(args, out) -> int:
    radius = 2 * args.k + 2
    if args.q is not None:
        if args.lam is not None or args.mu is not None:
            raise SchemaError("--q", "use either --q or --lambda/--mu")
        coeffs = CoeffWindow.q_power(parse_rational(args.q), radius)
    else:
        lam = parse_rational(args.lam) if args.lam is not None else Fraction(1)
        mu = parse_rational(args.mu) if args.mu is not None else Fraction(1)
        coeffs = CoeffWindow.homogeneous(lam, mu, radius)
    table = rho_table(args.k, coeffs)
    if args.out in (None, "-"):
        write_csv(table, out)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            write_csv(table, fh)
    status = 0
    if args.q is not None and args.check:
        rep = q_functional_check(args.k, parse_rational(args.q))
        sys.stderr.write(json.dumps({"checked": rep.checked, "violations": len(rep.violations), "ok": rep.ok}) + "\n")
        status = 0 if rep.ok else 1
    return status


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_coeff_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--coeffs", metavar="FILE", help="coefficient JSON file")
    g.add_argument("--homogeneous", metavar="L,M", help="constant lambda and mu, e.g. 2/1,1/1")
    g.add_argument("--q", metavar="Q", help="lambda_a = mu_a = q^a")
    g.add_argument("--coeff-seed", type=int, help="random non-zero rational coefficients")


def _add_matrix_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--matrix", metavar="FILE", help="matrix JSON file")
    g.add_argument("--all-ones", type=int, metavar="N")
    g.add_argument("--vandermonde", metavar="A1,A2,...")
    g.add_argument("--random-n", type=int, metavar="N")
    p.add_argument("--seed", type=int, default=0, help="seed for --random-n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="glambda", description="Exact generalized Lambda-determinants and friends.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate one instance by one or all methods")
    _add_matrix_args(p)
    _add_coeff_args(p)
    p.add_argument("--method", choices=ALL_METHODS + ("all",), default="all")
    p.add_argument("--no-timings", action="store_true", help="omit timings for byte-stable output")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="randomized cross-method agreement")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--methods", nargs="+", choices=ALL_METHODS)
    p.add_argument("--timings", action="store_true", help="include per-method timings in each report")
    p.add_argument("--quiet", action="store_true", help="print only the summary")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("asm", help="alternating sign matrices")
    asub = p.add_subparsers(dest="asm_command", required=True)
    e = asub.add_parser("enumerate")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--stats", action="store_true")
    e.add_argument("--format", choices=("json", "csv"), default="json")
    e.set_defaults(func=cmd_asm)

    p = sub.add_parser("symbolic", help="generic Lambda-determinant as a Laurent polynomial")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_symbolic)

    p = sub.add_parser("network", help="path network of an instance")
    _add_matrix_args(p)
    _add_coeff_args(p)
    p.add_argument("--enumerate", action="store_true", help="list non-intersecting families")
    p.add_argument("--emit-dot", metavar="FILE")
    p.set_defaults(func=cmd_network)

    p = sub.add_parser("tsystem", help="evolve initial data to a target point")
    p.add_argument("--init", required=True, metavar="FILE")
    p.add_argument("--target", required=True, metavar="I,J,K")
    _add_coeff_args(p)
    p.set_defaults(func=cmd_tsystem)

    p = sub.add_parser("cluster-check", help="compound mutation check on a finite window")
    p.add_argument("--radius", type=int, required=True)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("density", help="density table as CSV")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--lambda", dest="lam", metavar="P/Q")
    p.add_argument("--mu", metavar="P/Q")
    p.add_argument("--q", metavar="P/Q")
    p.add_argument("--out", metavar="FILE.csv")
    p.add_argument("--check", action="store_true", help="also run the q-case identity check (with --q)")
    p.set_defaults(func=cmd_density)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except SchemaError as exc:
        _emit({"error": "SchemaError", "path": exc.path, "message": str(exc)}, sys.stderr)
        return 2
    except WindowTooSmall as exc:
        _emit({"error": "WindowTooSmall", "message": str(exc)}, sys.stderr)
        return 2
    except GLambdaError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
