"""Command-line front end.

    qunfold compute-metric --f sld --input point.json
    qunfold compute-split --f kmb --n 3 --seed 7
    qunfold compute-entropy --g mlog --input states.json
    qunfold verify split --n 2 3 4 --trials 100 --seed 42

Exit status: 0 on success or passing suite, 1 on a failing suite, 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

from .errors import QunfoldError
from .gentropy import g_names, get_g, relative_g_entropy
from .matcore import matrix_from_json
from .petz import f_names, get_f
from .states import (
    DensityMatrix,
    UnfoldedPoint,
    haar_unitary,
    make_rng,
    point_from_json,
    random_density,
    random_tangent_m,
    sample_simplex,
    tangent_from_json,
)
from .unfold import project, pullback_metric, split_metric
from .verify import SUITES, SuiteConfig, report_document, run_suite

COMMANDS = ("compute-metric", "compute-entropy", "compute-split", "verify")
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class CliConfig:
    command: str
    suite: str | None = None
    n: tuple | None = None
    f_name: str = "sld"
    g_name: str = "mlog"
    seed: int = 0
    trials: int = 100
    step: float = 1e-3
    tol: float | None = None
    format: str = "json"
    input: str | None = None
    output: str | None = None


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return value


def _dimension(text: str) -> int:
    value = _positive_int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"dimension must be >= 2: {text!r}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _default_seed() -> int:
    raw = os.environ.get("QIG_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qunfold", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=_dimension, nargs="+", help="Hilbert space dimension(s)")
    common.add_argument("--seed", type=int, default=None, help="base seed (default: $QIG_SEED or 0)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--input", help="JSON input file")
    common.add_argument("--output", help="write the report here instead of stdout")

    for name in ("compute-metric", "compute-split"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--f", dest="f_name", choices=f_names(), default="sld")
    p = sub.add_parser("compute-entropy", parents=[common])
    p.add_argument("--g", dest="g_name", choices=g_names(), default="mlog")

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--step", type=_positive_float, default=1e-3)
    p.add_argument("--tol", type=_positive_float, default=None)
    return parser


def parse_args(argv=None) -> CliConfig:
    """Parse ``argv`` into a :class:`CliConfig`; usage errors exit with status 2."""
    ns = build_parser().parse_args(argv)
    return CliConfig(
        command=ns.command,
        suite=getattr(ns, "suite", None),
        n=tuple(ns.n) if ns.n else None,
        f_name=getattr(ns, "f_name", "sld"),
        g_name=getattr(ns, "g_name", "mlog"),
        seed=_default_seed() if ns.seed is None else ns.seed,
        trials=getattr(ns, "trials", 100),
        step=getattr(ns, "step", 1e-3),
        tol=getattr(ns, "tol", None),
        format=ns.format,
        input=ns.input,
        output=ns.output,
    )


# inputs


def _load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _state_from_json(obj) -> DensityMatrix:
    if isinstance(obj, dict) and "u" in obj:
        return project(point_from_json(obj))
    return DensityMatrix(matrix_from_json(obj))


def _tangent_inputs(cfg: CliConfig):
    if cfg.input:
        doc = _load_json(cfg.input)
        m = point_from_json(doc["point"])
        x = tangent_from_json(doc["x"])
        y = tangent_from_json(doc["y"]) if "y" in doc else x
        return m, x, y
    n = cfg.n[0] if cfg.n else 2
    rng = make_rng(cfg.seed)
    m = UnfoldedPoint(haar_unitary(n, rng), sample_simplex(n, rng))
    return m, random_tangent_m(n, rng), random_tangent_m(n, rng)


def _entropy_inputs(cfg: CliConfig):
    if cfg.input:
        doc = _load_json(cfg.input)
        return _state_from_json(doc["rho"]), _state_from_json(doc["sigma"])
    n = cfg.n[0] if cfg.n else 2
    rng = make_rng(cfg.seed)
    return random_density(n, rng), random_density(n, rng)


# output


def _rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _suite_rows(doc: dict):
    for rep in doc["reports"]:
        for q in rep["quantities"]:
            yield [
                doc["suite"], rep["trial_id"], rep["seed"], " ".join(map(str, rep["stream"])), rep["n"],
                rep["function"], q["name"], q["value"], q["reference"], q["abs_error"], q["tol"], q["bound"], q["check"],
                q["passed"],
            ]


SUITE_CSV_HEADER = [
    "suite", "trial_id", "seed", "stream", "n", "function", "quantity", "value", "reference", "abs_error", "tol",
    "bound", "check", "passed",
]


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    if doc.get("command") == "verify":
        suites = doc["suites"] if doc["suite"] == "all" else [doc]
        rows = [row for s in suites for row in _suite_rows(s)]
        return _rows_to_csv(SUITE_CSV_HEADER, rows)
    keys = [k for k in doc if k not in ("schema",)]
    return _rows_to_csv(keys, [[doc[k] for k in keys]])


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _compute(cfg: CliConfig) -> dict:
    if cfg.command == "compute-entropy":
        g = get_g(cfg.g_name)
        rho, sigma = _entropy_inputs(cfg)
        return {"schema": 1, "command": cfg.command, "g": g.name, "n": rho.n,
                "value": relative_g_entropy(rho, sigma, g)}
    f = get_f(cfg.f_name)
    m, x, y = _tangent_inputs(cfg)
    if cfg.command == "compute-metric":
        return {"schema": 1, "command": cfg.command, "f": f.name, "n": m.n, "value": pullback_metric(m, x, y, f)}
    s = split_metric(m, x, y, f)
    return {"schema": 1, "command": cfg.command, "f": f.name, "n": m.n,
            "classical": s.classical, "quantum": s.quantum, "total": s.total}


def _verify(cfg: CliConfig) -> tuple[dict, bool]:
    suites = SUITES if cfg.suite == "all" else (cfg.suite,)
    docs = []
    for name in suites:
        sc = SuiteConfig(name, cfg.n, cfg.trials, cfg.seed, cfg.tol, cfg.step)
        docs.append(report_document(sc, run_suite(sc)))
    ok = all(d["passed"] for d in docs)
    if cfg.suite == "all":
        return {"schema": 1, "command": "verify", "suite": "all", "passed": ok, "suites": docs}, ok
    doc = {"command": "verify", **docs[0]}
    return doc, ok


def run(cfg: CliConfig) -> int:
    """Execute ``cfg``, write the report and return the exit status."""
    try:
        if cfg.command == "verify":
            doc, ok = _verify(cfg)
            status = EXIT_OK if ok else EXIT_FAIL
        else:
            doc, status = _compute(cfg), EXIT_OK
        _emit(render(doc, cfg.format), cfg.output)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, QunfoldError) as exc:
        print(f"qunfold: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if status == EXIT_FAIL:
        _report_failures(doc)
    return status


def _report_failures(doc: dict, limit: int = 10) -> None:
    suites = doc["suites"] if doc["suite"] == "all" else [doc]
    for s in suites:
        failed = [r for r in s["reports"] if not r["passed"]]
        if not failed:
            continue
        print(f"qunfold: suite {s['suite']} FAILED ({len(failed)} of {len(s['reports'])} reports)", file=sys.stderr)
        for rep in failed[:limit]:
            for q in rep["quantities"]:
                if not q["passed"]:
                    print(f"  trial {rep['trial_id']} n={rep['n']} {rep['function']} {q['name']}: "
                          f"error {q['abs_error']!r} > bound {q['bound']!r}", file=sys.stderr)
            if "note" in rep:
                print(f"  trial {rep['trial_id']}: {rep['note']}", file=sys.stderr)


def main(argv=None) -> int:
    return run(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
