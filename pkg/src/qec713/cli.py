"""Command-line front end: ``qec713 run|sweep|compare|circuits``.

Exit codes: 0 success or matched comparison, 1 comparison mismatch,
2 usage error.  Angles accept ``pi`` expressions such as ``pi/4``.
"""

from __future__ import annotations

import argparse
import ast
import csv
import io
import json
import math
import operator
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Sequence

import numpy as np

from .densmat import StatePrep
from .noise import PauliProbs
from .steane.experiments import QEC_MODES, ExperimentId, UnknownExperimentError

__all__ = ["main", "parse_angle", "parse_range", "build_parser"]

FIELDS = ("alpha", "beta", "px", "py", "pz", "f7", "f1", "postselect_prob")
REGION_FIELDS = ("alpha", "beta", "px", "py", "pz", "f7_before", "f7_after", "improved")
DIGITS = 12

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}
_UNOPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}


class UsageError(Exception):
    pass


def parse_angle(text: str) -> float:
    """Evaluate a number or an arithmetic ``pi`` expression without ``eval``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](ev(node.operand))
        raise ValueError(text)

    try:
        v = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid angle {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"invalid angle {text!r}")
    return v


def parse_range(text: str) -> np.ndarray:
    """``lo:hi:n`` inclusive linear grid; ``n = 1`` gives ``[lo]``."""
    parts = text.split(":")
    try:
        if len(parts) != 3:
            raise ValueError
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        if n < 1 or not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed range {text!r}, expected lo:hi:n with lo <= hi and n >= 1") from None
    return np.array([lo]) if n == 1 else np.linspace(lo, hi, n)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    return f"{float(v):.{DIGITS}g}"


def _experiment(args) -> ExperimentId:
    name = args.experiment
    try:
        if args.gate is not None:
            from .steane.library import LogicalGate

            try:
                gate = LogicalGate.parse(args.gate)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            return ExperimentId(name, gate, args.rounds)
        exp = ExperimentId.from_key(name)
        if args.rounds != 1:
            exp = ExperimentId(exp.kind, exp.gate, args.rounds)
        return exp
    except UnknownExperimentError as exc:
        raise UsageError(f"experiment: {exc}") from None


def _probs(px: float, py: float, pz: float) -> PauliProbs:
    try:
        return PauliProbs(px, py, pz)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def evaluate_point(task) -> tuple[float, float, float]:
    """``(f7, f1, postselect_prob)`` for one grid point; module-level so it pickles."""
    key, alpha, beta, probs, backend, qec_mode, encoder, shor = task
    prep = StatePrep(alpha, beta)
    if backend == "dense":
        from .steane.experiments import run_experiment

        r = run_experiment(key, prep, PauliProbs(*probs), qec_mode=qec_mode, encoder=encoder, shor_path=shor)
        return r.f7, r.f1, r.postselect_prob
    fp = _perturb_polys(key, alpha, beta, qec_mode, encoder, shor)
    return fp.f7(probs), fp.f1(probs), fp.acceptance(probs)


@lru_cache(maxsize=256)
def _perturb_polys(key, alpha, beta, qec_mode, encoder, shor):
    from .perturb.backend import fidelity_polynomial

    return fidelity_polynomial(key, StatePrep(alpha, beta), qec_mode=qec_mode, encoder=encoder, shor_path=shor)


def _threads() -> int:
    raw = os.environ.get("QEC713_THREADS", "")
    if not raw:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"QEC713_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"QEC713_THREADS must be a positive integer, got {raw!r}")
    return n


def _map(tasks: list, workers: int) -> list:
    # Executor.map returns results in task order, so output is independent of worker count.
    if workers <= 1 or len(tasks) <= 1:
        return [evaluate_point(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(evaluate_point, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def _emit(rows: list[dict], fields: Sequence[str], fmt: str, out) -> None:
    if fmt == "json":
        payload = [{k: (r[k] if isinstance(r[k], bool) else float(_fmt(r[k]))) for k in fields} for r in rows]
        out.write(json.dumps(payload[0] if len(payload) == 1 else payload, indent=2) + "\n")
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_fmt(r[k]) for k in fields])
    out.write(buf.getvalue())


def cmd_run(args, out) -> int:
    exp = _experiment(args)
    probs = _probs(args.px, args.py, args.pz)
    task = (exp.key, args.alpha, args.beta, probs.as_tuple(), args.backend, args.qec_mode, args.encoder, args.shor_prep)
    f7, f1, ps = evaluate_point(task)
    row = dict(alpha=args.alpha, beta=args.beta, px=probs.px, py=probs.py, pz=probs.pz, f7=f7, f1=f1, postselect_prob=ps)
    _emit([row], FIELDS, args.format, out)
    return 0


def _alphas(args) -> np.ndarray:
    if args.alpha_steps < 1:
        raise UsageError("alpha-steps must be at least 1")
    if args.alpha_steps == 1:
        return np.array([args.alpha])
    return np.linspace(args.alpha, args.alpha_max, args.alpha_steps)


def cmd_sweep(args, out) -> int:
    alphas = _alphas(args)
    pxs, pzs = args.px_range, args.pz_range
    _probs(float(pxs.max()), args.py, float(pzs.max()))
    common = (args.backend, args.qec_mode, args.encoder, args.shor_prep)
    grid = [(float(a), float(px), float(pz)) for a in alphas for px in pxs for pz in pzs]
    # Perturbative points reuse one cached polynomial per angle, so they run serially.
    workers = _threads() if args.backend == "dense" else 1
    if args.mode == "fidelity":
        key = _experiment(args).key
        tasks = [(key, a, args.beta, (px, args.py, pz)) + common for a, px, pz in grid]
        res = _map(tasks, workers)
        rows = [
            dict(alpha=a, beta=args.beta, px=px, py=args.py, pz=pz, f7=r[0], f1=r[1], postselect_prob=r[2])
            for (a, px, pz), r in zip(grid, res)
        ]
        _emit(rows, FIELDS, args.format, out)
        return 0
    try:
        before, after = ExperimentId.from_key(args.before).key, ExperimentId.from_key(args.after).key
    except UnknownExperimentError as exc:
        raise UsageError(f"experiment: {exc}") from None
    tasks = [(k, a, args.beta, (px, args.py, pz)) + common for a, px, pz in grid for k in (before, after)]
    res = _map(tasks, workers)
    rows = []
    for i, (a, px, pz) in enumerate(grid):
        fb, fa = res[2 * i][0], res[2 * i + 1][0]
        rows.append(dict(alpha=a, beta=args.beta, px=px, py=args.py, pz=pz, f7_before=fb, f7_after=fa, improved=fa > fb))
    _emit(rows, REGION_FIELDS, args.format, out)
    return 0


def cmd_compare(args, out) -> int:
    from .analysis import MissingReferenceError, ReferenceTable, circuit_note, compare_reference, computed_polynomial

    table = ReferenceTable.load()
    try:
        if args.label:
            entry = table.by_label(args.label)
            exp, kind = ExperimentId.from_key(entry.experiment), entry.kind
        else:
            exp, kind = _experiment(args), args.kind
            table.get(exp.key, kind)
    except MissingReferenceError as exc:
        raise UsageError(f"experiment: {exc.args[0]}") from None
    if args.tolerance < 0 or not math.isfinite(args.tolerance):
        raise UsageError("tolerance must be a finite non-negative number")
    poly = computed_polynomial(exp, kind, qec_mode=args.qec_mode, encoder=args.encoder, shor_path=args.shor_prep)
    note = circuit_note(args.encoder, args.shor_prep, args.qec_mode)
    report = compare_reference(poly, table, args.tolerance, note=note)
    out.write(report.to_json(DIGITS) + "\n")
    return 0 if report.matched else 1


_DUMPS = ("encoder", "decoder", "shor-prep", "syndrome-bit", "syndrome-phase", "qec-round", "gate-h", "gate-x", "gate-p")


def cmd_circuits(args, out) -> int:
    from .steane import (
        logical_gate_circuit,
        qec_round_circuit,
        serialize_circuit,
        shor_state_prep,
        steane_decoder,
        steane_encoder,
        syndrome_template,
    )

    if args.action == "list":
        out.write("\n".join(_DUMPS) + "\n")
        return 0
    name = args.name
    if name == "encoder":
        c = steane_encoder(args.encoder)
    elif name == "decoder":
        c = steane_decoder(steane_encoder(args.encoder))
    elif name == "shor-prep":
        c = shor_state_prep(path=args.shor_prep)
    elif name.startswith("syndrome-"):
        c = syndrome_template(name.split("-", 1)[1])
    elif name == "qec-round":
        c = qec_round_circuit(args.rounds, shor_path=args.shor_prep)
    elif name.startswith("gate-"):
        c = logical_gate_circuit(name[-1])
    else:
        raise UsageError(f"circuit must be one of {'|'.join(_DUMPS)}")
    out.write(serialize_circuit(c))
    return 0


def _common(p: argparse.ArgumentParser, experiment: bool = True) -> None:
    if experiment:
        p.add_argument("--experiment", default="encode", help="encode | gate | perfect-qec | noisy-qec, or a full key such as gate-h")
        p.add_argument("--gate", help="logical gate h|x|p")
        p.add_argument("--rounds", type=int, default=1, choices=(1, 2), help="noisy QEC rounds")
    p.add_argument("--backend", choices=("dense", "perturb"), default="dense")
    p.add_argument("--qec-mode", choices=QEC_MODES, default="postselect", help="perfect-QEC model")
    p.add_argument("--encoder", help="encoder circuit file (.sqc)")
    p.add_argument("--shor-prep", help="Shor-state preparation circuit file (.sqc)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _prob(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid probability {text!r}") from None
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"probability must lie in [0, 1], got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qec713", description="Steane-code fidelities under biased Pauli noise.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment")
    _common(run)
    run.add_argument("--alpha", type=parse_angle, default=0.0)
    run.add_argument("--beta", type=parse_angle, default=0.0)
    for name in ("px", "py", "pz"):
        run.add_argument(f"--{name}", type=_prob, default=0.0)

    sw = sub.add_parser("sweep", help="grid sweep over alpha, px and pz")
    _common(sw)
    sw.add_argument("--alpha", type=parse_angle, default=0.0, help="first alpha")
    sw.add_argument("--alpha-max", type=parse_angle, default=math.pi / 2, help="last alpha")
    sw.add_argument("--alpha-steps", type=int, default=1)
    sw.add_argument("--beta", type=parse_angle, default=0.0)
    sw.add_argument("--px-range", type=parse_range, default=parse_range("0:0:1"))
    sw.add_argument("--pz-range", type=parse_range, default=parse_range("0:0:1"))
    sw.add_argument("--py", type=_prob, default=0.0)
    sw.add_argument("--mode", choices=("fidelity", "qec-region"), default="fidelity")
    sw.add_argument("--before", default="encode", help="baseline experiment for qec-region")
    sw.add_argument("--after", default="noisy-qec", help="corrected experiment for qec-region")

    cmp_ = sub.add_parser("compare", help="compare coefficients with the reference table")
    _common(cmp_)
    cmp_.add_argument("--kind", choices=("7", "1"), default="7")
    cmp_.add_argument("--label", help="reference label such as A4 (overrides --experiment/--kind)")
    cmp_.add_argument("--tolerance", type=float, default=1e-6)

    circ = sub.add_parser("circuits", help="inspect shipped circuits")
    circ.add_argument("action", choices=("dump", "list"))
    circ.add_argument("name", nargs="?", default="encoder")
    circ.add_argument("--rounds", type=int, default=1, choices=(1, 2))
    circ.add_argument("--encoder")
    circ.add_argument("--shor-prep")
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"run": cmd_run, "sweep": cmd_sweep, "compare": cmd_compare, "circuits": cmd_circuits}[args.command]
    try:
        return handler(args, out)
    except UsageError as exc:
        parser.error(str(exc))
    except (OSError, ValueError) as exc:
        # bad circuit override files and similar input problems
        parser.error(str(exc))
    return 2  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
