"""
Command-line entry point: ``qcanon <command> [options]``.

Exit codes: 0 success, 1 failed self-test or unexpected error category,
2 invalid input, 3 a mathematical consistency check failed, 4 depth exceeded.
All JSON output is written with sorted keys so identical inputs give
identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

from . import acceptance, falgebra, linalg, rmatrix, tensorcb, theta
from .cartan import (CartanDatum, dims_of_height, load_datum, named_datum, parse_dimvector,
                     parse_weights)
from .errors import ConfigError, QCanonError
from .hwmodule import HWModule
from .tensor import TensorModule, key_str

COMMANDS = ("build-module", "tensor-cb", "transition", "theta", "ybe", "braid", "gram", "selftest")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qcanon", description="Exact canonical bases of tensor products.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--cartan", help="Cartan datum JSON file")
    p.add_argument("--type", dest="type_name", help="named Cartan type instead of a file (A1, A2, A1xA1, ...)")
    p.add_argument("--weights", help="dominant weights, e.g. '1,0;0,1'")
    p.add_argument("--depth", help="depth cutoff per vertex, e.g. '2,2' (default: whole module)")
    p.add_argument("--max-degree", type=int, default=2, help="largest height for the theta table")
    p.add_argument("--rank", type=int, default=2, help="braid: rank m of type A_m")
    p.add_argument("--factors", type=int, default=3, help="braid: number of tensor factors")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write the result here instead of stdout")
    p.add_argument("--timings", action="store_true", help="add wall-clock timings (breaks byte-determinism)")
    return p


class JobConfig:
    def __init__(self, command, datum, weights, depth, args):
        self.command = command
        self.datum: CartanDatum | None = datum
        self.weights = weights
        self.depth = depth
        self.args = args


def parse_config(argv=None) -> JobConfig:
    args = _parser().parse_args(argv)
    datum = None
    if args.cartan and args.type_name:
        raise ConfigError("give either --cartan or --type, not both")
    if args.cartan:
        datum = load_datum(args.cartan)
    elif args.type_name:
        datum = named_datum(args.type_name)
    needs_datum = args.command in ("build-module", "tensor-cb", "transition", "theta", "ybe", "gram")
    if needs_datum and datum is None:
        raise ConfigError(f"{args.command} needs --cartan <file> or --type <name>")
    weights = parse_weights(args.weights, datum) if args.weights else None
    depth = parse_dimvector(args.depth, datum) if args.depth else None
    want = {"build-module": 1, "tensor-cb": None, "transition": None, "ybe": 3}
    if args.command in want:
        if weights is None:
            raise ConfigError(f"{args.command} needs --weights")
        n = want[args.command]
        if n is not None and len(weights) != n:
            raise ConfigError(f"{args.command} expects {n} weight(s), got {len(weights)}")
        if n is None and len(weights) < 2:
            raise ConfigError(f"{args.command} expects at least two weights")
    if args.format == "csv" and args.command not in ("transition", "gram"):
        raise ConfigError("csv output is only available for matrices (transition, gram)")
    if args.max_degree < 0:
        raise ConfigError("--max-degree must be nonnegative")
    return JobConfig(args.command, datum, weights, depth, args)


# --- commands --------------------------------------------------------------------------

def _labels(n: int) -> dict:
    """Both readings of the factor order."""
    return {
        "tensor_order": [f"L(Lambda_{n - k})" for k in range(n)],
        "note": "factors are listed left to right in tensor order; the sequence (Lambda_1..Lambda_N) "
                "corresponds to L(Lambda_N) (x) ... (x) L(Lambda_1)",
    }


def cmd_build_module(cfg: JobConfig) -> dict:
    m = HWModule(cfg.datum, cfg.weights[0], cfg.depth)
    return {"datum": cfg.datum.to_json(), "module": m.to_json()}


def _tensor(cfg: JobConfig) -> TensorModule:
    return TensorModule([HWModule(cfg.datum, w, cfg.depth) for w in cfg.weights])


def cmd_tensor_cb(cfg: JobConfig) -> dict:
    tm = _tensor(cfg)
    db = tensorcb.diamond_basis(tm)
    index = [{"key": _key_json(k), "label": key_str(tm, k)} for k in db.order]
    expansions = []
    for t in db.order:
        expansions.append({"pure": key_str(tm, t),
                           "terms": [{"pure": key_str(tm, t2), "coeff": str(p)}
                                     for t2, p in sorted(db.element_cb(t).items(), key=lambda kv: db.order.index(kv[0]))]})
    return {
        "datum": cfg.datum.to_json(),
        "weights": [list(w) for w in cfg.weights],
        "factors": _labels(tm.n),
        "pure_tensors": index,
        "elements": expansions,
        "transition": _blocks_json(db),
        "verdict": tensorcb.transition_report(db),
    }


def _key_json(key) -> list:
    return [{"depth": list(nu), "index": j} for nu, j in key]


def _blocks_json(db) -> list:
    out = []
    for mu, keys in db.blocks.items():
        out.append({"block": list(mu), "matrix": [[str(x) for x in row] for row in tensorcb.transition_matrix(db, mu)]})
    return out


def cmd_transition(cfg: JobConfig):
    tm = _tensor(cfg)
    db = tensorcb.diamond_basis(tm)
    if cfg.args.format == "csv":
        rows = [["block", "row", "col", "entry"]]
        for mu, keys in db.blocks.items():
            mat = tensorcb.transition_matrix(db, mu)
            for r, row in enumerate(mat):
                for c, x in enumerate(row):
                    rows.append([";".join(map(str, mu)), r, c, str(x)])
        return rows
    return {"transition": _blocks_json(db), "verdict": tensorcb.transition_report(db)}


def cmd_theta(cfg: JobConfig) -> dict:
    d = cfg.datum
    comps = []
    for h in range(cfg.args.max_degree + 1):
        for nu in dims_of_height(d.rank, h):
            comps.append(theta.theta(d, nu).to_json(d))
    return {"datum": d.to_json(), "max_degree": cfg.args.max_degree, "components": comps}


def cmd_ybe(cfg: JobConfig) -> dict:
    rep = rmatrix.ybe_check(cfg.datum, cfg.weights, cfg.depth)
    return {"datum": cfg.datum.to_json(), "weights": [list(w) for w in cfg.weights], "report": rep,
            "passed": rep["equal"]}


def cmd_braid(cfg: JobConfig) -> dict:
    if cfg.args.rank < 1 or cfg.args.factors < 2:
        raise ConfigError("braid needs --rank >= 1 and --factors >= 2")
    rep = rmatrix.schur_weyl_demo(cfg.args.rank, cfg.args.factors)
    return {"report": rep, "passed": rep["braid_holds"]}


def cmd_gram(cfg: JobConfig):
    d = cfg.datum
    if cfg.depth is None:
        raise ConfigError("gram needs --depth")
    if cfg.weights:
        m = HWModule(d, cfg.weights[0], cfg.depth)
        piv = m.spaces[cfg.depth].pivots if cfg.depth in m.spaces else []
        gram = m.gram(cfg.depth) if piv else []
        what = "contravariant form on L(Lambda)"
    else:
        data = falgebra.basis_and_gram(d, cfg.depth)
        piv, gram = data.pivot_words, data.gram
        what = "bilinear form on f"
    if cfg.args.format == "csv":
        rows = [["row", "col", "entry"]]
        for r, row in enumerate(gram):
            for c, x in enumerate(row):
                rows.append([r, c, str(x)])
        return rows
    return {"form": what, "depth": list(cfg.depth),
            "pivots": [falgebra.word_to_json(d, w) for w in piv],
            "gram": linalg.mat_to_json(gram)}


def cmd_selftest(cfg: JobConfig) -> dict:
    acceptance.reset_caches()
    report = acceptance.run_all()
    # recompute from empty caches; criterion 10 also compares two separate processes
    acceptance.reset_caches()
    again = acceptance.run_all()
    same = acceptance.dumps(report) == acceptance.dumps(again)
    report["determinism"] = {"in_process_rerun_identical": same}
    report["passed"] = report["passed"] and same
    return report


HANDLERS = {
    "build-module": cmd_build_module,
    "tensor-cb": cmd_tensor_cb,
    "transition": cmd_transition,
    "theta": cmd_theta,
    "ybe": cmd_ybe,
    "braid": cmd_braid,
    "gram": cmd_gram,
    "selftest": cmd_selftest,
}


def _render(result, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(result)
        return buf.getvalue()
    return json.dumps(result, sort_keys=True, indent=2, default=str) + "\n"


def run(cfg: JobConfig) -> int:
    start = time.perf_counter()
    result = HANDLERS[cfg.command](cfg)
    if isinstance(result, dict):
        result.setdefault("conventions", theta.CONVENTION)
        if cfg.args.timings:
            result["timings"] = {"seconds": round(time.perf_counter() - start, 3)}
    text = _render(result, cfg.args.format)
    if cfg.args.out:
        Path(cfg.args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if isinstance(result, dict) and result.get("passed") is False:
        return 1
    return 0


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
        return run(cfg)
    except QCanonError as exc:
        print(f"qcanon: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"qcanon: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
