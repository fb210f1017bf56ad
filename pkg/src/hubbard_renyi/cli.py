"""Command-line entry point: ``python -m hubbard_renyi <command> ...``.

Every output embeds the fully resolved configuration, so a run can be
repeated from its own header. Exit codes: 0 success, 1 usage error,
2 runtime or validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import adiabatic, analysis, compiler, hubbard, renyi
from .noise import NoiseModel, SpamModel
from .simcore import Circuit, Gate, ShotRecord, SimulationError

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2

COMMON_DEFAULTS = {
    "method": "II",
    "U": None,
    "delta": None,
    "tau": None,
    "shots": None,
    "p1": None,
    "p2": None,
    "spam": None,
    "seed": 0,
    "post_select": False,
    "out": None,
    "format": "csv",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    """'1,2,3' or 'start:stop:step' (stop inclusive)."""
    text = str(text)
    if ":" in text:
        start, stop, step = (float(x) for x in text.split(":"))
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + k * step, 12) for k in range(n)]
    return [float(x) for x in text.split(",") if x.strip()]


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON file of option values; flags override it")
    p.add_argument("--method", choices=["I", "II"], default=None)
    p.add_argument("--U", default=None, help="list '1,2,3' or range 'start:stop:step'")
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--shots", type=int, default=None)
    p.add_argument("--p1", type=float, default=None)
    p.add_argument("--p2", type=float, default=None)
    p.add_argument("--spam", default=None, help="JSON array of per-qubit 2x2 confusion matrices")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--post-select", dest="post_select", action="store_true", default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hubbard-renyi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("evolve", help="<H> after adiabatic evolution")
    _add_common(p)
    p.add_argument("--correct", action="store_true", default=None,
                   help="Method II: subtract offset (measured at U=0 unless --offset); Method I: subtract --slope * U")
    p.add_argument("--offset", type=float, default=None)
    p.add_argument("--slope", type=float, default=None)

    p = sub.add_parser("renyi", help="R2 from the swap test")
    _add_common(p)
    p.add_argument("--no-final-hadamards", dest="final_hadamards", action="store_false", default=None)
    p.add_argument("--records", nargs="+", default=None, help="re-analyze 5-qubit shot files instead of simulating")

    p = sub.add_parser("scan", help="Trotter error or depth scaling")
    _add_common(p)
    p.add_argument("--param", choices=["tau", "delta"], default=None)
    p.add_argument("--metric", choices=["eps_r2", "eps_psi", "depth"], default=None)
    p.add_argument("--values", default=None)
    p.add_argument("--fixed", type=float, default=None, help="the parameter held fixed")

    p = sub.add_parser("compile", help="lower gates or circuits to R/Rz/XX")
    _add_common(p)
    p.add_argument("gate", nargs="?", default=None, help="h, rx, ry, cnot, swap, rzz, cswap")
    p.add_argument("--angle", type=float, default=None)
    p.add_argument("--circuit", default=None, help="JSON-lines circuit file")
    p.add_argument("--signs", default=None, help="alpha,beta,gamma each +1 or -1")

    p = sub.add_parser("truthtable", help="C-Swap truth table")
    _add_common(p)
    p.add_argument("--signs", default=None)

    p = sub.add_parser("analyze", help="SPAM-correct and post-select ingested shot files")
    _add_common(p)
    p.add_argument("files", nargs="*", default=[])
    p.add_argument("--energy", nargs=2, metavar=("Z_FILE", "X_FILE"), default=None)
    return parser


COMMAND_DEFAULTS = {
    "evolve": {"correct": False, "offset": None, "slope": 0.063},
    "renyi": {"final_hadamards": True, "records": None},
    "scan": {"param": "tau", "metric": "eps_r2", "values": None, "fixed": None},
    "compile": {"gate": None, "angle": None, "circuit": None, "signs": "1,1,1"},
    "truthtable": {"signs": "1,1,1", "shots": 2000},
    "analyze": {"files": [], "energy": None, "format": "json"},
}


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(COMMON_DEFAULTS)
    cfg.update(COMMAND_DEFAULTS.get(args.command, {}))
    if args.config:
        path = Path(args.config)
        if not path.is_file():
            raise UsageError(f"config file not found: {args.config}")
        loaded = json.loads(path.read_text())
        noise = loaded.pop("noise", None) or {}
        loaded.update({k: v for k, v in noise.items() if k in ("p1", "p2")})
        cfg.update({k.replace("-", "_"): v for k, v in loaded.items()})
    for key, value in vars(args).items():
        if key in ("command", "config") or value is None:
            continue
        if key == "files" and not value:
            continue
        cfg[key] = value
    cfg["command"] = args.command
    return cfg


def _noise(cfg) -> NoiseModel | None:
    if cfg["p1"] is None and cfg["p2"] is None:
        return None
    return NoiseModel(
        p1=cfg["p1"] if cfg["p1"] is not None else 0.0,
        p2=cfg["p2"] if cfg["p2"] is not None else 0.0,
        seed=cfg["seed"],
    )


def _spam(cfg) -> SpamModel | None:
    return SpamModel.load(cfg["spam"]) if cfg["spam"] else None


def _signs(text) -> tuple[int, int, int]:
    vals = tuple(int(x) for x in str(text).split(","))
    if len(vals) != 3 or any(v not in (1, -1) for v in vals):
        raise ValueError(f"--signs needs three values of +1/-1, got {text!r}")
    return vals


def _schedule(cfg, U: float) -> adiabatic.TrotterSchedule:
    if cfg["method"] == "I":
        delta = cfg["delta"] if cfg["delta"] is not None else adiabatic.METHOD_I_DELTA
        tau = cfg["tau"] if cfg["tau"] is not None else adiabatic.METHOD_I_TAU
        return adiabatic.TrotterSchedule.method_i(U, delta, tau)
    if U <= 0:
        raise ValueError("Method II needs U > 0 (tau = N_steps*delta/U diverges at U = 0)")
    delta = cfg["delta"] if cfg["delta"] is not None else adiabatic.METHOD_II_DELTA
    return adiabatic.TrotterSchedule.method_ii(U, delta)


def _U_values(cfg) -> list[float]:
    if cfg["U"] is None:
        return _float_list("0:6:1") if cfg["method"] == "I" else _float_list("1:5:1")
    if isinstance(cfg["U"], (list, tuple)):
        return [float(u) for u in cfg["U"]]
    return _float_list(cfg["U"])


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _table(cfg, columns, rows, extra: dict | None = None) -> str:
    public = {k: v for k, v in sorted(cfg.items()) if k != "out"}
    if cfg["format"] == "json":
        obj = {"config": public, "rows": [dict(zip(columns, r)) for r in rows]}
        if extra:
            obj.update(extra)
        return json.dumps(obj, indent=2, default=str) + "\n"
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(public, sort_keys=True, default=str) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    if extra:
        for key, value in extra.items():
            buf.write(f"# {key}: {json.dumps(value, sort_keys=True, default=str)}\n")
    return buf.getvalue()


def _emit(cfg, text: str):
    if cfg["out"]:
        Path(cfg["out"]).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_evolve(cfg) -> int:
    noise = _noise(cfg)
    shots = cfg["shots"]
    rows = []
    schedules = [_schedule(cfg, U) for U in _U_values(cfg)]
    estimates = [
        adiabatic.estimate_energy(s, shots=shots, seed=cfg["seed"] + i, noise=noise)
        for i, s in enumerate(schedules)
    ]
    points = [(s.U, e.h_expect) for s, e in zip(schedules, estimates)]
    corrected = [None] * len(points)
    extra = {}
    if cfg["correct"]:
        if cfg["method"] == "II":
            offset = cfg["offset"]
            if offset is None:
                offset = adiabatic.measure_offset(
                    noise, shots=shots or 2500, seed=cfg["seed"] + 10_000,
                    delta=schedules[0].delta,
                ) if noise is not None else 0.0
            corrected = [h for _, h in adiabatic.apply_energy_correction(points, "II", offset)]
            extra["offset"] = offset
        else:
            corrected = [h for _, h in adiabatic.apply_energy_correction(points, "I", cfg["slope"])]
            extra["slope"] = cfg["slope"]
    for s, (U, h), hc in zip(schedules, points, corrected):
        rows.append([U, s.method, s.delta, s.tau, s.n_steps,
                     hubbard.exact_ground_state(U).ground_energy, h, hc])
    cols = ["U", "method", "delta", "tau", "n_steps", "h_exact", "h_sim", "h_corrected"]
    _emit(cfg, _table(cfg, cols, rows, extra or None))
    return EXIT_OK


def _r2_row(U, method, raw: renyi.R2Estimate, post: renyi.R2Estimate):
    return [U, method, raw.r2, post.r2, post.yield_fraction, raw.std_err, post.std_err]


def cmd_renyi(cfg) -> int:
    cols = ["U", "method", "r2_raw", "r2_post", "yield", "std_err_raw", "std_err_post"]
    spam = _spam(cfg)
    rows = []
    if cfg["records"]:
        Us = _U_values(cfg) if cfg["U"] is not None else [None] * len(cfg["records"])
        if len(Us) != len(cfg["records"]):
            raise ValueError("--U must list one value per record file")
        for U, path in zip(Us, cfg["records"]):
            raw, post = renyi.analyze_record(ShotRecord.load(path), spam)
            rows.append(_r2_row(U, cfg["method"], raw, post))
        _emit(cfg, _table(cfg, cols, rows))
        return EXIT_OK
    noise = _noise(cfg)
    for i, U in enumerate(_U_values(cfg)):
        s = _schedule(cfg, U)
        data = renyi.run_swap_test(s, noise=noise, shots=cfg["shots"], seed=cfg["seed"] + i,
                                   final_hadamards=cfg["final_hadamards"], spam=spam)
        if isinstance(data, ShotRecord):
            raw, post = renyi.analyze_record(data, spam)
        else:
            raw = renyi.estimate_r2_from_distribution(data, False)
            post = renyi.estimate_r2_from_distribution(data, True)
        rows.append(_r2_row(U, s.method, raw, post))
    _emit(cfg, _table(cfg, cols, rows))
    return EXIT_OK


def cmd_scan(cfg) -> int:
    param, metric = cfg["param"], cfg["metric"]
    if metric == "depth":
        default_values = analysis.DEPTH_TAU_GRID if param == "tau" else analysis.DEPTH_DELTA_GRID
    else:
        default_values = analysis.TAU_GRID if param == "tau" else analysis.DELTA_GRID
    values = _float_list(cfg["values"]) if cfg["values"] else list(default_values)
    fixed = cfg["fixed"]
    if fixed is None:
        fixed = analysis.TAU_SCAN_DELTA if param == "tau" else analysis.DELTA_SCAN_TAU
    if metric == "depth":
        points = analysis.depth_scan(param, values, fixed)
    else:
        points = analysis.error_scan(metric, param, values, fixed)
    rows = [[param, p.parameter, metric, p.value] for p in points]
    fit = analysis.loglog_fit(points).to_dict() if len(points) >= 3 else None
    text = _table(cfg, ["param_name", "param_value", "metric_name", "metric_value"], rows)
    _emit(cfg, text)
    if fit is not None:
        fit_text = json.dumps(fit, sort_keys=True) + "\n"
        if cfg["out"]:
            Path(str(cfg["out"]) + ".fit.json").write_text(fit_text)
        else:
            sys.stderr.write(fit_text)
    return EXIT_OK


_GATES = {
    "h": lambda a: Gate("H", (0,)),
    "rx": lambda a: Gate("Rx", (0,), (a,)),
    "ry": lambda a: Gate("Ry", (0,), (a,)),
    "cnot": lambda a: Gate("CNOT", (0, 1)),
    "swap": lambda a: Gate("Swap", (0, 1)),
    "rzz": lambda a: Gate("Rzz", (0, 1), (a,)),
    "cswap": lambda a: Gate("CSwap", (0, 1, 2)),
}

RESIDUAL_LIMIT = 1e-8


def cmd_compile(cfg) -> int:
    signs = _signs(cfg["signs"])
    if cfg["gate"]:
        name = cfg["gate"].lower()
        if name not in _GATES:
            raise UsageError(f"unknown gate {cfg['gate']!r}; choose from {sorted(_GATES)}")
        angle = cfg["angle"] if cfg["angle"] is not None else 0.7
        logical = Circuit(3 if name == "cswap" else (2 if name in ("cnot", "swap", "rzz") else 1),
                          [_GATES[name](angle)])
    elif cfg["circuit"]:
        logical = Circuit.from_jsonl(Path(cfg["circuit"]).read_text())
    elif cfg["U"] is not None:
        U = _U_values(cfg)
        if len(U) != 1:
            raise ValueError("compile takes a single --U value")
        logical = renyi.build_swap_test_circuit(_schedule(cfg, U[0]))
    else:
        raise UsageError("compile needs a gate name, --circuit FILE, or --method/--U")
    result = compiler.lower_circuit(logical, signs)
    residual = compiler.phase_aligned_deviation(result.native_circuit.unitary(), logical.unitary())
    summary = {
        "entangling_count": result.entangling_count,
        "single_qubit_count": result.single_qubit_count,
        "rz_count": result.rz_count,
        "depth": result.depth,
        "residual": residual,
        "verified": residual < RESIDUAL_LIMIT,
    }
    text = result.native_circuit.to_jsonl() + json.dumps({"summary": summary}) + "\n"
    _emit(cfg, text)
    if residual >= RESIDUAL_LIMIT:
        sys.stderr.write(f"verification failed: residual {residual:.3e}\n")
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_truthtable(cfg) -> int:
    table = renyi.cswap_truth_table(_noise(cfg), shots=cfg["shots"], seed=cfg["seed"],
                                    signs=_signs(cfg["signs"]))
    success, control = renyi.truth_table_metrics(table)
    labels = [format(i, "03b") for i in range(8)]
    rows = [[labels[i], *table[i].tolist()] for i in range(8)]
    extra = {"metrics": {"average_success": success, "control_correct": control}}
    _emit(cfg, _table(cfg, ["input", *labels], rows, extra))
    return EXIT_OK


def cmd_analyze(cfg) -> int:
    if not cfg["files"] and not cfg["energy"]:
        raise UsageError("analyze needs shot files or --energy Z_FILE X_FILE")
    spam = _spam(cfg)
    reports = []
    for path in cfg["files"]:
        record = ShotRecord.load(path)
        if record.num_qubits != 5:
            raise ValueError(f"{path}: expected a 5-qubit swap-test record, got {record.num_qubits} qubits")
        if spam is not None and spam.num_qubits != 5:
            raise ValueError("confusion-matrix file does not describe 5 qubits")
        raw, post = renyi.analyze_record(record, spam)
        reports.append({
            "file": str(path), "shots": record.total_shots,
            "r2_raw": raw.r2, "std_err_raw": raw.std_err,
            "r2_post": post.r2, "std_err_post": None if not post.defined else post.std_err,
            "yield": post.yield_fraction, "r2_defined": post.defined,
        })
    energy = None
    if cfg["energy"]:
        z_rec, x_rec = (ShotRecord.load(p) for p in cfg["energy"])
        if spam is not None:
            z_rec, x_rec = (_corrected_record(r, spam) for r in (z_rec, x_rec))
        U = _U_values(cfg)[0] if cfg["U"] is not None else 0.0
        e = adiabatic.energy_from_records(U, z_rec, x_rec)
        energy = {"U": U, "h": e.h_expect, "x1": e.x1, "x2": e.x2, "z1z2": e.z1z2}
    public = {k: v for k, v in sorted(cfg.items()) if k != "out"}
    if cfg["format"] == "json":
        text = json.dumps({"config": public, "records": reports, "energy": energy}, indent=2, default=str) + "\n"
    else:
        cols = ["file", "shots", "r2_raw", "r2_post", "yield", "std_err_raw", "std_err_post", "r2_defined"]
        text = _table(cfg, cols, [[r[c] for c in cols] for r in reports],
                      {"energy": energy} if energy else None)
    _emit(cfg, text)
    return EXIT_OK


def _corrected_record(record: ShotRecord, spam: SpamModel) -> ShotRecord:
    from .noise import correct_spam

    if spam.num_qubits != record.num_qubits:
        raise ValueError("confusion-matrix file does not match the record's qubit count")
    probs = correct_spam(record.frequencies(), spam)
    # keep enough resolution that parities are unaffected by rounding
    scale = 10**9
    return ShotRecord.from_array(np.rint(probs * scale).astype(np.int64), record.num_qubits)


COMMANDS = {
    "evolve": cmd_evolve,
    "renyi": cmd_renyi,
    "scan": cmd_scan,
    "compile": cmd_compile,
    "truthtable": cmd_truthtable,
    "analyze": cmd_analyze,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (ValueError, SimulationError, OSError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
