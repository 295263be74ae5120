"""Command-line front end.

Subcommands
-----------
point           V(phi), V_max, V_min, purity product (and entanglement) at one point
sweep           grid over (r, x = 2 pi omega0 / a) for contour plots
critical-curve  V_min = 1 boundary x(r)
purify          purifying left-wedge ratio z and the purified variances
oracle-check    closed forms against the discretized Gaussian oracle

Every command writes one table, as CSV (default) or JSON, to ``--out`` or
stdout.  Exit codes: 0 success, 1 validation error, 2 solver or tolerance
failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import replace
from typing import Optional

import numpy as np

from .errors import ConsistencyError, IntegrationError, SolverError, UnruhError, ValidationError
from .modes import (
    AccelerationFrame,
    ModeIntegrals,
    mode_integrals,
    packet_from_dict,
    scaled_frequency_for_ic,
)
from .oracle import (
    DEFAULT_ALPHA,
    DiscretizedScenario,
    Displace,
    LocalOscillator,
    SingleSqueeze,
    TwoSqueeze,
    build_transform,
    detected_covariance,
    detected_variances,
    discretize,
    mc_homodyne,
    output_state,
)
from .purify import PurificationScenario, optimal_z_narrowband, purified_variance, purity_residual, solve_z_integrals
from .single_mode import SqueezeScenario, purity_product, squeezer_variance, vmax_vmin
from .sweeps import CRITICAL_COLUMNS, SWEEP_COLUMNS, critical_curve, parse_range, sweep
from .two_mode import cov_entries, log_negativity

EXIT_OK, EXIT_VALIDATION, EXIT_SOLVER, EXIT_IO = 0, 1, 2, 3

SCHEMA_VERSION = 1

POINT_COLUMNS = ("r", "i_c", "phi", "v_phi", "v_max", "v_min", "purity_product")
ENTANGLE_COLUMNS = ("cov_a", "cov_b", "nu_minus", "log_negativity")
PURIFY_COLUMNS = ("r", "i_c", "i_s", "i_cs", "z_narrowband", "z", "residual", "phi", "v_phi")
ORACLE_COLUMNS = ("check", "closed_form", "oracle", "error", "tolerance", "passed")

#: JSON document schema shared by all commands (``columns`` differ per command).
JSON_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "columns", "rows"],
    "additionalProperties": False,
    "properties": {
        "schema": {"type": "string", "pattern": "^[a-z-]+/[0-9]+$"},
        "columns": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "rows": {
            "type": "array",
            "items": {"type": "array", "items": {"type": ["number", "string", "boolean"]}},
        },
    },
}

TABLE_COLUMNS = {
    "point": POINT_COLUMNS + ENTANGLE_COLUMNS,
    "sweep": SWEEP_COLUMNS,
    "critical-curve": CRITICAL_COLUMNS,
    "purify": PURIFY_COLUMNS,
    "oracle-check": ORACLE_COLUMNS,
}

DEFAULTS = {
    "r": 0.5,
    "a": 1.0,
    "phi": [0.0, math.pi / 4, math.pi / 2],
    "phi_steps": None,
    "grid": None,
    "out": None,
    "format": "csv",
    "tol": None,
    "seed": 0,
    "alpha": DEFAULT_ALPHA,
    "nodes": None,
    "workers": 4,
    "entangle": False,
    "ic": None,
    "omega0_over_a": None,
    "packet": None,
    "beta": 1.0,
    "shots": 20000,
}

DEFAULT_GRIDS = {
    "sweep": {"r": "0.05:3:60", "x": "0.2:6:117"},
    "critical-curve": {"r": "0.05:20:400"},
}

DEFAULT_TOL = {"point": 1e-9, "sweep": 1e-9, "critical-curve": 1e-9, "purify": 1e-9, "oracle-check": 1e-3}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _common(p: argparse.ArgumentParser, source: bool = True):
    p.add_argument("--config", help="JSON file of option values (command-line flags take precedence)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--tol", type=float, help="tolerance")
    if source:
        p.add_argument("--r", type=float, help="squeezing factor")
        p.add_argument("--a", type=float, help="proper acceleration (default 1)")
        g = p.add_mutually_exclusive_group()
        g.add_argument("--ic", type=float, help="narrowband I_c")
        g.add_argument("--omega0-over-a", type=float, dest="omega0_over_a", help="narrowband omega0 / a")
        g.add_argument("--packet", help="JSON wave-packet file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="unruh-decoherence", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("point", help="variances and entanglement at one (r, I_c)")
    _common(p)
    p.add_argument("--phi", type=float, nargs="+", help="local-oscillator phases")
    p.add_argument("--phi-steps", type=int, dest="phi_steps", help="use this many phases evenly over [0, pi)")
    p.add_argument("--entangle", action="store_true", default=None, help="add two-mode covariance and negativity")

    p = sub.add_parser("sweep", help="(r, 2 pi omega0 / a) grid")
    _common(p, source=False)
    p.add_argument("--grid", action="append", help='axis range "r=lo:hi:steps" or "x=lo:hi:steps"')
    p.add_argument("--workers", type=int)

    p = sub.add_parser("critical-curve", help="V_min = 1 boundary")
    _common(p, source=False)
    p.add_argument("--grid", action="append", help='"r=lo:hi:steps"')

    p = sub.add_parser("purify", help="purifying left-wedge displacement ratio")
    _common(p)
    p.add_argument("--phi", type=float, nargs="+")

    p = sub.add_parser("oracle-check", help="closed forms vs discretized oracle")
    _common(p)
    p.add_argument("--alpha", type=float, help="local-oscillator amplitude |alpha|")
    p.add_argument("--nodes", type=int, help="frequency nodes for a packet (default 400)")
    p.add_argument("--beta", type=float, help="coherent source amplitude")
    p.add_argument("--seed", type=int)
    p.add_argument("--shots", type=int)
    return parser


# --------------------------------------------------------------------------- config


def resolve(args: argparse.Namespace) -> dict:
    """Merge flags over config-file values over defaults."""
    cfg = {}
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(cfg, dict):
            raise ValidationError("config file must hold a JSON object")
        unknown = set(cfg) - set(DEFAULTS)
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
    opts = dict(DEFAULTS)
    opts.update(cfg)
    source = ("ic", "omega0_over_a", "packet")
    if any(getattr(args, k, None) is not None for k in source):
        # a source given on the command line replaces any source from the config
        for k in source:
            opts[k] = None
    for key, value in vars(args).items():
        if key in ("command", "config"):
            continue
        if value is not None:
            opts[key] = value
    source_keys = [k for k in source if opts.get(k) is not None]
    if len(source_keys) > 1:
        raise ValidationError(f"choose one of --ic, --omega0-over-a, --packet (got {source_keys})")
    if opts["tol"] is None:
        opts["tol"] = DEFAULT_TOL[args.command]
    if not opts["tol"] > 0:
        raise ValidationError("--tol must be positive")
    if not opts["a"] > 0:
        raise ValidationError("--a must be positive")
    opts["command"] = args.command
    return opts


def _grid(opts: dict) -> dict:
    axes = dict(DEFAULT_GRIDS[opts["command"]])
    for item in opts["grid"] or []:
        name, sep, rng = item.partition("=")
        if not sep or name not in axes:
            raise ValidationError(f"--grid must be one of {sorted(axes)} as name=lo:hi:steps, got {item!r}")
        axes[name] = rng
    return {k: parse_range(v) for k, v in axes.items()}


def _source(opts: dict):
    """``(integrals, frame, packet_or_None, x_or_None)`` from --ic / --omega0-over-a / --packet."""
    frame = AccelerationFrame(opts["a"])
    if opts["packet"] is not None:
        spec = opts["packet"]
        if not isinstance(spec, dict):
            with open(spec) as fh:
                try:
                    spec = json.load(fh)
                except json.JSONDecodeError as exc:
                    raise ValidationError(f"packet file is not valid JSON: {exc}") from None
        packet = packet_from_dict(spec)
        return mode_integrals(packet, frame), frame, packet, None
    if opts["omega0_over_a"] is not None:
        x = 2 * math.pi * opts["omega0_over_a"]
        if not x > 0:
            raise ValidationError("--omega0-over-a must be positive")
        return ModeIntegrals.narrowband(-1 / math.expm1(-x)), frame, None, x
    ic = 1.5 if opts["ic"] is None else opts["ic"]
    if not ic >= 1:
        raise ValidationError("--ic must be >= 1")
    x = scaled_frequency_for_ic(ic) if ic > 1 else math.inf
    return ModeIntegrals.narrowband(ic), frame, None, x


def _phis(opts: dict):
    if opts.get("phi_steps"):
        if opts["phi_steps"] < 1:
            raise ValidationError("--phi-steps must be >= 1")
        return list(np.linspace(0, math.pi, opts["phi_steps"], endpoint=False))
    return [float(p) for p in opts["phi"]]


# --------------------------------------------------------------------------- commands


def cmd_point(opts: dict):
    integ, _, _, _ = _source(opts)
    r = opts["r"]
    s = SqueezeScenario(r, integ)
    v_max, v_min = vmax_vmin(s)
    prod = purity_product(s)
    columns = POINT_COLUMNS
    extra = ()
    if opts["entangle"]:
        columns = POINT_COLUMNS + ENTANGLE_COLUMNS
        ent = log_negativity(r, integ)
        extra = cov_entries(r, integ) + (ent.nu_minus, ent.log_negativity)
    rows = [(r, integ.i_c, phi, squeezer_variance(s, phi), v_max, v_min, prod) + extra for phi in _phis(opts)]
    return "point", columns, rows, True


def cmd_sweep(opts: dict):
    grid = _grid(opts)
    if np.any(grid["x"] <= 0):
        raise ValidationError("scaled frequencies must be positive")
    workers = int(opts["workers"])
    if workers < 1:
        raise ValidationError("--workers must be >= 1")
    rows = sweep(grid["r"], grid["x"], workers=workers, tol=opts["tol"])
    return "sweep", SWEEP_COLUMNS, [row.values() for row in rows], True


def cmd_critical_curve(opts: dict):
    grid = _grid(opts)
    if np.any(grid["r"] <= 0):
        raise ValidationError("the critical curve needs r > 0")
    return "critical-curve", CRITICAL_COLUMNS, critical_curve(grid["r"]), True


def cmd_purify(opts: dict):
    integ, _, _, _ = _source(opts)
    r = opts["r"]
    z_nb = optimal_z_narrowband(integ.i_c)
    z = solve_z_integrals(r, integ)
    res = abs(purity_residual(r, z, integ))
    if res >= opts["tol"]:
        raise SolverError(f"purification residual {res:.3e} not below {opts['tol']:.1e}", residual=res)
    ps = PurificationScenario(r, z, integ)
    rows = [
        (r, integ.i_c, integ.i_s, integ.i_cs, z_nb, z, res, phi, purified_variance(ps, phi))
        for phi in _phis(opts)
    ]
    return "purify", PURIFY_COLUMNS, rows, True


def _oracle_scenario(opts, integ, frame, packet, x, source, lo):
    if packet is not None:
        nodes = opts["nodes"] or 400
        omega, g = discretize(packet, nodes)
        return DiscretizedScenario(omega, g, frame, source, lo=lo)
    if not math.isfinite(x):
        raise ValidationError("the oracle needs I_c > 1 (a finite frequency)")
    return DiscretizedScenario.narrowband(frame.omega_from_scaled(x), frame, source, lo=lo)


def cmd_oracle_check(opts: dict):
    integ, frame, packet, x = _source(opts)
    r, tol = opts["r"], opts["tol"]
    if opts["shots"] < 1000:
        raise ValidationError("--shots must be >= 1000")
    lo = LocalOscillator(amplitude=opts["alpha"])
    rows = []

    def add(check, closed, oracle, limit, relative=True):
        err = abs(oracle - closed) / abs(closed) if relative else abs(oracle - closed)
        rows.append((check, closed, oracle, err, limit, bool(err < limit)))

    phis = (0.0, math.pi / 4, math.pi / 2)
    names = ("0", "pi/4", "pi/2")

    s1 = _oracle_scenario(opts, integ, frame, packet, x, SingleSqueeze(r), lo)
    add("symplectic_defect_squeezer", 0.0, build_transform(s1).symplectic_defect(), 1e-10, relative=False)
    closed = squeezer_variance(SqueezeScenario(r, integ), list(phis))
    for name, c, o in zip(names, closed, detected_variances(s1, phis)):
        add(f"squeezer_v({name})", float(c), float(o), tol)

    s2 = _oracle_scenario(opts, integ, frame, packet, x, TwoSqueeze(r), lo)
    add("symplectic_defect_two_mode", 0.0, build_transform(s2).symplectic_defect(), 1e-10, relative=False)
    a, b = cov_entries(r, integ)
    cov = detected_covariance(s2)
    add("two_mode_A", a, cov[0, 0], tol)
    add("two_mode_B", b, cov[0, 2], tol)

    s3 = _oracle_scenario(opts, integ, frame, packet, x, Displace(opts["beta"]), lo)
    for name, o in zip(names, detected_variances(s3, phis)):
        add(f"coherent_v({name})", 1.0, float(o), tol)

    # sampling cross-check of the moment formulas on the squeezed c-sector mode
    state = output_state(replace(s1, lo=replace(s1.lo, amplitude=0.0)))
    f = np.zeros(s1.n_modes, dtype=complex)
    f[s1.sector("c")] = s1.g
    mc = mc_homodyne(state, f, 0.0, shots=int(opts["shots"]), seed=int(opts["seed"]))
    z = abs(mc.variance - mc.expected_variance) / mc.variance_stderr
    rows.append(("mc_variance_c_mode", mc.expected_variance, mc.variance, z, 5.0, bool(z < 5.0)))
    ok = all(row[-1] for row in rows)
    return "oracle-check", ORACLE_COLUMNS, rows, ok


COMMANDS = {
    "point": cmd_point,
    "sweep": cmd_sweep,
    "critical-curve": cmd_critical_curve,
    "purify": cmd_purify,
    "oracle-check": cmd_oracle_check,
}


# --------------------------------------------------------------------------- output


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    return "%.12e" % value


def render(schema: str, columns, rows, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(f"# schema: {schema}/{SCHEMA_VERSION}\n")
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(_fmt(v) for v in row) + "\n")
        return buf.getvalue()
    clean = [[v if isinstance(v, (str, bool)) else float(v) for v in row] for row in rows]
    doc = {"schema": f"{schema}/{SCHEMA_VERSION}", "columns": list(columns), "rows": clean}
    return json.dumps(doc, indent=1) + "\n"


def main(argv: Optional[list] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        opts = resolve(args)
        schema, columns, rows, ok = COMMANDS[args.command](opts)
        text = render(schema, columns, rows, opts["format"])
        if opts["out"]:
            with open(opts["out"], "w", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (SolverError, IntegrationError, ConsistencyError) as exc:
        msg = f"error: {exc}"
        if getattr(exc, "residual", None) is not None:
            msg += f" (residual {exc.residual:.3e})"
        print(msg, file=sys.stderr)
        return EXIT_SOLVER
    except (UnruhError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if not ok:
        failed = [row[0] for row in rows if not row[-1]]
        print(f"error: tolerance exceeded for {', '.join(failed)}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
