"""Command-line front end.

Subcommands and their CSV columns:

  steady-state     N,re_beta,im_beta,re_beta_inf,im_beta_inf,residual,
                   re_lambda1,im_lambda1,re_lambda2,im_lambda2,stable
  deviation-curve  N,abs_beta,abs_beta_inf,deviation
  spectrum         N,omega,S
  oracle-compare   N,n_cut,re_beta,im_beta,re_beta_oracle,im_beta_oracle,
                   rel_error,occupation_oracle,spectrum_ratio_w0
  algebra-check    n,commutator,defect,boundary

Exit codes: 0 ok, 2 bad arguments, 3 solver failure, 4 oracle truncation
failure.  Errors go to stderr prefixed by ``E<exit code>``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import commutator_defect, expansion_error
from .errors import DefbecError, DomainError, NoConvergence
from .params import ModelParams
from .spectrum import Variant, deviation_curve, spectrum_surface, spectrum_values
from .steady import solve_deformed_steady_state, undeformed_steady_state

OUTPUT_DIR_ENV = "DEFBEC_OUTPUT_DIR"

COLUMNS = {
    "steady-state": [
        "N", "re_beta", "im_beta", "re_beta_inf", "im_beta_inf", "residual",
        "re_lambda1", "im_lambda1", "re_lambda2", "im_lambda2", "stable",
    ],
    "deviation-curve": ["N", "abs_beta", "abs_beta_inf", "deviation"],
    "spectrum": ["N", "omega", "S"],
    "oracle-compare": [
        "N", "n_cut", "re_beta", "im_beta", "re_beta_oracle", "im_beta_oracle",
        "rel_error", "occupation_oracle", "spectrum_ratio_w0",
    ],
    "algebra-check": ["n", "commutator", "defect", "boundary"],
}

DEFAULTS = {
    "delta": 0.0,
    "g": 2.5,
    "gamma": 1.0,
    "n": 100.0,
    "n_list": None,
    "n_range": None,
    "omega_range": "-20:20:0.1",
    "variant": "paper",
    "format": "csv",
    "output": None,
    "n_cut": None,
    "eta": 0.01,
}

# oracle-compare runs at a weaker drive so that small cutoffs suffice
SUBCOMMAND_DEFAULTS = {
    "oracle-compare": {"g": 0.5, "n_list": "25,50,100"},
    "algebra-check": {"n_cut": 20},
}


class ArgError(DomainError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"E2 ArgumentError: {message}\n")
        raise SystemExit(2)


def parse_range(text: str) -> np.ndarray:
    """``start:stop:step`` with ``stop`` included (up to rounding)."""
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise ArgError(f"range must be start:stop:step, got {text!r}") from None
    if not (step > 0 and start < stop):
        raise ArgError(f"range needs start < stop and step > 0, got {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def parse_list(text) -> np.ndarray:
    if isinstance(text, (list, tuple)):
        return np.asarray(text, dtype=float)
    try:
        return np.asarray([float(x) for x in str(text).split(",") if x.strip()], dtype=float)
    except ValueError:
        raise ArgError(f"bad number list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="defbec",
        description="Light scattered from a number-conserving (deformed) condensate.",
        epilog=__doc__.split("\n\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"defbec {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def common(sp, grids=False):
        sp.add_argument("--config", help="flat JSON key/value file; flags override it")
        sp.add_argument("--delta", type=float, help="detuning, units of gamma")
        sp.add_argument("--g", type=float, help="laser coupling, units of gamma")
        sp.add_argument("--gamma", type=float, help="one-atom linewidth")
        sp.add_argument("--format", choices=["csv", "json"])
        sp.add_argument("--output", help=f"output file (default: ${OUTPUT_DIR_ENV}/<cmd>.<fmt> or stdout)")
        if grids:
            sp.add_argument("--n-list", help="comma-separated particle numbers")
            sp.add_argument("--n-range", help="start:stop:step particle numbers")

    sp = sub.add_parser("steady-state", help="deformed and undeformed amplitudes, stability")
    common(sp)
    sp.add_argument("--n", type=float, help="particle number")

    sp = sub.add_parser("deviation-curve", help="||beta| - |beta_inf|| versus N")
    common(sp, grids=True)

    sp = sub.add_parser("spectrum", help="S(omega) on an (N, omega) grid")
    common(sp, grids=True)
    sp.add_argument("--omega-range", help="start:stop:step, units of gamma")
    sp.add_argument("--variant", choices=[v.value for v in Variant])

    sp = sub.add_parser("oracle-compare", help="semiclassical versus Lindblad amplitudes")
    common(sp, grids=True)
    sp.add_argument("--n-cut", type=int, help="Fock cutoff (default: converged search)")

    sp = sub.add_parser("algebra-check", help="deformed commutator and expansion report")
    common(sp)
    sp.add_argument("--n-cut", type=int)
    sp.add_argument("--eta", type=float)
    return parser


def load_config(path: str) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ArgError(f"config {path} is not a key/value object")
    # accept our own JSON output, which nests the config
    if "config" in data and isinstance(data["config"], dict):
        data = data["config"]
    return {k.replace("-", "_"): v for k, v in data.items()}


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    cfg.update(SUBCOMMAND_DEFAULTS.get(args.subcommand, {}))
    if args.config:
        file_cfg = load_config(args.config)
        file_cfg.pop("subcommand", None)
        unknown = set(file_cfg) - set(DEFAULTS)
        if unknown:
            raise ArgError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(file_cfg)
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    # an explicit list on the command line beats a range from the config and vice versa
    if getattr(args, "n_list", None) is not None:
        cfg["n_range"] = None
    if getattr(args, "n_range", None) is not None:
        cfg["n_list"] = None
    cfg["subcommand"] = args.subcommand
    return cfg


def _params(cfg: dict, n: float | None = None) -> ModelParams:
    return ModelParams(
        delta=float(cfg["delta"]),
        g=float(cfg["g"]),
        gamma=float(cfg["gamma"]),
        n_atoms=float(cfg["n"] if n is None else n),
    )


def _n_grid(cfg: dict) -> np.ndarray:
    if cfg.get("n_range"):
        return parse_range(cfg["n_range"])
    if cfg.get("n_list") is not None:
        return parse_list(cfg["n_list"])
    return np.asarray([float(cfg["n"])])


def run_steady_state(cfg):
    p = _params(cfg)
    ss = solve_deformed_steady_state(p)
    b_inf = undeformed_steady_state(p)
    l1, l2 = ss.drift_eigenvalues
    row = [p.n_atoms, ss.beta.real, ss.beta.imag, b_inf.real, b_inf.imag, ss.residual_norm,
           l1.real, l1.imag, l2.real, l2.imag, ss.stable]
    return [row], {}


def run_deviation_curve(cfg):
    rows, skipped = [], []
    for r in deviation_curve(_params(cfg, 2.0), _n_grid(cfg)):
        if r.ok:
            rows.append([r.n_atoms, r.abs_beta, r.abs_beta_inf, r.deviation])
        else:
            skipped.append({"N": r.n_atoms, "error": r.error})
    return rows, {"skipped": skipped}


def run_spectrum(cfg):
    omega = parse_range(cfg["omega_range"])
    surf = spectrum_surface(_params(cfg, 2.0), _n_grid(cfg), omega, cfg["variant"])
    rows, skipped = [], []
    for i, n in enumerate(surf.n_values):
        if not surf.ok[i]:
            skipped.append({"N": float(n), "error": surf.errors[i]})
            continue
        rows.extend([float(n), float(w), float(s)] for w, s in zip(omega, surf.values[i]))
    return rows, {"skipped": skipped}


def run_oracle_compare(cfg):
    from .oracle import compare_amplitudes, regression_spectrum

    base = _params(cfg, 2.0)
    n_cut = None if cfg.get("n_cut") is None else int(cfg["n_cut"])
    rows = []
    for c in compare_amplitudes(base, _n_grid(cfg), n_cut):
        p = base.replace(n_atoms=c.n_atoms)
        s_or = regression_spectrum(p, c.n_cut, [0.0]).values[0]
        s_sc = float(spectrum_values(p, 0.0, Variant.PAPER))
        ratio = s_or / s_sc if s_sc > 0 else math.nan
        rows.append([c.n_atoms, c.n_cut, c.beta_semiclassical.real, c.beta_semiclassical.imag,
                     c.beta_oracle.real, c.beta_oracle.imag, c.rel_error, c.occupation_oracle, ratio])
    return rows, {}


def run_algebra_check(cfg):
    n_cut, eta = int(cfg["n_cut"]), float(cfg["eta"])
    table = commutator_defect(n_cut, eta)
    rows = [[r.n, r.commutator, r.defect, r.boundary] for r in table]
    interior = [abs(r.defect) for r in table if not r.boundary]
    summary = {
        "max_interior_defect": max(interior) if interior else 0.0,
        "expansion_error": expansion_error(n_cut, eta),
        "expansion_error_ratio": expansion_error(n_cut, eta) / expansion_error(n_cut, eta / 2)
        if eta > 0 else math.nan,
    }
    return rows, {"summary": summary}


RUNNERS = {
    "steady-state": run_steady_state,
    "deviation-curve": run_deviation_curve,
    "spectrum": run_spectrum,
    "oracle-compare": run_oracle_compare,
    "algebra-check": run_algebra_check,
}


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".8e")


def _jsonable(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    return x if math.isfinite(x) else None


def render(cfg: dict, rows: list, extra: dict) -> str:
    columns = COLUMNS[cfg["subcommand"]]
    config = {k: cfg[k] for k in DEFAULTS if k not in ("output", "format")}
    meta = {"tool": "defbec", "version": __version__, "subcommand": cfg["subcommand"],
            "config": config, **extra}
    if cfg["subcommand"] == "spectrum":
        meta["variant"] = Variant(cfg["variant"]).value
    if cfg["format"] == "json":
        doc = {**meta, "columns": columns,
               "records": [dict(zip(columns, map(_jsonable, r))) for r in rows]}
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write("# " + json.dumps(meta, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_fmt(x) for x in r])
    return buf.getvalue()


def _destination(cfg: dict) -> Path | None:
    if cfg.get("output"):
        return Path(cfg["output"])
    out_dir = os.environ.get(OUTPUT_DIR_ENV)
    if out_dir:
        return Path(out_dir) / f"{cfg['subcommand']}.{cfg['format']}"
    return None


def _glue_ranges(argv):
    # "--omega-range -20:20:0.1" would otherwise read the value as a flag
    out, it = [], iter(argv)
    for tok in it:
        if tok in ("--omega-range", "--n-range", "--n-list"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = _glue_ranges(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
        if cfg["format"] not in ("csv", "json"):
            raise ArgError(f"format must be csv or json, got {cfg['format']!r}")
        rows, extra = RUNNERS[args.subcommand](cfg)
        if not rows and extra.get("skipped"):
            raise NoConvergence("every grid row failed: " + extra["skipped"][0]["error"])
        for s in extra.get("skipped", []):
            sys.stderr.write(f"W3 skipped N={s['N']:g}: {s['error']}\n")
        text = render(cfg, rows, extra)
    except DefbecError as exc:
        sys.stderr.write(f"E{exc.exit_code} {type(exc).__name__}: {exc}\n")
        return exc.exit_code
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"E2 {type(exc).__name__}: {exc}\n")
        return 2

    dest = _destination(cfg)
    if dest is None:
        sys.stdout.write(text)
    else:
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
