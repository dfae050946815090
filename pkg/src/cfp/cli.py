"""Command-line entry point: reproducible runs, CSV/JSON artifacts.

Every run is fully described by its resolved configuration, which is
echoed as a JSON comment header in CSV output (and embedded in JSON
output), so artifacts carry their own provenance. Identical
configurations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from . import asympt, exact_seq, llt, partitions, sim, stats
from .errors import CfpError, ConfigError
from .params import ParameterFunction, from_config
from .precision import DEFAULT_PRECISION_BITS
from .saddle import solve_sigma

COMMANDS = ("exact", "saddle", "llt", "compare", "mu", "stats", "simulate", "report")


@dataclass
class RunConfig:
    command: str
    family: Dict
    n_max: Optional[int] = None
    n_grid: Optional[List[int]] = None
    N: Optional[int] = None
    mode: str = "float"
    precision: int = DEFAULT_PRECISION_BITS
    seed: Optional[int] = None
    samples: Optional[int] = None
    events: Optional[int] = None
    pairs: List[List[int]] = field(default_factory=list)
    tilt: Optional[float] = None
    out_format: str = "csv"
    output: Optional[str] = None
    event_log: Optional[str] = None

    def to_dict(self) -> Dict:
        d = {k: v for k, v in self.__dict__.items() if v not in (None, [], ())}
        fam = dict(d.get("family", {}))
        for key, val in fam.items():
            if isinstance(val, Fraction):
                fam[key] = str(val)
            if isinstance(val, list):
                fam[key] = [str(x) if isinstance(x, Fraction) else x for x in val]
        d["family"] = fam
        return d


# ---------------------------------------------------------------------------
# config-file / value parsing
# ---------------------------------------------------------------------------


def parse_value(text: str):
    """Parse one config value: quoted string, [list], fraction, number."""
    text = text.strip()
    if not text:
        raise ConfigError("empty value")
    if text[0] in "\"'" and text[-1] == text[0] and len(text) >= 2:
        return text[1:-1]
    if text.startswith("["):
        if not text.endswith("]"):
            raise ConfigError(f"unterminated list: {text}")
        inner = text[1:-1].strip()
        return [parse_value(x) for x in inner.split(",")] if inner else []
    if "/" in text:
        num, _, den = text.partition("/")
        return Fraction(int(num.strip()), int(den.strip()))
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"cannot parse value {text!r}") from None


def load_config_file(path: str) -> Dict:
    out: Dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, _, val = line.partition("=")
            out[key.strip()] = parse_value(val)
    return out


def _parse_int_list(text: str) -> List[int]:
    items = [x for x in text.split(",") if x.strip()]
    return [int(x) for x in items]


def _parse_pairs(text: str) -> List[List[int]]:
    pairs = []
    for item in text.split(","):
        if not item.strip():
            continue
        k, _, l = item.partition(":")
        pairs.append([int(k), int(l)])
    return pairs


# ---------------------------------------------------------------------------
# table assembly per command
# ---------------------------------------------------------------------------


def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _family(cfg: RunConfig) -> ParameterFunction:
    return from_config(cfg.family)


def _seq_for(cfg: RunConfig, f: ParameterFunction, N: int) -> exact_seq.CnSequence:
    return exact_seq.compute_cn(f, N, mode=cfg.mode, precision_bits=cfg.precision)


def run_exact(cfg: RunConfig):
    f = _family(cfg)
    seq = _seq_for(cfg, f, cfg.n_max)
    cols = ["n", "log_cn"] + (["cn_rational"] if seq.rational_values else []) + ["ratio_to_next"]
    rows = []
    for n in range(seq.N + 1):
        row = [n, float(seq.log_values[n])]
        if seq.rational_values:
            row.append(str(seq.rational_values[n]))
        row.append(seq.ratio(n) if n < seq.N else "")
        rows.append(row)
    return cols, rows


def run_saddle(cfg: RunConfig):
    f = _family(cfg)
    cols = ["n", "sigma_n", "residual", "B_n2", "rho_3", "S_n_at_tilt"]
    rows = []
    for n in cfg.n_grid:
        sp = solve_sigma(f, n)
        rows.append([n, sp.sigma, sp.residual, sp.b2, sp.rho3, sp.s_at_tilt])
    return cols, rows


def run_llt(cfg: RunConfig):
    f = _family(cfg)
    cols = ["n", "sigma_n", "B_n2", "pr_y_n", "llt_ratio", "lyapunov_ratio",
            "alpha0", "T1", "T2_grid_max", "deficit"]
    rows = []
    for n in cfg.n_grid:
        model = llt.tilted_model(f, n)
        dist = llt.y_distribution(model, top=n)
        split = llt.split_T(model) if n >= 3 else None
        rows.append([
            n, model.sigma, model.saddle.b2, float(dist[n]),
            llt.llt_ratio(model, dist), llt.lyapunov_ratio(model),
            split.alpha0 if split else "", split.t1 if split else "",
            split.t2_grid_max if split else "", dist.deficit,
        ])
    return cols, rows


def run_compare(cfg: RunConfig):
    f = _family(cfg)
    top = max(cfg.n_grid) + 1
    seq = _seq_for(cfg, f, top)
    rows_c = asympt.conjecture_check(f, cfg.n_grid, seq)
    cols = ["n", "log_cn_exact", "log_cn_est", "rel_gap", "ratio_lhs", "ratio_rhs", "a_over_c"]
    rows = []
    for row in rows_c:
        est = asympt.cn_asymptotic(f, row.n)
        exact_log = float(seq.log_values[row.n])
        rel = abs(est.log_cn_est - exact_log) / abs(exact_log)
        rows.append([row.n, exact_log, est.log_cn_est, rel, row.lhs, row.rhs, row.a_over_c])
    return cols, rows


def run_mu(cfg: RunConfig):
    f = _family(cfg)
    exact = cfg.mode == "rational"
    measure = partitions.mu_exact(cfg.N, f, exact=exact)
    cols = ["partition", "weight", "prob"]
    rows = []
    for eta in partitions.enumerate_partitions(cfg.N):
        w = partitions.weight(eta, f, exact=exact)
        p = measure[eta]
        rows.append([eta.run_length(),
                     str(w) if exact else float(w),
                     str(p) if exact else float(p)])
    return cols, rows


def run_stats(cfg: RunConfig):
    f = _family(cfg)
    N = cfg.N
    seq = _seq_for(cfg, f, N)
    pairs = [tuple(p) for p in cfg.pairs]
    report = stats.equilibrium_report(f, N, seq, pairs=pairs)
    cols = ["record", "key", "value"]
    rows = [["v_N", "", report.v_n]]
    for k in range(1, N + 1):
        rows.append(["expected_count", str(k), float(report.expected[k - 1])])
    for k, l, v in report.cov_entries:
        rows.append(["cov", f"{k}:{l}", v])
    if cfg.samples:
        counts, attempts = stats.sample_mu_many(
            f, N, cfg.samples, tilt=cfg.tilt, seed=cfg.seed)
        rows.append(["acceptance_rate", "", cfg.samples / attempts])
        for eta in partitions.enumerate_partitions(N):
            c = counts.get(eta, 0)
            rows.append(["sample_count", eta.run_length(), c])
    return cols, rows


def run_simulate(cfg: RunConfig):
    f = _family(cfg)
    N = cfg.N
    traj = sim.simulate(f, N, events=cfg.events, seed=cfg.seed,
                        record_events=bool(cfg.event_log))
    measure = partitions.mu_exact(N, f, exact=False)
    cols = ["partition", "occupation_time", "mu_exact", "z_score"]
    rows = []
    for eta in partitions.enumerate_partitions(N):
        occ = traj.occupation.get(eta, 0.0)
        mu = float(measure[eta])
        expected = traj.total_time * mu
        z = (occ - expected) / math.sqrt(expected) if expected > 0 else 0.0
        rows.append([eta.run_length(), occ, mu, z])
    if cfg.event_log:
        with open(cfg.event_log, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["time", "move_type", "i", "j"])
            for t, move in traj.events:
                w.writerow([repr(t), move.kind, move.i, move.j])
    return cols, rows


def run_report(cfg: RunConfig):
    f = _family(cfg)
    top = max(cfg.n_grid) + 1
    seq = _seq_for(cfg, f, top)
    cols = ["n", "log_cn", "sigma_n", "residual", "B_n2", "rho_3", "S_n_at_tilt",
            "pr_y_n", "llt_ratio", "lyapunov_ratio", "log_cn_est", "rel_gap"]
    rows = []
    for n in cfg.n_grid:
        model = llt.tilted_model(f, n)
        sp = model.saddle
        dist = llt.y_distribution(model, top=n)
        est = sp.n * sp.sigma + sp.s_at_tilt - 0.5 * math.log(2 * math.pi * sp.b2)
        exact_log = float(seq.log_values[n])
        rows.append([
            n, exact_log, sp.sigma, sp.residual, sp.b2, sp.rho3, sp.s_at_tilt,
            float(dist[n]), llt.llt_ratio(model, dist), llt.lyapunov_ratio(model),
            est, abs(est - exact_log) / abs(exact_log),
        ])
    return cols, rows


_RUNNERS = {
    "exact": run_exact,
    "saddle": run_saddle,
    "llt": run_llt,
    "compare": run_compare,
    "mu": run_mu,
    "stats": run_stats,
    "simulate": run_simulate,
    "report": run_report,
}


# ---------------------------------------------------------------------------
# output + dispatch
# ---------------------------------------------------------------------------


def render(cfg: RunConfig, cols, rows) -> str:
    header = json.dumps(cfg.to_dict(), sort_keys=True)
    if cfg.out_format == "json":
        payload = {"config": cfg.to_dict(), "columns": cols,
                   "rows": [[_fmt(x) for x in row] for row in rows]}
        return json.dumps(payload, sort_keys=True, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(f"# {header}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def run(cfg: RunConfig) -> int:
    """Execute one run; returns the process exit status."""
    try:
        runner = _RUNNERS[cfg.command]
    except KeyError:
        _fail(f"unknown command {cfg.command!r}")
        return 2
    try:
        cols, rows = runner(cfg)
        text = render(cfg, cols, rows)
    except (CfpError, ValueError, IndexError, OSError) as exc:
        _fail(str(exc), kind=type(exc).__name__, command=cfg.command)
        return 1
    if cfg.output:
        try:
            with open(cfg.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            _fail(str(exc), kind="OSError", command=cfg.command)
            return 1
    else:
        sys.stdout.write(text)
    return 0


def _fail(message: str, kind: str = "ConfigError", command: str = "") -> None:
    record = {"error": kind, "message": message}
    if command:
        record["command"] = command
    sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_family_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["powerlaw", "ewens", "table", "rescaled"])
    p.add_argument("--p", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--R", type=float)
    p.add_argument("--base", choices=["powerlaw", "ewens", "table"])
    p.add_argument("--table", type=str, help="comma-separated positive rationals, e.g. 1,1/2,2/3")
    p.add_argument("--config", type=str, help="key = value config file with defaults")


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", choices=["csv", "json"], default="csv")
    p.add_argument("-o", "--output", type=str, help="output path (default stdout)")
    p.add_argument("--precision", type=int,
                   default=int(os.environ.get("CFP_PRECISION_BITS", DEFAULT_PRECISION_BITS)))
    p.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cfp",
                                     description="partition-function numerics for "
                                                 "merge/split equilibrium measures")
    sub = parser.add_subparsers(dest="command", required=True)

    specs = {
        "exact": "coefficient sequence c_0..c_N by the recurrence",
        "saddle": "tilt solutions and moment bundles over an n grid",
        "llt": "local-limit diagnostics over an n grid",
        "compare": "exact vs asymptotic log c_n and the ratio law",
        "mu": "exact equilibrium measure for small N",
        "stats": "equilibrium observables and exact sampling",
        "simulate": "event-driven trajectory vs the exact measure",
        "report": "joined exact/saddle/llt/asymptotic table",
    }
    ps = {}
    for name, help_text in specs.items():
        p = sub.add_parser(name, help=help_text)
        _add_family_flags(p)
        _add_common_flags(p)
        ps[name] = p

    ps["exact"].add_argument("--n-max", type=int)
    ps["exact"].add_argument("--mode", choices=["rational", "float"], default="float")
    for name in ("saddle", "llt", "compare", "report"):
        ps[name].add_argument("--n-grid", type=str)
    ps["mu"].add_argument("--N", type=int)
    ps["mu"].add_argument("--mode", choices=["rational", "float"], default="rational")
    ps["stats"].add_argument("--N", type=int)
    ps["stats"].add_argument("--pairs", type=str, default="")
    ps["stats"].add_argument("--samples", type=int)
    ps["stats"].add_argument("--tilt", type=float)
    ps["stats"].add_argument("--mode", choices=["rational", "float"], default="float")
    ps["simulate"].add_argument("--N", type=int)
    ps["simulate"].add_argument("--events", type=int)
    ps["simulate"].add_argument("--event-log", type=str)
    return parser


_FAMILY_KEYS = ("family", "p", "beta", "R", "base", "table")


def config_from_args(args: argparse.Namespace, parser: argparse.ArgumentParser) -> RunConfig:
    file_cfg = load_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(key, default=None):
        v = getattr(args, key, None)
        if v is None:
            v = file_cfg.get(key, default)
        return v

    family = {}
    for key in _FAMILY_KEYS:
        v = pick(key)
        if v is not None:
            family[key] = v
    if isinstance(family.get("table"), str):
        family["table"] = [parse_value(x) for x in family["table"].split(",")]
    if "family" not in family:
        parser.error("a --family (or config file with family=...) is required")

    n_grid = pick("n_grid")
    if isinstance(n_grid, str):
        n_grid = _parse_int_list(n_grid)
    pairs = pick("pairs", "")
    if isinstance(pairs, str):
        pairs = _parse_pairs(pairs)

    cfg = RunConfig(
        command=args.command,
        family=family,
        n_max=pick("n_max"),
        n_grid=n_grid,
        N=pick("N"),
        mode=str(pick("mode", "float")),
        precision=int(pick("precision", DEFAULT_PRECISION_BITS)),
        seed=pick("seed"),
        samples=pick("samples"),
        events=pick("events"),
        pairs=pairs or [],
        tilt=pick("tilt"),
        out_format=str(pick("out", "csv")),
        output=pick("output"),
        event_log=pick("event_log"),
    )

    needs_grid = cfg.command in ("saddle", "llt", "compare", "report")
    if needs_grid and not cfg.n_grid:
        parser.error(f"{cfg.command} requires a non-empty --n-grid")
    if cfg.command == "exact" and not cfg.n_max:
        parser.error("exact requires --n-max")
    if cfg.command in ("mu", "stats", "simulate") and not cfg.N:
        parser.error(f"{cfg.command} requires --N")
    if cfg.command == "simulate" and not cfg.events:
        parser.error("simulate requires --events")
    return cfg


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args, parser)
    except ConfigError as exc:
        _fail(str(exc))
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
