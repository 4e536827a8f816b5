"""Command-line front end.

Every artifact starts with a ``# config {...}`` line holding the full run
configuration and toolkit version.  Exit codes: 0 pass, 2 verification
failure, 1 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from .density import (MomentSpec, laplace_factorization_gap, laplace_identity_residual, rho1,
                      sigma_n_moment)
from .ewens_pd import (EwensParams, ewens_weight, sample_ewens_batch, sample_pd_batch,
                       sigma_t_n_moment, verify_kingman_coherence)
from .partitions import partitions_of
from .sampling import sample_partitions_batch, sample_record
from .special import DomainError, QuadratureError, SeriesNotConvergedError
from .zmeasure import ZParams, format_scalar, verify_coherence, weight

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    z: str | None = None
    zp: str | None = None
    t: str | None = None
    n: int | None = None
    l: list[int] = field(default_factory=list)
    grid: str | None = None
    zeta: list[str] = field(default_factory=list)
    seed: int = 0
    samples: int = 1000
    out: str | None = None
    tol: float | None = None
    mode: str = "auto"
    method: str | None = None
    kind: str | None = None

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d["version"] = __version__
        return d


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(format_scalar(x))
    if isinstance(x, complex):
        return str(format_scalar(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _int_list(s: str) -> list[int]:
    try:
        return [int(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of integers, got {s!r}")


def parse_grid(spec: str) -> list[float]:
    """"lo:hi:step" with hi included."""
    try:
        lo, hi, step = (float(v) for v in spec.split(":"))
    except ValueError:
        raise UsageError(f"--grid: expected lo:hi:step, got {spec!r}")
    if step <= 0 or hi < lo:
        raise UsageError(f"--grid: need step > 0 and hi >= lo, got {spec!r}")
    k = int(round((hi - lo) / step))
    return [round(lo + i * step, 12) for i in range(k + 1)]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zmeasures", description="z-measures and Poisson-Dirichlet toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, z=True, t=False):
        if z:
            sp.add_argument("--z")
            sp.add_argument("--zp")
            sp.add_argument("--mode", choices=["auto", "exact", "complex"], default="auto")
        if t:
            sp.add_argument("--t")
        sp.add_argument("--out")
        sp.add_argument("--tol", type=float)

    sp = sub.add_parser("weights", help="table of M(lambda) over partitions of n")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp = sub.add_parser("coherence", help="z-measure or Kingman coherence report")
    common(sp, t=True)
    sp.add_argument("--n", type=int, required=True)
    sp = sub.add_parser("moments", help="controlling-measure moments by both routes")
    common(sp, t=True)
    sp.add_argument("--l", type=_int_list, required=True)
    sp = sub.add_parser("density", help="rho_1 over a grid")
    common(sp)
    sp.add_argument("--grid", required=True)
    sp.add_argument("--method", default="integral",
                    choices=["integral", "lauricella", "lauricella_corrected", "both", "both_corrected"])
    sp = sub.add_parser("laplace-check", help="Laplace-transform identity residuals")
    common(sp)
    sp.add_argument("--zeta", type=lambda s: [v for v in s.split(",") if v], default=["-1", "-0.5", "0.5", "1"])
    sp = sub.add_parser("sample", help="dump sampled partitions or PD points as JSON lines")
    common(sp, t=True)
    sp.add_argument("--kind", choices=["z", "ewens", "pd"], default="z")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=1000)
    sp = sub.add_parser("compare", help="empirical partition frequencies against exact weights")
    common(sp, t=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=100000)
    return p


def _config(ns) -> RunConfig:
    cfg = RunConfig(command=ns.command)
    for name in ("z", "zp", "t", "n", "l", "grid", "zeta", "seed", "samples", "tol", "mode", "method", "kind"):
        if hasattr(ns, name) and getattr(ns, name) is not None:
            setattr(cfg, name, getattr(ns, name))
    cfg.out = ns.out
    return cfg


def _zparams(cfg: RunConfig) -> ZParams:
    if cfg.z is None or cfg.zp is None:
        raise UsageError("--z and --zp are required")
    try:
        params = ZParams(cfg.z, cfg.zp)
    except ValueError as exc:
        raise UsageError(f"--z/--zp: {exc}")
    if not params.valid:
        raise UsageError(f"--z/--zp: parameters are {params.series.value}, need principal or complementary series")
    if cfg.mode == "complex" or (cfg.mode == "auto" and not params.exact):
        return params.as_complex()
    if cfg.mode == "exact" and not params.exact:
        raise UsageError("--mode exact needs rational --z and --zp")
    return params


def _eparams(cfg: RunConfig) -> EwensParams:
    try:
        return EwensParams(cfg.t)
    except ValueError as exc:
        raise UsageError(f"--t: {exc}")


class _Output:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.buf = io.StringIO()
        self.buf.write("# config " + json.dumps(cfg.to_json(), sort_keys=True) + "\n")
        self.writer = csv.writer(self.buf, lineterminator="\n")

    def row(self, *values):
        self.writer.writerow([_fmt(v) for v in values])

    def line(self, text: str):
        self.buf.write(text + "\n")

    def flush(self):
        data = self.buf.getvalue()
        if self.cfg.out:
            with open(self.cfg.out, "w", encoding="utf-8") as fh:
                fh.write(data)
        else:
            sys.stdout.write(data)


def _cmd_weights(cfg, out):
    params = _zparams(cfg)
    out.row("lambda", "weight")
    total = 0
    for lam in partitions_of(cfg.n):
        w = weight(lam, params)
        total += w
        out.row(_lam(lam), w)
    out.row("sum", total)
    ok = total == 1 if params.exact else abs(total - 1) <= (cfg.tol or 1e-10)
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_coherence(cfg, out):
    out.row("level", "passed", "max_violation", "worst")
    ok = True
    for n in range(cfg.n + 1):
        if cfg.t is not None:
            rep = verify_kingman_coherence(n, _eparams(cfg))
        else:
            params = _zparams(cfg)
            rep = verify_coherence(n, params, rtol=cfg.tol or 1e-10)
        out.row(n, rep.passed, rep.max_violation, _lam(rep.worst) if rep.worst is not None else "")
        ok &= rep.passed
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_moments(cfg, out):
    l = cfg.l
    if cfg.t is not None:
        params = _eparams(cfg)
        a = sigma_t_n_moment(l, params, "coefficient_sum")
        b = sigma_t_n_moment(l, params, "set_partition_sum")
        names = ("coefficient_sum", "set_partition_sum")
        exact = params.exact
    else:
        params = _zparams(cfg)
        spec = MomentSpec(tuple(l))
        a = sigma_n_moment(spec, params, "frobenius_sum")
        b = sigma_n_moment(spec, params, "character_sum")
        names = ("frobenius_sum", "character_sum")
        exact = params.exact
    gap = abs(a - b)
    out.row("l", *names, "difference")
    out.row(",".join(map(str, l)), a, b, gap)
    ok = gap == 0 if exact else abs(complex(gap)) <= (cfg.tol or 1e-10) * max(1, abs(complex(a)))
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_density(cfg, out):
    params = _zparams(cfg)
    tol = cfg.tol or 1e-10
    grid = parse_grid(cfg.grid)
    pairs = {"both": ("integral", "lauricella"), "both_corrected": ("integral", "lauricella_corrected")}
    methods = pairs.get(cfg.method, (cfg.method,))
    out.row("x", "rho1", "method", "tol_achieved", "agreement")
    worst_x, worst = None, 0.0
    for x in grid:
        vals = {}
        for m in methods:
            try:
                vals[m] = rho1(x, params, m, tol)
            except (DomainError, SeriesNotConvergedError, QuadratureError) as exc:
                vals[m] = exc
        agree = ""
        if len(methods) == 2 and all(not isinstance(v, Exception) for v in vals.values()):
            agree = abs(vals[methods[0]].value - vals[methods[1]].value)
            if agree > worst:
                worst_x, worst = x, agree
        for m, v in vals.items():
            if isinstance(v, Exception):
                out.row(x, "", m, "", f"unavailable: {v}")
            else:
                out.row(x, v.value, m, v.tol_achieved, agree)
    if len(methods) == 2:
        limit = cfg.tol or 1e-6
        if worst > limit:
            print(f"method disagreement {worst:.3g} > {limit:g}, worst at x={worst_x}", file=sys.stderr)
            return EXIT_FAIL
    return EXIT_OK


def _cmd_laplace(cfg, out):
    params = _zparams(cfg)
    limit = cfg.tol or 1e-5
    out.row("zeta", "residual", "factorization_gap")
    ok, worst = True, None
    for s in cfg.zeta:
        zeta = complex(s.replace("i", "j"))
        zeta = zeta.real if zeta.imag == 0 else zeta
        res = laplace_identity_residual(zeta, params)
        gap = laplace_factorization_gap(zeta, params)
        out.row(s, res, gap)
        if res > limit or gap > 1e-10:
            ok, worst = False, s
    if not ok:
        print(f"Laplace identity check failed, worst at zeta={worst}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_sample(cfg, out):
    if cfg.kind == "pd":
        params = _eparams(cfg)
        alphas, residuals = sample_pd_batch(params, cfg.samples, cfg.seed, keep=50)
        for i, (a, g) in enumerate(zip(alphas, residuals)):
            out.line(json.dumps({"t": _fmt(params.t), "alpha": [float(v) for v in a if v > 1e-15],
                                 "gamma": float(g), "seed": cfg.seed, "index": i}))
        return EXIT_OK
    if cfg.kind == "ewens":
        lams = sample_ewens_batch(cfg.n, _eparams(cfg), cfg.samples, cfg.seed)
    else:
        lams = sample_partitions_batch(cfg.n, _zparams(cfg), cfg.samples, cfg.seed)
    for i, lam in enumerate(lams):
        out.line(json.dumps({**sample_record(cfg.n, lam, cfg.seed), "index": i}))
    return EXIT_OK


def _cmd_compare(cfg, out):
    sigmas = cfg.tol or 3.0
    if cfg.t is not None:
        params = _eparams(cfg)
        lams = sample_ewens_batch(cfg.n, params, cfg.samples, cfg.seed)
        exact = {lam: ewens_weight(lam, params) for lam in partitions_of(cfg.n)}
    else:
        params = _zparams(cfg)
        lams = sample_partitions_batch(cfg.n, params, cfg.samples, cfg.seed)
        exact = {lam: weight(lam, params) for lam in partitions_of(cfg.n)}
    counts = Counter(lams)
    out.row("lambda", "exact", "empirical", "stderr", "z_score")
    ok, worst = True, None
    for lam, w in exact.items():
        p = complex(w).real
        freq = counts[lam] / cfg.samples
        se = (p * (1 - p) / cfg.samples) ** 0.5
        z = (freq - p) / se if se > 0 else 0.0
        out.row(_lam(lam), w, freq, se, z)
        if abs(z) > sigmas:
            ok, worst = False, lam
    if not ok:
        print(f"empirical frequency outside {sigmas} sigma, worst at lambda={_lam(worst)}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


_COMMANDS = {
    "weights": _cmd_weights,
    "coherence": _cmd_coherence,
    "moments": _cmd_moments,
    "density": _cmd_density,
    "laplace-check": _cmd_laplace,
    "sample": _cmd_sample,
    "compare": _cmd_compare,
}


_VALUE_FLAGS = {"--z", "--zp", "--t", "--grid", "--zeta", "--l"}


def _attach_negative_values(argv: list[str]) -> list[str]:
    # "--grid -0.9:0:0.1" would otherwise read as an unknown option
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1][:1] == "-" and argv[i + 1][1:2] not in ("-", ""):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def _lam(lam) -> str:
    return "(" + ",".join(map(str, lam.parts)) + ")"


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        ns = build_parser().parse_args(_attach_negative_values(argv))
        cfg = _config(ns)
        out = _Output(cfg)
        code = _COMMANDS[cfg.command](cfg, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out.flush()
    return code


def main():
    sys.exit(run())
