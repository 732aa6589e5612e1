"""Command-line driver: ``singspec <command> [flags]``.

Commands write CSV files (header row, 17 significant digits) into ``--out``
and print one verdict line where a rate is checked.  Errors go to stderr as
``error category=<name> exit=<code> message=<text>`` with exit codes
parse=2, hypothesis=3, convergence=4, io=5.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .asymp import (
    RatePrediction,
    block_envelope,
    fit_decay,
    hilb_residual_scan,
    predict_bessel_rate,
    predict_coeff_decay,
    predict_projection_rate,
)
from .descr import parse
from .errors import DomainError, InsufficientData, ParseError, SingspecError
from .expand import (
    Basis,
    SingularFunction,
    coefficients,
    derivative_coeffs,
    l2w_projection_error,
    sobolev_projection_error,
)
from .quad import OscIntegralSpec, bessel_transform
from .specfun import JacobiParams

EXIT_PARSE = 2
EXIT_HYPOTHESIS = 3
EXIT_CONVERGENCE = 4
EXIT_IO = 5

DECAY_TOL = 0.1
BESSEL_TOL = 0.15
DECAY_BLOCK = 10
TAIL_SHARE = 0.047  # target unstored/stored energy ratio when sizing the stored series


def fmt(v: float) -> str:
    return format(float(v), ".17g")


def short(v: float) -> str:
    """Shortest text for a rate exponent: -2, -1.3, -inf."""
    if math.isinf(v):
        return "-inf" if v < 0 else "inf"
    return np.format_float_positional(float(v), trim="-")


@dataclass
class RunConfig:
    command: str
    out: Path = Path(".")
    tol: float = 1e-12
    threads: int = 1
    emit_plot: bool = False

    def __post_init__(self):
        if not self.tol >= 1e-14:
            raise DomainError("tolerances must be >= 1e-14")
        if self.threads < 1:
            raise DomainError("--threads must be >= 1")


@dataclass(frozen=True)
class Verdict:
    predicted: RatePrediction
    fitted: float
    tolerance: float

    @property
    def delta(self) -> float:
        if self.predicted.super_algebraic:
            return 0.0 if self.fitted == -math.inf else math.inf
        return abs(self.fitted - self.predicted.exponent)

    @property
    def passed(self) -> bool:
        return self.delta <= self.tolerance

    def line(self) -> str:
        p = self.predicted
        return (
            f"verdict={'PASS' if self.passed else 'FAIL'} predicted={short(p.exponent)} fitted={fmt(self.fitted)}"
            f" delta={fmt(self.delta)} log_power={p.log_power} source={p.source}"
        )


# {{{ output


def write_csv(path: Path, header: Sequence[str], rows) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([v if isinstance(v, (str, int)) else fmt(v) for v in row])
    except OSError as exc:
        raise CliIOError(f"cannot write {path}: {exc}") from exc
    return path


def write_plot_script(csv_path: Path, xcol: str, ycols: Sequence[str], title: str) -> Path:
    """gnuplot script drawing the given CSV columns on log-log axes."""
    gp = csv_path.with_suffix(".gp")
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set logscale xy",
        f"set title '{title}'",
        f"set xlabel '{xcol}'",
        "set terminal pngcairo size 800,600",
        f"set output '{csv_path.with_suffix('.png').name}'",
        "plot " + ", ".join(f"'{csv_path.name}' using '{xcol}':'{c}' with linespoints" for c in ycols),
    ]
    try:
        gp.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise CliIOError(f"cannot write {gp}: {exc}") from exc
    return gp


class CliIOError(SingspecError, OSError):
    category = "io"
    exit_code = EXIT_IO


class UsageError(SingspecError, ValueError):
    category = "parse"
    exit_code = EXIT_PARSE


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# }}}


# {{{ computations behind the commands


def _envelope_fit(n, a, pred: RatePrediction, window, block: int) -> float:
    if pred.super_algebraic:
        return _super_algebraic_fit(n, a, window)
    lo, hi = window
    sel = (n >= lo) & (n <= hi)
    ne, ae = block_envelope((n[sel], a[sel]), block if np.count_nonzero(sel) >= 8 * block else 1)
    return fit_decay((ne, ae), pred.log_power, window).exponent


def _super_algebraic_fit(n, a, window) -> float:
    """-inf when the window sits at the rounding floor, else the algebraic fit."""
    lo, hi = window
    top = float(np.max(a)) if a.size else 0.0
    sel = (n >= lo) & (n <= hi)
    if top == 0.0 or np.all(a[sel] <= 1e3 * np.finfo(float).eps * top):
        return -math.inf
    return fit_decay((n[sel], a[sel]), 0, window).exponent


def run_coeffs(f: SingularFunction, basis: Basis, N: int, tol: float, threads: int):
    s = coefficients(f, basis, N, tol, threads=threads)
    n = np.arange(s.values.size)
    return [(int(k), s.values[k], abs(s.values[k]), s.err_ests[k]) for k in n]


def run_decay(f, basis, N, window, tol, threads, synthetic: bool = False):
    pred = predict_coeff_decay(f, basis)
    n = np.arange(N + 1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        env = pred.envelope(np.maximum(n, 2.0))
    if synthetic:
        a = env.copy()
    else:
        a = np.abs(coefficients(f, basis, N, tol, threads=threads).values)
    fitted = _envelope_fit(n, a, pred, window, DECAY_BLOCK)
    rows = [(int(k), a[k], env[k] if k >= 1 else math.nan) for k in range(N + 1)]
    return rows, Verdict(pred, fitted, DECAY_TOL)


def _jacobi_equivalent(basis: Basis) -> Basis:
    a, b = basis.weight_exponents
    return Basis.jacobi(a, b)


def stored_length(pred: RatePrediction, n_max: int) -> int:
    """Series length whose unstored energy tail stays a small share of the stored one."""
    p = min(pred.exponent, -0.5) if not pred.super_algebraic else -8.0
    ratio = min(8.0, TAIL_SHARE ** (1.0 / (2.0 * p)))
    return int(math.ceil(n_max * max(ratio, 1.25)))


def _rounding_error(s, N_list, m: int) -> np.ndarray:
    """Projection-error level implied by the per-coefficient accuracy estimates."""
    total = np.zeros(len(N_list))
    for q in range(m + 1):
        sq = s if q == 0 else derivative_coeffs(s, q)
        e = sq.noise**2 * sq.basis.norms(np.arange(sq.values.size))
        tail = np.cumsum(e[::-1])[::-1]
        idx = np.minimum([max(0, N - q + 1) for N in N_list], e.size - 1)
        total += tail[idx]
    return np.sqrt(total)


def run_project_error(f, basis, m, N_list, tol, threads):
    pred = predict_projection_rate(f, basis, m)
    work = basis if m == 0 else _jacobi_equivalent(basis)
    s = coefficients(f, work, stored_length(pred, max(N_list)), tol, threads=threads)
    errs = np.array([l2w_projection_error(s, N) if m == 0 else sobolev_projection_error(s, N, m, f) for N in N_list])
    Ns = np.asarray(N_list, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        env = pred.envelope(Ns)
    window = (float(min(N_list)), float(max(N_list)))
    # errors within 10x of the rounding level carry no rate information
    keep = errs > 10.0 * _rounding_error(s, N_list, m)
    if pred.super_algebraic:
        fitted = -math.inf if not keep.any() else _super_algebraic_fit(Ns[keep], errs[keep], window)
    else:
        fitted = fit_decay((Ns[keep], errs[keep]), pred.log_power, window).exponent
    rows = [(int(N), e, v) for N, e, v in zip(N_list, errs, env)]
    return rows, Verdict(pred, fitted, DECAY_TOL)


def run_bessel_rate(spec: OscIntegralSpec, omegas: Sequence[float], threads: int):
    pred = predict_bessel_rate(spec)
    om = np.asarray(omegas, dtype=float)
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            vals = list(ex.map(lambda w: bessel_transform(spec, w), om))
    else:
        vals = [bessel_transform(spec, w) for w in om]
    a = np.abs(np.asarray(vals))
    env = pred.envelope(om)
    window = (float(om.min()), float(om.max()))
    block = max(1, om.size // 36)
    fitted = _envelope_fit(om, a, pred, window, block)
    rows = [(w, v, e) for w, v, e in zip(om, a, env)]
    return rows, Verdict(pred, fitted, BESSEL_TOL)


def predict_line(f: SingularFunction, basis: Basis, m: int | None) -> str:
    pred = predict_coeff_decay(f, basis) if m is None else predict_projection_rate(f, basis, m)
    return f"exponent={short(pred.exponent)} log_power={pred.log_power} source={pred.source}"


# }}}


# {{{ figure matrix


@dataclass(frozen=True)
class Case:
    figure: str
    name: str
    command: str
    params: dict


def _int_list(lo: int, hi: int, step: int) -> list[int]:
    return list(range(lo, hi + 1, step))


def figure_matrix() -> list[Case]:
    """Every figure analogue: coefficient decay, Bessel transforms, projection errors."""
    cases: list[Case] = []
    omegas = _int_list(100, 1000, 1)
    for i, (a, b, site) in enumerate(
        [(-0.5, 0.0, "AtZero"), (0.0, 1.0, "AtZero"), (2.0, -0.5, "AtZero"), (-0.5, 0.5, "AtB"), (0.0, 1.5, "AtB"), (2.0, -0.5, "AtB")]
    ):
        cases.append(Case("fig2_1", f"c{i + 1}", "bessel-rate", dict(alpha=a, beta=b, mu=1, nu=0.0, b=0.5, log_site=site, psi="cos", omega=omegas)))

    def decay(fig, name, f, basis, N=1000, window=(100, 1000)):
        cases.append(Case(fig, name, "decay", dict(f=f, basis=basis, N=N, window=window)))

    for g in ("0", "0.5", "1"):
        for basis in ("jacobi:0,0", "jacobi:1,1", "chebyshev"):
            decay("fig3_1", f"gamma{g}_{basis}", f"(1-x)^{g}*log(1-x)", basis)
        for basis in ("gegenbauer:1.5", "legendre"):
            decay("fig3_2", f"gamma{g}_{basis}", f"(1-x)^{g}*log(1-x)", basis)
    for mu in (1, 2):
        N, win = (1000, (100, 1000)) if mu == 1 else (2000, (100, 2000))
        for basis in ("chebyshev", "legendre", "jacobi:1,2"):
            decay("fig3_3", f"mu{mu}_{basis}", f"(1-x)^0.3*(1+x)^0.7*log^{mu}(1-x^2)*sin(x)", basis, N, win)
            decay("fig3_4", f"mu{mu}_{basis}", f"(1-x)^1*(1+x)^2*log^{mu}(1-x^2)*sin(x)", basis, N, win)
    for s in ("0.5", "3"):
        for basis in ("chebyshev", "legendre", "jacobi:3.6,3.7"):
            decay("fig3_5", f"s{s}_{basis}", f"|x-0.5|^{s}*log|x-0.5|*cos(x)", basis)

    def proj(fig, name, f, basis, m, N_list):
        cases.append(Case(fig, name, "project-error", dict(f=f, basis=basis, m=m, N_list=N_list)))

    wide = _int_list(100, 1000, 100)
    for g, d in (("0.6", "0.4"), ("1", "2")):
        for basis in ("chebyshev", "legendre", "jacobi:3.6,3.7"):
            # Jacobi(3.6,3.7) errors reach the rounding floor well before N=1000
            Ns = _int_list(25, 300, 25) if basis.startswith("jacobi") else wide
            proj("fig4_1", f"g{g}_d{d}_{basis}", f"(1-x)^{g}*(1+x)^{d}*log(1-x^2)", basis, 0, Ns)
    for s in ("1", "2.5"):
        for basis in ("chebyshev", "legendre", "jacobi:3.6,3.7"):
            proj("fig4_2", f"s{s}_{basis}", f"|x-0.5|^{s}*log|x-0.5|", basis, 0, wide)
    for basis in ("chebyshev", "legendre", "jacobi:1,1"):
        proj("fig4_3", f"{basis}", "|x-0.5|^2.7*log^2|x-0.5|", basis, 1, wide)
        proj("fig4_4", f"{basis}", "(1-x)^1.6*log^2(1-x)", basis, 1, wide)
    return cases


def _safe(name: str) -> str:
    return "".join(c if c.isalnum() or c in "._-" else "_" for c in name)


def run_case(case: Case, out: Path, tol: float, threads: int, emit_plot: bool) -> tuple[Verdict | None, str]:
    p = case.params
    path = out / case.figure / f"{_safe(case.name)}.csv"
    try:
        if case.command == "bessel-rate":
            spec = OscIntegralSpec(p["alpha"], p["beta"], p["mu"], p["nu"], p["b"], log_site=p["log_site"], psi=p["psi"])
            rows, v = run_bessel_rate(spec, p["omega"], threads)
            header, xcol = ["omega", "abs_integral", "predicted_envelope"], "omega"
        elif case.command == "decay":
            rows, v = run_decay(parse(p["f"]), Basis.parse(p["basis"]), p["N"], p["window"], tol, threads)
            header, xcol = ["n", "abs_coefficient", "predicted_envelope"], "n"
        else:
            rows, v = run_project_error(parse(p["f"]), Basis.parse(p["basis"]), p["m"], p["N_list"], tol, threads)
            header, xcol = ["N", "error", "predicted_envelope"], "N"
    except SingspecError as exc:
        if isinstance(exc, CliIOError):
            raise
        return None, f"{exc.category}: {exc}"
    write_csv(path, header, rows)
    if emit_plot:
        write_plot_script(path, xcol, header[1:], f"{case.figure} {case.name}")
    return v, ""


def run_repro(out: Path, tol: float, threads: int, emit_plot: bool, only: Sequence[str] = ()) -> tuple[bool, Path]:
    rows = []
    ok = True
    for case in figure_matrix():
        if only and case.figure not in only:
            continue
        v, err = run_case(case, out, tol, threads, emit_plot)
        if v is None:
            ok = False
            rows.append((case.figure, case.name, case.command, "nan", 0, "nan", "nan", "nan", "ERROR", "", err))
            print(f"{case.figure} {case.name}: ERROR {err}", flush=True)
            continue
        ok &= v.passed
        verdict = "PASS" if v.passed else "FAIL"
        p = v.predicted
        rows.append(
            (case.figure, case.name, case.command, short(p.exponent), p.log_power, v.fitted, v.delta, v.tolerance, verdict, p.source, "")
        )
        print(f"{case.figure} {case.name}: {v.line()}", flush=True)
    header = ["figure", "case", "command", "predicted_exponent", "log_power", "fitted_exponent", "delta", "tolerance", "verdict", "source", "note"]
    summary = write_csv(out / "summary.csv", header, rows)
    return ok, summary


# }}}


# {{{ argument handling


def _float_list(text: str) -> list[float]:
    """'a,b,c' or 'lo:hi:step' (inclusive)."""
    text = text.strip()
    if ":" in text:
        lo, hi, step = (float(v) for v in text.split(":"))
        if not step > 0:
            raise argparse.ArgumentTypeError("step must be positive")
        k = int(math.floor((hi - lo) / step + 1e-9))
        return [lo + i * step for i in range(k + 1)]
    return [float(v) for v in text.split(",") if v.strip()]


def _int_list_arg(text: str) -> list[int]:
    vals = _float_list(text)
    if any(v != int(v) or v < 0 for v in vals):
        raise argparse.ArgumentTypeError("expected non-negative integers")
    return [int(v) for v in vals]


def _window(text: str) -> tuple[float, float]:
    vals = _float_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError("window must be lo,hi")
    return vals[0], vals[1]


def _default_threads() -> int:
    env = os.environ.get("SINGSPEC_THREADS", "").strip()
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = _ArgParser(add_help=False)
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--tol", type=float, default=1e-12)
    common.add_argument("--threads", type=int, default=_default_threads())
    common.add_argument("--config", help="key=value file; command-line flags override it")
    common.add_argument("--emit-plot", action="store_true", help="also write a gnuplot script per CSV")

    fun = _ArgParser(add_help=False)
    fun.add_argument("--f", required=True, help="function descriptor")
    fun.add_argument("--basis", required=True, help="jacobi:a,b | gegenbauer:l | legendre | chebyshev")

    ap = _ArgParser(prog="singspec", description="Spectral coefficients and decay rates for singular functions.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", parents=[common, fun], help="expansion coefficients a_0..a_N")
    p.add_argument("--N", type=int, default=1000)

    p = sub.add_parser("decay", parents=[common, fun], help="coefficient decay fit against the predicted rate")
    p.add_argument("--N", type=int, default=1000)
    p.add_argument("--window", type=_window, default=(100.0, 1000.0))
    p.add_argument("--synthetic", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("project-error", parents=[common, fun], help="projection error sweep over N")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--N-list", dest="N_list", type=_int_list_arg, default=_int_list(100, 1000, 100))

    p = sub.add_parser("bessel-rate", parents=[common], help="Bessel transform envelope over omega")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--mu", type=int, default=1)
    p.add_argument("--nu", type=float, default=0.0)
    p.add_argument("--b", type=float, default=0.5)
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--log-site", dest="log_site", choices=("AtZero", "AtB"), default="AtZero")
    p.add_argument("--psi", choices=("one", "cos", "sin", "exp"), default="cos")
    p.add_argument("--omega", type=_float_list, default=[float(w) for w in range(100, 1001)])

    p = sub.add_parser("hilb", parents=[common], help="scaled residual of the Hilb-type approximation")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--n-list", dest="n_list", type=_int_list_arg, default=[64, 128, 256, 512, 1024])

    p = sub.add_parser("predict", parents=[common, fun], help="predicted rate only")
    p.add_argument("--m", type=int, default=None)

    p = sub.add_parser("repro", parents=[common], help="run the full figure matrix")
    p.add_argument("--only", default="", help="comma-separated figure ids, e.g. fig2_1,fig3_5")
    return ap


def read_config(path: str) -> list[str]:
    """Turn a key=value file into flag tokens; they precede the real flags so those win."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliIOError(f"cannot read config {path}: {exc}") from exc
    tokens = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError(f"config line {lineno} is not key=value", 0, {"key=value"})
        key, value = key.strip().replace("_", "-"), value.strip()
        flag = f"--{key}"
        if key == "emit-plot":
            if value.lower() in ("1", "true", "yes", "on"):
                tokens.append(flag)
            continue
        tokens += [flag, value]
    return tokens


def _split_config(argv: list[str]) -> list[str]:
    if "--config" not in argv and not any(a.startswith("--config=") for a in argv):
        return argv
    out, cfg = [], None
    i = 0
    while i < len(argv):
        a = argv[i]
        if a == "--config" and i + 1 < len(argv):
            cfg = argv[i + 1]
            i += 2
            continue
        if a.startswith("--config="):
            cfg = a.split("=", 1)[1]
            i += 1
            continue
        out.append(a)
        i += 1
    if cfg is None or not out:
        return argv
    return [out[0]] + read_config(cfg) + out[1:]


# }}}


def _emit(out: Path, name: str, header, rows, emit_plot: bool, xcol: str) -> Path:
    path = write_csv(out / name, header, rows)
    if emit_plot:
        write_plot_script(path, xcol, header[1:], name)
    return path


def dispatch(args) -> int:
    cfg = RunConfig(args.command, Path(args.out), args.tol, args.threads, args.emit_plot)
    out = cfg.out
    if args.command == "coeffs":
        rows = run_coeffs(parse(args.f), Basis.parse(args.basis), args.N, cfg.tol, cfg.threads)
        path = _emit(out, "coeffs.csv", ["n", "coefficient", "abs_coefficient", "err_est"], rows, False, "n")
        if cfg.emit_plot:
            write_plot_script(path, "n", ["abs_coefficient"], "coefficients")
        print(f"wrote {path}")
        return 0
    if args.command == "decay":
        rows, v = run_decay(parse(args.f), Basis.parse(args.basis), args.N, args.window, cfg.tol, cfg.threads, args.synthetic)
        _emit(out, "decay.csv", ["n", "abs_coefficient", "predicted_envelope"], rows, cfg.emit_plot, "n")
        print(v.line())
        return 0
    if args.command == "project-error":
        if len(args.N_list) < 8:
            raise InsufficientData("--N-list needs at least 8 values")
        rows, v = run_project_error(parse(args.f), Basis.parse(args.basis), args.m, args.N_list, cfg.tol, cfg.threads)
        _emit(out, "project_error.csv", ["N", "error", "predicted_envelope"], rows, cfg.emit_plot, "N")
        print(v.line())
        return 0
    if args.command == "bessel-rate":
        spec = OscIntegralSpec(args.alpha, args.beta, args.mu, args.nu, args.b, log_site=args.log_site, psi=args.psi, t=args.t)
        rows, v = run_bessel_rate(spec, args.omega, cfg.threads)
        _emit(out, "bessel_rate.csv", ["omega", "abs_integral", "predicted_envelope"], rows, cfg.emit_plot, "omega")
        print(v.line())
        return 0
    if args.command == "hilb":
        table = hilb_residual_scan(JacobiParams(args.alpha, args.beta), args.n_list)
        path = _emit(out, "hilb.csv", ["n", "scaled_max_residual"], table, cfg.emit_plot, "n")
        print(f"wrote {path}")
        return 0
    if args.command == "predict":
        print(predict_line(parse(args.f), Basis.parse(args.basis), args.m))
        return 0
    if args.command == "repro":
        only = tuple(s for s in args.only.split(",") if s)
        ok, summary = run_repro(out, cfg.tol, cfg.threads, cfg.emit_plot, only)
        print(f"summary {'all-PASS' if ok else 'has failures'}: {summary}")
        return 0 if ok else 1
    raise DomainError(f"unknown command {args.command}")


def report(exc: SingspecError) -> int:
    detail = str(exc).replace("\n", " ")
    extra = f" condition={exc.condition}" if hasattr(exc, "condition") else ""
    print(f"error category={exc.category} exit={exc.exit_code}{extra} message={detail}", file=sys.stderr)
    return exc.exit_code


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _split_config(argv)
        args = build_parser().parse_args(argv)
        return dispatch(args)
    except SingspecError as exc:
        return report(exc)
    except OSError as exc:
        return report(CliIOError(str(exc)))


if __name__ == "__main__":
    sys.exit(main())
