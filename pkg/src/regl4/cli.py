"""``regl4 verify|eval|sweep``.

Every option may also be given in a ``--config`` file of ``key = value``
lines (``#`` starts a comment, keys use the long option name with or without
dashes).  Command-line flags override the file, which overrides defaults.

Exit codes: 0 all checks pass, 1 some check failed, 2 usage or precondition
error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

from . import characters as ch
from . import eisenstein as es
from . import i2_pipeline as ip
from . import l_functions as lf
from . import regularized_products as rp
from .errors import ConvergenceError, PreconditionError, Regl4Error
from .suites import SUITES, SuiteConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONVERGENCE = 0, 1, 2, 3

QUANTITIES = (
    "gauss_sum",
    "lfun",
    "xi",
    "lambda_completed",
    "fourier_coeff",
    "triple_product",
    "h_factor",
    "f_factor",
    "i2_constant",
    "i2_report",
    "grh_report",
)

ANCHORS = {
    "gauss_sum": ["Gauss sum tau(chi) = sum chi(a) e(a/q)"],
    "lfun": ["Dirichlet L-function via Hurwitz zeta"],
    "xi": ["xi(s) = pi^(-s/2) Gamma(s/2) zeta(s)", "xi(2) = pi/6"],
    "lambda_completed": ["Lambda(s, chi) = (q/pi)^(s/2) Gamma((s+kappa)/2) L(s, chi)"],
    "fourier_coeff": ["lambda(n, s) = sum_{ab=n} chi1(a) conj(chi2)(b) (b/a)^(s-1/2)"],
    "triple_product": ["regularized triple product closed form"],
    "h_factor": ["four-term formula for I2: H_j"],
    "f_factor": ["F_j(eta) = lim_{eta'->0} H_j"],
    "i2_constant": ["I2 constant term = 1/2 (F1''+F2''-F3''-F4'') + 2a (F1'-F2') + 4a^2 F1(0)"],
    "i2_report": ["xi(2) nu(N) I2 = 4 log^2 N + 4 Re L''/L + O(envelope)"],
    "grh_report": ["L'/L and L''/L under GRH", "prime sum for -L'/L"],
}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Option parsing


def _parse_complex(text) -> complex:
    if isinstance(text, (int, float, complex)):
        return complex(text)
    t = str(text).strip().replace(" ", "").replace("i", "j").replace("I", "j")
    try:
        return complex(t)
    except ValueError:
        raise UsageError(f"not a complex number: {text!r}") from None


def _list_of(conv: Callable) -> Callable:
    def parse(text):
        if isinstance(text, (list, tuple)):
            items = [x for part in text for x in str(part).split(",")]
        else:
            items = str(text).split(",")
        out = [conv(x.strip()) for x in items if x.strip()]
        if not out:
            raise UsageError("empty list")
        return tuple(out)

    return parse


def _positive(conv: Callable) -> Callable:
    def parse(text):
        v = conv(text)
        if not v > 0:
            raise UsageError(f"expected a positive value, got {text!r}")
        return v

    return parse


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {text!r}")


def _int(text) -> int:
    try:
        return int(str(text).strip())
    except ValueError:
        raise UsageError(f"not an integer: {text!r}") from None


def _float(text) -> float:
    try:
        return float(str(text).strip())
    except ValueError:
        raise UsageError(f"not a number: {text!r}") from None


# name: (converter, default, help)
OPTIONS: dict[str, tuple[Callable, object, str]] = {
    "N": (_list_of(_int), None, "level(s), comma separated"),
    "char": (str, None, "character: Conrey index or 'quadratic' (default: first primitive even)"),
    "q1": (_positive(_int), 1, "modulus of chi1 in the decomposition"),
    "T": (_list_of(_float), (1.0,), "height(s) T, comma separated"),
    "eta_grid": (_list_of(_positive(_float)), ip.DEFAULT_ETA_GRID, "decreasing eta grid for the Laurent fit"),
    "fd_step": (_positive(_float), 1e-3, "finite-difference step for F_j derivatives"),
    "tol_identity": (_positive(_float), 1e-10, "tolerance for exact identities"),
    "tol_quadrature": (_positive(_float), 1e-8, "tolerance for quadrature oracles"),
    "tol_derived": (_positive(_float), 1e-5, "tolerance for derived (numerically differentiated) values"),
    "X": (_list_of(_positive(_float)), (1e2, 1e4, 1e6), "prime-sum cutoffs"),
    "slow": (_bool, False, "include the slow oracles"),
    "threads": (_positive(_int), None, "worker processes (REGL4_THREADS overrides the config file)"),
    "output": (str, None, "output path (default stdout)"),
    "format": (str, "text", "verify report format: text or json"),
    "modulus": (_positive(_int), None, "modulus for gauss_sum, lfun, lambda_completed"),
    "s": (_parse_complex, None, "spectral or L-function argument"),
    "n": (_int, None, "Fourier index"),
    "w1": (_parse_complex, None, "triple product parameter"),
    "w2": (_parse_complex, None, "triple product parameter"),
    "w3": (_parse_complex, None, "triple product parameter"),
    "s1": (_parse_complex, None, "H_j argument"),
    "s2": (_parse_complex, None, "H_j argument"),
    "s3": (_parse_complex, None, "H_j argument"),
    "s4": (_parse_complex, None, "H_j argument"),
    "j": (_int, None, "index 1..4 of H_j or F_j"),
    "eta": (_list_of(_positive(_float)), None, "eta value(s)"),
    "variant": (str, "corrected", "F_2 variant: corrected or as_printed"),
}

BOOLEAN_FLAGS = {"slow"}


def _add_options(p: argparse.ArgumentParser):
    p.add_argument("--config", default=argparse.SUPPRESS, help="key=value file mirroring the flags")
    for name, (_, default, text) in OPTIONS.items():
        flag = "--" + name.replace("_", "-")
        alias = ["--" + name] if "_" in name else []
        if name in BOOLEAN_FLAGS:
            p.add_argument(flag, *alias, dest=name, action="store_const", const=True, default=argparse.SUPPRESS, help=text)
        else:
            p.add_argument(flag, *alias, dest=name, default=argparse.SUPPRESS, help=text if "default:" in text else f"{text} (default: {default})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="regl4", description="Verification and evaluation of the regularized L^4 pipeline.")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=["all", *SUITES])
    _add_options(v)
    e = sub.add_parser("eval", help="evaluate one quantity as a JSON record")
    e.add_argument("quantity", choices=QUANTITIES)
    _add_options(e)
    s = sub.add_parser("sweep", help="sweep the I2 pipeline along one axis to CSV")
    s.add_argument("axis", choices=["N", "T", "eta"])
    _add_options(s)
    return parser


def read_config(path: str) -> dict[str, str]:
    """``key = value`` lines; blank lines and ``#`` comments are skipped."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from None
    for k, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{k}: expected key = value")
        key, val = (x.strip() for x in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in OPTIONS:
            raise UsageError(f"{path}:{k}: unknown key {key!r}")
        out[key] = val
    return out


def resolve_options(ns: argparse.Namespace, environ=None) -> dict:
    """Merge defaults, config file and flags; convert every value."""
    environ = os.environ if environ is None else environ
    flags = {k: v for k, v in vars(ns).items() if k in OPTIONS}
    raw = read_config(ns.config) if getattr(ns, "config", None) else {}
    opts = {}
    for name, (conv, default, _) in OPTIONS.items():
        if name in flags:
            opts[name] = conv(flags[name])
        elif name == "threads" and environ.get("REGL4_THREADS"):
            opts[name] = conv(environ["REGL4_THREADS"])
        elif name in raw:
            opts[name] = conv(raw[name])
        else:
            opts[name] = default
    if opts["threads"] is None:
        opts["threads"] = 1
    if opts["format"] not in ("text", "json"):
        raise UsageError("--format must be text or json")
    return opts


def suite_config(opts: dict) -> SuiteConfig:
    return SuiteConfig(
        N=opts["N"],
        T=opts["T"],
        char=opts["char"],
        q1=opts["q1"],
        eta_grid=opts["eta_grid"],
        fd_step=opts["fd_step"],
        tol_identity=opts["tol_identity"],
        tol_quadrature=opts["tol_quadrature"],
        tol_derived=opts["tol_derived"],
        X=opts["X"],
        slow=opts["slow"],
    )


# ---------------------------------------------------------------------------
# Output


def _num(x):
    """JSON-safe float: ``repr`` round trip, non-finite values become ``null``."""
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _jsonable(obj):
    if isinstance(obj, complex):
        return {"re": _num(obj.real), "im": _num(obj.imag)}
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item"):
        return _jsonable(obj.item())
    return obj


def _csv_cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x) if math.isfinite(x) else "nan"
    return str(x)


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path!r}: {exc}") from None


# ---------------------------------------------------------------------------
# verify


def _format_check_text(c) -> str:
    ref = "" if c.reference is None else f" ref={_fmt_c(c.reference)}"
    tol = "" if c.tolerance is None else f" tol={c.tolerance:.1e}"
    return f"[{c.status:6}] {c.suite}: {c.name} | {c.anchor} | value={_fmt_c(c.value)}{ref} dev={c.deviation:.3e}{tol}"


def _fmt_c(z: complex) -> str:
    z = complex(z)
    return repr(z.real) if z.imag == 0 else f"{z.real!r}{z.imag:+}j"


def _check_record(c) -> dict:
    return {
        "suite": c.suite,
        "name": c.name,
        "anchor": c.anchor,
        "status": c.status,
        "value_re": _num(c.value.real),
        "value_im": _num(c.value.imag),
        "reference_re": None if c.reference is None else _num(c.reference.real),
        "reference_im": None if c.reference is None else _num(c.reference.imag),
        "deviation": _num(c.deviation),
        "tolerance": c.tolerance,
        "info": _jsonable(c.info),
    }


def _run_named_suite(args):
    name, cfg = args
    return run_suite(name, cfg)


def cmd_verify(suite: str, opts: dict) -> int:
    cfg = suite_config(opts)
    if suite == "i2" and cfg.N and min(cfg.N) <= 1:
        raise PreconditionError("I2 needs level N > 1")
    names = list(SUITES) if suite == "all" else [suite]
    jobs = [(n, cfg) for n in names]
    if opts["threads"] > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=opts["threads"]) as pool:
            groups = list(pool.map(_run_named_suite, jobs))
    else:
        groups = [_run_named_suite(j) for j in jobs]
    checks = [c for g in groups for c in g]
    failed = sum(c.passed is False for c in checks)
    passed = sum(c.passed is True for c in checks)
    reported = sum(c.passed is None for c in checks)
    if opts["format"] == "json":
        text = json.dumps({"suite": suite, "passed": passed, "failed": failed, "reported": reported, "checks": [_check_record(c) for c in checks]}, indent=1) + "\n"
    else:
        lines = [_format_check_text(c) for c in checks]
        lines.append(f"{suite}: {passed} passed, {failed} failed, {reported} reported")
        text = "\n".join(lines) + "\n"
    _write(text, opts["output"])
    return EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------------------
# eval


def _require(opts: dict, *names):
    missing = [n for n in names if opts[n] is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _character(modulus: int, selector) -> ch.DirichletCharacter:
    if selector is None and modulus == 1:
        return ch.trivial_character(1)
    if selector is None:
        return ch.trivial_character(modulus)
    if selector == "quadratic":
        return ch.quadratic_character(modulus)
    try:
        return ch.from_conrey(modulus, int(selector))
    except ValueError:
        raise PreconditionError(f"bad character selector {selector!r}") from None


def _decomposition(N: int, opts: dict) -> ch.CharacterDecomposition:
    if N == 1:
        return es.trivial_decomposition()
    chi = ip.resolve_character(N, opts["char"])
    return ch.decompose(chi, opts["q1"])


def _scenario(opts: dict, N: int | None = None, T: float | None = None) -> ip.I2Scenario:
    if N is None:
        _require(opts, "N")
        N = opts["N"][0]
    T = opts["T"][0] if T is None else T
    tols = ip.Tolerances(opts["tol_identity"], opts["tol_quadrature"], opts["tol_derived"])
    return ip.I2Scenario.build(N, opts["char"], opts["q1"], T, eta_grid=opts["eta_grid"], fd_step=opts["fd_step"], tolerances=tols)


def _scenario_params(sc: ip.I2Scenario) -> dict:
    return {"N": sc.N, "character": sc.chi.label(), "q1": sc.dec.q1, "T": sc.T, "eta_grid": list(sc.eta_grid), "fd_step": sc.fd_step}


def evaluate(quantity: str, opts: dict) -> dict:
    """One eval record (without JSON encoding)."""
    err = None
    extra = {}
    if quantity in ("gauss_sum", "lfun", "lambda_completed"):
        _require(opts, "modulus")
        chi = _character(opts["modulus"], opts["char"])
        params = {"modulus": chi.modulus, "character": chi.label()}
        if quantity == "gauss_sum":
            value = ch.gauss_sum(chi)
        else:
            _require(opts, "s")
            params["s"] = opts["s"]
            value = lf.dirichlet_l(opts["s"], chi) if quantity == "lfun" else lf.completed(opts["s"], chi)
    elif quantity == "xi":
        _require(opts, "s")
        params = {"s": opts["s"]}
        value = lf.xi(opts["s"])
    elif quantity in ("fourier_coeff", "triple_product"):
        _require(opts, "N")
        dec = _decomposition(opts["N"][0], opts)
        params = {"N": dec.N, "chi1": dec.chi1.label(), "chi2": dec.chi2.label(), "q1": dec.q1}
        if quantity == "fourier_coeff":
            _require(opts, "n", "s")
            params.update(n=opts["n"], s=opts["s"])
            value = es.fourier_coefficient(opts["n"], opts["s"], dec)
        else:
            _require(opts, "w1", "w2", "w3")
            params.update(w1=opts["w1"], w2=opts["w2"], w3=opts["w3"])
            value = rp.triple_product_closed(rp.TripleProductParams(dec, opts["w1"], opts["w2"], opts["w3"]))
    else:
        sc = _scenario(opts)
        params = _scenario_params(sc)
        if quantity == "h_factor":
            _require(opts, "j", "s1", "s2", "s3", "s4")
            args = [opts[k] for k in ("s1", "s2", "s3", "s4")]
            params.update(j=opts["j"], s1=args[0], s2=args[1], s3=args[2], s4=args[3])
            value = ip.h_factor(opts["j"], *args, sc)
        elif quantity == "f_factor":
            _require(opts, "j", "eta")
            params.update(j=opts["j"], eta=opts["eta"][0], variant=opts["variant"])
            value = ip.f_factor(opts["j"], opts["eta"][0], sc, opts["variant"])
        elif quantity == "i2_constant":
            c = ip.i2_constant_term(sc)
            value, err = c.value, c.error_estimate
        elif quantity == "i2_report":
            rep = ip.i2_asymptotic_report(sc)
            value, err = rep["i2_constant"], rep["i2_error_estimate"]
            extra["report"] = rep
        elif quantity == "grh_report":
            X = opts["X"][0]
            params["X"] = X
            rep = ip.grh_diagnostics(sc, X)
            value = rep["residual"]
            extra["report"] = rep
        else:
            raise UsageError(f"unknown quantity {quantity!r}")
    value = complex(value)
    rec = {
        "quantity": quantity,
        "params": params,
        "value_re": value.real,
        "value_im": value.imag,
        "error_estimate": err,
        "anchors": ANCHORS[quantity],
    }
    rec.update(extra)
    return rec


def cmd_eval(quantity: str, opts: dict) -> int:
    rec = evaluate(quantity, opts)
    _write(json.dumps(_jsonable(rec)) + "\n", opts["output"])
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep

SWEEP_COLUMNS = (
    "axis",
    "N",
    "T",
    "character",
    "q1",
    "eta",
    "i2_re",
    "i2_im",
    "i2_error_estimate",
    "main_term",
    "l_term",
    "remainder_re",
    "remainder_im",
    "envelope",
    "ratio",
    "leading_ratio",
    "xi_total_re",
    "xi_total_im",
)


def _sweep_point(args) -> dict:
    axis, opts, N, T, eta = args
    sc = _scenario(opts, N, T)
    row = {"axis": axis, "N": sc.N, "T": sc.T, "character": sc.chi.label(), "q1": sc.dec.q1}
    if axis == "eta":
        tot = complex(ip.xi_assembly(eta, sc, variant=opts["variant"]).total)
        row.update(eta=eta, xi_total_re=tot.real, xi_total_im=tot.imag)
        return row
    rep = ip.i2_asymptotic_report(sc)
    c, r = rep["i2_constant"], rep["remainder"]
    row.update(
        i2_re=c.real,
        i2_im=c.imag,
        i2_error_estimate=rep["i2_error_estimate"],
        main_term=rep["main_term"],
        l_term=rep["l_term"],
        remainder_re=r.real,
        remainder_im=r.imag,
        envelope=rep["envelope"],
        ratio=rep["ratio"],
        leading_ratio=rep["leading_ratio"],
    )
    return row


def sweep_points(axis: str, opts: dict) -> list[tuple]:
    if axis == "N":
        _require(opts, "N")
        return [(axis, opts, N, opts["T"][0], None) for N in opts["N"]]
    _require(opts, "N")
    N = opts["N"][0]
    if axis == "T":
        return [(axis, opts, N, T, None) for T in opts["T"]]
    etas = opts["eta"] if opts["eta"] is not None else opts["eta_grid"]
    return [(axis, opts, N, opts["T"][0], e) for e in etas]


def cmd_sweep(axis: str, opts: dict) -> int:
    points = sweep_points(axis, opts)
    for p in points:
        if p[2] <= 1:
            raise PreconditionError("I2 needs level N > 1")
    if opts["threads"] > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=opts["threads"]) as pool:
            rows = list(pool.map(_sweep_point, points))
    else:
        rows = [_sweep_point(p) for p in points]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for row in rows:
        w.writerow([_csv_cell(row.get(k)) for k in SWEEP_COLUMNS])
    _write(buf.getvalue(), opts["output"])
    return EXIT_OK


# ---------------------------------------------------------------------------


def main(argv=None, environ=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if "N" in vars(ns) and not str(ns.N).replace(",", "").strip():
            raise UsageError("empty N list")
        opts = resolve_options(ns, environ)
        if ns.command == "verify":
            return cmd_verify(ns.suite, opts)
        if ns.command == "eval":
            return cmd_eval(ns.quantity, opts)
        return cmd_sweep(ns.axis, opts)
    except (UsageError, PreconditionError) as exc:
        print(f"regl4: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"regl4: not converged: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except Regl4Error as exc:
        print(f"regl4: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
