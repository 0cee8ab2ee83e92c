"""Command-line front end: ``cylimit <command> [options]``.

Commands: ``periods``, ``mirror``, ``monodromy``, ``limit-mhs``, ``zeta3-check``.
Each command prints a plain-text table and writes a deterministic JSON report
(sorted keys, rationals as "p/q", numerics as decimal strings).

Exit codes: 0 success, 1 configuration error, 2 computation error,
3 zeta(3) detection failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path

import mpmath
from mpmath import mp

from . import __version__
from . import limit_mhs as lm
from . import monodromy as mono
from .mirror import (
    CONVENTIONS,
    T_CAN,
    YCoefficients,
    build_S,
    build_S1,
    build_S2,
    build_TK,
    check_sp4z,
    instanton_expansion,
    prepotential,
)
from .numerics import BigComplex, PeriodScalar, as_fraction, complex_str, fraction_str
from .picard_fuchs import PFOperator, apply, data_path, frobenius_basis, indicial_polynomial, is_mum
from .relations import DEFAULT_HEIGHT, MIN_RELATION_PRECISION, detect_zeta3_form

log = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_COMPUTE, EXIT_DETECT = 0, 1, 2, 3
COMMANDS = ("periods", "mirror", "monodromy", "limit-mhs", "zeta3-check")
MIN_ORDER = 4
MIN_PRECISION = 30
ZETA3_MIN_PRECISION = 2 * MIN_RELATION_PRECISION


class ConfigError(ValueError):
    pass


@dataclass
class JobConfig:
    command: str = "periods"
    operator: str = str(data_path("quintic.json"))
    order: int = 50
    precision: int = 50
    y111: int | None = None
    y011: str = "auto"
    y001: str = "auto"
    y000: str | None = None
    lam: str = "1"
    monodromy: bool = False
    height: int = DEFAULT_HEIGHT
    out: str | None = None
    value: str | None = None

    def check(self) -> "JobConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"command: unknown command {self.command!r}")
        if not isinstance(self.order, int) or self.order < MIN_ORDER:
            raise ConfigError(f"order: must be an integer >= {MIN_ORDER}, got {self.order!r}")
        if not isinstance(self.precision, int) or self.precision < MIN_PRECISION:
            raise ConfigError(f"precision: must be an integer >= {MIN_PRECISION}, got {self.precision!r}")
        if not isinstance(self.height, int) or self.height < 1:
            raise ConfigError(f"height: must be a positive integer, got {self.height!r}")
        if self.y000 is not None and self.monodromy:
            raise ConfigError("y000/monodromy: --y000 and --monodromy are mutually exclusive")
        if self.y111 is not None and (not isinstance(self.y111, int) or self.y111 < 1):
            raise ConfigError(f"y111: must be a positive integer, got {self.y111!r}")
        for name in ("y011", "y001"):
            v = getattr(self, name)
            if v != "auto":
                _parse_rational(v, name)
        if _parse_rational(self.lam, "lambda") == 0:
            raise ConfigError("lambda: must be nonzero")
        if self.y000 is not None:
            _parse_y000(self.y000, self.precision)
        if self.command == "zeta3-check" and self.precision < ZETA3_MIN_PRECISION:
            raise ConfigError(f"precision: zeta3-check needs >= {ZETA3_MIN_PRECISION} digits, got {self.precision}")
        if self.value is not None:
            _parse_complex(self.value, self.precision, "value")
        return self

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("out")  # the output path does not change the result
        d["operator"] = Path(self.operator).name if self.operator == str(data_path("quintic.json")) else self.operator
        return {k: (str(v) if isinstance(v, int) and not isinstance(v, bool) else v) for k, v in d.items()}


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------


def _parse_rational(text, field: str) -> Fraction:
    try:
        return as_fraction(text if not isinstance(text, str) else Fraction(text.strip()))
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(f"{field}: not a rational number: {text!r}") from exc


_SYM = re.compile(r"^sym:\s*chi\s*=\s*([+-]?\d+)\s*,\s*r\s*=\s*([+-]?\d+(?:/\d+)?)\s*$")


def _parse_complex(text: str, precision: int, field: str) -> BigComplex:
    with mp.workdps(precision + 10):
        try:
            if "," in text:
                re_s, im_s = text.split(",", 1)
                v = mpmath.mpc(mpmath.mpf(re_s.strip()), mpmath.mpf(im_s.strip()))
            else:
                v = mpmath.mpc(text.strip().replace(" ", ""))
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{field}: not a complex number: {text!r}") from exc
    return BigComplex(v, precision)


def _parse_y000(text: str, precision: int):
    m = _SYM.match(text.strip())
    if m:
        return PeriodScalar.from_chi_r(int(m.group(1)), Fraction(m.group(2)))
    if text.strip().startswith("sym:"):
        raise ConfigError(f"y000: expected 'sym:chi=<int>,r=<rational>', got {text!r}")
    return _parse_complex(text, precision, "y000")


def validate_config(path) -> JobConfig:
    """Parse a JSON job file; errors name the line/column or the offending field."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    known = {f.name for f in fields(JobConfig)}
    aliases = {"lambda": "lam"}
    kw = {}
    for k, v in raw.items():
        name = aliases.get(k, k).replace("-", "_")
        if name not in known:
            raise ConfigError(f"{path}: unknown field {k!r}")
        kw[name] = v
    cfg = JobConfig(**kw)
    for name in ("y011", "y001", "lam"):
        v = getattr(cfg, name)
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            setattr(cfg, name, str(v))
    return cfg.check()


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cylimit", description="Periods, mirror map, monodromy and limit MHS of order-4 operators.")
    p.add_argument("--version", action="version", version=f"cylimit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="JSON job file; command-line flags override it")
        sp.add_argument("--operator", help="operator JSON file (default: bundled quintic)")
        sp.add_argument("--order", type=int, help="truncation order (default 50)")
        sp.add_argument("--precision", type=int, help="decimal digits (default 50, minimum 30)")
        sp.add_argument("--y111", type=int)
        sp.add_argument("--y011", help="rational or 'auto'")
        sp.add_argument("--y001", help="rational or 'auto'")
        sp.add_argument("--y000", help="decimal ('re,im' or '1.2+3.4j') or 'sym:chi=<int>,r=<rational>'")
        sp.add_argument("--lambda", dest="lam", help="normalization constant (default 1)")
        sp.add_argument("--monodromy", action="store_true", default=None, help="derive Y from numeric monodromy")
        sp.add_argument("--height", type=int, help="height bound for relation search (default 10^6)")
        sp.add_argument("--out", help="JSON report path (default cylimit_<command>.json)")
        sp.add_argument("-v", "--verbose", action="store_true")
        if name == "zeta3-check":
            sp.add_argument("--value", help="Y000 value to test ('re,im' or '1.2+3.4j')")
    return p


def config_from_args(argv) -> tuple[JobConfig, bool]:
    args = build_parser().parse_args(argv)
    cfg = validate_config(args.config) if args.config else JobConfig()
    cfg.command = args.command
    for f in fields(JobConfig):
        if f.name == "command":
            continue
        v = getattr(args, f.name, None)
        if v is not None:
            setattr(cfg, f.name, v)
    return cfg.check(), bool(args.verbose)


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------


def _fmt(x, digits: int):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, Fraction)):
        return fraction_str(Fraction(x))
    if isinstance(x, PeriodScalar):
        return {"kind": "period", **x.to_json()}
    if isinstance(x, BigComplex):
        return complex_str(x.value, min(digits, x.precision))
    if isinstance(x, (mpmath.mpc, mpmath.mpf)):
        return complex_str(mpmath.mpc(x), digits)
    if isinstance(x, (list, tuple)):
        return [_fmt(v, digits) for v in x]
    if isinstance(x, dict):
        return {str(k): _fmt(v, digits) for k, v in x.items()}
    return str(x)


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _table(rows) -> str:
    rows = [(str(a), str(b)) for a, b in rows]
    w = max((len(a) for a, _ in rows), default=0)
    return "\n".join(f"{a.ljust(w)}  {b}" for a, b in rows)


def _short(x, n: int = 12) -> str:
    if isinstance(x, BigComplex):
        return complex_str(x.value, n)
    if isinstance(x, Fraction):
        return fraction_str(x)
    return str(x)


# ---------------------------------------------------------------------------
# pipelines
# ---------------------------------------------------------------------------


def _operator(cfg: JobConfig) -> PFOperator:
    try:
        return PFOperator.from_file(cfg.operator)
    except OSError as exc:
        raise ConfigError(f"operator: cannot read {cfg.operator}: {exc}") from exc


def _y_from_flags(cfg: JobConfig, y000=None) -> YCoefficients:
    if cfg.y111 is None:
        raise ConfigError("y111: required (or use --monodromy)")
    lam = _parse_rational(cfg.lam, "lambda")
    y011 = None if cfg.y011 == "auto" else _parse_rational(cfg.y011, "y011")
    if cfg.y001 == "auto":
        y = YCoefficients.auto(cfg.y111, y000, y011, lam)
    else:
        base = YCoefficients.auto(cfg.y111, None, y011, lam)
        y = YCoefficients(cfg.y111, base.Y011, _parse_rational(cfg.y001, "y001"), y000, lam)
    if not y.is_admissible():
        raise ConfigError(
            f"y011/y001: Y = ({y.Y111}, {fraction_str(y.Y011)}, {fraction_str(y.Y001)}) makes T_K non-integral"
        )
    return y


def _modes(cfg: JobConfig) -> dict:
    return {
        "y011_mode": "auto" if cfg.y011 == "auto" else "given",
        "y001_mode": "auto" if cfg.y001 == "auto" else "given",
        "y000_mode": "monodromy" if cfg.monodromy else ("given" if cfg.y000 else "none"),
    }


def _monodromy_structure(op: PFOperator, cfg: JobConfig):
    data = mono.all_monodromies(op, cfg.precision)
    st = mono.integral_structure(data.matrices, cfg.y111, cfg.precision)
    y = st.y
    lam = _parse_rational(cfg.lam, "lambda")
    if lam != 1:
        y = YCoefficients(y.Y111, y.Y011, y.Y001, y.Y000, lam)
    return data, st, y


def _resolve_y(op: PFOperator, cfg: JobConfig, need_y000: bool):
    """Y from flags or from monodromy; returns (y, monodromy report or None)."""
    if cfg.monodromy:
        data, st, y = _monodromy_structure(op, cfg)
        return y, {"integral_structure": st.to_json()}
    y000 = _parse_y000(cfg.y000, cfg.precision) if cfg.y000 else None
    if need_y000 and y000 is None:
        raise ConfigError("y000: required for this command (or use --monodromy)")
    return _y_from_flags(cfg, y000), None


def cmd_periods(cfg: JobConfig, op: PFOperator):
    basis = frobenius_basis(op, cfg.order)
    residual_zero = []
    for k in range(4):
        r = apply(op, basis.rational_period(k))
        residual_zero.append(all(t.is_zero() for t in r.terms))
    shown = min(cfg.order, 10)
    report = {
        "operator": op.to_dict(),
        "is_mum": is_mum(op),
        "indicial_polynomial_at_0": [fraction_str(c) for c in indicial_polynomial(op, 0)],
        "frobenius_coefficients": {
            f"f{j}": [fraction_str(c) for c in basis.f[j].coeffs] for j in range(4)
        },
        "annihilation_exact": residual_zero,
        "period_convention": "varpi_k = (2*pi*i)^(-k) sum_j binom(k,j) f_(k-j) log(phi)^j",
    }
    rows = [("MUM at 0", report["is_mum"]), ("L varpi_k = 0 (k=0..3)", residual_zero)]
    for j in range(4):
        rows.append((f"f{j}[0..{shown - 1}]", ", ".join(fraction_str(c) for c in basis.f[j].coeffs[:shown])))
    return report, _table(rows), EXIT_OK


def cmd_mirror(cfg: JobConfig, op: PFOperator):
    y, mono_rep = _resolve_y(op, cfg, need_y000=False)
    basis = frobenius_basis(op, cfg.order)
    md = prepotential(basis, y)
    a, nd = instanton_expansion(md)
    p = cfg.precision
    poly = {str(k): _fmt(v, p) for k, v in sorted(md.polynomial_part().items())}
    report = {
        "Y": y.to_json(p),
        "mirror_map": {
            "phi_of_q": [fraction_str(c) for c in md.phi_of_q.coeffs],
            "two_pi_i_t_series": [[fraction_str(c) for c in t.coeffs] for t in md.mirror_map_u.terms],
        },
        "prepotential_polynomial_part": poly,
        "instanton_A": [fraction_str(c) for c in md.F_np.coeffs],
        "instanton_a": [x.to_json() for x in a],
        "instanton_numbers": [fraction_str(c) for c in nd],
        "instanton_numbers_integral": all(c.denominator == 1 for c in nd),
        "yukawa": [fraction_str(c) for c in md.yukawa().coeffs],
        "special_geometry": md.special_geometry_ok,
        "matrices": {
            "T_Can": _fmt(T_CAN, p),
            "T_K": _fmt(md.T_K, p),
            "T_K_in_Sp4Z": check_sp4z(md.T_K),
            "S1": _fmt(md.S1, p),
            "S": _fmt(md.S, p) if md.S is not None else None,
            "S2": _fmt(md.S2, p) if md.S2 is not None else None,
        },
    }
    if mono_rep:
        report["monodromy"] = mono_rep
    rows = [("Y111, Y011, Y001", f"{y.Y111}, {fraction_str(y.Y011)}, {fraction_str(y.Y001)}"),
            ("phi(q)", ", ".join(fraction_str(c) for c in md.phi_of_q.coeffs[:6]) + ", ...")]
    for d, n in enumerate(nd[:8], start=1):
        rows.append((f"n_{d}", fraction_str(n)))
    return report, _table(rows), EXIT_OK


def cmd_monodromy(cfg: JobConfig, op: PFOperator):
    data = mono.all_monodromies(op, cfg.precision)
    p = cfg.precision
    m0 = data.matrices[0]
    report = {
        "monodromy": data.to_json(),
        "mum_loop_error_vs_T_Can": mpmath.nstr(m0.max_error(T_CAN), 5),
    }
    rows = [("singular points", ", ".join(_short(x) for x in data.singular_points.finite) + ", infinity"),
            ("basepoint", _short(data.basepoint)),
            ("max |M_0 - T_Can|", mpmath.nstr(m0.max_error(T_CAN), 5)),
            ("product relation error", mpmath.nstr(data.relation_error, 5))]
    try:
        st = mono.integral_structure(data.matrices, cfg.y111, p, cfg.height)
    except mono.IntegralStructureError as exc:
        report["integral_structure"] = {"error": str(exc), "candidates": [c.to_json(p) for c in exc.candidates]}
        return report, _table(rows + [("integral structure", f"FAILED: {exc}")]), EXIT_COMPUTE
    report["integral_structure"] = st.to_json()
    y = st.y
    rows += [("Y111, Y011, Y001", f"{y.Y111}, {fraction_str(y.Y011)}, {fraction_str(y.Y001)}"),
             ("Y000", _short(y.Y000, 30))]
    return report, _table(rows), EXIT_OK


def _mhs_json(m: lm.MHS) -> dict:
    return m.to_json()


def cmd_limit_mhs(cfg: JobConfig, op: PFOperator):
    y, mono_rep = _resolve_y(op, cfg, need_y000=True)
    basis = frobenius_basis(op, min(cfg.order, 12))
    mhs = lm.assemble_limit_mhs(basis, y)
    q1, q2, M = lm.split_h3(mhs)
    Md = lm.dual_mhs(M)
    ext = lm.ext_class(Md)
    report = {
        "Y": y.to_json(cfg.precision),
        "N_beta": _fmt(lm.monodromy_log_beta(y).matrix, cfg.precision),
        "limit_mhs": _mhs_json(mhs),
        "hodge_tate": lm.is_hodge_tate(mhs),
        "split": {"Q(-1)": _mhs_json(q1), "Q(-2)": _mhs_json(q2), "M": _mhs_json(M)},
        "M_dual": _mhs_json(Md),
        "extension_class": ext.to_json(),
        "lattice_basis": "b_j = (2*pi*i)^(j-3) x^j",
    }
    if mono_rep:
        report["monodromy"] = mono_rep
    zc = fraction_str(ext.zeta3_coeff) if ext.zeta3_coeff is not None else "not recognized"
    rows = [("weight dims", mhs.weight_dims()), ("Hodge dims", mhs.hodge_dims()),
            ("Hodge-Tate", report["hodge_tate"]), ("ext class zeta3_coeff", zc),
            ("ext class residual zero", ext.residual_is_zero())]
    return report, _table(rows), EXIT_OK


def cmd_zeta3_check(cfg: JobConfig, op: PFOperator):
    p = cfg.precision
    mono_rep = None
    if cfg.value is not None:
        value = _parse_complex(cfg.value, p, "value")
    elif cfg.y000 is not None:
        value = _parse_y000(cfg.y000, p)
        if isinstance(value, PeriodScalar):
            value = value.evaluate(p)
    elif cfg.monodromy:
        _, st, y = _monodromy_structure(op, cfg)
        value = y.Y000
        mono_rep = {"integral_structure": st.to_json()}
    else:
        raise ConfigError("value: give --value, --y000 or --monodromy")
    form = detect_zeta3_form(value, p, cfg.height)
    report = {"input": complex_str(value.value, p), "detected": form.to_json() if form else None}
    if mono_rep:
        report["monodromy"] = mono_rep
    if form is None:
        return report, _table([("input", _short(value, 30)), ("zeta(3) form", "none")]), EXIT_DETECT
    rows = [("input", _short(value, 30)), ("chi", form.chi), ("r", fraction_str(form.r)),
            ("verified", form.verified)]
    return report, _table(rows), EXIT_OK


HANDLERS = {
    "periods": cmd_periods,
    "mirror": cmd_mirror,
    "monodromy": cmd_monodromy,
    "limit-mhs": cmd_limit_mhs,
    "zeta3-check": cmd_zeta3_check,
}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        cfg, verbose = config_from_args(list(sys.argv[1:] if argv is None else argv))
    except ConfigError as exc:
        print(f"cylimit: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        op = _operator(cfg)
        with mp.workdps(cfg.precision):
            report, table, code = HANDLERS[cfg.command](cfg, op)
    except ConfigError as exc:
        print(f"cylimit: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"cylimit: computation error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    full = {
        "command": cfg.command,
        "config": cfg.to_json(),
        "order": str(cfg.order),
        "precision": str(cfg.precision),
        "conventions": {**CONVENTIONS, **_modes(cfg), "loop_orientation": "counterclockwise"},
        "version": __version__,
        "result": report,
    }
    out = Path(cfg.out or f"cylimit_{cfg.command.replace('-', '_')}.json")
    out.write_text(dumps(full))
    print(table, file=stdout)
    print(f"report: {out}", file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
