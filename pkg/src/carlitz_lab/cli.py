"""carlitz-lab command line.

Every command prints one report (JSON by default).  Exit status 0 means
success, 2 a usage error, 1 a failed computation; errors are reported as a
JSON document too.  A TOML file given by ``--config`` supplies defaults for
any flag (keys use underscores, optionally inside a table named after the
command); flags on the command line win.
"""

from __future__ import annotations

import argparse
import re
import sys

try:
    import tomllib
except ModuleNotFoundError:            # Python 3.10
    import tomli as tomllib

from . import anderson, cyclotomic, fitting, lseries, serialize
from .ff.kfield import FieldSpec
from .ff.primes import PrimePoly, is_irreducible
from .ff.text import ParseError, parse_theta
from .ff.thetapoly import ThetaPoly

COMMANDS = ("zeta", "pellarin", "goss", "fitting", "exp-coeffs", "euler-check",
            "class-check", "cyclotomic")
MODULES = ("carlitz", "tensor", "e-alpha", "pellarin")

# flag name -> (type, default); None default means required by the command
_COMMON = {"q": (int, None), "format": (str, "json"), "output": (str, None)}
_FLAGS = {
    "zeta": {"n": (int, 1), "prec": (int, 10), "method": (str, "both")},
    "pellarin": {"s": (int, 1), "n": (int, 1), "prec": (int, 10), "method": (str, "both")},
    "goss": {"a": (str, None), "n": (int, 1), "prec": (int, 10), "chi": (str, "all")},
    "fitting": {"module": (str, "carlitz"), "n": (int, 1), "alpha": (str, "1"),
                "s": (int, None), "prime": (str, None)},
    "exp-coeffs": {"module": (str, "carlitz"), "n": (int, 1), "alpha": (str, "1"),
                   "s": (int, None), "order": (int, 3), "kind": (str, "exp")},
    "euler-check": {"module": (str, "carlitz"), "n": (int, 1), "alpha": (str, "1"),
                    "s": (int, None), "prime": (str, None), "prec": (int, 4)},
    "class-check": {"module": (str, "carlitz"), "n": (int, 1), "alpha": (str, "1"),
                    "s": (int, None), "lattice": (str, "preset:zeta1"), "h": (str, "1"),
                    "prec": (int, 12)},
    "cyclotomic": {"a": (str, None)},
}
_CHOICES = {"format": ("json", "text"), "method": ("euler", "sum", "both"),
            "module": MODULES, "kind": ("exp", "log")}


class UsageError(ValueError):
    pass


# -- argument handling -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="carlitz-lab",
                                     description="Special L-values of Anderson modules over F_q[T].")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    for cmd in COMMANDS:
        p = sub.add_parser(cmd)
        p.add_argument("--config", help="TOML file with default values for the flags")
        for name, (typ, _) in {**_COMMON, **_FLAGS[cmd]}.items():
            p.add_argument(f"--{name}", type=typ, default=None, choices=_CHOICES.get(name))
    return parser


def _load_config(path: str, command: str) -> dict:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    flat = {k: v for k, v in data.items() if not isinstance(v, dict)}
    flat.update(data.get(command, {}) if isinstance(data.get(command), dict) else {})
    return {k.replace("-", "_"): v for k, v in flat.items()}


def resolve(args: argparse.Namespace) -> dict:
    """Merge flags over config over defaults and validate types."""
    cmd = args.command
    file_cfg = _load_config(args.config, cmd) if args.config else {}
    table = {**_COMMON, **_FLAGS[cmd]}
    unknown = set(file_cfg) - {k.replace("-", "_") for k in table} - {"command"}
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = {}
    for name, (typ, default) in table.items():
        key = name.replace("-", "_")
        val = getattr(args, key, None)
        if val is None:
            val = file_cfg.get(key, default)
        if val is not None:
            if typ is int and (isinstance(val, bool) or not isinstance(val, int)):
                raise UsageError(f"{name} must be an integer")
            if typ is str:
                val = str(val)
            if name in _CHOICES and val not in _CHOICES[name]:
                raise UsageError(f"{name} must be one of {', '.join(_CHOICES[name])}")
        cfg[key] = val
    required = [k for k, (_, d) in table.items() if d is None and k not in ("output", "s")]
    missing = [k for k in required if cfg.get(k.replace("-", "_")) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join('--' + m for m in missing)}")
    return cfg


# -- input conversion --------------------------------------------------------------------

def _spec(cfg: dict, s: int = 0) -> FieldSpec:
    q = cfg["q"]
    try:
        return FieldSpec.for_q(q, s)
    except ValueError:
        raise UsageError(f"q = {q} is not a prime power") from None


def _positive(cfg: dict, *names):
    for name in names:
        if cfg.get(name) is not None and cfg[name] < 1:
            raise UsageError(f"{name} must be at least 1")


def _poly(spec: FieldSpec, text: str) -> ThetaPoly:
    try:
        f = parse_theta(spec, text)
    except ParseError as exc:
        raise UsageError(str(exc)) from None
    if not f.is_polynomial():
        raise UsageError(f"{text!r} is not a polynomial")
    return f


def _base_poly(cfg: dict, text: str) -> ThetaPoly:
    f = _poly(_spec(cfg), text)
    if f.has_t():
        raise UsageError(f"{text!r} must not involve t-variables")
    return f


def _prime(cfg: dict) -> PrimePoly:
    f = _base_poly(cfg, cfg["prime"])
    codes = f.base_codes()
    if f.is_zero() or codes[-1] != 1 or not is_irreducible(cfg["q"], codes):
        raise UsageError(f"{cfg['prime']!r} is not a monic irreducible polynomial")
    return PrimePoly(cfg["q"], tuple(codes))


def _t_count(text: str) -> int:
    found = [int(m) for m in re.findall(r"t(\d+)", text)]
    return max(found, default=0)


def _module(cfg: dict) -> anderson.AndersonModule:
    kind = cfg["module"]
    _positive(cfg, "n")
    n = cfg["n"]
    if kind == "carlitz":
        if n != 1:
            raise UsageError("the Carlitz module has n = 1; use --module tensor")
        return anderson.carlitz_tensor(_spec(cfg), 1)
    if kind == "tensor":
        return anderson.carlitz_tensor(_spec(cfg), n)
    if kind == "pellarin":
        s = cfg.get("s") or 1
        if not 1 <= s <= 2:
            raise UsageError("s must be 1 or 2")
        return anderson.e_alpha_module(anderson.pellarin_alpha(_spec(cfg, s)), n)
    s = cfg.get("s")
    if s is None:
        s = _t_count(cfg["alpha"])
    if not 0 <= s <= 2:
        raise UsageError("at most two t-variables are supported")
    alpha = _poly(_spec(cfg, s), cfg["alpha"])
    if alpha.is_zero():
        raise UsageError("alpha must be nonzero")
    return anderson.e_alpha_module(alpha, n)


def _cycfield(cfg: dict) -> cyclotomic.CycField:
    a = _base_poly(cfg, cfg["a"])
    try:
        return cyclotomic.CycField(cfg["q"], a)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- commands -----------------------------------------------------------------------------

def _routes(cfg: dict, euler, summed) -> dict:
    method = cfg["method"]
    results = {}
    if method in ("euler", "both"):
        results["euler"] = euler()
    if method in ("sum", "both"):
        results["sum"] = summed()
    out = {"routes": {k: v.to_json() for k, v in results.items()}}
    if method == "both":
        out["agreement"] = results["euler"].value.agrees(results["sum"].value, cfg["prec"])
    return out


def cmd_zeta(cfg):
    spec = _spec(cfg)
    _positive(cfg, "n", "prec")
    n, N = cfg["n"], cfg["prec"]
    return lambda: _routes(cfg, lambda: lseries.euler_product(anderson.carlitz_tensor(spec, n), N),
                           lambda: lseries.carlitz_zeta(n, N, spec.q))


def cmd_pellarin(cfg):
    _spec(cfg)
    _positive(cfg, "n", "prec", "s")
    if cfg["s"] > 2:
        raise UsageError("s must be 1 or 2")
    s, n, N, q = cfg["s"], cfg["n"], cfg["prec"], cfg["q"]
    return lambda: _routes(cfg, lambda: lseries.pellarin_euler(s, n, N, q),
                           lambda: lseries.pellarin_value(s, n, N, q))


def cmd_goss(cfg):
    _positive(cfg, "n", "prec")
    fld = _cycfield(cfg)
    n, N = cfg["n"], cfg["prec"]
    if cfg["chi"] == "all":
        def run():
            elem, values = cyclotomic.equivariant_l(None, n, N, fld=fld)
            comps = [{"chi": lab, "value": v.value.to_json(), "meta": v.meta}
                     for lab, v in values.items()]
            coeffs = [{"sigma": str(ThetaPoly.from_codes(fld.base, list(b) or [0])),
                       "value": x.to_json()} for b, x in elem.coefficients().items()]
            return {"order": fld.order, "components": comps, "group_ring": coeffs}
        return run
    try:
        chi = fld.character(cfg["chi"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    def run_one():
        v = cyclotomic.goss_l_value(chi, n, N)
        return {"order": fld.order,
                "components": [{"chi": chi.label, "value": v.value.to_json(), "meta": v.meta}]}
    return run_one


def cmd_fitting(cfg):
    E = _module(cfg)
    P = _prime(cfg)

    def run():
        lie = fitting.lie_mod_p(E, P)
        em = fitting.e_mod_p(E, P)
        gen = fitting.fitting_generator(em)
        out = {"prime": str(P), "module": E.describe(),
               "lie": {"module": lie.to_json(), "generator": str(fitting.fitting_generator(lie))},
               "e": {"module": em.to_json(), "generator": str(gen),
                     "invariant_factors": [str(f) for f in fitting.invariant_factors(em)]},
               "generator": str(gen)}
        if E.alpha is not None:
            out["rho"] = str(fitting.rho(E.alpha, P))
        return out
    return run


def cmd_exp_coeffs(cfg):
    E = _module(cfg)
    if cfg["order"] < 0:
        raise UsageError("order must be nonnegative")
    m = cfg["order"]

    def run():
        series = (anderson.exp_coefficients if cfg["kind"] == "exp" else anderson.log_coefficients)(E, m)
        return dict(serialize.exp_series_json(E, series), kind=cfg["kind"])
    return run


def cmd_euler_check(cfg):
    E = _module(cfg)
    P = _prime(cfg)
    _positive(cfg, "prec")
    N = cfg["prec"]

    def run():
        lie = fitting.fitting_generator(fitting.lie_mod_p(E, P))
        eg = fitting.fitting_generator(fitting.e_mod_p(E, P))
        det = fitting.theta_operator_det(E, P, N)
        quot = fitting.reversed_quotient(lie, eg, N)
        out = {"prime": str(P), "module": E.describe(), "lie_generator": str(lie),
               "e_generator": str(eg), "theta_det": det.to_json(),
               "fitting_quotient": quot.to_json(), "trace_identity": (det * quot).is_one()}
        if E.alpha is not None:
            r = fitting.rho(E.alpha, P)
            Pt = P.to_theta(E.spec)
            closed = Pt ** E.n - ThetaPoly.constant(E.spec, r)
            out["closed_form"] = str(closed)
            out["closed_form_agrees"] = closed == eg and lie == Pt ** E.n
        return out
    return run


def cmd_class_check(cfg):
    E = _module(cfg)
    _positive(cfg, "prec")
    N = cfg["prec"]
    h = _poly(E.spec, cfg["h"])
    lat = cfg["lattice"]
    if not lat.startswith("preset:"):
        raise UsageError("lattice must be preset:zeta1 or preset:canonical")
    name = lat.split(":", 1)[1]
    if name not in ("zeta1", "canonical"):
        raise UsageError(f"unknown lattice preset {name!r}")

    def run():
        basis = lseries.lattice_preset(name, E, N)
        return lseries.class_formula_residual(E, basis, h, N).to_json()
    return run


def cmd_cyclotomic(cfg):
    fld = _cycfield(cfg)

    def run():
        chars = []
        for chi in fld.characters():
            g = cyclotomic.gauss_thakur(fld, chi)
            chars.append({"chi": chi.label, "conductor": str(chi.conductor()),
                          "alpha": str(chi.alpha()), "gauss_sum": str(g),
                          "tau_equation": cyclotomic.tau_equation_holds(fld, chi)})
        return {"a": str(fld.a_poly), "order": fld.order, "constant_field_degree": fld.m,
                "phi": [str(c) for c in fld.cyclotomic_poly()],
                "primes": [str(P) for P in fld.primes], "roots": list(fld.zeta_local),
                "characters": chars, "eta": cyclotomic.eta_generator_check(fld).to_json()}
    return run


_DISPATCH = {"zeta": cmd_zeta, "pellarin": cmd_pellarin, "goss": cmd_goss,
             "fitting": cmd_fitting, "exp-coeffs": cmd_exp_coeffs,
             "euler-check": cmd_euler_check, "class-check": cmd_class_check,
             "cyclotomic": cmd_cyclotomic}


# -- entry point ---------------------------------------------------------------------------

def _write(text: str, path: str | None, stream):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stream.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fmt = args.format or "json"
    try:
        cfg = resolve(args)
        fmt = cfg["format"]
        lseries.worker_count()
        run = _DISPATCH[args.command](cfg)
    except (UsageError, ValueError) as exc:
        doc = serialize.error_document("usage", str(exc))
        sys.stderr.write(serialize.emit(doc, fmt))
        return 2
    try:
        result = run()
    except Exception as exc:                      # reported, not swallowed: exit status 1
        doc = serialize.error_document("computation", str(exc), type=type(exc).__name__)
        sys.stdout.write(serialize.emit(doc, fmt))
        return 1
    config = {k: v for k, v in cfg.items() if k not in ("format", "output") and v is not None}
    doc = serialize.document(args.command, config, result)
    _write(serialize.emit(doc, fmt), cfg.get("output"), sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
