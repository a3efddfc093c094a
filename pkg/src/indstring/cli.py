"""Command-line front end.

Exit codes: 0 success, 1 bad input or arguments, 2 numerical failure,
3 an identity residual above ``--tol``.  With ``--output -`` only data goes to
stdout; diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import dataclasses
import io
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .approximation import ApproximationSequence, weyl_convergence
from .camassa_holm import CH_ALPHA, CHProfile, ch_spectrum, ch_transform
from .model import (AtomicMeasure, PiecewiseConstantFn, SpecError, StringSpec, Tail,
                    coefficient_functionals, validate)
from .scattering import PoleError, scattering_ab, spectral_density
from .spectral import (DEFAULT_SCAN_STEP, InterlacingError, QuadratureError, gap_spectrum,
                       lieb_thirring_check, sample_log_modulus, trace_formula_lebesgue,
                       trace_formulas_alpha)

SCHEMA_VERSION = 1
DEFAULT_Z = (1j, 0.5 + 1j, -1.0 + 0.5j, 2.0 + 2.0j, 0.1 + 3.0j)
SPURIOUS_KAPPA = 0.5


class InputError(Exception):
    """Bad document or argument; exit code 1."""


class ResidualError(Exception):
    """An identity failed its tolerance; exit code 3."""


# --------------------------------------------------------------------------
# documents


def _pairs(doc, key):
    raw = doc.get(key, [])
    if not isinstance(raw, list) or not all(isinstance(p, list) and len(p) == 2 for p in raw):
        raise InputError(f"'{key}' must be a list of [x, value] pairs")
    try:
        return [(float(x), float(v)) for x, v in raw]
    except (TypeError, ValueError) as exc:
        raise InputError(f"'{key}': {exc}") from None


def _parse_tail(raw) -> Tail:
    if raw in ("lebesgue", None):
        return Tail.LEBESGUE
    if raw == "alpha" or raw == {"alpha": True}:
        return Tail.ALPHA
    raise InputError(f"unknown tail {raw!r}; use \"lebesgue\" or {{\"alpha\": true}}")


def parse_spec(doc) -> StringSpec:
    """``{"R", "tail", "w", "rho", "atoms"}`` to a validated spec."""
    if not isinstance(doc, dict) or "R" not in doc:
        raise InputError("spec document must be an object with a key 'R'")
    try:
        R = float(doc["R"])
    except (TypeError, ValueError):
        raise InputError("'R' must be a number") from None
    spec = StringSpec(R, PiecewiseConstantFn.from_pairs(_pairs(doc, "w")),
                      PiecewiseConstantFn.from_pairs(_pairs(doc, "rho")),
                      AtomicMeasure.from_pairs(_pairs(doc, "atoms")), _parse_tail(doc.get("tail")))
    try:
        return validate(spec)
    except SpecError as exc:
        raise InputError(str(exc)) from None


def parse_profile(doc) -> CHProfile:
    """``{"u", "rho2", "atoms"}`` to a validated Camassa--Holm profile."""
    if not isinstance(doc, dict) or "u" not in doc:
        raise InputError("profile document must be an object with a key 'u'")
    prof = CHProfile(tuple(_pairs(doc, "u")), tuple(_pairs(doc, "rho2")),
                     tuple(_pairs(doc, "atoms")))
    try:
        return prof.validate()
    except SpecError as exc:
        raise InputError(str(exc)) from None


def _load(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def _lambda_grid(args) -> np.ndarray:
    lo, hi, step = args.lambda_min, args.lambda_max, args.lambda_step
    if not (math.isfinite(lo) and math.isfinite(hi) and hi >= lo):
        raise InputError("need finite --lambda-min <= --lambda-max")
    if not step > 0:
        raise InputError("--lambda-step must be positive")
    n = int(math.floor((hi - lo) / step * (1 + 1e-12))) + 1
    return lo + step * np.arange(n)


def _parse_z(text: str) -> np.ndarray:
    try:
        z = np.array([complex(s.strip().replace("i", "j")) for s in text.split(",")])
    except ValueError:
        raise InputError(f"cannot parse z samples {text!r}") from None
    if np.any(z.imag <= 0):
        raise InputError("z samples must have positive imaginary part")
    return z


def _parse_stages(text: str) -> tuple[float, ...]:
    try:
        st = tuple(float(s) for s in text.split(","))
    except ValueError:
        raise InputError(f"cannot parse stages {text!r}") from None
    if not st or any(not s > 0 for s in st):
        raise InputError("stages must be positive")
    return st


# --------------------------------------------------------------------------
# output


def _csv(header, columns) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in zip(*columns):
        buf.write(",".join("%.17g" % v for v in row) + "\n")
    return buf.getvalue()


def _json(doc) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **doc}, indent=2) + "\n"


def _emit(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(path).write_text(text)


def _floats(xs):
    return [float(x) for x in xs]


def _report_doc(r) -> dict:
    return {"identity": r.identity, "lhs": r.lhs, "rhs": r.rhs, "residual": r.residual,
            "tol": r.tol, "passed": r.passed, "panels": r.panels,
            "truncation_error": r.truncation_error, "quadrature_error": r.quadrature_error}


def _gap_doc(gap) -> dict:
    return {"eig_neg": _floats(gap.eig_neg), "eig_pos": _floats(gap.eig_pos),
            "a_zeros": _floats(gap.a_zeros), "interlace_ok": list(gap.interlace_ok),
            "suspects": _floats(gap.suspects)}


def _tail_name(spec: StringSpec) -> str:
    return spec.tail.value


# --------------------------------------------------------------------------
# commands


def cmd_scatter(args) -> int:
    spec = parse_spec(_load(args.input))
    lam = _lambda_grid(args)
    if spec.tail is Tail.ALPHA and np.any(np.abs(lam) <= 1.0):
        raise InputError("Alpha tail: the lambda range must avoid [-1, 1]")
    sv = scattering_ab(spec, lam.astype(complex))
    defect = np.abs(sv.a) ** 2 - np.abs(sv.b) ** 2 - 1.0
    dens = spectral_density(spec, lam).density
    _emit(args.output, _csv(("lambda", "re_a", "im_a", "re_b", "im_b", "unitarity_defect",
                             "density"),
                            (lam, sv.a.real, sv.a.imag, sv.b.real, sv.b.imag, defect, dens)))
    return 0


def cmd_trace(args) -> int:
    spec = parse_spec(_load(args.input))
    doc = {"command": "trace", "tail": _tail_name(spec)}
    if spec.tail is Tail.LEBESGUE:
        if args.debug_corrupt_kappa:
            raise InputError("--debug-corrupt-kappa needs the Alpha tail")
        reports = (trace_formula_lebesgue(spec, tol=args.tol),)
    else:
        gap = gap_spectrum(spec, args.scan_res)
        if args.debug_corrupt_kappa:
            kap = SPURIOUS_KAPPA
            while any(abs(kap - k) < 1e-3 for k in gap.a_zeros):
                kap = 0.5 * (kap + 1.0)
            gap = dataclasses.replace(gap, a_zeros=tuple(sorted(gap.a_zeros + (kap,))))
        reports = trace_formulas_alpha(spec, tol=args.tol, gap=gap,
                                       logmod=sample_log_modulus(spec))
        lt = lieb_thirring_check(spec, gap)
        doc["gap"] = _gap_doc(gap)
        doc["lieb_thirring"] = {"lhs": lt.lhs, "rhs": lt.rhs, "holds": bool(lt.holds)}
    doc["reports"] = [_report_doc(r) for r in reports]
    ok = all(r.passed for r in reports)
    doc["passed"] = ok
    _emit(args.output, _json(doc))
    if not ok:
        worst = max(reports, key=lambda r: r.residual)
        raise ResidualError(f"{worst.identity}: residual {worst.residual:.3g} exceeds "
                            f"tolerance {args.tol:.3g}")
    return 0


def cmd_eigs(args) -> int:
    spec = parse_spec(_load(args.input))
    if spec.tail is not Tail.ALPHA:
        raise InputError("gap eigenvalues exist only for the Alpha tail")
    gap = gap_spectrum(spec, args.scan_res)
    lt = lieb_thirring_check(spec, gap)
    doc = {"command": "eigs", "tail": _tail_name(spec), "scan_resolution": args.scan_res,
           "gap": _gap_doc(gap), "interlacing_holds": gap.interlacing_holds,
           "lieb_thirring": {"lhs": lt.lhs, "rhs": lt.rhs, "holds": bool(lt.holds)}}
    _emit(args.output, _json(doc))
    return 0


def cmd_ch(args) -> int:
    prof = parse_profile(_load(args.input))
    lam = _lambda_grid(args)
    if np.any(np.abs(lam) <= CH_ALPHA):
        raise InputError("the lambda range must avoid [-1/2, 1/2]")
    res = ch_transform(prof)
    sp = ch_spectrum(prof, lam, step=args.scan_res, transform=res)
    norm = res.normalization
    doc = {"command": "ch",
           "normalization": {"c": norm.c, "eta": norm.eta, "alpha": norm.alpha},
           "projection_error": float(res.projection_error),
           "eig_neg": _floats(sp.eig_neg), "eig_pos": _floats(sp.eig_pos),
           "density_min": float(sp.density.min()), "density_positive": bool(np.all(sp.density > 0))}
    _emit(args.output, _json(doc))
    if args.table:
        _emit(args.table, _csv(("lambda", "density"), (sp.lam, sp.density)))
    return 0


def cmd_converge(args) -> int:
    base = parse_spec(_load(args.input))
    z = _parse_z(args.z) if args.z else np.array(DEFAULT_Z)
    seq = ApproximationSequence.build(base, _parse_stages(args.stages))
    dev = weyl_convergence(seq, z)
    stages = []
    for n, s, d in zip(seq.cutoffs, seq.stages, dev):
        fn = coefficient_functionals(s)
        stages.append({"n": n, "R": s.R, "deviation": float(d), "atoms": len(s.atoms),
                       "singular_mass": fn.singular_mass, "w_sq": fn.w_sq})
    doc = {"command": "converge", "tail": _tail_name(base),
           "z": [[float(v.real), float(v.imag)] for v in z], "stages": stages}
    _emit(args.output, _json(doc))
    return 0


# --------------------------------------------------------------------------
# entry point


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="indstring", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(name, help_text, grid=False, scan=False):
        s = sub.add_parser(name, help=help_text)
        s.add_argument("--input", required=True, help="JSON document, '-' for stdin")
        s.add_argument("--output", default="-", help="output path, '-' for stdout")
        if grid:
            s.add_argument("--lambda-min", type=float, required=True)
            s.add_argument("--lambda-max", type=float, required=True)
            s.add_argument("--lambda-step", type=float, required=True)
        if scan:
            s.add_argument("--scan-res", type=float, default=DEFAULT_SCAN_STEP,
                           help="sign-scan resolution on (-1, 1)")
        return s

    common("scatter", "a, b, unitarity defect and density on a lambda grid (CSV)", grid=True)
    t = common("trace", "trace identities, Lieb-Thirring and gap spectrum (JSON)", scan=True)
    t.add_argument("--tol", type=float, default=1e-6)
    t.add_argument("--debug-corrupt-kappa", action="store_true",
                   help="negative control: add a spurious zero of a")
    common("eigs", "gap eigenvalues and zeros of a (JSON)", scan=True)
    c = common("ch", "Camassa-Holm gap report (JSON) and density table (CSV)", grid=True,
               scan=True)
    c.add_argument("--table", help="write the density table as CSV to this path")
    v = common("converge", "Weyl-function convergence of truncation stages (JSON)")
    v.add_argument("--stages", default="2,4,8,16", help="comma-separated cutoffs")
    v.add_argument("--z", help="comma-separated z samples in the upper half-plane")
    return p


_COMMANDS = {"scatter": cmd_scatter, "trace": cmd_trace, "eigs": cmd_eigs, "ch": cmd_ch,
             "converge": cmd_converge}


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    if getattr(args, "tol", 1.0) <= 0 or getattr(args, "scan_res", 1.0) <= 0:
        print("indstring: error: --tol and --scan-res must be positive", file=sys.stderr)
        return 1
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = _warn_to_stderr
            return _COMMANDS[args.command](args)
    except InputError as exc:
        print(f"indstring: error: {exc}", file=sys.stderr)
        return 1
    except ResidualError as exc:
        print(f"indstring: residual: {exc}", file=sys.stderr)
        return 3
    except (QuadratureError, InterlacingError, PoleError, RuntimeError, FloatingPointError,
            ArithmeticError) as exc:
        print(f"indstring: numerical failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"indstring: error: {exc}", file=sys.stderr)
        return 1


def _warn_to_stderr(message, category, filename, lineno, file=None, line=None):
    print(f"indstring: warning: {message}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
