"""Command-line entry point: ``hrnr omega|code|verify|simulate|oracle``."""
import argparse
import json
import os
import sys

from . import geometry as geo
from . import serialize as ser
from .codes import construct_code, projection_defects, verify_compression
from .errors import (
    EmptyOmega,
    HRNRError,
    KLViolated,
    NotInOmega,
    NotUnitary,
    TooLarge,
    Unsupported,
)
from .omega import classify, omega_k
from .oracle import conjecture_sweep, lambda_k_search
from .qec import BinaryUnitaryChannel, build_recovery, identity_channel, kl_verify, simulate_roundtrip
from .spectrum import from_angles
from .svg import render_omega

EXIT_INVALID = 2
EXIT_FAILED = 3
EXIT_UNSUPPORTED = 4
EXIT_KL = 5
EXIT_GUARD = 6
VERIFY_TOL = 1e-8


class CLIError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def geometric_tolerance():
    raw = os.environ.get("HRNR_TOL")
    if raw is None:
        return geo.EPS_GEOM
    try:
        return float(raw)
    except ValueError:
        raise CLIError(f"HRNR_TOL={raw!r} is not a number", EXIT_INVALID)


def _parse_lambda(text):
    if text is None:
        return None
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise CLIError(f"--lambda expects RE,IM, got {text!r}", EXIT_INVALID)
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise CLIError(f"--lambda expects RE,IM, got {text!r}", EXIT_INVALID)
    return complex(parts[0], parts[1])


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CLIError(f"cannot read {path}: {exc}", EXIT_INVALID)


def load_spectrum(args):
    try:
        if args.angles is not None:
            angles = [float(x) for x in args.angles.split(",") if x.strip()]
            return from_angles(angles, args.unit)
        if args.input is not None:
            return ser.spectrum_from_json(_load_json(args.input))
    except (ValueError, KeyError, NotUnitary) as exc:
        raise CLIError(f"invalid spectrum input: {exc}", EXIT_INVALID)
    raise CLIError("give a spectrum with --input FILE or --angles LIST", EXIT_INVALID)


def load_unitary(args):
    """The unitary matrix itself when given, else the diagonal one from angles."""
    if args.input is not None:
        data = _load_json(args.input)
        if "matrix" in data:
            try:
                return ser.matrix_from_json(data["matrix"])
            except (ValueError, KeyError) as exc:
                raise CLIError(f"invalid matrix: {exc}", EXIT_INVALID)
    return load_spectrum(args).matrix()


def _require_k(args):
    if args.k is None or args.k < 1:
        raise CLIError("--k must be a positive integer", EXIT_INVALID)
    return args.k


def _load_code(args):
    if not args.code:
        raise CLIError("--code FILE is required", EXIT_INVALID)
    try:
        return ser.code_from_json(_load_json(args.code))
    except (KeyError, ValueError) as exc:
        raise CLIError(f"invalid code file: {exc}", EXIT_INVALID)


def cmd_omega(args):
    spec = load_spectrum(args)
    k = _require_k(args)
    if k > spec.N:
        raise CLIError(f"k={k} exceeds N={spec.N}", EXIT_INVALID)
    eps = geometric_tolerance()
    res = omega_k(spec, k, eps)
    out = {
        "N": spec.N,
        "k": k,
        "classification": res.classification.value,
        "apriori": classify(spec.N, k).value,
        "polygon": ser.polygon_to_json(res.polygon),
        "certificates": res.certificates,
        "spectrum": ser.spectrum_to_json(spec),
    }
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_omega(spec, res.polygon, k, args.show_chords))
    return out


def _build_code(args, spec):
    k = _require_k(args)
    try:
        return construct_code(spec, k, _parse_lambda(args.lam), geometric_tolerance())
    except (Unsupported, EmptyOmega) as exc:
        msg = str(exc)
        if "(N, k)" not in msg:
            msg = f"(N, k) = ({spec.N}, {k}): {msg}"
        raise CLIError(msg, EXIT_UNSUPPORTED)
    except NotInOmega as exc:
        raise CLIError(str(exc), EXIT_INVALID)


def cmd_code(args):
    spec = load_spectrum(args)
    code = _build_code(args, spec)
    out = ser.code_to_json(code)
    out["N"] = spec.N
    out["spectrum"] = ser.spectrum_to_json(spec)
    return out


def cmd_verify(args):
    code = _load_code(args)
    U = load_unitary(args)
    try:
        residual = verify_compression(U, code)
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_INVALID)
    idem, herm, tr = projection_defects(code.projection, code.k)
    return {
        "residual": residual,
        "idempotence_defect": idem,
        "hermiticity_defect": herm,
        "trace_defect": tr,
        "tolerance": VERIFY_TOL,
        "pass": bool(max(residual, idem, herm, tr) <= VERIFY_TOL),
    }


def cmd_simulate(args):
    if args.p is None:
        raise CLIError("--p is required", EXIT_INVALID)
    if args.code:
        code = _load_code(args)
        U = load_unitary(args)
    else:
        spec = load_spectrum(args)
        code = _build_code(args, spec)
        U = spec.matrix()
    try:
        ch = BinaryUnitaryChannel(args.p, U)
    except ValueError as exc:
        raise CLIError(str(exc), EXIT_INVALID)
    wit = kl_verify(ch, code.projection)
    try:
        rec = build_recovery(ch, code.projection)
    except KLViolated as exc:
        raise CLIError(str(exc), EXIT_KL)
    stats = simulate_roundtrip(ch, rec, code.projection, args.trials, args.seed)
    bare = simulate_roundtrip(ch, identity_channel(U.shape[0]), code.projection, args.trials, args.seed)
    return {
        "p": args.p,
        "k": code.k,
        "lambda": ser.complex_to_json(code.lam),
        "kl_residual": wit.residual,
        "lambda_matrix": ser.matrix_to_json(wit.lambda_matrix),
        "recovery_operators": len(rec.operators),
        "recovery_trace_defect": rec.trace_defect(),
        "trials": stats.trials,
        "seed": args.seed,
        "min_fidelity": stats.min_fidelity,
        "mean_fidelity": stats.mean_fidelity,
        "unrecovered_min_fidelity": bare.min_fidelity,
        "unrecovered_mean_fidelity": bare.mean_fidelity,
    }


def cmd_oracle(args):
    if args.angles is not None or args.input is not None:
        spec = load_spectrum(args)
        k = _require_k(args)
        lam = _parse_lambda(args.lam)
        if lam is None:
            raise CLIError("--lambda is required for a single search", EXIT_INVALID)
        v = lambda_k_search(spec, k, lam, restarts=args.restarts, seed=args.seed)
        out = {"verdict": v.verdict, "best_residual": v.best_residual, "restarts_used": v.restarts_used}
        if v.witness is not None:
            out["witness"] = ser.code_to_json(v.witness)
        return out
    if args.n is None:
        raise CLIError("--n N is required for a sweep", EXIT_INVALID)
    k = _require_k(args)
    try:
        rep = conjecture_sweep(args.n, k, args.spectra, args.grid, args.seed, args.restarts)
    except TooLarge as exc:
        raise CLIError(str(exc), EXIT_GUARD)
    return rep.as_dict()


COMMANDS = {
    "omega": cmd_omega,
    "code": cmd_code,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "oracle": cmd_oracle,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="hrnr", description="Higher-rank numerical ranges of unitaries")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="JSON file with 'angles' or 'matrix'")
    common.add_argument("--angles", help="comma-separated eigenphases")
    common.add_argument("--unit", default="degrees", choices=["degrees", "radians"],
                        help="unit of --angles (default: degrees)")
    common.add_argument("--k", type=int)
    common.add_argument("--lambda", dest="lam", metavar="RE,IM")
    common.add_argument("--p", type=float)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--svg", metavar="FILE")
    common.add_argument("--json", metavar="FILE")
    common.add_argument("--show-chords", action="store_true")
    common.add_argument("--code", metavar="FILE", help="code JSON written by 'hrnr code'")
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--n", type=int, help="dimension for oracle sweeps")
    common.add_argument("--spectra", type=int, default=20)
    common.add_argument("--grid", type=int, default=10)
    common.add_argument("--restarts", type=int, default=64)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        out = COMMANDS[args.command](args)
    except CLIError as exc:
        print(f"hrnr: error: {exc}", file=sys.stderr)
        return exc.code
    except HRNRError as exc:
        print(f"hrnr: computation failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    text = ser.dumps(out)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.command == "verify" and not out["pass"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
