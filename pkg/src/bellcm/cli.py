"""Command-line front end.

Exit codes: 0 success, 1 domain failure (not bona fide, invalid efficiency,
degenerate measurement, oracle mismatch), 2 usage or parse failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from . import gaussian, oracle
from .detection import DetectionKind, DetectionSpec
from .gaussian import CovarianceMatrix
from .matcore import Quadrature

FORMAT = "bellcm/covariance-matrix"
ORDERING = "q1,p1,...,qn,pn"
CONVENTION = "vacuum=I"
TRACE_RTOL = 1e-10

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class DocumentError(ValueError):
    pass


class UsageError(ValueError):
    pass


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _matrix_json(m: np.ndarray, indent: str = "    ") -> str:
    rows = [indent + "[" + ", ".join(_fmt(x) for x in row) + "]" for row in m]
    return "[\n" + ",\n".join(rows) + "\n  ]"


def dumps_cm(m: np.ndarray, metadata: dict | None = None) -> str:
    """Serialize a CM as JSON with 17-significant-digit entries."""
    m = np.asarray(m, dtype=float)
    header = {
        "format": FORMAT,
        "ordering": ORDERING,
        "convention": CONVENTION,
        "n_modes": m.shape[0] // 2,
        "metadata": {str(k): str(v) for k, v in (metadata or {}).items()},
    }
    head = json.dumps(header, indent=2)[:-2]  # reopen the object to append the matrix
    return head + ',\n  "matrix": ' + _matrix_json(m) + "\n}\n"


def loads_cm(text: str) -> tuple[np.ndarray, dict]:
    """Parse a CM document; returns the matrix and its metadata."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "matrix" not in doc or "n_modes" not in doc:
        raise DocumentError("document needs 'n_modes' and 'matrix' keys")
    if doc.get("ordering", ORDERING) != ORDERING:
        raise DocumentError(f"unsupported quadrature ordering {doc['ordering']!r}")
    n = doc["n_modes"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DocumentError(f"n_modes must be a positive integer, got {n!r}")
    try:
        m = np.array(doc["matrix"], dtype=float)
    except (TypeError, ValueError):
        raise DocumentError("matrix must be a nested array of numbers") from None
    if m.shape != (2 * n, 2 * n):
        raise DocumentError(f"matrix shape {m.shape} does not match n_modes={n}")
    if not np.all(np.isfinite(m)):
        raise DocumentError("matrix has non-finite entries")
    meta = doc.get("metadata") or {}
    if not isinstance(meta, dict):
        raise DocumentError("metadata must be a string map")
    return m, meta


def read_cm(path: str) -> tuple[np.ndarray, dict]:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path) as fh:
                text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    return loads_cm(text)


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def write_cm(path: str, m: np.ndarray, metadata: dict | None = None) -> None:
    _write(path, dumps_cm(m, metadata))


def cmd_validate(args) -> int:
    m, _ = read_cm(args.input)
    report = gaussian.validate(m)
    print(report)
    return EXIT_OK if report.passed else EXIT_DOMAIN


def _spec_from_args(args) -> DetectionSpec:
    kind = DetectionKind(args.kind)
    if args.transmissivity is not None and kind is not DetectionKind.BELL_LIKE:
        raise UsageError("--transmissivity applies only to --kind bell")
    if args.eta_prime is not None and kind in (DetectionKind.HOMODYNE_Q, DetectionKind.HOMODYNE_P):
        raise UsageError("--eta-prime does not apply to homodyne detection")
    T = None
    if kind is DetectionKind.BELL_LIKE:
        T = 0.5 if args.transmissivity is None else args.transmissivity
        if not 0.0 <= T <= 1.0:
            raise UsageError(f"--transmissivity must lie in [0, 1], got {T}")
    eta_prime = 1.0 if args.eta_prime is None else args.eta_prime
    return DetectionSpec(kind, T, args.eta, eta_prime)


def run_oracle(spec: DetectionSpec, cm: CovarianceMatrix):
    k = spec.kind
    if k is DetectionKind.HOMODYNE_Q:
        return oracle.homodyne_stepwise(cm, Quadrature.Q, spec.eta)
    if k is DetectionKind.HOMODYNE_P:
        return oracle.homodyne_stepwise(cm, Quadrature.P, spec.eta)
    if k is DetectionKind.HETERODYNE:
        return oracle.heterodyne_stepwise(cm, spec.eta, spec.eta_prime)
    T = 0.5 if k is DetectionKind.STANDARD_BELL else spec.T
    return oracle.bell_like_stepwise(cm, T, spec.eta, spec.eta_prime)


def oracle_mismatch(closed: np.ndarray, reference: np.ndarray) -> float:
    """Largest entry deviation, relative to the largest reference entry."""
    scale = float(np.max(np.abs(reference)))
    return float(np.max(np.abs(closed - reference))) / scale


def cmd_detect(args) -> int:
    spec = _spec_from_args(args)
    m, meta = read_cm(args.input)
    cm = CovarianceMatrix(m, check=not args.no_check)
    needed = spec.kind.measured_modes + 1
    if cm.n_modes < needed:
        raise UsageError(f"--kind {spec.kind.value} needs at least {needed} modes, input has {cm.n_modes}")
    out = spec.apply(cm, check=False)
    if args.trace:
        ref, trace = run_oracle(spec, cm)
        dev = oracle_mismatch(out.matrix, ref.matrix)
        doc = trace.to_dict()
        doc.update(kind=spec.kind.value, relative_deviation=dev, rtol=TRACE_RTOL)
        _write(args.trace, json.dumps(doc, indent=1) + "\n")
        if not dev <= TRACE_RTOL:
            print(f"error: closed form disagrees with stepwise oracle (relative deviation {dev:.3e})", file=sys.stderr)
            return EXIT_DOMAIN
    out_meta = dict(meta)
    out_meta.update(detection=spec.kind.value, eta=_fmt(spec.eta))
    if spec.kind not in (DetectionKind.HOMODYNE_Q, DetectionKind.HOMODYNE_P):
        out_meta["eta_prime"] = _fmt(spec.eta_prime)
    if spec.T is not None:
        out_meta["transmissivity"] = _fmt(spec.T)
    write_cm(args.output, out.matrix, out_meta)
    return EXIT_OK


def cmd_gen(args) -> int:
    p = args.params
    try:
        if args.kind == "vacuum":
            (n,) = p
            cm = gaussian.vacuum_cm(int(n))
            meta = {"state": "vacuum"}
        elif args.kind == "epr":
            (mu,) = p
            cm = gaussian.epr_cm(float(mu))
            meta = {"state": "epr", "mu": mu}
        else:
            n, seed = p
            cm = gaussian.random_cm(int(n), int(seed))
            meta = {"state": "random", "seed": seed}
    except ValueError as exc:
        msg = str(exc) if "unpack" not in str(exc) else f"wrong number of parameters for {args.kind}"
        raise UsageError(msg) from None
    write_cm(args.output, cm.matrix, meta)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellcm",
        description="Covariance matrices of Gaussian states under homodyne, Bell-like and heterodyne detection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the uncertainty principle V + i Omega >= 0")
    p.add_argument("input", help="CM document, or - for stdin")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("detect", help="conditional CM after detecting the last mode(s)")
    p.add_argument("input", help="CM document, or - for stdin")
    p.add_argument("--kind", required=True, choices=[k.value for k in DetectionKind])
    p.add_argument("--transmissivity", "-T", type=float, default=None, help="beam-splitter transmissivity (bell only, default 0.5)")
    p.add_argument("--eta", type=float, default=1.0, help="efficiency of the q detector (or the single homodyne detector)")
    p.add_argument("--eta-prime", type=float, default=None, help="efficiency of the p detector")
    p.add_argument("--trace", metavar="PATH", default=None, help="write the stepwise oracle trace and fail on disagreement")
    p.add_argument("--no-check", action="store_true", help="skip the bona fide check on the input")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("gen", help="generate a CM document")
    p.add_argument("kind", choices=["vacuum", "epr", "random"])
    p.add_argument("params", nargs="+", help="vacuum N | epr MU | random N SEED")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (DocumentError, UsageError, gaussian.MalformedCMError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # not bona fide, invalid efficiency, degenerate measured block
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
