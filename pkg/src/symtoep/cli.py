"""Command-line front end.

Every subcommand writes one JSON document (a report, a matrix or a symbol) to
``--output`` or stdout and a one-line summary to stderr.  Exit status is 0
when every check passed, 1 when a check failed and 2 on usage, parse or
configuration errors.
"""

from __future__ import annotations

import argparse
import enum
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

import numpy as np

from .analysis import (CheckReport, FinitePair, certify_gamma_isometry,
                       certify_gamma_unitary, check_analyticity_equivalences,
                       check_asymptotic_toeplitz, check_brown_halmos,
                       check_dual_toeplitz_bh, check_fundamental_operator,
                       compactness_profile, make_report, recover_symbol)
from .lattice import full_window, interior
from .operators import (OperatorMatrix, build_dual_toeplitz, build_Fn,
                        build_hankel, build_laurent, build_toeplitz, build_X,
                        T_p)
from .spaces import (GammaPoint, classify_point, joint_eigen_residual,
                     szego_eval, szego_partial_sum)
from .symbols import (COBURN_SYMBOL, FourierSymbol, sup_norm_estimate,
                      symbol_from_json, symbol_to_json)

__all__ = ["RunConfig", "run", "main", "dumps"]

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

COMMANDS = (
    "build-toeplitz", "build-laurent", "build-hankel", "build-dual",
    "check-bh", "recover-symbol", "check-analytic", "certify-gamma",
    "compact-profile", "asymptotic-check", "check-dual-bh",
    "fundamental-check", "szego", "classify-point", "demo",
)
DEMOS = ("coburn", "example29", "remark36")
SZEGO_MODES = ("eval", "partial", "eigen")


class UsageError(Exception):
    """Bad configuration; maps to exit status 2."""


@dataclass
class RunConfig:
    command: str
    symbol_path: Optional[Path] = None
    D: int = 16
    margin: Optional[int] = None
    tolerance: float = 1e-10
    output_path: Optional[Path] = None
    grid: int = 512
    options: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.D < 1:
            raise UsageError("D must be >= 1")
        if not self.tolerance > 0:
            raise UsageError("tolerance must be positive")
        if self.margin is not None and self.margin < 0:
            raise UsageError("margin must be >= 0")
        if self.grid < 1:
            raise UsageError("grid must be >= 1")


# ---------------------------------------------------------------------------
# deterministic JSON

def _plain(obj):
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.complexfloating, complex)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.ndarray):
        return [_plain(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _encode(obj) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return format(obj, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, list):
        return "[" + ", ".join(_encode(x) for x in obj) + "]"
    return "{" + ", ".join(f"{json.dumps(k)}: {_encode(v)}" for k, v in obj.items()) + "}"


def dumps(obj) -> str:
    """JSON text with insertion-ordered keys and 17-significant-digit floats."""
    return _encode(_plain(obj))


# ---------------------------------------------------------------------------
# input helpers

def _load_json(path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _symbol(config: RunConfig, required: bool = True) -> Optional[FourierSymbol]:
    if config.symbol_path is None:
        if required:
            raise UsageError(f"{config.command} needs --symbol")
        return None
    try:
        return symbol_from_json(_load_json(config.symbol_path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad symbol file {config.symbol_path}: {exc}") from exc


def _matrix_doc(data) -> np.ndarray:
    # plain nested [[[re, im], ...], ...] or [[x, ...], ...]
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 3 and arr.shape[2] == 2:
        return arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim == 2:
        return arr.astype(complex)
    raise ValueError("matrix must be a nested list of numbers or [re, im] pairs")


def _operator(path) -> OperatorMatrix:
    try:
        return OperatorMatrix.from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad matrix file {path}: {exc}") from exc


def _raw_or_operator(path):
    data = _load_json(path)
    try:
        if isinstance(data, dict):
            return OperatorMatrix.from_json(data)
        return _matrix_doc(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad matrix file {path}: {exc}") from exc


def _margin(config: RunConfig, f: Optional[FourierSymbol]) -> int:
    if config.margin is not None:
        return config.margin
    if f is None:
        raise UsageError(f"{config.command} on a matrix needs --margin")
    return f.bandwidth + 1


def _point(values, name) -> GammaPoint:
    if values is None:
        raise UsageError(f"missing --{name}")
    s, p = values
    return GammaPoint(complex(s), complex(p))


# ---------------------------------------------------------------------------
# subcommands

def _build(config: RunConfig):
    f = _symbol(config)
    D = config.D
    builders = {
        "build-toeplitz": lambda: build_toeplitz(f, D),
        "build-laurent": lambda: build_laurent(f, full_window(D)),
        "build-hankel": lambda: build_hankel(f, D),
        "build-dual": lambda: build_dual_toeplitz(f, D),
    }
    op = builders[config.command]()
    doc = op.to_json()
    doc["symbol_sup_norm_estimate"] = sup_norm_estimate(f, config.grid)
    return doc, True


def _check_bh(config: RunConfig):
    f = _symbol(config, required=not config.options.get("matrix"))
    T = (_operator(config.options["matrix"]) if config.options.get("matrix")
         else build_toeplitz(f, config.D))
    return check_brown_halmos(T, _margin(config, f), config.tolerance), None


def _recover(config: RunConfig):
    T = (_operator(config.options["matrix"]) if config.options.get("matrix")
         else build_toeplitz(_symbol(config), config.D))
    beta = config.options.get("beta")
    if beta is None:
        raise UsageError("recover-symbol needs --beta")
    f = recover_symbol(T, beta)
    rebuilt = build_toeplitz(f, T.rows.a_max)
    safe = interior(T.rows, beta + 1)
    idx = T.rows.lookup(*safe.arrays)
    diff = (rebuilt.entries - T.entries)[np.ix_(idx, idx)]
    residual = float(np.max(np.abs(diff))) if diff.size else 0.0
    doc = symbol_to_json(f)
    doc["round_trip_residual"] = residual
    doc["window"] = safe.to_dict()
    return doc, residual <= config.tolerance


def _check_analytic(config: RunConfig):
    return check_analyticity_equivalences(_symbol(config), config.D,
                                          config.tolerance), None


def _certify_gamma(config: RunConfig):
    first, second = config.options.get("T"), config.options.get("V")
    if first is None or second is None:
        raise UsageError("certify-gamma needs --T and --V")
    A, B = _raw_or_operator(first), _raw_or_operator(second)
    windowed = isinstance(A, OperatorMatrix) and isinstance(B, OperatorMatrix)
    try:
        if windowed:
            pair = FinitePair.from_operators(A, B)
        else:
            to_array = lambda m: m.entries if isinstance(m, OperatorMatrix) else m
            pair = FinitePair(to_array(A), to_array(B))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if config.options.get("mode", "unitary") == "unitary":
        return certify_gamma_unitary(pair, config.tolerance), None
    margin = config.margin if windowed else None
    return certify_gamma_isometry(pair, config.tolerance, margin), None


def _compact_profile(config: RunConfig):
    T = (_operator(config.options["matrix"]) if config.options.get("matrix")
         else build_toeplitz(_symbol(config), config.D))
    profile = compactness_profile(T)
    doc = {"name": "compactness-profile", "window": T.rows.to_dict(),
           "profile": [{"n": n, "eta": value} for n, value in profile]}
    return doc, True


def _asymptotic(config: RunConfig):
    f = _symbol(config)
    if config.options.get("matrix"):
        T = _operator(config.options["matrix"])
    else:
        T = build_toeplitz(f, config.D)
        k = config.options.get("add_fn")
        if k:
            T = T + build_Fn(k, config.D)
    return check_asymptotic_toeplitz(T, f, tol=config.tolerance,
                                     margin=config.margin), None


def _check_dual(config: RunConfig):
    f = _symbol(config, required=not config.options.get("matrix"))
    T = (_operator(config.options["matrix"]) if config.options.get("matrix")
         else build_dual_toeplitz(f, config.D))
    return check_dual_toeplitz_bh(T, _margin(config, f), config.tolerance), None


def _fundamental(config: RunConfig):
    return check_fundamental_operator(config.D, min(config.tolerance, 1e-12)), None


def _szego(config: RunConfig):
    mode = config.options.get("mode")
    w1 = _point(config.options.get("w1"), "w1")
    if mode == "eval":
        w2 = _point(config.options.get("w2"), "w2")
        return {"name": "szego-eval", "value": szego_eval(w1, w2)}, True
    if mode == "partial":
        w2 = _point(config.options.get("w2"), "w2")
        partial = szego_partial_sum(w1, w2, config.D)
        exact = szego_eval(w1, w2)
        error = abs(partial - exact)
        return {"name": "szego-partial", "D": config.D, "partial_sum": partial,
                "closed_form": exact, "error": error}, error <= config.tolerance
    if mode == "eigen":
        res_s, res_p = joint_eigen_residual(w1, config.D)
        tol = max(config.tolerance, 1e-6)
        report = make_report("szego-eigenvector",
                             [("Ts* k - conj(s) k", res_s), ("Tp* k - conj(p) k", res_p)],
                             tol, None, {"D": config.D})
        return report, None
    raise UsageError(f"szego mode must be one of {SZEGO_MODES}")


def _classify(config: RunConfig):
    s, p = config.options.get("s"), config.options.get("p")
    if s is None or p is None:
        raise UsageError("classify-point needs --s and --p")
    point = GammaPoint(complex(s), complex(p))
    return {"s": point.s, "p": point.p, "class": classify_point(point)}, True


def _demo(config: RunConfig):
    name = config.options.get("name")
    D = config.D
    if name == "coburn":
        T = build_toeplitz(COBURN_SYMBOL, D)
        image = np.linalg.norm(T.entries[:, T.cols.position((1, 0))])
        co_image = np.linalg.norm(T.entries.conj().T[:, T.rows.position((1, 0))])
        details = [("|T e(1,0)|", image), ("|T* e(1,0)|", co_image),
                   ("T is the zero matrix", 0.0 if T.norm() > 0 else 1.0)]
        info = {"example": "Coburn alternative fails: neither T nor T* is injective",
                "symbol": "z1^2 conj(z2)^2 + conj(z1)^2 z2^2",
                "vector": "z1 - z2", "operator_norm": T.norm()}
        return make_report("demo-coburn", details, 0.0, T.rows, info), None
    if name == "example29":
        bh = check_brown_halmos(build_X(D), 2)
        first, second = (v for _, v in bh.details)
        details = [("second relation", second), ("|first relation - 1|", abs(first - 1))]
        info = {"example": "X satisfies the second Brown-Halmos relation only",
                "first_relation_residual": first}
        return make_report("demo-example29", details, 1e-12, interior(build_X(D).rows, 2),
                           info), None
    if name == "remark36":
        X = build_X(D)
        w = X.rows
        n = max(1, D // 4)
        Xn = X ** n
        Pn = T_p(D) ** n
        safe = interior(w, n + 1)
        idx = w.lookup(*safe.arrays)
        on = lambda m: float(np.max(np.abs(m[np.ix_(idx, idx)])))
        bh = check_brown_halmos(X, 2)
        asym = check_asymptotic_toeplitz(X, _toeplitz_candidate(X))
        details = [("Tp*^n X Tp^n - X", on((Pn.H @ X @ Pn - X).entries)),
                   ("X*^n X X^n - X", on((Xn.H @ X @ Xn - X).entries)),
                   ("X passes Brown-Halmos", 1.0 if bh.passed else 0.0),
                   ("X passes asymptotic check", 1.0 if asym.passed else 0.0)]
        info = {"example": "both compressions of X reproduce X, yet X is not Toeplitz",
                "n": n, "brown_halmos_residual": bh.residual,
                "asymptotic_residual": asym.residual}
        return make_report("demo-remark36", details, 1e-12, safe, info), None
    raise UsageError(f"demo must be one of {DEMOS}")


def _toeplitz_candidate(T: OperatorMatrix) -> FourierSymbol:
    # bandwidth-1 entry readout; X moves indices by one
    return recover_symbol(T, 1)


HANDLERS = {
    "build-toeplitz": _build, "build-laurent": _build,
    "build-hankel": _build, "build-dual": _build,
    "check-bh": _check_bh, "recover-symbol": _recover,
    "check-analytic": _check_analytic, "certify-gamma": _certify_gamma,
    "compact-profile": _compact_profile, "asymptotic-check": _asymptotic,
    "check-dual-bh": _check_dual, "fundamental-check": _fundamental,
    "szego": _szego, "classify-point": _classify, "demo": _demo,
}


def _emit(config: RunConfig, doc) -> None:
    text = dumps(doc) + "\n"
    if config.output_path is None:
        sys.stdout.write(text)
    else:
        Path(config.output_path).write_text(text, encoding="utf-8")


def run(config: RunConfig) -> int:
    """Execute one subcommand; returns the process exit status."""
    try:
        result, passed = HANDLERS[config.command](config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # precondition violations (window too small, point outside, ...)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(result, CheckReport):
        passed = result.passed
        doc = result.to_json()
        print(result.summary(), file=sys.stderr)
    else:
        doc = result
        print(f"{config.command}: {'ok' if passed else 'FAIL'}", file=sys.stderr)
    try:
        _emit(config, doc)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK if passed else EXIT_FAILED


# ---------------------------------------------------------------------------
# argument parsing

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--symbol", type=Path, help="symbol JSON file")
    common.add_argument("--D", type=int, default=16, help="truncation degree")
    common.add_argument("--margin", type=int, help="safe-window margin (default beta+1)")
    common.add_argument("--tolerance", "--tol", type=float, default=1e-10)
    common.add_argument("--output", "-o", type=Path, help="output file (default stdout)")
    common.add_argument("--grid", type=int, default=512, help="sup-norm sampling grid")

    parser = argparse.ArgumentParser(
        prog="symtoep",
        description="Toeplitz operators on the symmetrized bidisc: builders and certifiers.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("build-toeplitz", "build-laurent", "build-hankel", "build-dual",
                 "check-analytic", "fundamental-check"):
        sub.add_parser(name, parents=[common])
    for name in ("check-bh", "check-dual-bh", "compact-profile"):
        sub.add_parser(name, parents=[common]).add_argument(
            "--matrix", type=Path, help="operator-matrix JSON instead of a symbol")
    rec = sub.add_parser("recover-symbol", parents=[common])
    rec.add_argument("--matrix", type=Path)
    rec.add_argument("--beta", type=int)
    gam = sub.add_parser("certify-gamma", parents=[common])
    gam.add_argument("--T", dest="T", type=Path, help="first matrix (R or T)")
    gam.add_argument("--V", dest="V", type=Path, help="second matrix (U or V)")
    gam.add_argument("--mode", choices=("unitary", "isometry"), default="unitary")
    asy = sub.add_parser("asymptotic-check", parents=[common])
    asy.add_argument("--matrix", type=Path)
    asy.add_argument("--add-fn", type=int, help="add the finite-rank F_k to T_f")
    sz = sub.add_parser("szego", parents=[common])
    sz.add_argument("mode", choices=SZEGO_MODES)
    sz.add_argument("--w1", nargs=2, type=complex, metavar=("S", "P"))
    sz.add_argument("--w2", nargs=2, type=complex, metavar=("S", "P"))
    cp = sub.add_parser("classify-point", parents=[common])
    cp.add_argument("--s", type=complex, required=True)
    cp.add_argument("--p", type=complex, required=True)
    demo = sub.add_parser("demo", parents=[common])
    demo.add_argument("name", choices=DEMOS)
    return parser


_BASE_FIELDS = {"command", "symbol", "D", "margin", "tolerance", "output", "grid"}


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    args = vars(_parser().parse_args(argv))
    options = {k: v for k, v in args.items() if k not in _BASE_FIELDS}
    return RunConfig(command=args["command"], symbol_path=args["symbol"],
                     D=args["D"], margin=args["margin"],
                     tolerance=args["tolerance"], output_path=args["output"],
                     grid=args["grid"], options=options)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_config(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
