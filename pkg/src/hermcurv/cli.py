"""Command-line interface over the library: tables, file transforms, reports.

Exit codes: 0 success, 1 verification failure, 2 not realizable, 64 usage
or bad input.  Output ordering and number formatting are fixed so identical
inputs produce identical bytes.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .corpus import (
    CASE_IDS,
    CorpusError,
    check_case,
    example,
    minimum_complex_dim,
    run_corpus,
)
from .curvature import (
    CurvatureError,
    CurvatureTensor,
    gray_defect,
    max_abs,
)
from .linalg import LinalgError
from .model import ModelError, standard_model
from .realize import (
    MetricJet,
    NotRealizable,
    RealizeError,
    curvature_at_origin,
    realize,
)
from .tensorio import (
    TensorFile,
    TensorFileError,
    read_tensor_file,
    write_tensor_file,
)
from .tv import COMPONENT_IDS, TVError, decompose, dims_table
from .verify import algebra_dim_formula, expected_dims, verify_all

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_NOT_REALIZABLE = 2
EXIT_USAGE = 64

_INPUT_ERRORS = (
    TensorFileError,
    CurvatureError,
    RealizeError,
    ModelError,
    CorpusError,
    TVError,
    LinalgError,
    OSError,
)


class _Parser(argparse.ArgumentParser):
    """argparse with the usage exit code fixed at 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="hermcurv",
        description=(
            "Decompose algebraic curvature tensors on a Hermitian model, "
            "test the Gray identity, and realize tensors by metric jets."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dims", help="print the component dimension table")
    p.add_argument("--n", type=int, required=True, help="complex dimension (>= 2)")

    p = sub.add_parser("decompose", help="split a curvature tensor file into parts")
    p.add_argument("input", help="tensor file holding 'curvature'")
    p.add_argument("-o", "--output", help="write parts and norms to this file")
    p.add_argument("--scalar", choices=("rational", "float"),
                   help="override the computation mode")

    p = sub.add_parser("gray-check", help="test the Gray identity on a tensor file")
    p.add_argument("input", help="tensor file holding 'curvature'")
    p.add_argument("--scalar", choices=("rational", "float"),
                   help="override the computation mode")
    p.add_argument("--tolerance", type=float, default=1e-10,
                   help="float-mode acceptance threshold (default 1e-10)")

    p = sub.add_parser("realize", help="construct a metric jet whose curvature is the input")
    p.add_argument("input", help="tensor file holding 'curvature'")
    p.add_argument("-o", "--output", help="write theta, jet, and curvature to this file")
    p.add_argument("--scalar", choices=("rational", "float"),
                   help="override the computation mode")

    p = sub.add_parser("curvature", help="curvature at the origin of a metric jet file")
    p.add_argument("input", help="tensor file holding 'h' and 'q'")
    p.add_argument("-o", "--output", help="write the curvature tensor to this file")
    p.add_argument("--scalar", choices=("rational", "float"),
                   help="override the computation mode")

    p = sub.add_parser("examples", help="run the worked-example corpus")
    p.add_argument("--case", choices=CASE_IDS, help="run a single case")
    p.add_argument("--n", type=int, help="complex dimension (default: smallest valid)")
    p.add_argument("-o", "--output",
                   help="write the case jet and curvature to this file (needs --case)")

    p = sub.add_parser("verify-all", help="run the full verification suite at one size")
    p.add_argument("--n", type=int, required=True, help="complex dimension (>= 2)")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    p.add_argument("--tolerance", type=float, default=1e-8,
                   help="float-mode projection tolerance (default 1e-8)")

    return parser


# ---------------------------------------------------------------------------
# shared input plumbing

def _to_float(arr: np.ndarray) -> np.ndarray:
    return np.asarray(
        [float(x) for x in arr.flat], dtype=float).reshape(arr.shape)


def _apply_scalar_override(tf: TensorFile, scalar) -> TensorFile:
    if scalar is None or scalar == tf.scalar:
        return tf
    if scalar == "rational":
        raise TensorFileError(
            "cannot promote float data to rational; rebuild the file exactly")
    return TensorFile(
        n=tf.n, scalar="float",
        tensors={k: _to_float(v) for k, v in tf.tensors.items()})


def _load(path, scalar) -> TensorFile:
    return _apply_scalar_override(read_tensor_file(path), scalar)


def _model_for(tf: TensorFile):
    model = standard_model(tf.n)
    for name, arr in tf.tensors.items():
        for s in arr.shape:
            if s != model.dim:
                raise TensorFileError(
                    f"tensor {name!r} has shape {arr.shape}, expected axes of"
                    f" length {model.dim} for n={tf.n}")
    return model


def _curvature_input(tf: TensorFile) -> CurvatureTensor:
    model = _model_for(tf)
    arr = tf.tensor("curvature")
    if arr.ndim != 4:
        raise TensorFileError(f"'curvature' must have rank 4, got {arr.ndim}")
    return CurvatureTensor.from_array(model, arr)


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


# ---------------------------------------------------------------------------
# subcommands

def _cmd_dims(args) -> int:
    model = standard_model(args.n)
    table = dims_table(model)
    want = expected_dims(args.n)
    print(f"component dimensions at n={args.n} (real dimension {2 * args.n})")
    ok = True
    for key, dim in table.rows:
        mark = ""
        if dim != want[key]:
            ok = False
            mark = f"  MISMATCH (formula {want[key]})"
        print(f"{key} {dim}{mark}")
    print(f"total {table.total}")
    print(f"curvature space {table.algebra_dim}")
    if table.total != table.algebra_dim or table.algebra_dim != algebra_dim_formula(args.n):
        ok = False
    print(f"checksum {'OK' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_VERIFY


def _cmd_decompose(args) -> int:
    tf = _load(args.input, args.scalar)
    a = _curvature_input(tf)
    dec = decompose(a)
    tensors = {}
    print(f"component sq norms at n={a.model.n} ({tf.scalar} mode)")
    for key in COMPONENT_IDS:
        print(f"{key} {_fmt(dec.norms[key])}")
        tensors[key] = dec.parts[key].entries
        tensors[f"norm_{key}"] = np.full((), dec.norms[key], dtype=object)
    if args.output:
        out = TensorFile.from_arrays(a.model.n, tf.scalar, tensors)
        write_tensor_file(args.output, out)
        print(f"wrote {args.output}")
    return EXIT_OK


def _cmd_gray_check(args) -> int:
    tf = _load(args.input, args.scalar)
    a = _curvature_input(tf)
    defect = max_abs(gray_defect(a))
    if a.is_exact:
        passed = defect == 0
    else:
        passed = defect <= args.tolerance
    print(f"Gray: {'PASS' if passed else 'FAIL'}, defect norm {_fmt(defect)}")
    return EXIT_OK if passed else EXIT_VERIFY


def _cmd_realize(args) -> int:
    tf = _load(args.input, args.scalar)
    a = _curvature_input(tf)
    try:
        theta, jet, report = realize(a)
    except NotRealizable as exc:
        print(f"not realizable: {exc}", file=sys.stderr)
        if exc.w7_sq_norm is not None:
            print(f"W7 part sq norm: {_fmt(exc.w7_sq_norm)}", file=sys.stderr)
        return EXIT_NOT_REALIZABLE
    print(f"realized at n={a.model.n} ({tf.scalar} mode)")
    print(f"round trip residual {_fmt(report.round_trip_residual)}")
    print(f"gray defect sq norm {_fmt(report.gray_defect_sq_norm)}")
    print(f"d(fundamental form) max {_fmt(report.domega_max)}")
    print(f"nonsingular radius {_fmt(report.nonsingular_radius)}")
    for key in COMPONENT_IDS:
        print(f"norm {key} {_fmt(report.component_sq_norms[key])}")
    if args.output:
        out = TensorFile.from_arrays(a.model.n, tf.scalar, {
            "theta": theta.entries,
            "h": jet.h,
            "q": jet.q,
            "curvature": a.entries,
        })
        write_tensor_file(args.output, out)
        print(f"wrote {args.output}")
    return EXIT_OK


def _cmd_curvature(args) -> int:
    tf = _load(args.input, args.scalar)
    model = _model_for(tf)
    jet = MetricJet.from_arrays(model, tf.tensor("h"), tf.tensor("q"))
    a = curvature_at_origin(jet)
    sq = sum(x * x for x in a.entries.flat)
    print(f"curvature at origin computed at n={model.n} ({tf.scalar} mode)")
    print(f"sq norm {_fmt(sq)}")
    if args.output:
        out = TensorFile.from_arrays(model.n, tf.scalar, {"curvature": a.entries})
        write_tensor_file(args.output, out)
        print(f"wrote {args.output}")
    return EXIT_OK


def _case_lines(result) -> list:
    par = ", ".join(f"{k}={v}" for k, v in sorted(result.case.parameters.items()))
    head = f"case {result.case.id}" + (f" ({par})" if par else "")
    lines = [f"{head} at n={result.case.model.n}"]
    for chk in result.checks:
        status = "PASS" if chk.passed else "FAIL"
        line = f"  [{status}] {chk.label}"
        if chk.detail:
            line += f": {chk.detail}"
        lines.append(line)
    return lines


def _cmd_examples(args) -> int:
    if args.output and not args.case:
        raise CorpusError("-o needs --case: one case per file")
    if args.case:
        n = args.n if args.n is not None else minimum_complex_dim(args.case)
        model = standard_model(n)
        case = example(model, args.case)
        result = check_case(case)
        for line in _case_lines(result):
            print(line)
        if args.output:
            out = TensorFile.from_arrays(n, "rational", {
                "h": case.jet.h,
                "q": case.jet.q,
                "curvature": case.curvature().entries,
            })
            write_tensor_file(args.output, out)
            print(f"wrote {args.output}")
        return EXIT_OK if result.passed else EXIT_VERIFY
    n = args.n if args.n is not None else 2
    report = run_corpus(standard_model(n))
    for line in report.summary_lines():
        print(line)
    print(f"corpus {'PASS' if report.passed else 'FAIL'}")
    return EXIT_OK if report.passed else EXIT_VERIFY


def _cmd_verify_all(args) -> int:
    report = verify_all(args.n, seed=args.seed, tolerance=args.tolerance)
    print(f"verification at n={args.n}")
    for line in report.lines():
        print(line)
    print(f"overall {'PASS' if report.passed else 'FAIL'}")
    return EXIT_OK if report.passed else EXIT_VERIFY


_COMMANDS = {
    "dims": _cmd_dims,
    "decompose": _cmd_decompose,
    "gray-check": _cmd_gray_check,
    "realize": _cmd_realize,
    "curvature": _cmd_curvature,
    "examples": _cmd_examples,
    "verify-all": _cmd_verify_all,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _INPUT_ERRORS as exc:
        print(f"hermcurv {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
