"""Command-line front end: ``cayley-wrap <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 contract violation (bad input,
coverage), 3 numeric error (division by zero, Ln branch cut), 4 a ``verify``
or ``forms check`` run that completed but failed its tolerance.

All floats are printed with ``repr`` (shortest round-trip form), so output is
byte-identical for identical inputs, seed and configuration.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np
import yaml

from . import bar as barmod
from .algebra import (
    CdNumber,
    cd_exp,
    cd_inverse,
    cd_ln,
    cd_mul,
    format_cd,
    k_defect,
    p_defect,
    parse_cd,
    re_im_split,
    smash,
)
from .cochain import cohomology_dims, coboundary, parse_complex
from .config import Config, config_from_env
from .connection import (
    curvature_estimate,
    curvature_extrapolated,
    curvature_form,
    defect_forms,
    holonomy,
    parse_bundle,
    parse_loop,
)
from .errors import ContractViolation, CoverageError, NumericError
from .simplicial_forms import (
    canonical_A_family,
    canonical_B_family,
    check_compatibility,
    perturbed_family,
)
from .suites import SUITES, run_suite
from .twisted import component_decompose, format_zcr, parse_zcr, zcr_add

EXIT_OK, EXIT_USAGE, EXIT_CONTRACT, EXIT_NUMERIC, EXIT_FAILED = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")

    def exit(self, status=0, message=None):
        if status:
            raise UsageError(message or "")
        raise _HelpShown(message)


class _HelpShown(Exception):
    pass


# ---------------------------------------------------------------------------
# subcommand handlers; each returns (exit code, lines)


ALGEBRA_OPS = {
    "mul": 2, "add": 2, "sub": 2, "smash": 2, "k-defect": 2, "p-defect": 2,
    "conj": 1, "inverse": 1, "norm": 1, "exp": 1, "ln": 1, "re-im": 1, "decompose": 1,
    "zcr-add": 2,
}


def _algebra(args, cfg: Config):
    want = ALGEBRA_OPS[args.op]
    if len(args.operands) != want:
        raise UsageError(f"algebra {args.op} takes {want} operand(s)")
    if args.op == "zcr-add":
        # literals carry no sample set; both are read over the union of their directions
        a, b = (parse_zcr(t) for t in args.operands)
        union = a.sample_set | b.sample_set
        a, b = (parse_zcr(t, union) for t in args.operands)
        return EXIT_OK, [format_zcr(zcr_add(a, b))]
    xs = [parse_cd(t) for t in args.operands]
    op = args.op
    if op == "mul":
        return EXIT_OK, [format_cd(cd_mul(*xs))]
    if op == "add":
        return EXIT_OK, [format_cd(xs[0] + xs[1])]
    if op == "sub":
        return EXIT_OK, [format_cd(xs[0] - xs[1])]
    if op == "smash":
        return EXIT_OK, [format_cd(smash(*xs))]
    if op == "k-defect":
        return EXIT_OK, [format_cd(k_defect(*xs, cfg))]
    if op == "p-defect":
        return EXIT_OK, [format_cd(p_defect(*xs, cfg))]
    x = xs[0]
    if op == "conj":
        return EXIT_OK, [format_cd(x.conj())]
    if op == "inverse":
        return EXIT_OK, [format_cd(cd_inverse(x, cfg))]
    if op == "norm":
        return EXIT_OK, [repr(x.norm())]
    if op == "exp":
        return EXIT_OK, [format_cd(cd_exp(x, cfg))]
    if op == "ln":
        return EXIT_OK, [format_cd(cd_ln(x, cfg, strict=args.strict))]
    if op == "re-im":
        re, im = re_im_split(x)
        return EXIT_OK, [repr(re), format_cd(im)]
    if op == "decompose":
        return EXIT_OK, [format_cd(b) for b in component_decompose(x)]
    raise AssertionError(op)


BAR_OPS = {"normalize": 1, "mul": 2, "add": 2, "inverse": 1, "conj": 1, "project": 1,
           "total": 1, "face": 2, "degeneracy": 2}


def _bar(args, cfg: Config):
    want = BAR_OPS[args.op]
    if len(args.operands) != want:
        raise UsageError(f"bar {args.op} takes {want} operand(s)")
    op, ops = args.op, args.operands
    if op in ("face", "degeneracy"):
        try:
            j = int(ops[0])
        except ValueError:
            raise UsageError(f"bar {op}: index must be an integer, got {ops[0]!r}") from None
        w = barmod.parse_word(ops[1], cfg)
        out = barmod.face(j, w, cfg) if op == "face" else barmod.degeneracy(j, w)
        return EXIT_OK, [barmod.format_word(barmod.normalize(out, cfg))]
    words = [barmod.parse_word(t, cfg) for t in ops]
    if op == "normalize":
        res = barmod.normalize(words[0], cfg)
    elif op == "mul":
        res = barmod.mul(*words, cfg, tie_break=args.tie_break)
    elif op == "add":
        res = barmod.add(*words, cfg, tie_break=args.tie_break)
    elif op == "inverse":
        res = barmod.inverse(words[0], cfg)
    elif op == "conj":
        res = barmod.bar_conj(words[0], cfg)
    elif op == "project":
        res = barmod.project_a_to_b(words[0], cfg)
    else:  # total
        return EXIT_OK, [format_cd(barmod.total_product(words[0]).to_cd())]
    return EXIT_OK, [barmod.format_word(res)]


def _forms(args, cfg: Config):
    family = (canonical_A_family if args.family == "A" else canonical_B_family)(args.level, cfg)
    if args.perturb is not None:
        family = perturbed_family(family, args.perturb)
    report = check_compatibility(family, n_max=args.n_max, samples=args.samples,
                                 rng=np.random.default_rng(args.seed), tol=args.tol, config=cfg)
    lines = [f"family: {family.name}", f"level: {args.level}", f"n_max: {args.n_max}",
             f"samples: {args.samples}", f"max_residual: {report.max_residual!r}",
             f"tolerance: {args.tol!r}"]
    for cond, n, j in sorted(report.failures):
        lines.append(f"failure: {cond} n={n} j={j} residual={report.residuals[(cond, n, j)]!r}")
    lines.append("PASS" if report.passed else "FAIL")
    return (EXIT_OK if report.passed else EXIT_FAILED), lines


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _floats(text: str, what: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"{what} must be comma-separated numbers, got {text!r}") from None


def _curvature_lines(b, args, cfg: Config):
    y = np.array(_floats(args.point, "--point"))
    lines = []
    if args.form:
        K = curvature_form(b, y, args.scale, args.n_per_edge, args.extrapolate, config=cfg)
        for j in range(b.dim):
            for k in range(j + 1, b.dim):
                lines.append(f"K[{j},{k}] = {format_cd(CdNumber(b.level, K[j, k]))}")
        return lines
    if args.axes is None:
        raise UsageError("curvature needs --axes j,k (or --form)")
    axes = [int(a) for a in _floats(args.axes, "--axes")]
    if len(axes) != 2:
        raise UsageError("--axes takes exactly two indices")
    est = curvature_extrapolated if args.extrapolate else curvature_estimate
    K = est(b, y, axes[0], axes[1], args.scale, args.n_per_edge, config=cfg)
    return [format_cd(K)]


def _holonomy(args, cfg: Config):
    b = parse_bundle(_read(args.bundle))
    if args.curvature:
        if args.point is None or args.scale is None:
            raise UsageError("--curvature needs --point and --scale")
        return EXIT_OK, _curvature_lines(b, args, cfg)
    lines = []
    if args.defects:
        d = defect_forms(b, cfg)
        for (k, j), (_, v) in sorted(d.nu.items()):
            lines.append(f"nu[{k},{j}] max_norm {float(np.max(np.linalg.norm(v, axis=-1)))!r}")
        for (k, j, l), (_, v) in sorted(d.eta.items()):
            lines.append(f"eta[{k},{j},{l}] max_norm "
                         f"{float(np.max(np.linalg.norm(v, axis=-1)))!r}")
        lines.append(f"relation_residual {d.residual!r}")
        if args.loop is None:
            return EXIT_OK, lines
    if args.loop is None:
        raise UsageError("holonomy needs --loop (or --defects / --curvature)")
    loop = parse_loop(_read(args.loop))
    if args.samples is not None:
        loop = loop.refine(args.samples)
    lines.append(format_cd(holonomy(loop, b, cfg, args.quadrature)))
    return EXIT_OK, lines


def _curvature(args, cfg: Config):
    b = parse_bundle(_read(args.bundle))
    return EXIT_OK, _curvature_lines(b, args, cfg)


def _cohomology(args, cfg: Config):
    try:
        spec = parse_complex(_read(args.complex), cfg)
    except yaml.YAMLError as exc:
        raise ContractViolation(f"complex file is not valid YAML: {exc}") from None
    dims = cohomology_dims(len(spec.points), spec.level, spec.degree_cap, spec.support, cfg,
                           method=args.method)
    lines = [f"points: {len(spec.points)}", f"level: {spec.level}",
             "dims: " + " ".join(str(d) for d in dims)]
    for name, f in spec.cochains.items():
        df = coboundary(f, cfg)
        lines.append(f"cochain {name}: degree {f.degree} coboundary_max_norm "
                     f"{df.max_norm()!r} cocycle {'yes' if df.max_norm() == 0.0 else 'no'}")
    return EXIT_OK, lines


def _verify(args, cfg: Config):
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    lines, code = [], EXIT_OK
    for name in names:
        res = run_suite(name, args.seed, args.samples, args.level, cfg)
        lines += res.lines()
        if not res.passed:
            code = EXIT_FAILED
    return code, lines


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    config_help = "YAML tolerance/branch/grid record (env CAYLEY_WRAP_CONFIG)"
    parser = _Parser(prog="cayley-wrap", description=__doc__.splitlines()[0])
    parser.add_argument("--config", metavar="FILE", help=config_help)
    # accepted after the subcommand too; SUPPRESS keeps a global --config intact
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="FILE", default=argparse.SUPPRESS, help=config_help)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("algebra", parents=[common], help="Cayley-Dickson arithmetic")
    p.add_argument("op", choices=sorted(ALGEBRA_OPS))
    p.add_argument("operands", nargs="+", help="literals such as level:2;0,1,0,0")
    p.add_argument("--strict", action="store_true", help="ln: refuse the branch cut")
    p.set_defaults(handler=_algebra)

    p = sub.add_parser("bar", parents=[common], help="bar-construction words")
    p.add_argument("op", choices=sorted(BAR_OPS))
    p.add_argument("operands", nargs="+", help="word literals (face/degeneracy: index, word)")
    p.add_argument("--tie-break", choices=("left", "right"), default="left")
    p.set_defaults(handler=_bar)

    p = sub.add_parser("forms", parents=[common], help="simplicial form compatibility")
    p.add_argument("action", choices=("check",))
    p.add_argument("--family", choices=("A", "B"), default="A")
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--perturb", type=int, default=None, metavar="DEGREE",
                   help="perturb the family in one degree (negative control)")
    p.set_defaults(handler=_forms)

    def curvature_flags(p, required):
        p.add_argument("--point", required=required, help="comma-separated coordinates")
        p.add_argument("--axes", help="j,k")
        p.add_argument("--scale", type=float, required=required)
        p.add_argument("--n-per-edge", type=int, default=64)
        p.add_argument("--extrapolate", action="store_true", help="Richardson over (s, s/2)")
        p.add_argument("--form", action="store_true", help="all components j<k")

    p = sub.add_parser("holonomy", parents=[common], help="loop holonomy of a bundle file")
    p.add_argument("--bundle", required=True)
    p.add_argument("--loop")
    p.add_argument("--samples", type=int, help="refine the loop to about N segments")
    p.add_argument("--quadrature", choices=("trapezoid", "midpoint"), default="trapezoid")
    p.add_argument("--defects", action="store_true", help="report logarithm defect forms")
    p.add_argument("--curvature", action="store_true", help="plaquette curvature instead")
    curvature_flags(p, False)
    p.set_defaults(handler=_holonomy)

    p = sub.add_parser("curvature", parents=[common], help="plaquette curvature")
    p.add_argument("--bundle", required=True)
    curvature_flags(p, True)
    p.set_defaults(handler=_curvature)

    p = sub.add_parser("cohomology", parents=[common], help="finite cochain cohomology")
    p.add_argument("--complex", required=True, help="YAML complex description")
    p.add_argument("--method", choices=("auto", "dense", "blocks"), default="auto")
    p.set_defaults(handler=_cohomology)

    p = sub.add_parser("verify", parents=[common], help="randomised property suites")
    p.add_argument("--suite", required=True, choices=sorted(SUITES) + ["all"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--level", type=int, default=None)
    p.set_defaults(handler=_verify)
    return parser


def run(argv: Sequence[str], out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
        cfg = config_from_env(args.config)
        code, lines = args.handler(args, cfg)
    except _HelpShown:
        out.write(parser.format_help() if not argv or argv[0].startswith("-") else "")
        return EXIT_OK
    except UsageError as exc:
        err.write(str(exc).rstrip("\n") + "\n")
        return EXIT_USAGE
    except (ContractViolation, CoverageError) as exc:
        err.write(f"contract violation: {exc}\n")
        return EXIT_CONTRACT
    except NumericError as exc:
        err.write(f"numeric error: {exc}\n")
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:      # e.g. a malformed --config file
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    for line in lines:
        out.write(line + "\n")
    return code


def main(argv: Sequence[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
