"""Command-line front end.

Subcommands: solve, audit, sample, mesh, dehn, scan.  Exit codes: 0 success,
1 usage error, 2 numeric or I/O hard error.  A --config file supplies
`key = value` defaults for the same flags; explicit flags win.  Outputs are
deterministic (fixed formatting and ordering, no timestamps); figures go to
files through the Agg backend when --fig or an svg format is requested.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import sys
from dataclasses import replace

import numpy as np

from ._version import TOOL_NAME, TOOL_VERSION
from .exporters import dumps_json, write_csv, write_obj, write_surface_csv
from .report import run_audit
from .sampling import SamplingGrid, build_mesh, sample_surface
from .spinor import ExponentOverflowError, potential_condition
from .torus import (
    REALITY_BRANCHES,
    DehnTwist,
    Lattice,
    TorusParameters,
    build_solution,
    build_wave_vectors,
    dehn_invariance_check,
    dehn_twist,
    reality_audit,
)
from .wirtinger import QuadratureError

_BOOL_CONFIG_KEYS = {"strict-print", "deterministic", "offset-free"}
_SCAN_CSV_HEADER = ("a", "b", "re_p_squared", "im_p_squared", "abs_im")


class UsageError(Exception):
    """Bad invocation; reported on stderr with exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we want exit(1)
        raise UsageError(message)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda1", type=float, default=math.pi, help="real period, > 0")
    p.add_argument("--lambda2", type=float, default=0.0, help="imaginary period")
    p.add_argument("--n", type=int, default=1, help="integer mode number")
    p.add_argument("--a", type=float, default=0.0, help="Re k1")
    p.add_argument("--b", type=float, default=0.0, help="Im k1")
    p.add_argument("--c-re", type=float, default=1.0, help="Re of the normalization C")
    p.add_argument("--c-im", type=float, default=0.0, help="Im of the normalization C")
    p.add_argument(
        "--strict-print",
        action=argparse.BooleanOptionalAction,
        default=False,
        help="use the verbatim k1 exponent for phi2 instead of the shared k2",
    )
    p.add_argument(
        "--deterministic",
        action=argparse.BooleanOptionalAction,
        default=False,
        help="record determinism intent in report headers (outputs are "
        "deterministic regardless)",
    )
    p.add_argument("--config", default=None, help="key = value defaults file")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument(
        "--format",
        choices=("csv", "json", "obj", "svg"),
        default=None,
        help="output format; each subcommand has a natural default",
    )


def _build_parser() -> _Parser:
    root = _Parser(prog=TOOL_NAME, description=__doc__)
    root.add_argument(
        "--version", action="version", version=f"{TOOL_NAME} {TOOL_VERSION}"
    )
    subs = root.add_subparsers(dest="command", parser_class=_Parser)
    subs.required = True

    p = subs.add_parser("solve", help="print wave vectors and amplitudes")
    _add_common(p)

    p = subs.add_parser("audit", help="run every residual check, emit JSON")
    _add_common(p)
    p.add_argument("--convention", choices=("A", "B"), default="B")
    p.add_argument("--reality-branch", choices=REALITY_BRANCHES, default="free")
    p.add_argument("--twist", default=None, help="Dehn twist PxQ, e.g. 2x1")
    p.add_argument("--tol", type=float, default=1e-6, help="quadrature agreement tol")
    p.add_argument(
        "--check-tol",
        action="append",
        default=None,
        metavar="NAME=VALUE",
        help="override one check tolerance (repeatable)",
    )
    p.add_argument("--fig", default=None, help="also render a residual chart here")

    p = subs.add_parser("sample", help="sample the fundamental cell to CSV")
    _add_common(p)
    p.add_argument("--grid", default="8x8", help="grid NxM (default 8x8)")
    p.add_argument(
        "--offset-free",
        action=argparse.BooleanOptionalAction,
        default=False,
        help="skip base-point subtraction (literal coordinate reading)",
    )
    p.add_argument("--project", default="12", help="coordinate picks for figures")
    p.add_argument("--fig", default=None, help="also render a projection figure here")

    p = subs.add_parser("mesh", help="export a torus quad mesh as OBJ")
    _add_common(p)
    p.add_argument("--grid", default="16x16", help="grid NxM (default 16x16)")
    p.add_argument("--project", default="123", help="three of x1..x4, e.g. 123")
    p.add_argument(
        "--offset-free",
        action=argparse.BooleanOptionalAction,
        default=False,
        help="skip base-point subtraction (literal coordinate reading)",
    )

    p = subs.add_parser("dehn", help="transformed parameters + invariance report")
    _add_common(p)
    p.add_argument("--twist", required=True, help="Dehn twist PxQ, e.g. 2x1")
    p.add_argument("--reality-branch", choices=REALITY_BRANCHES, default="free")
    p.add_argument("--a-range", default="0.1:0.5:5", help="a sweep LO:HI[:COUNT]")

    p = subs.add_parser("scan", help="sweep a or an (a, b) grid, CSV of p^2")
    _add_common(p)
    p.add_argument("--reality-branch", choices=REALITY_BRANCHES, default="free")
    p.add_argument("--a-range", default="-2:2:81", help="a sweep LO:HI[:COUNT]")
    p.add_argument(
        "--b-range",
        default=None,
        help="b sweep LO:HI[:COUNT]; makes the scan a full grid",
    )
    p.add_argument("--fig", default=None, help="render the grid heatmap here")
    return root


def _params_from(ns: argparse.Namespace) -> TorusParameters:
    return TorusParameters(
        lattice=Lattice(ns.lambda1, ns.lambda2),
        n=ns.n,
        a=ns.a,
        b=ns.b,
        c=complex(ns.c_re, ns.c_im),
    )


def _parse_grid(text: str) -> tuple[int, int]:
    parts = str(text).lower().split("x")
    if len(parts) != 2:
        raise UsageError(f"--grid expects NxM, got '{text}'")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"--grid expects integers, got '{text}'") from None


def _parse_twist(text: str) -> DehnTwist:
    parts = str(text).lower().split("x")
    if len(parts) != 2:
        raise UsageError(f"--twist expects PxQ, got '{text}'")
    try:
        return DehnTwist(int(parts[0]), int(parts[1]))
    except ValueError as exc:
        raise UsageError(f"bad --twist '{text}': {exc}") from None


def _parse_range(text: str, flag: str) -> np.ndarray:
    parts = str(text).split(":")
    if len(parts) not in (2, 3):
        raise UsageError(f"{flag} expects LO:HI[:COUNT], got '{text}'")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2]) if len(parts) == 3 else 81
    except ValueError:
        raise UsageError(f"{flag} expects numbers, got '{text}'") from None
    if count < 1:
        raise UsageError(f"{flag} needs a positive count")
    return np.linspace(lo, hi, count)


def _parse_check_tols(items) -> dict[str, float] | None:
    if not items:
        return None
    out: dict[str, float] = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"--check-tol expects NAME=VALUE, got '{item}'")
        name, _, value = item.partition("=")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise UsageError(f"--check-tol value '{value}' is not a number") from None
    return out


def _config_tokens(path: str) -> list[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read config '{path}': {exc}") from None
    tokens: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip().lower().replace("_", "-")
        value = value.strip()
        if not key:
            raise UsageError(f"{path}:{lineno}: empty key")
        if key == "config":
            raise UsageError(f"{path}:{lineno}: config files do not nest")
        if key in _BOOL_CONFIG_KEYS:
            lowered = value.lower()
            if lowered in ("1", "true", "yes", "on"):
                tokens.append(f"--{key}")
            elif lowered in ("0", "false", "no", "off"):
                tokens.append(f"--no-{key}")
            else:
                raise UsageError(f"{path}:{lineno}: boolean expected for '{key}'")
        else:
            tokens.extend([f"--{key}", value])
    return tokens


_RANGE_FLAGS = ("--a-range", "--b-range")


def _merge_range_flags(argv: list[str]) -> list[str]:
    """Join range flags with their value ('--a-range=-1:1:9' form).

    A range like -1:1:9 starts with '-' and contains ':', which argparse
    would misread as an option string.
    """
    out: list[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        if token in _RANGE_FLAGS and i + 1 < len(argv):
            out.append(f"{token}={argv[i + 1]}")
            i += 2
        else:
            out.append(token)
            i += 1
    return out


def _inject_config(argv: list[str]) -> list[str]:
    """Splice config-file tokens in right after the subcommand.

    Later (explicit) flags override earlier (config) ones under argparse, so
    the command line wins.
    """
    path = None
    for i, token in enumerate(argv):
        if token == "--config":
            if i + 1 >= len(argv):
                raise UsageError("--config needs a path")
            path = argv[i + 1]
        elif token.startswith("--config="):
            path = token.partition("=")[2]
    if path is None or not argv or argv[0].startswith("-"):
        return argv
    return argv[:1] + _config_tokens(path) + argv[1:]


@contextlib.contextmanager
def _out_stream(out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            yield fh
    else:
        yield sys.stdout


def _emit_text(text: str, out_path) -> None:
    with _out_stream(out_path) as fh:
        fh.write(text)


def _fmt_complex(z: complex) -> str:
    re = z.real if z.real != 0.0 else 0.0
    im = z.imag if z.imag != 0.0 else 0.0
    sign = "+" if im >= 0 else "-"
    return f"{re:.17g} {sign} {abs(im):.17g}i"


def _check_format(ns, allowed: tuple[str, ...]) -> str:
    fmt = ns.format or allowed[0]
    if fmt not in allowed:
        raise UsageError(
            f"'{ns.command}' supports formats {', '.join(allowed)}; got '{fmt}'"
        )
    return fmt


def _run_solve(ns) -> int:
    params = _params_from(ns)
    sol = build_solution(params, strict_print=ns.strict_print)
    wvs = sol.wave_vectors
    pot = potential_condition(wvs)
    fmt = _check_format(ns, ("json",)) if ns.format else None
    amplitudes = {
        "A1": sol.doublet1.phi.amplitude,
        "B1": sol.doublet1.psi.amplitude,
        "A2": sol.doublet2.phi.amplitude,
        "B2": sol.doublet2.psi.amplitude,
    }
    if fmt == "json":
        payload = {
            "tool": TOOL_NAME,
            "version": TOOL_VERSION,
            "parameters": {
                "lambda1": params.lattice.lambda1,
                "lambda2": params.lattice.lambda2,
                "n": params.n,
                "a": params.a,
                "b": params.b,
                "c_re": params.c.real,
                "c_im": params.c.imag,
            },
            "kappa": params.kappa,
            "wave_vectors": {
                "k1": wvs.k1,
                "h1": wvs.h1,
                "k2": wvs.k2,
                "h2": wvs.h2,
            },
            "amplitudes": amplitudes,
            "p_squared": pot.p_squared,
            "potential_mismatch": pot.mismatch,
            "flags": list(sol.flags),
        }
        _emit_text(dumps_json(payload), ns.out)
        return 0
    lines = [
        f"lambda1 = {params.lattice.lambda1:.17g}",
        f"lambda2 = {params.lattice.lambda2:.17g}",
        f"n = {params.n}",
        f"a = {params.a:.17g}",
        f"b = {params.b:.17g}",
        f"c = {_fmt_complex(params.c)}",
        f"kappa = {params.kappa:.17g}",
        f"k1 = {_fmt_complex(wvs.k1)}",
        f"h1 = {_fmt_complex(wvs.h1)}",
        f"k2 = {_fmt_complex(wvs.k2)}",
        f"h2 = {_fmt_complex(wvs.h2)}",
    ]
    lines.extend(f"{name} = {_fmt_complex(val)}" for name, val in amplitudes.items())
    lines.append(f"p_squared = {_fmt_complex(pot.p_squared)}")
    lines.append(f"potential_mismatch = {_fmt_complex(pot.mismatch)}")
    lines.append("flags = " + (",".join(sol.flags) if sol.flags else "none"))
    _emit_text("\n".join(lines) + "\n", ns.out)
    return 0


def _run_audit(ns) -> int:
    _check_format(ns, ("json",))
    params = _params_from(ns)
    twist = _parse_twist(ns.twist) if ns.twist else None
    report = run_audit(
        params,
        convention=ns.convention,
        strict_print=ns.strict_print,
        reality_branch=ns.reality_branch,
        twist=twist,
        tol=ns.tol,
        check_tols=_parse_check_tols(ns.check_tol),
        deterministic=ns.deterministic,
    )
    _emit_text(report.to_json(), ns.out)
    if ns.fig:
        from .figures import save_audit_figure

        save_audit_figure(report.to_dict(), ns.fig)
    return 0


def _run_sample(ns) -> int:
    fmt = _check_format(ns, ("csv", "svg"))
    params = _params_from(ns)
    sol = build_solution(params, strict_print=ns.strict_print)
    n_u, n_v = _parse_grid(ns.grid)
    grid = SamplingGrid(n_u, n_v, params.lattice)
    table = sample_surface(sol, grid, offset_free=ns.offset_free)
    if fmt == "csv":
        with _out_stream(ns.out) as fh:
            write_surface_csv(fh, table)
    else:
        if not ns.out:
            raise UsageError("svg output needs --out PATH")
        from .figures import save_projection_figure

        save_projection_figure(table, ns.project, ns.out)
    if ns.fig:
        from .figures import save_projection_figure

        save_projection_figure(table, ns.project, ns.fig)
    return 0


def _run_mesh(ns) -> int:
    _check_format(ns, ("obj",))
    params = _params_from(ns)
    sol = build_solution(params, strict_print=ns.strict_print)
    n_u, n_v = _parse_grid(ns.grid)
    grid = SamplingGrid(n_u, n_v, params.lattice)
    mesh = build_mesh(sol, grid, projection=ns.project, offset_free=ns.offset_free)
    with _out_stream(ns.out) as fh:
        write_obj(fh, mesh)
    return 0


def _run_dehn(ns) -> int:
    _check_format(ns, ("json",))
    params = _params_from(ns)
    twist = _parse_twist(ns.twist)
    after = dehn_twist(params, twist)
    a_values = [float(a) for a in _parse_range(ns.a_range, "--a-range")]
    # the quoted polynomial is derived on the plus branch; "free" defers to it
    branch = "plus" if ns.reality_branch == "free" else ns.reality_branch
    rep = dehn_invariance_check(params, twist, a_values, branch=branch)
    payload = {
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "twist": {"p": twist.p, "q": twist.q},
        "branch": branch,
        "parameters": {
            "lambda1": params.lattice.lambda1,
            "lambda2": params.lattice.lambda2,
            "n": params.n,
            "a": params.a,
            "b": params.b,
        },
        "transformed_parameters": {
            "lambda1": after.lattice.lambda1,
            "lambda2": after.lattice.lambda2,
            "n": after.n,
            "a": after.a,
            "b": after.b,
        },
        "invariance": {
            "a_values": list(rep.a_values),
            "printed_before": list(rep.printed_before),
            "printed_after": list(rep.printed_after),
            "direct_before": list(rep.direct_before),
            "direct_after": list(rep.direct_after),
            "max_printed": rep.max_printed,
            "max_direct": rep.max_direct,
            "trivial_case_max": rep.trivial_case_max,
            "trivial_case_holds": rep.trivial_case_holds,
            "equal_pq_case_max": rep.equal_pq_case_max,
            "equal_pq_case_holds": rep.equal_pq_case_holds,
        },
    }
    _emit_text(dumps_json(payload), ns.out)
    return 0


def _run_scan(ns) -> int:
    fmt = _check_format(ns, ("csv", "svg"))
    params = _params_from(ns)
    a_values = _parse_range(ns.a_range, "--a-range")
    rows = []
    scan = None
    if ns.b_range is not None:
        b_values = _parse_range(ns.b_range, "--b-range")
        scan = reality_audit(params, a_values, b_values)
        for a in a_values:
            for b in b_values:
                wvs = build_wave_vectors(replace(params, a=float(a), b=float(b)))
                p2 = wvs.k1 * wvs.h1
                rows.append((float(a), float(b), p2.real, p2.imag, abs(p2.imag)))
    else:
        ratio = params.lattice.ratio
        for a in a_values:
            if ns.reality_branch == "free":
                b = params.b
            else:
                sign = 1.0 if ns.reality_branch == "plus" else -1.0
                b = sign * ratio * float(a)
            wvs = build_wave_vectors(replace(params, a=float(a), b=float(b)))
            p2 = wvs.k1 * wvs.h1
            rows.append((float(a), float(b), p2.real, p2.imag, abs(p2.imag)))
    if fmt == "csv":
        with _out_stream(ns.out) as fh:
            write_csv(fh, _SCAN_CSV_HEADER, rows)
    else:
        if scan is None:
            raise UsageError("svg scan output needs both --a-range and --b-range")
        if not ns.out:
            raise UsageError("svg output needs --out PATH")
        from .figures import save_scan_figure

        save_scan_figure(scan, ns.out)
    if ns.fig:
        if scan is None:
            raise UsageError("--fig needs a full grid; give --b-range too")
        from .figures import save_scan_figure

        save_scan_figure(scan, ns.fig)
    return 0


_RUNNERS = {
    "solve": _run_solve,
    "audit": _run_audit,
    "sample": _run_sample,
    "mesh": _run_mesh,
    "dehn": _run_dehn,
    "scan": _run_scan,
}


def cli_main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        argv = _merge_range_flags(_inject_config(list(argv)))
        ns = _build_parser().parse_args(argv)
        return _RUNNERS[ns.command](ns)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ExponentOverflowError, QuadratureError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help / --version
        code = exc.code
        return 0 if code in (None, 0) else 1


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
