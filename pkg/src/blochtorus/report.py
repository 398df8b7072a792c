"""Residual audit over one torus solution.

Every advertised property of the construction is measured and reported as a
(residual, tolerance, verdict) triple; nothing is silently repaired and no
claim is assumed true.  Verdicts are mechanical: pass iff residual <= its
tolerance, fail otherwise, and flag for informational entries that carry no
tolerance (or that could not be evaluated).  The report is a deterministic
JSON document; `AUDIT_SCHEMA` documents its shape and `validate_report`
checks an instance against it.
"""

from __future__ import annotations

import cmath
import copy
import math
from dataclasses import dataclass, replace
from typing import Any

import numpy as np

from ._version import TOOL_NAME, TOOL_VERSION
from .exporters import dumps_json
from .immersion import (
    closed_form_coordinates,
    coordinate_one_forms,
    integrated_coordinates,
    radii_audit,
)
from .sampling import SamplingGrid
from .spinor import (
    ExponentOverflowError,
    dirac_residual,
    periodicity_check,
    potential_condition,
)
from .torus import (
    REALITY_BRANCHES,
    DehnTwist,
    TorusParameters,
    amplitude_conditions_residual,
    build_solution,
    consistency_residual,
    dehn_invariance_check,
    metric_polynomial,
    reality_audit,
    transformed_metric_polynomial,
)
from .wirtinger import QuadratureError, exactness_residual

DEFAULT_CHECK_TOLERANCES: dict[str, float | None] = {
    "periodicity_doublet1": 1e-10,
    "periodicity_doublet2": 1e-10,
    "consistency_conditions": 1e-12,
    "amplitude_products": 1e-12,
    "amplitude_cross_conditions": 1e-12,
    "potential_mismatch": 1e-12,
    "dirac_residual_convention_A": 1e-10,
    "dirac_residual_convention_B": 1e-10,
    "exactness_x1": 1e-10,
    "exactness_x2": 1e-10,
    "exactness_x3": 1e-10,
    "exactness_x4": 1e-10,
    "closed_vs_integrated": 1e-6,
    "radii_flatness": 1e-10,
    "reality_branch_plus": 1e-10,
    "reality_branch_minus": 1e-10,
    "metric_polynomial_comparison": None,  # informational, never asserted
    "dehn_metric_invariance_printed": 1e-12,
    "dehn_metric_invariance_direct": 1e-12,
}

AUDIT_SCHEMA: dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "blochtorus audit report",
    "type": "object",
    "required": ["header", "checks"],
    "properties": {
        "header": {
            "type": "object",
            "required": ["tool", "version", "parameters", "conventions", "tolerances"],
            "properties": {
                "tool": {"type": "string"},
                "version": {"type": "string"},
                "deterministic": {"type": "boolean"},
                "parameters": {
                    "type": "object",
                    "required": ["lambda1", "lambda2", "n", "a", "b", "c_re", "c_im"],
                    "properties": {
                        "lambda1": {"type": "number"},
                        "lambda2": {"type": "number"},
                        "n": {"type": "integer"},
                        "a": {"type": "number"},
                        "b": {"type": "number"},
                        "c_re": {"type": "number"},
                        "c_im": {"type": "number"},
                    },
                },
                "conventions": {"type": "object"},
                "tolerances": {"type": "object"},
                "warnings": {"type": "array", "items": {"type": "string"}},
            },
        },
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": [
                    "check_id",
                    "residual",
                    "tolerance",
                    "verdict",
                    "paper_anchor",
                ],
                "properties": {
                    "check_id": {"type": "string"},
                    "residual": {"type": ["number", "null"]},
                    "tolerance": {"type": ["number", "null"]},
                    "verdict": {"enum": ["pass", "flag", "fail"]},
                    "paper_anchor": {"type": "string"},
                    "detail": {"type": "object"},
                },
            },
        },
    },
}


@dataclass(frozen=True)
class AuditReport:
    header: dict
    checks: tuple[dict, ...]

    def to_dict(self) -> dict:
        # deep copy: callers may edit the result without corrupting the report
        return copy.deepcopy({"header": self.header, "checks": list(self.checks)})

    def to_json(self) -> str:
        return dumps_json(self.to_dict())

    def entry(self, check_id: str) -> dict:
        for check in self.checks:
            if check["check_id"] == check_id:
                return check
        raise KeyError(check_id)

    @property
    def failed(self) -> tuple[str, ...]:
        return tuple(c["check_id"] for c in self.checks if c["verdict"] == "fail")


def validate_report(data: dict) -> None:
    """Raise jsonschema.ValidationError when data does not fit the schema."""
    import jsonschema

    jsonschema.validate(instance=data, schema=AUDIT_SCHEMA)


def _verdict(residual: float | None, tol: float | None) -> str:
    if tol is None or residual is None:
        return "flag"
    return "pass" if residual <= tol else "fail"


def _entry(
    check_id: str,
    residual: float | None,
    tol: float | None,
    anchor: str,
    detail: dict | None = None,
) -> dict:
    out = {
        "check_id": check_id,
        "residual": None if residual is None else float(residual),
        "tolerance": None if tol is None else float(tol),
        "verdict": _verdict(residual, tol),
        "paper_anchor": anchor,
    }
    if detail is not None:
        out["detail"] = detail
    return out


def _cpx(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


# Fixed fractional positions inside the fundamental cell, used wherever a
# check needs sample points; deterministic by construction.
_SAMPLE_FRACTIONS = (
    (0.13, 0.11),
    (0.29, 0.53),
    (0.47, 0.31),
    (0.66, 0.79),
    (0.81, 0.23),
    (0.94, 0.67),
)


def _sample_points(params: TorusParameters) -> list[complex]:
    l1 = params.lattice.lambda1
    span = params.lattice.lambda2 if params.lattice.lambda2 != 0.0 else 1.0
    return [fu * l1 + 1j * fv * span for fu, fv in _SAMPLE_FRACTIONS]


def run_audit(
    params: TorusParameters,
    convention: str = "B",
    strict_print: bool = False,
    reality_branch: str = "free",
    twist: DehnTwist | None = None,
    tol: float = 1e-6,
    check_tols: dict[str, float] | None = None,
    deterministic: bool = False,
) -> AuditReport:
    """Measure every audited property of the solution at `params`.

    `tol` is the closed-form/quadrature agreement tolerance; per-check
    tolerances come from DEFAULT_CHECK_TOLERANCES overlaid with check_tols.
    """
    if reality_branch not in REALITY_BRANCHES:
        raise ValueError(f"reality_branch must be one of {REALITY_BRANCHES}")
    tols = dict(DEFAULT_CHECK_TOLERANCES)
    tols["closed_vs_integrated"] = float(tol)
    if check_tols:
        unknown = set(check_tols) - set(tols)
        if unknown:
            raise ValueError(f"unknown check ids: {sorted(unknown)}")
        tols.update(check_tols)

    sol = build_solution(params, strict_print=strict_print)
    wvs = sol.wave_vectors
    zs = _sample_points(params)
    checks: list[dict] = []

    # Lattice-shift multipliers, both doublets.
    rep1 = periodicity_check(sol.doublet1.phi, params.lattice, params.n, zs)
    checks.append(
        _entry(
            "periodicity_doublet1",
            rep1.deviation,
            tols["periodicity_doublet1"],
            "translation by gamma = lambda1 + i lambda2 multiplies the first "
            "doublet by the sign (-1)^n",
            {
                "ratio": _cpx(rep1.ratio),
                "expected_sign": rep1.expected_sign,
                "spread": rep1.spread,
            },
        )
    )
    rep2_psi = periodicity_check(sol.doublet2.psi, params.lattice, params.n, zs)
    rep2_phi = periodicity_check(sol.doublet2.phi, params.lattice, params.n, zs)
    checks.append(
        _entry(
            "periodicity_doublet2",
            max(rep2_psi.deviation, rep2_phi.deviation),
            tols["periodicity_doublet2"],
            "translation by gamma multiplies the second doublet by (-1)^n "
            "(measured; not claimed by the construction)",
            {
                "psi_ratio": _cpx(rep2_psi.ratio),
                "phi_ratio": _cpx(rep2_phi.ratio),
                "expected_sign": rep2_psi.expected_sign,
            },
        )
    )

    c1, c2 = consistency_residual(wvs)
    checks.append(
        _entry(
            "consistency_conditions",
            max(abs(c1), abs(c2)),
            tols["consistency_conditions"],
            "wave vectors satisfy conj(k1) - h2 = h1 + h2 and "
            "h1 - conj(k2) = conj(k1) + conj(k2)",
            {"first": _cpx(c1), "second": _cpx(c2)},
        )
    )

    r1, r2, r3, r4 = amplitude_conditions_residual(sol)
    checks.append(
        _entry(
            "amplitude_products",
            max(abs(r1), abs(r2)),
            tols["amplitude_products"],
            "amplitude products equal 2(k1 + k2) and -2(h1 + h2)",
            {"product1": _cpx(r1), "product2": _cpx(r2)},
        )
    )
    checks.append(
        _entry(
            "amplitude_cross_conditions",
            max(abs(r3), abs(r4)),
            tols["amplitude_cross_conditions"],
            "cross conditions -conj(B1) A2 / 2 = conj(h1) - k2 and "
            "-conj(B2) A1 / 2 = -(k1 - conj(h2))",
            {"cross1": _cpx(r3), "cross2": _cpx(r4)},
        )
    )

    pot = potential_condition(wvs)
    checks.append(
        _entry(
            "potential_mismatch",
            abs(pot.mismatch),
            tols["potential_mismatch"],
            "both doublets share one squared potential: k1 h1 = k2 h2",
            {"p_squared": _cpx(pot.p_squared), "mismatch": _cpx(pot.mismatch)},
        )
    )

    for conv in ("A", "B"):
        check_id = f"dirac_residual_convention_{conv}"
        detail: dict[str, Any] = {}
        try:
            residual, detail = _dirac_check(sol, zs, conv)
        except ExponentOverflowError as exc:
            residual = None
            detail = {"error": str(exc)}
        checks.append(
            _entry(
                check_id,
                residual,
                tols[check_id],
                "Dirac-type system "
                + (
                    "d_z phi = p phi, d_zbar phi = -p psi"
                    if conv == "A"
                    else "d_z psi = p phi, d_zbar phi = -p psi"
                )
                + " at p = sqrt(k1 h1), better sign of two",
                detail,
            )
        )

    grid = SamplingGrid(8, 8, params.lattice)
    forms = coordinate_one_forms(sol)
    exact_ok = []
    for idx, form in enumerate(forms, start=1):
        check_id = f"exactness_x{idx}"
        try:
            residual = exactness_residual(form, grid)
            detail = {}
        except ExponentOverflowError as exc:
            residual = None
            detail = {"error": str(exc)}
        exact_ok.append(residual is not None and residual <= tols[check_id])
        checks.append(
            _entry(
                check_id,
                residual,
                tols[check_id],
                f"coordinate one-form {idx} is closed (d_zbar f = d_z g), "
                "making its contour integral path independent",
                detail,
            )
        )

    checks.append(_closed_vs_integrated_check(sol, params, tols, exact_ok))

    t_samples = [4.0 * math.pi * i / 199.0 for i in range(200)]
    try:
        rad = radii_audit(sol, t_samples, section="half")
        residual = max(
            rad.spread12, rad.spread34, abs(rad.mean12 - 4.0), abs(rad.mean34 - 4.0)
        )
        detail = {
            "mean12": rad.mean12,
            "mean34": rad.mean34,
            "spread12": rad.spread12,
            "spread34": rad.spread34,
            "max_im_eta": rad.max_im_eta,
            "max_im_rho": rad.max_im_rho,
            "max_eta_rho_gap": rad.max_eta_rho_gap,
            "degenerate_phase_pair": bool(rad.max_eta_rho_gap < 1e-12),
            "section": "half",
            "t_range": [0.0, 4.0 * math.pi],
            "t_count": 200,
        }
    except ExponentOverflowError as exc:
        residual, detail = None, {"error": str(exc)}
    checks.append(
        _entry(
            "radii_flatness",
            residual,
            tols["radii_flatness"],
            "coordinate pairs (x1, x2) and (x3, x4) trace circles of squared "
            "radius 4 along the real section",
            detail,
        )
    )

    avals = np.linspace(-2.0, 2.0, 81)
    bvals = np.linspace(-2.0, 2.0, 81)
    scan = reality_audit(params, avals, bvals, zero_tol=1e-10)
    for branch, branch_max in (
        ("plus", scan.branch_plus_max),
        ("minus", scan.branch_minus_max),
    ):
        checks.append(
            _entry(
                f"reality_branch_{branch}",
                branch_max,
                tols[f"reality_branch_{branch}"],
                "squared potential k1 h1 stays real along the branch "
                f"b = {'+' if branch == 'plus' else '-'}(lambda2/lambda1) a",
                {
                    "grid": [int(scan.a_values.size), int(scan.b_values.size)],
                    "zero_locus_points": int(scan.zero_mask.sum()),
                    "zero_tol": scan.zero_tol,
                },
            )
        )

    checks.append(_metric_polynomial_check(params, reality_branch))

    if twist is not None:
        dehn = dehn_invariance_check(
            params,
            twist,
            a_values=[0.1, 0.2, 0.3, 0.4, 0.5],
            branch="plus" if reality_branch == "free" else reality_branch,
        )
        case_detail = {
            "twist": {"p": twist.p, "q": twist.q},
            "a_values": list(dehn.a_values),
            "trivial_case_max": dehn.trivial_case_max,
            "trivial_case_holds": dehn.trivial_case_holds,
            "equal_pq_case_max": dehn.equal_pq_case_max,
            "equal_pq_case_holds": dehn.equal_pq_case_holds,
        }
        checks.append(
            _entry(
                "dehn_metric_invariance_printed",
                dehn.max_printed,
                tols["dehn_metric_invariance_printed"],
                "quoted transformed polynomial unchanged by the lattice "
                "rescale (p lambda1, q lambda2)",
                dict(
                    case_detail,
                    before=list(dehn.printed_before),
                    after=list(dehn.printed_after),
                ),
            )
        )
        checks.append(
            _entry(
                "dehn_metric_invariance_direct",
                dehn.max_direct,
                tols["dehn_metric_invariance_direct"],
                "direct product k1 h1 unchanged by the lattice rescale "
                "(p lambda1, q lambda2)",
                dict(
                    case_detail,
                    before=[_cpx(v) for v in dehn.direct_before],
                    after=[_cpx(v) for v in dehn.direct_after],
                ),
            )
        )

    header = {
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "deterministic": bool(deterministic),
        "parameters": {
            "lambda1": params.lattice.lambda1,
            "lambda2": params.lattice.lambda2,
            "n": params.n,
            "a": params.a,
            "b": params.b,
            "c_re": params.c.real,
            "c_im": params.c.imag,
        },
        "conventions": {
            "dirac_convention": convention,
            "phi2_exponent": "k1_strict" if strict_print else "k2_shared",
            "k2_ratio_denominator": "lambda1",
            "reality_branch": reality_branch,
            "base_point": "origin",
            "coordinate_offset": "base_point_subtracted",
            "section": "half",
        },
        "tolerances": {k: tols[k] for k in sorted(tols)},
        "warnings": list(sol.flags),
        "wave_vectors": {
            "k1": _cpx(wvs.k1),
            "h1": _cpx(wvs.h1),
            "k2": _cpx(wvs.k2),
            "h2": _cpx(wvs.h2),
        },
    }
    return AuditReport(header=header, checks=tuple(checks))


def _dirac_check(sol, zs, convention: str) -> tuple[float, dict]:
    """Max Dirac residual over samples/doublets at the better sqrt sign."""
    p0 = cmath.sqrt(sol.wave_vectors.k1 * sol.wave_vectors.h1)
    best = None
    best_sign = "+"
    for sign, p in (("+", p0), ("-", -p0)):
        worst = 0.0
        for doublet in (sol.doublet1, sol.doublet2):
            for z in zs:
                first, second = dirac_residual(doublet, p, z, convention=convention)
                worst = max(worst, abs(first), abs(second))
        if best is None or worst < best:
            best = worst
            best_sign = sign
    return best, {"p_sign": best_sign, "p_squared": _cpx(p0 * p0)}


def _closed_vs_integrated_check(sol, params, tols, exact_ok) -> dict:
    """Agreement of the two coordinate channels at a few endpoints."""
    l1 = params.lattice.lambda1
    span = params.lattice.lambda2 if params.lattice.lambda2 != 0.0 else 1.0
    endpoints = [
        0.30 * l1 + 0.20j * span,
        0.55 * l1 + 0.40j * span,
        0.80 * l1 + 0.70j * span,
    ]
    agree_tol = tols["closed_vs_integrated"]
    quad_tol = agree_tol / 100.0
    per_component = [0.0, 0.0, 0.0, 0.0]
    max_residue = [0.0, 0.0, 0.0, 0.0]
    try:
        for z in endpoints:
            closed = closed_form_coordinates(sol, z)
            integ = integrated_coordinates(sol, z, tol=quad_tol)
            for idx in range(4):
                gap = abs(closed.as_tuple()[idx] - integ.point.as_tuple()[idx])
                per_component[idx] = max(per_component[idx], gap)
                max_residue[idx] = max(max_residue[idx], integ.imag_residue[idx])
    except (ExponentOverflowError, QuadratureError) as exc:
        return _entry(
            "closed_vs_integrated",
            None,
            agree_tol,
            "contour-integrated coordinates reproduce the closed-form phase "
            "coordinates",
            {"error": str(exc)},
        )
    return _entry(
        "closed_vs_integrated",
        max(per_component),
        agree_tol,
        "contour-integrated coordinates reproduce the closed-form phase "
        "coordinates",
        {
            "per_component": per_component,
            "imag_residue": max_residue,
            "imag_residue_limit": 10.0 * agree_tol,
            "exactness_premise": exact_ok,
            "endpoints": [_cpx(z) for z in endpoints],
        },
    )


def _metric_polynomial_check(params: TorusParameters, reality_branch: str) -> dict:
    """Informational comparison table; deliberately carries no tolerance."""
    sign = -1.0 if reality_branch == "minus" else 1.0
    r = params.lattice.ratio
    rows = []
    for i in range(10):
        a = 0.05 * (i + 1)
        local = params if reality_branch == "free" else replace(params, b=sign * r * a)
        cmp = metric_polynomial(local, a)
        rows.append(
            {
                "a": cmp.a,
                "direct": _cpx(cmp.direct),
                "printed": cmp.printed,
                "discrepancy": cmp.discrepancy,
                "transformed_at_identity": transformed_metric_polynomial(
                    params, 1, 1, a
                ),
            }
        )
    return _entry(
        "metric_polynomial_comparison",
        None,
        None,
        "direct k1 h1 against the quoted closed-form polynomial "
        "r(1 - r^2) a + (3 r^2 - 1) a^2; informational, equality never "
        "asserted",
        {"branch": reality_branch, "rows": rows},
    )
