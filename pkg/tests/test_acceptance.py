"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Every criterion is measured, never assumed.  A02 is expected to fail: the
doublet-1 shift multiplier over the full lattice vector has unit modulus but
carries a residual phase on generic lattices, and the tolerance demanded
below leaves no room for it.  The failure is reported with the measured
numbers rather than papered over.
"""

import cmath
import json
import math
import random
import sys

import conftest
import numpy as np

from blochtorus import (
    DehnTwist,
    IntegrationPath,
    Lattice,
    SamplingGrid,
    TorusParameters,
    build_mesh,
    build_solution,
    closed_form_coordinates,
    coordinate_one_forms,
    count_unique_edges,
    default_parameters,
    dehn_invariance_check,
    dehn_twist,
    eval_component,
    exactness_residual,
    integrate_one_form,
    integrated_coordinates,
    radii_audit,
    reality_audit,
    run_audit,
    validate_report,
    wirtinger_dz,
    wirtinger_dzbar,
)
from blochtorus.cli import cli_main


def _record(criterion: str, label: str, ok: bool, detail: str = "") -> None:
    line = f"[acceptance] {criterion} {label}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    # the summary hook replays these after the run, immune to capture
    conftest.acceptance_lines.append(line)
    print(line, file=sys.__stdout__, flush=True)


def _random_parameter_sets(count: int = 100, seed: int = 20301):
    rng = random.Random(seed)
    sets = []
    while len(sets) < count:
        n = rng.choice([-3, -2, -1, 1, 2, 3])
        params = TorusParameters(
            lattice=Lattice(rng.uniform(0.5, 5.0), rng.uniform(-2.0, 2.0)),
            n=n,
            a=rng.uniform(-2.0, 2.0),
            b=rng.uniform(-2.0, 2.0),
        )
        sets.append(params)
    return sets


def test_a01_wirtinger_stencil_accuracy():
    f = lambda z: z**3 * cmath.exp(z.conjugate())
    dz = lambda z: 3.0 * z**2 * cmath.exp(z.conjugate())
    dzb = lambda z: z**3 * cmath.exp(z.conjugate())
    rng = random.Random(10101)
    points = []
    while len(points) < 50:
        z = complex(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0))
        if abs(z) <= 2.0:
            points.append(z)

    def worst(h):
        err = 0.0
        for z in points:
            err = max(err, abs(wirtinger_dz(f, z, h=h) - dz(z)))
            err = max(err, abs(wirtinger_dzbar(f, z, h=h) - dzb(z)))
        return err

    fine = worst(1e-5)
    # convergence order is read off in the truncation-dominated regime
    ratio = worst(1e-2) / worst(5e-3)
    ok = fine < 1e-6 and 3.5 <= ratio <= 4.5
    detail = f"max err {fine:.3e} at h=1e-5, halving ratio {ratio:.3f}"
    _record("A01", "wirtinger stencil accuracy", ok, detail)
    assert ok, detail


def test_a02_doublet1_lattice_periodicity():
    worst = 0.0
    worst_params = None
    for params in _random_parameter_sets():
        sol = build_solution(params)
        phi1 = sol.doublet1.phi
        gamma = params.lattice.gamma
        sign = (-1.0) ** params.n
        rng = random.Random(hash((params.n, params.a)) & 0xFFFF)
        for _ in range(10):
            z = complex(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0))
            base = eval_component(phi1, z)
            shifted = eval_component(phi1, z + gamma)
            rel = abs(shifted - sign * base) / abs(base)
            if rel > worst:
                worst = rel
                worst_params = params
    ok = worst < 1e-10
    kappa = worst_params.kappa
    r = worst_params.lattice.ratio
    delta = ((kappa - 2.0 * worst_params.a) * r - 2.0 * worst_params.b) * (
        worst_params.lattice.lambda2
    )
    detail = (
        f"max relative deviation {worst:.6g}; the shift multiplier is "
        f"exp(i(n pi + delta)) with delta = ((kappa - 2a) r - 2b) lambda2 "
        f"(= {delta:.6g} at the worst set), unit modulus but generically "
        f"off-phase, so the (-1)^n target is unreachable off delta = 0"
    )
    _record("A02", "doublet-1 lattice periodicity", ok, detail)
    assert ok, detail


def test_a03_construction_identities():
    sets = _random_parameter_sets() + [default_parameters()]
    max_products = 0.0
    conditional_checked = 0
    max_conditional = 0.0
    from blochtorus import amplitude_conditions_residual, consistency_residual

    for params in sets:
        sol = build_solution(params)
        r1, r2, r3, r4 = amplitude_conditions_residual(sol)
        max_products = max(max_products, abs(r1), abs(r2))
        first, second = consistency_residual(sol.wave_vectors)
        if max(abs(first), abs(second)) < 1e-12:
            conditional_checked += 1
            max_conditional = max(max_conditional, abs(r3), abs(r4))
    ok = max_products <= 1e-14 and max_conditional < 1e-12 and conditional_checked > 0
    detail = (
        f"product residuals {max_products:.3e}; cross residuals "
        f"{max_conditional:.3e} over {conditional_checked} sets meeting the "
        f"consistency premise"
    )
    _record("A03", "construction identities", ok, detail)
    assert ok, detail


def _qualifying_forms(sol, grid):
    forms = coordinate_one_forms(sol)
    residuals = [exactness_residual(form, list(grid)) for form in forms]
    qualifying = [i for i, res in enumerate(residuals) if res < 1e-10]
    return forms, residuals, qualifying


def _random_endpoints_and_paths(count=20, seed=40804):
    rng = random.Random(seed)
    jobs = []
    for _ in range(count):
        z = complex(rng.uniform(0.3, 3.0), rng.uniform(0.1, 0.9))
        paths = []
        for _ in range(2):
            mid = complex(rng.uniform(0.1, 3.0), rng.uniform(0.05, 0.95))
            paths.append(IntegrationPath((0.0, mid, z)))
        jobs.append((z, paths))
    return jobs


def test_a04_exactness_implies_path_independence():
    sol = build_solution(default_parameters())
    grid = SamplingGrid(8, 8, sol.params.lattice)
    forms, residuals, qualifying = _qualifying_forms(sol, grid)
    worst_gap = 0.0
    for _, paths in _random_endpoints_and_paths():
        for idx in qualifying:
            vals = [integrate_one_form(forms[idx], p, tol=1e-8)[0] for p in paths]
            worst_gap = max(worst_gap, abs(vals[0] - vals[1]))
    ok = bool(qualifying) and worst_gap < 1e-6
    detail = (
        f"exactness residuals {['%.2e' % r for r in residuals]}, qualifying "
        f"forms {[i + 1 for i in qualifying]}, max path disagreement "
        f"{worst_gap:.3e}"
    )
    _record("A04", "exactness implies path independence", ok, detail)
    assert ok, detail


def test_a05_closed_form_matches_quadrature_where_premised():
    sol = build_solution(default_parameters())
    grid = SamplingGrid(8, 8, sol.params.lattice)
    _, _, qualifying = _qualifying_forms(sol, grid)
    worst = 0.0
    for z, _ in _random_endpoints_and_paths():
        integ = integrated_coordinates(sol, z, tol=1e-8)
        closed = closed_form_coordinates(sol, z)
        for idx in qualifying:
            gap = abs(integ.point.as_tuple()[idx] - closed.as_tuple()[idx])
            worst = max(worst, gap)
    ok = bool(qualifying) and worst < 1e-6
    detail = (
        f"max closed-vs-integrated gap {worst:.3e} on forms "
        f"{[i + 1 for i in qualifying]}"
    )
    _record("A05", "closed form matches quadrature", ok, detail)
    assert ok, detail


def test_a06_flat_torus_radii():
    sol = build_solution(default_parameters())
    ts = [4.0 * math.pi * k / 199.0 for k in range(200)]
    audit = radii_audit(sol, ts)
    ok = (
        abs(audit.mean12 - 4.0) < 1e-10
        and abs(audit.mean34 - 4.0) < 1e-10
        and audit.spread12 < 1e-10
        and audit.spread34 < 1e-10
    )
    detail = (
        f"r12 mean {audit.mean12!r} spread {audit.spread12:.3e}, r34 mean "
        f"{audit.mean34!r} spread {audit.spread34:.3e}; phase degeneracy "
        f"max|eta-rho| = {audit.max_eta_rho_gap:.3e}"
    )
    _record("A06", "flat torus radii", ok, detail)
    assert ok, detail
    # the two phases coincide at this point; recorded, not merely implied
    assert audit.max_eta_rho_gap < 1e-12


def test_a07_dehn_identity_and_composition():
    params = TorusParameters(lattice=Lattice(math.pi, 1.0), n=1)
    a_values = [0.1, 0.2, 0.3, 0.4, 0.5]
    identity = dehn_invariance_check(params, DehnTwist(1, 1), a_values)
    composed = DehnTwist(3, 5).compose(DehnTwist(7, 2))
    seq = dehn_twist(dehn_twist(params, DehnTwist(2, 2)), DehnTwist(3, 3))
    joint = dehn_twist(params, DehnTwist(2, 2).compose(DehnTwist(3, 3)))
    moved = dehn_invariance_check(params, DehnTwist(2, 1), a_values)
    ok = (
        identity.max_printed == 0.0
        and identity.max_direct == 0.0
        and (composed.p, composed.q) == (21, 10)
        and seq.lattice == joint.lattice
        and moved.max_printed > 0.0
    )
    detail = (
        f"identity twist moves nothing ({identity.max_printed!r}); "
        f"composition lands on (21, 10); sequential and composed lattices "
        f"agree exactly; (2,1) moves the printed channel by "
        f"{moved.max_printed:.6g}"
    )
    _record("A07", "dehn identity and composition", ok, detail)
    assert ok, detail


def test_a08_reality_branch_scan():
    params = TorusParameters(lattice=Lattice(math.pi, 1.0), n=1)
    fine_a = np.linspace(-2.0, 2.0, 1991)
    fine_b = np.linspace(-2.0, 2.0, 1991)
    coarse_a = fine_a[::10]
    coarse_b = fine_b[::10]
    assert coarse_a.size == 200
    coarse = reality_audit(params, coarse_a, coarse_b)
    fine = reality_audit(params, fine_a, fine_b)
    nested = bool(
        np.array_equal(fine.zero_mask[::10, ::10], coarse.zero_mask)
    )
    kappa = params.kappa
    r = params.lattice.ratio
    aa, bb = np.meshgrid(coarse_a, coarse_b, indexing="ij")
    oracle = np.abs((kappa - 2.0 * aa) * (aa * r + bb)) <= 1e-10
    matches_oracle = bool(np.array_equal(coarse.zero_mask, oracle))
    ok = (
        nested
        and matches_oracle
        and coarse.branch_minus_max < 1e-10
        and coarse.branch_plus_max > 0.0
    )
    detail = (
        f"zero locus nested in 10x oracle: {nested}; factored-form oracle "
        f"match: {matches_oracle}; branch maxima plus {coarse.branch_plus_max:.6g} "
        f"/ minus {coarse.branch_minus_max:.3e}"
    )
    _record("A08", "reality branch scan", ok, detail)
    assert ok, detail


def test_a09_metric_polynomial_documented_discrepancy():
    report = run_audit(default_parameters())
    entry = report.entry("metric_polynomial_comparison")
    rows = entry["detail"]["rows"]
    fields_ok = len(rows) == 10 and all(
        set(("a", "direct", "printed", "discrepancy")) <= set(row) for row in rows
    )
    # a documented comparison: flagged for reading, no equality verdict
    ok = fields_ok and entry["verdict"] == "flag" and entry["tolerance"] is None
    detail = (
        f"{len(rows)} rows, verdict {entry['verdict']!r}, max tabulated "
        f"discrepancy {max(row['discrepancy'] for row in rows):.6g}"
    )
    _record("A09", "metric polynomial documented discrepancy", ok, detail)
    assert ok, detail


def test_a10_mesh_and_format_determinism(tmp_path):
    first = tmp_path / "m1.obj"
    second = tmp_path / "m2.obj"
    argv = ["mesh", "--grid", "16x16", "--project", "123"]
    assert cli_main(argv + ["--out", str(first)]) == 0
    assert cli_main(argv + ["--out", str(second)]) == 0
    byte_identical = first.read_bytes() == second.read_bytes()

    sol = build_solution(default_parameters())
    mesh = build_mesh(sol, SamplingGrid(16, 16, sol.params.lattice))
    v = len(mesh.vertices)
    f = len(mesh.faces)
    e = count_unique_edges(mesh)

    report_path = tmp_path / "audit.json"
    assert cli_main(["audit", "--out", str(report_path)]) == 0
    data = json.loads(report_path.read_text())
    validate_report(data)

    ok = byte_identical and v == 256 and f == 256 and v - e + f == 0
    detail = (
        f"byte-identical reruns: {byte_identical}; V={v} E={e} F={f} "
        f"(V-E+F={v - e + f}); audit schema valid"
    )
    _record("A10", "mesh and format determinism", ok, detail)
    assert ok, detail
