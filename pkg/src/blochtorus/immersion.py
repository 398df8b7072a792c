"""Coordinates of the immersed surface: closed-form phase channel and the
contour-integral channel, plus radii and realness audits.

The closed form uses the exponentials of the two phases

    eta = (k1 + k2) z + (h1 + h2) zbar
    rho = (k1 - conj(h2)) z + (h1 - conj(k2)) zbar

through u = exp(i eta), w = exp(i rho):

    x1 = 2 Re u,  x2 = -2 Im u,  x3 = -2 Im w,  x4 = 2 Re w

with the base-point values at z = 0 subtracted by default (offset_free
keeps the raw values).  The integral channel assembles the four quoted
one-forms from the doublet components verbatim, integrates them from the
base point, and reports each coordinate's imaginary residue as a quality
metric.  The two channels are compared, never assumed equal: two of the
quoted integrands are not closed forms for these solutions, and the audit
treats that disagreement as data.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Sequence

from .spinor import EXPONENT_IMAG_LIMIT, ExponentOverflowError, eval_component
from .torus import TorusSolution
from .wirtinger import IntegrationPath, OneForm, integrate_one_form

SECTIONS = ("half", "full")


@dataclass(frozen=True)
class PhaseState:
    eta: complex
    rho: complex
    u: complex  # exp(i eta)
    w: complex  # exp(i rho)


@dataclass(frozen=True)
class ImmersionPoint:
    x1: float
    x2: float
    x3: float
    x4: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x1, self.x2, self.x3, self.x4)

    def project(self, indices: Sequence[int]) -> tuple[float, ...]:
        """Pick coordinates by 1-based index, e.g. (1, 2, 3)."""
        coords = self.as_tuple()
        return tuple(coords[i - 1] for i in indices)


@dataclass(frozen=True)
class IntegratedCoordinates:
    """Integral-channel result: real parts, imaginary residues, quadrature errors."""

    point: ImmersionPoint
    imag_residue: tuple[float, float, float, float]
    error_estimate: tuple[float, float, float, float]


@dataclass(frozen=True)
class RadiiAudit:
    """Squared radii of the two coordinate pairs along the real section."""

    samples: tuple[tuple[float, float, float], ...]  # (t, r12, r34)
    mean12: float
    mean34: float
    spread12: float
    spread34: float
    max_im_eta: float
    max_im_rho: float
    max_eta_rho_gap: float  # max |eta - rho|; ~0 flags the degenerate pair


@dataclass(frozen=True)
class RewriteComparison:
    """Closed form against the quoted trigonometric rewrite on t = z + zbar."""

    rows: tuple[tuple[float, ...], ...]  # (t, |dx1|, |dx2|, |dx3|, |dx4|)
    max_diff: float
    max_imag: float  # largest imaginary part discarded by the rewrite


def _guarded_exp(phase: complex, label: str) -> complex:
    if abs(phase.imag) > EXPONENT_IMAG_LIMIT:
        raise ExponentOverflowError(
            f"{label} exponent imaginary part {phase.imag!r} beyond "
            f"+/-{EXPONENT_IMAG_LIMIT}"
        )
    return cmath.exp(1j * phase)


def phase_state(wvs, z: complex) -> PhaseState:
    """Evaluate the two phases and their exponentials at z.

    Accepts a wave-vector set directly, or anything carrying one under a
    wave_vectors attribute (a solution, typically).
    """
    z = complex(z)
    zb = z.conjugate()
    wvs = getattr(wvs, "wave_vectors", wvs)
    eta = (wvs.k1 + wvs.k2) * z + (wvs.h1 + wvs.h2) * zb
    rho = (wvs.k1 - wvs.h2.conjugate()) * z + (wvs.h1 - wvs.k2.conjugate()) * zb
    return PhaseState(
        eta=eta,
        rho=rho,
        u=_guarded_exp(eta, "eta"),
        w=_guarded_exp(rho, "rho"),
    )


def closed_form_coordinates(
    sol: TorusSolution, z: complex, offset_free: bool = False
) -> ImmersionPoint:
    """Closed-form coordinates; validity rests on the amplitude conditions,
    which the audit reports separately rather than this function asserting."""
    st = phase_state(sol, z)
    x1 = 2.0 * st.u.real
    x2 = -2.0 * st.u.imag
    x3 = -2.0 * st.w.imag
    x4 = 2.0 * st.w.real
    if not offset_free:
        base = phase_state(sol, 0.0)
        x1 -= 2.0 * base.u.real
        x2 -= -2.0 * base.u.imag
        x3 -= -2.0 * base.w.imag
        x4 -= 2.0 * base.w.real
    return ImmersionPoint(x1=x1, x2=x2, x3=x3, x4=x4)


def coordinate_one_forms(sol: TorusSolution) -> tuple[OneForm, OneForm, OneForm, OneForm]:
    """The four coordinate one-forms assembled verbatim from the components.

    x1: (i/2) [(ps1* ps2* + ph1 ph2) dz - (ps1 ps2 + ph1* ph2*) dzbar]
    x2: (1/2) [(ps1* ps2* - ph1 ph2) dz + (ps1 ps2 - ph1* ph2*) dzbar]
    x3: -(1/2) [(ps1* ps2 + ps2* ph1) dz + (ps1 ph2* + ph2 ph1*) dzbar]
    x4: -(i/2) [(ps1* ps2 - ps2* ph1) dz - (ps1 ph2* - ph2 ph1*) dzbar]

    (* = complex conjugate).  No symmetrization is applied; whether each is
    a closed form is measured downstream, not assumed.
    """
    ps1, ph1 = sol.doublet1.psi, sol.doublet1.phi
    ps2, ph2 = sol.doublet2.psi, sol.doublet2.phi

    def v(comp, z):
        return eval_component(comp, z)

    def vc(comp, z):
        return eval_component(comp, z).conjugate()

    form1 = OneForm(
        f=lambda z: 0.5j * (vc(ps1, z) * vc(ps2, z) + v(ph1, z) * v(ph2, z)),
        g=lambda z: -0.5j * (v(ps1, z) * v(ps2, z) + vc(ph1, z) * vc(ph2, z)),
    )
    form2 = OneForm(
        f=lambda z: 0.5 * (vc(ps1, z) * vc(ps2, z) - v(ph1, z) * v(ph2, z)),
        g=lambda z: 0.5 * (v(ps1, z) * v(ps2, z) - vc(ph1, z) * vc(ph2, z)),
    )
    form3 = OneForm(
        f=lambda z: -0.5 * (vc(ps1, z) * v(ps2, z) + vc(ps2, z) * v(ph1, z)),
        g=lambda z: -0.5 * (v(ps1, z) * vc(ph2, z) + v(ph2, z) * vc(ph1, z)),
    )
    form4 = OneForm(
        f=lambda z: -0.5j * (vc(ps1, z) * v(ps2, z) - vc(ps2, z) * v(ph1, z)),
        g=lambda z: 0.5j * (v(ps1, z) * vc(ph2, z) - v(ph2, z) * vc(ph1, z)),
    )
    return form1, form2, form3, form4


def integrated_coordinates(
    sol: TorusSolution,
    z: complex,
    tol: float = 1e-6,
    path: IntegrationPath | None = None,
    base: complex = 0.0,
) -> IntegratedCoordinates:
    """Integrate the four one-forms from the base point to z.

    The default path is the straight segment base -> z; a custom path must
    share those endpoints.  An IntegrationPath may be passed directly as z,
    in which case its own endpoints are used.  Real parts become the
    coordinates; imaginary parts are returned as the realness quality metric
    (a valid real immersion keeps them below ~10x the quadrature tolerance).
    """
    if isinstance(z, IntegrationPath):
        if path is not None:
            raise ValueError("pass the path once, not twice")
        path, z, base = z, z.end, z.start
    z = complex(z)
    base = complex(base)
    if path is None:
        if z == base:
            zero = ImmersionPoint(0.0, 0.0, 0.0, 0.0)
            return IntegratedCoordinates(zero, (0.0,) * 4, (0.0,) * 4)
        path = IntegrationPath((base, z))
    else:
        if path.start != base or path.end != z:
            raise ValueError("path endpoints must match base and z")
    coords = []
    residues = []
    errors = []
    for form in coordinate_one_forms(sol):
        value, err = integrate_one_form(form, path, tol=tol)
        coords.append(value.real)
        residues.append(abs(value.imag))
        errors.append(err)
    return IntegratedCoordinates(
        point=ImmersionPoint(*coords),
        imag_residue=tuple(residues),
        error_estimate=tuple(errors),
    )


def radii_audit(
    sol: TorusSolution,
    t_samples: Sequence[float],
    section: str = "half",
) -> RadiiAudit:
    """Sample x1^2 + x2^2 and x3^2 + x4^2 along the real section.

    section "half" puts z = t/2 so that t = z + zbar; section "full" uses
    z = t.  Offset-free coordinates are used, so a flat pair of circles of
    radius 2 shows up as both radii pinned at 4.
    """
    if section not in SECTIONS:
        raise ValueError(f"section must be one of {SECTIONS}")
    ts = [float(t) for t in t_samples]
    if not ts:
        raise ValueError("need at least one t sample")
    rows = []
    im_eta = 0.0
    im_rho = 0.0
    gap = 0.0
    for t in ts:
        z = t / 2.0 if section == "half" else complex(t)
        st = phase_state(sol, z)
        pt = closed_form_coordinates(sol, z, offset_free=True)
        r12 = pt.x1 * pt.x1 + pt.x2 * pt.x2
        r34 = pt.x3 * pt.x3 + pt.x4 * pt.x4
        rows.append((t, r12, r34))
        im_eta = max(im_eta, abs(st.eta.imag))
        im_rho = max(im_rho, abs(st.rho.imag))
        gap = max(gap, abs(st.eta - st.rho))
    r12s = [r[1] for r in rows]
    r34s = [r[2] for r in rows]
    return RadiiAudit(
        samples=tuple(rows),
        mean12=sum(r12s) / len(r12s),
        mean34=sum(r34s) / len(r34s),
        spread12=max(r12s) - min(r12s),
        spread34=max(r34s) - min(r34s),
        max_im_eta=im_eta,
        max_im_rho=im_rho,
        max_eta_rho_gap=gap,
    )


def paper_rewrite_comparison(
    sol: TorusSolution, t_samples: Sequence[float]
) -> RewriteComparison:
    """Closed form at z = t/2 against the quoted trigonometric rewrite

        x1 = 2 cos((k1+k2) t),  x2 = -2 sin((k1+k2) t),
        x3 = -2 sin((h1+h2) t), x4 = 2 cos((h1+h2) t),

    evaluated with complex arguments; real parts are compared and the
    discarded imaginary magnitude is reported.
    """
    wvs = sol.wave_vectors
    s12 = wvs.k1 + wvs.k2
    s34 = wvs.h1 + wvs.h2
    rows = []
    max_diff = 0.0
    max_imag = 0.0
    for t in t_samples:
        t = float(t)
        closed = closed_form_coordinates(sol, t / 2.0, offset_free=True)
        quoted = (
            2.0 * cmath.cos(s12 * t),
            -2.0 * cmath.sin(s12 * t),
            -2.0 * cmath.sin(s34 * t),
            2.0 * cmath.cos(s34 * t),
        )
        diffs = tuple(
            abs(c - q.real) for c, q in zip(closed.as_tuple(), quoted)
        )
        rows.append((t,) + diffs)
        max_diff = max(max_diff, *diffs)
        max_imag = max(max_imag, *(abs(q.imag) for q in quoted))
    if not rows:
        raise ValueError("need at least one t sample")
    return RewriteComparison(rows=tuple(rows), max_diff=max_diff, max_imag=max_imag)
