"""Exponential spinor components and pointwise audits of the Dirac-type
system underlying the Weierstrass-style immersion data.

A component is  amplitude * exp(i (kvec z + hvec zbar))  with complex wave
vectors, so translation by any lattice vector multiplies it by a constant.
Two components (psi, phi) form a doublet; the Dirac-type system couples them
through a potential p and comes in two index conventions, selected per call:

    convention "A":  d_z phi  = p phi,   d_zbar phi = -p psi
    convention "B":  d_z psi  = p phi,   d_zbar phi = -p psi

`dirac_residual` returns the defect of both equations and never asserts that
either vanishes.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .wirtinger import DEFAULT_FD_STEP, wirtinger_dz, wirtinger_dzbar

# exp() overflows doubles near 709; components refuse exponents whose
# imaginary part exceeds this in magnitude (evanescent growth/decay).
EXPONENT_IMAG_LIMIT = 700.0

DIRAC_CONVENTIONS = ("A", "B")


class ExponentOverflowError(OverflowError):
    """Evanescent exponential out of double-precision range."""


@dataclass(frozen=True)
class SpinorComponent:
    """amplitude * exp(i (kvec z + hvec zbar))."""

    amplitude: complex
    kvec: complex
    hvec: complex

    def exponent(self, z: complex) -> complex:
        z = complex(z)
        return self.kvec * z + self.hvec * z.conjugate()

    def __call__(self, z: complex) -> complex:
        return eval_component(self, z)

    def derivative_dz(self, z: complex) -> complex:
        """Analytic d_z: the exponent is linear, so d_z = i * kvec * value."""
        return 1j * self.kvec * eval_component(self, z)

    def derivative_dzbar(self, z: complex) -> complex:
        return 1j * self.hvec * eval_component(self, z)

    def shift_ratio(self, gamma: complex) -> complex:
        """value(z + gamma) / value(z), independent of z."""
        gamma = complex(gamma)
        w = self.kvec * gamma + self.hvec * gamma.conjugate()
        if abs(w.imag) > EXPONENT_IMAG_LIMIT:
            raise ExponentOverflowError(
                f"shift exponent imaginary part {w.imag!r} beyond "
                f"+/-{EXPONENT_IMAG_LIMIT}"
            )
        return cmath.exp(1j * w)


@dataclass(frozen=True)
class Doublet:
    """Spinor pair (psi, phi) carrying one family index (1 or 2)."""

    psi: SpinorComponent
    phi: SpinorComponent
    index: int = 1

    def __post_init__(self) -> None:
        if self.index not in (1, 2):
            raise ValueError("doublet index must be 1 or 2")


@dataclass(frozen=True)
class PotentialSample:
    """Squared potential candidate and the equal-product defect."""

    p_squared: complex  # k1 * h1
    mismatch: complex  # k1 * h1 - k2 * h2


@dataclass(frozen=True)
class MetricSample:
    """Conformal factor data u1 u2 at one point."""

    u1: float
    u2: float
    density: float


@dataclass(frozen=True)
class PeriodicityReport:
    """Shift multiplier of a component against the expected sign."""

    ratio: complex
    expected_sign: float
    deviation: float  # max |ratio - expected_sign| over the samples
    spread: float  # max |ratio_i - ratio_0|; ~0 for exponential components


def eval_component(component: SpinorComponent, z: complex) -> complex:
    """Evaluate a component, guarding against exp() overflow."""
    w = component.exponent(z)
    if abs(w.imag) > EXPONENT_IMAG_LIMIT:
        raise ExponentOverflowError(
            f"exponent imaginary part {w.imag!r} at z={z!r} beyond "
            f"+/-{EXPONENT_IMAG_LIMIT}"
        )
    return complex(component.amplitude) * cmath.exp(1j * w)


def dirac_residual(
    doublet: Doublet,
    p: Callable[[complex], complex] | complex,
    z: complex,
    convention: str = "B",
    h: float = DEFAULT_FD_STEP,
    derivative: str = "analytic",
) -> tuple[complex, complex]:
    """Defect of the Dirac-type pair at z under the chosen convention.

    Returns (first, second) where

        convention "A": (d_z phi - p phi,  d_zbar phi + p psi)
        convention "B": (d_z psi - p phi,  d_zbar phi + p psi)

    Derivatives are analytic by default; derivative="finite-difference"
    reroutes through the Wirtinger stencils as a cross-check.
    """
    if convention not in DIRAC_CONVENTIONS:
        raise ValueError(f"convention must be one of {DIRAC_CONVENTIONS}")
    if derivative not in ("analytic", "finite-difference"):
        raise ValueError("derivative must be 'analytic' or 'finite-difference'")
    z = complex(z)
    pz = complex(p(z)) if callable(p) else complex(p)
    psi, phi = doublet.psi, doublet.phi
    if derivative == "analytic":
        dz_first = (phi if convention == "A" else psi).derivative_dz(z)
        dzbar_phi = phi.derivative_dzbar(z)
    else:
        src = phi if convention == "A" else psi
        dz_first = wirtinger_dz(lambda w: eval_component(src, w), z, h)
        dzbar_phi = wirtinger_dzbar(lambda w: eval_component(phi, w), z, h)
    first = dz_first - pz * eval_component(phi, z)
    second = dzbar_phi + pz * eval_component(psi, z)
    return first, second


def potential_condition(kvecs) -> PotentialSample:
    """p^2 = k1 h1 candidate and its mismatch against k2 h2.

    Accepts any object with k1, h1, k2, h2 attributes.  The mismatch being
    nonzero means the two doublets do not share a squared potential; it is
    reported, not rejected.
    """
    p2 = complex(kvecs.k1) * complex(kvecs.h1)
    return PotentialSample(p_squared=p2, mismatch=p2 - complex(kvecs.k2) * complex(kvecs.h2))


def metric_density(d1: Doublet, d2: Doublet, z: complex) -> MetricSample:
    """u_alpha = |psi_alpha|^2 + |phi_alpha|^2 and the product u1 u2."""
    u1 = abs(eval_component(d1.psi, z)) ** 2 + abs(eval_component(d1.phi, z)) ** 2
    u2 = abs(eval_component(d2.psi, z)) ** 2 + abs(eval_component(d2.phi, z)) ** 2
    return MetricSample(u1=u1, u2=u2, density=u1 * u2)


def periodicity_check(
    component: SpinorComponent,
    lattice,
    n: int,
    z_samples: Sequence[complex] | Iterable[complex],
) -> PeriodicityReport:
    """Measure value(z + gamma) / value(z) against the sign (-1)^n.

    `lattice` may be anything with a .gamma attribute, or a bare complex
    shift.  The deviation is max |ratio - (-1)^n| over the samples; for an
    exponential component the ratio is constant, so the spread field doubles
    as a self-consistency metric.
    """
    gamma = getattr(lattice, "gamma", None)
    if gamma is None:
        gamma = complex(lattice)
    if complex(component.amplitude) == 0:
        raise ValueError("periodicity ratio undefined for zero amplitude")
    expected = float((-1) ** int(n))
    ratios = []
    for z in z_samples:
        base = eval_component(component, z)
        shifted = eval_component(component, complex(z) + gamma)
        ratios.append(shifted / base)
    if not ratios:
        raise ValueError("periodicity_check needs at least one sample point")
    deviation = max(abs(r - expected) for r in ratios)
    spread = max(abs(r - ratios[0]) for r in ratios)
    return PeriodicityReport(
        ratio=ratios[0], expected_sign=expected, deviation=deviation, spread=spread
    )
