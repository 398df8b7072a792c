"""Complex-plane calculus: Wirtinger derivatives, contour integration of
one-forms along piecewise-linear paths, and exactness diagnostics.

Conventions
-----------
With z = x + iy,

    d_z    = (d_x - i d_y) / 2
    d_zbar = (d_x + i d_y) / 2

approximated by O(h^2) central differences on the 4-point stencil
z +/- h, z +/- ih.  A one-form  omega = f dz + g dzbar  is exact iff
d_zbar f == d_z g, in which case its path integral depends only on the
endpoints; `exactness_residual` measures the defect on a point set and
`integrate_one_form` evaluates the integral adaptively.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable, Iterable

# Default step for the finite-difference stencils.
DEFAULT_FD_STEP = 1e-5

# Hard cap on adaptive subdivision, per path segment.
SUBDIVISION_BUDGET = 2 ** 16


class StencilDomainError(ValueError):
    """A finite-difference stencil point evaluated to a non-finite value."""


class QuadratureError(RuntimeError):
    """Adaptive integration exhausted its subdivision budget.

    Carries the best estimate accumulated so far and a bound on its error,
    so callers can decide whether the partial answer is still usable.
    """

    def __init__(self, message: str, estimate: complex, error_bound: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


@dataclass(frozen=True)
class IntegrationPath:
    """Piecewise-linear path through the complex plane."""

    vertices: tuple[complex, ...]

    def __post_init__(self) -> None:
        verts = tuple(complex(v) for v in self.vertices)
        if len(verts) < 2:
            raise ValueError("a path needs at least two vertices")
        for u, v in zip(verts, verts[1:]):
            if u == v:
                raise ValueError("consecutive path vertices must differ")
        object.__setattr__(self, "vertices", verts)

    @property
    def start(self) -> complex:
        return self.vertices[0]

    @property
    def end(self) -> complex:
        return self.vertices[-1]

    def segments(self) -> list[tuple[complex, complex]]:
        return list(zip(self.vertices, self.vertices[1:]))

    def reversed(self) -> "IntegrationPath":
        return IntegrationPath(tuple(reversed(self.vertices)))


@dataclass(frozen=True)
class OneForm:
    """One-form f dz + g dzbar with complex coefficient functions."""

    f: Callable[[complex], complex]
    g: Callable[[complex], complex]


def _stencil(func: Callable[[complex], complex], z: complex, h: float):
    vals = (func(z + h), func(z - h), func(z + 1j * h), func(z - 1j * h))
    out = []
    for v in vals:
        v = complex(v)
        if not cmath.isfinite(v):
            raise StencilDomainError(
                f"non-finite value in derivative stencil near z={z!r}"
            )
        out.append(v)
    return out


def wirtinger_dz(
    func: Callable[[complex], complex], z: complex, h: float = DEFAULT_FD_STEP
) -> complex:
    """Numerical d_z via central differences at step h."""
    if not h > 0:
        raise ValueError("step h must be positive")
    fe, fw, fn, fs = _stencil(func, complex(z), h)
    dx = (fe - fw) / (2.0 * h)
    dy = (fn - fs) / (2.0 * h)
    return 0.5 * (dx - 1j * dy)


def wirtinger_dzbar(
    func: Callable[[complex], complex], z: complex, h: float = DEFAULT_FD_STEP
) -> complex:
    """Numerical d_zbar via central differences at step h."""
    if not h > 0:
        raise ValueError("step h must be positive")
    fe, fw, fn, fs = _stencil(func, complex(z), h)
    dx = (fe - fw) / (2.0 * h)
    dy = (fn - fs) / (2.0 * h)
    return 0.5 * (dx + 1j * dy)


def _segment_integral(
    omega: OneForm, z0: complex, z1: complex, tol: float
) -> tuple[complex, float, int]:
    """Adaptive Simpson integral of omega over the segment z0 -> z1.

    The pulled-back integrand is the complex function
        t |-> f(z(t)) dz + g(z(t)) dzbar,  z(t) = z0 + t (z1 - z0),
    and the coarse/fine Simpson pair supplies the local error estimate.
    Returns (value, error_estimate, leaf_count); raises QuadratureError with
    the best estimate attached once SUBDIVISION_BUDGET leaves are exceeded.
    """
    dz = z1 - z0
    dzb = dz.conjugate()

    def fn(t: float) -> complex:
        z = z0 + t * dz
        return complex(omega.f(z)) * dz + complex(omega.g(z)) * dzb

    def simpson(a: float, b: float, fa: complex, fm: complex, fb: complex) -> complex:
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    fa, fm, fb = fn(0.0), fn(0.5), fn(1.0)
    whole = simpson(0.0, 1.0, fa, fm, fb)
    # Stack entries: (a, b, fa, fm, fb, coarse_estimate, local_tol)
    stack = [(0.0, 1.0, fa, fm, fb, whole, max(tol, 1e-300))]
    total = 0.0 + 0.0j
    err_total = 0.0
    leaves = 0
    while stack:
        a, b, fa, fm, fb, coarse, ltol = stack.pop()
        m = 0.5 * (a + b)
        flm = fn(0.5 * (a + m))
        frm = fn(0.5 * (m + b))
        left = simpson(a, m, fa, flm, fm)
        right = simpson(m, b, fm, frm, fb)
        fine = left + right
        err = abs(fine - coarse) / 15.0
        if err <= ltol or (b - a) <= 1e-14:
            total += fine + (fine - coarse) / 15.0
            err_total += err
            leaves += 2
        else:
            leaves += 2
            if leaves > SUBDIVISION_BUDGET:
                # Best estimate: what is settled plus fine sums still pending.
                pending = fine + sum(entry[5] for entry in stack)
                bound = err_total + err + sum(abs(entry[5]) for entry in stack)
                raise QuadratureError(
                    f"subdivision budget {SUBDIVISION_BUDGET} exceeded on "
                    f"segment {z0!r} -> {z1!r}",
                    estimate=total + pending,
                    error_bound=bound,
                )
            half = 0.5 * ltol
            stack.append((a, m, fa, flm, fm, left, half))
            stack.append((m, b, fm, frm, fb, right, half))
    return total, err_total, leaves


def integrate_one_form(
    omega: OneForm, path: IntegrationPath, tol: float = 1e-9
) -> tuple[complex, float]:
    """Integrate f dz + g dzbar along a piecewise-linear path.

    Returns (value, error_estimate).  The tolerance is split evenly across
    segments; each segment is refined adaptively under a 2^16 leaf budget.
    """
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    segs = path.segments()
    seg_tol = tol / len(segs)
    value = 0.0 + 0.0j
    err = 0.0
    for z0, z1 in segs:
        v, e, _ = _segment_integral(omega, z0, z1, seg_tol)
        value += v
        err += e
    return value, err


def exactness_residual(
    omega: OneForm,
    points: Iterable[complex],
    h: float = DEFAULT_FD_STEP,
) -> float:
    """max |d_zbar f - d_z g| over the sample points (0 iff exact there)."""
    worst = 0.0
    seen = False
    for z in points:
        seen = True
        gap = abs(wirtinger_dzbar(omega.f, z, h) - wirtinger_dz(omega.g, z, h))
        if gap > worst:
            worst = gap
    if not seen:
        raise ValueError("exactness_residual needs at least one sample point")
    return worst
