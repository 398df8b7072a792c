"""Torus family: lattice data, wave-vector construction, solution assembly,
and the family-level audits (consistency conditions, amplitude conditions,
reality of the squared potential, metric polynomial, Dehn twists).

Construction
------------
Given a lattice with periods Lambda1 (real direction) and Lambda2 (imaginary
direction), an integer n, and real parameters a, b, set

    kappa = n pi / Lambda1,   r = Lambda2 / Lambda1,

    k1 = a + i b
    h1 = (kappa - a) + i ((kappa - 2a) r - b)
    k2 = kappa/2 + i (kappa/2 - a) r
    h2 = (a - kappa/2) + i (a + kappa/2) r

and amplitudes A1 = C, B1 = -C, A2 = 2 (k1 + k2) / C, B2 = 2 (h1 + h2) / C.
Doublet 2's phi normally shares the (k2, h2) exponent; strict_print switches
its z coefficient to k1 (the alternative verbatim reading).  All downstream
claims about these solutions are measured, not assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .spinor import Doublet, SpinorComponent

REALITY_BRANCHES = ("plus", "minus", "free")

# Relative tolerance used only for advisory flagging (a ~ kappa/2 etc.).
_FLAG_TOL = 1e-12


@dataclass(frozen=True)
class Lattice:
    """Rank-2 period data: gamma = lambda1 + i lambda2."""

    lambda1: float
    lambda2: float

    def __post_init__(self) -> None:
        l1 = float(self.lambda1)
        l2 = float(self.lambda2)
        if not (math.isfinite(l1) and l1 > 0):
            raise ValueError("lambda1 must be finite and positive")
        if not math.isfinite(l2):
            raise ValueError("lambda2 must be finite")
        object.__setattr__(self, "lambda1", l1)
        object.__setattr__(self, "lambda2", l2)

    @property
    def gamma(self) -> complex:
        return complex(self.lambda1, self.lambda2)

    @property
    def ratio(self) -> float:
        return self.lambda2 / self.lambda1


@dataclass(frozen=True)
class TorusParameters:
    """Inputs for one member of the solution family."""

    lattice: Lattice
    n: int = 1
    a: float = 0.0
    b: float = 0.0
    c: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        if int(self.n) != self.n:
            raise ValueError("n must be an integer")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        c = complex(self.c)
        if c == 0:
            raise ValueError("normalization constant c must be nonzero")
        object.__setattr__(self, "c", c)

    @property
    def kappa(self) -> float:
        return self.n * math.pi / self.lattice.lambda1

    def flags(self) -> tuple[str, ...]:
        """Advisory conditions: degenerate, but not rejected."""
        out = []
        if self.n == 0:
            out.append("degenerate_n_zero")
        if abs(self.a - self.kappa / 2.0) <= _FLAG_TOL * max(1.0, abs(self.kappa)):
            out.append("a_equals_half_kappa")
        if self.c.imag != 0.0:
            out.append("complex_normalization")
        return tuple(out)


def default_parameters() -> TorusParameters:
    """The anchor configuration: lambda1 = pi, lambda2 = 0, n = 1, a = b = 0."""
    return TorusParameters(lattice=Lattice(math.pi, 0.0), n=1, a=0.0, b=0.0, c=1.0 + 0.0j)


@dataclass(frozen=True)
class WaveVectorSet:
    k1: complex
    h1: complex
    k2: complex
    h2: complex


@dataclass(frozen=True)
class TorusSolution:
    """Assembled doublets plus provenance-free bookkeeping flags."""

    params: TorusParameters
    wave_vectors: WaveVectorSet
    doublet1: Doublet
    doublet2: Doublet
    flags: tuple[str, ...] = ()
    strict_print: bool = False


@dataclass(frozen=True)
class DehnTwist:
    """Integer rescale (lambda1, lambda2) -> (p lambda1, q lambda2)."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if int(self.p) != self.p or int(self.q) != self.q:
            raise ValueError("twist factors must be integers")
        if self.p < 1 or self.q < 1:
            raise ValueError("twist factors must be >= 1")
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "q", int(self.q))

    @property
    def coprime(self) -> bool:
        return math.gcd(self.p, self.q) == 1

    def compose(self, other: "DehnTwist") -> "DehnTwist":
        """Composition acts multiplicatively on the integer pair (exact)."""
        return DehnTwist(self.p * other.p, self.q * other.q)


def build_wave_vectors(params: TorusParameters) -> WaveVectorSet:
    """Wave vectors (k1, h1, k2, h2) for the given parameters."""
    kappa = params.kappa
    r = params.lattice.ratio
    a, b = params.a, params.b
    k1 = complex(a, b)
    h1 = complex(kappa - a, (kappa - 2.0 * a) * r - b)
    k2 = complex(kappa / 2.0, (kappa / 2.0 - a) * r)
    h2 = complex(a - kappa / 2.0, (a + kappa / 2.0) * r)
    return WaveVectorSet(k1=k1, h1=h1, k2=k2, h2=h2)


def build_solution(params: TorusParameters, strict_print: bool = False) -> TorusSolution:
    """Assemble the two doublets from the wave vectors and amplitudes.

    Degenerate amplitudes (k1 + k2 = 0 or h1 + h2 = 0) are flagged, not
    rejected; they collapse one circle factor of the image.
    """
    wvs = build_wave_vectors(params)
    c = params.c
    a1 = c
    b1 = -c
    a2 = 2.0 * (wvs.k1 + wvs.k2) / c
    b2 = 2.0 * (wvs.h1 + wvs.h2) / c
    phi2_kvec = wvs.k1 if strict_print else wvs.k2
    doublet1 = Doublet(
        psi=SpinorComponent(amplitude=b1, kvec=wvs.k1, hvec=wvs.h1),
        phi=SpinorComponent(amplitude=a1, kvec=wvs.k1, hvec=wvs.h1),
        index=1,
    )
    doublet2 = Doublet(
        psi=SpinorComponent(amplitude=b2, kvec=wvs.k2, hvec=wvs.h2),
        phi=SpinorComponent(amplitude=a2, kvec=phi2_kvec, hvec=wvs.h2),
        index=2,
    )
    flags = list(params.flags())
    if a2 == 0:
        flags.append("degenerate_amplitude_phi2")
    if b2 == 0:
        flags.append("degenerate_amplitude_psi2")
    if strict_print:
        flags.append("strict_print_exponent")
    return TorusSolution(
        params=params,
        wave_vectors=wvs,
        doublet1=doublet1,
        doublet2=doublet2,
        flags=tuple(flags),
        strict_print=strict_print,
    )


def consistency_residual(wvs: WaveVectorSet) -> tuple[complex, complex]:
    """Defect of the linking conditions between conjugated wave vectors:

        conj(k1) - h2 = h1 + h2      and      h1 - conj(k2) = conj(k1 + k2).
    """
    first = wvs.k1.conjugate() - wvs.h2 - (wvs.h1 + wvs.h2)
    second = wvs.h1 - wvs.k2.conjugate() - (wvs.k1.conjugate() + wvs.k2.conjugate())
    return first, second


def amplitude_conditions_residual(
    sol: TorusSolution,
) -> tuple[complex, complex, complex, complex]:
    """Defects of the four amplitude conditions.

    Products: A1 A2 = 2 (k1 + k2) and B1 B2 = -2 (h1 + h2); cross terms:
    -B1bar A2 / 2 = conj(h1) - k2 and -B2bar A1 / 2 = -(k1 - conj(h2)).
    The first two vanish by construction; the cross terms pick up the phase
    of c and the consistency defects, and are reported as measured.
    """
    wvs = sol.wave_vectors
    a1 = sol.doublet1.phi.amplitude
    b1 = sol.doublet1.psi.amplitude
    a2 = sol.doublet2.phi.amplitude
    b2 = sol.doublet2.psi.amplitude
    r1 = a1 * a2 - 2.0 * (wvs.k1 + wvs.k2)
    r2 = b1 * b2 + 2.0 * (wvs.h1 + wvs.h2)
    r3 = -0.5 * b1.conjugate() * a2 - (wvs.h1.conjugate() - wvs.k2)
    r4 = -0.5 * b2.conjugate() * a1 + (wvs.k1 - wvs.h2.conjugate())
    return r1, r2, r3, r4


@dataclass(frozen=True)
class RealityScan:
    """Im(k1 h1) over an (a, b) grid, with branch maxima and zero locus."""

    a_values: np.ndarray
    b_values: np.ndarray
    im_k1h1: np.ndarray  # shape (len(a_values), len(b_values))
    zero_mask: np.ndarray  # |Im| <= zero_tol
    zero_tol: float
    branch_plus_max: float  # max |Im| along b = +(lambda2/lambda1) a
    branch_minus_max: float  # max |Im| along b = -(lambda2/lambda1) a


def _im_k1h1_grid(params: TorusParameters, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    kappa = params.kappa
    r = params.lattice.ratio
    k1 = a + 1j * b
    h1 = (kappa - a) + 1j * ((kappa - 2.0 * a) * r - b)
    return (k1 * h1).imag


def reality_audit(
    params: TorusParameters,
    a_values: Sequence[float] | np.ndarray,
    b_values: Sequence[float] | np.ndarray,
    zero_tol: float = 1e-10,
) -> RealityScan:
    """Scan Im(k1 h1) over (a, b); report both candidate branch maxima.

    Neither branch b = +/-(lambda2/lambda1) a is declared correct: the scan
    records max |Im(k1 h1)| along each and flags the numeric zero locus of
    the full grid, leaving the verdict to the data.
    """
    a = np.asarray(a_values, dtype=float)
    b = np.asarray(b_values, dtype=float)
    if a.ndim != 1 or b.ndim != 1 or a.size == 0 or b.size == 0:
        raise ValueError("a_values and b_values must be nonempty 1-d arrays")
    aa, bb = np.meshgrid(a, b, indexing="ij")
    im = _im_k1h1_grid(params, aa, bb)
    r = params.lattice.ratio
    plus = _im_k1h1_grid(params, a, r * a)
    minus = _im_k1h1_grid(params, a, -r * a)
    return RealityScan(
        a_values=a,
        b_values=b,
        im_k1h1=im,
        zero_mask=np.abs(im) <= zero_tol,
        zero_tol=float(zero_tol),
        branch_plus_max=float(np.max(np.abs(plus))),
        branch_minus_max=float(np.max(np.abs(minus))),
    )


@dataclass(frozen=True)
class MetricComparison:
    """Direct product k1 h1 against the quoted closed-form polynomial."""

    a: float
    direct: complex
    printed: float
    discrepancy: float


def metric_polynomial(params: TorusParameters, a: float) -> MetricComparison:
    """Compare k1 h1 (with the params' own b) to the quoted polynomial

        r (1 - r^2) a + (3 r^2 - 1) a^2,   r = lambda2 / lambda1,

    evaluated verbatim.  The discrepancy is reported, never repaired; callers
    probing a reality branch should set b accordingly before the call.
    """
    a = float(a)
    wvs = build_wave_vectors(replace(params, a=a))
    direct = wvs.k1 * wvs.h1
    r = params.lattice.ratio
    printed = r * (1.0 - r * r) * a + (3.0 * r * r - 1.0) * a * a
    return MetricComparison(
        a=a, direct=direct, printed=printed, discrepancy=abs(direct - printed)
    )


def transformed_metric_polynomial(
    params: TorusParameters, p: int, q: int, a: float
) -> float:
    """The quoted twist-transformed polynomial, verbatim:

        (n pi / (p L1)) (1 - (q L2 / (p L1))^2) a + (3 (q L2 / (p L1))^2 - 1) a^2
    """
    l1 = params.lattice.lambda1
    l2 = params.lattice.lambda2
    lead = params.n * math.pi / (p * l1)
    rho = (q * l2) / (p * l1)
    return lead * (1.0 - rho * rho) * a + (3.0 * rho * rho - 1.0) * a * a


def dehn_twist(params: TorusParameters, twist: DehnTwist) -> TorusParameters:
    """Apply the integer rescale to the period lattice; everything else is kept."""
    lat = params.lattice
    return replace(
        params, lattice=Lattice(twist.p * lat.lambda1, twist.q * lat.lambda2)
    )


@dataclass(frozen=True)
class DehnInvarianceReport:
    """Squared-potential comparison across a twist, per channel.

    The "printed" channel evaluates the quoted transformed polynomial before
    (p = q = 1) and after the twist; the "direct" channel rebuilds k1 h1 with
    b = sign * (lattice ratio) * a on each side.  Two quoted invariance cases
    are evaluated as data: the trivial twist, and p = q with n set to p.
    """

    twist: DehnTwist
    a_values: tuple[float, ...]
    printed_before: tuple[float, ...]
    printed_after: tuple[float, ...]
    direct_before: tuple[complex, ...]
    direct_after: tuple[complex, ...]
    max_printed: float
    max_direct: float
    trivial_case_max: float  # (p, q) = (1, 1), printed channel
    trivial_case_holds: bool
    equal_pq_case_max: float  # p = q = twist.p with n = twist.p, printed channel
    equal_pq_case_holds: bool


def dehn_invariance_check(
    params: TorusParameters,
    twist: DehnTwist,
    a_values: Sequence[float],
    branch: str = "plus",
) -> DehnInvarianceReport:
    """Measure how the squared-potential polynomial moves under a twist."""
    if branch not in REALITY_BRANCHES:
        raise ValueError(f"branch must be one of {REALITY_BRANCHES}")
    avals = tuple(float(a) for a in a_values)
    if not avals:
        raise ValueError("need at least one a value")
    twisted = dehn_twist(params, twist).lattice
    p_before = []
    p_after = []
    d_before = []
    d_after = []
    for a in avals:
        p_before.append(transformed_metric_polynomial(params, 1, 1, a))
        p_after.append(transformed_metric_polynomial(params, twist.p, twist.q, a))
        d_before.append(_direct_p_squared(params, params.lattice, a, branch))
        d_after.append(_direct_p_squared(params, twisted, a, branch))
    max_printed = max(abs(x - y) for x, y in zip(p_after, p_before))
    max_direct = max(abs(x - y) for x, y in zip(d_after, d_before))

    trivial_max = max(
        abs(transformed_metric_polynomial(params, 1, 1, a) - pb)
        for a, pb in zip(avals, p_before)
    )
    n_as_p = replace(params, n=twist.p)
    equal_pq_max = max(
        abs(
            transformed_metric_polynomial(n_as_p, twist.p, twist.p, a)
            - transformed_metric_polynomial(n_as_p, 1, 1, a)
        )
        for a in avals
    )
    return DehnInvarianceReport(
        twist=twist,
        a_values=avals,
        printed_before=tuple(p_before),
        printed_after=tuple(p_after),
        direct_before=tuple(d_before),
        direct_after=tuple(d_after),
        max_printed=max_printed,
        max_direct=max_direct,
        trivial_case_max=trivial_max,
        trivial_case_holds=trivial_max == 0.0,
        equal_pq_case_max=equal_pq_max,
        equal_pq_case_holds=equal_pq_max <= 1e-12,
    )


def _direct_p_squared(
    params: TorusParameters, lattice: Lattice, a: float, branch: str
) -> complex:
    """k1 h1 rebuilt on the given lattice, with b following the branch."""
    if branch == "free":
        b = params.b
    else:
        sign = 1.0 if branch == "plus" else -1.0
        b = sign * lattice.ratio * a
    local = TorusParameters(lattice=lattice, n=params.n, a=a, b=b, c=params.c)
    wvs = build_wave_vectors(local)
    return wvs.k1 * wvs.h1
