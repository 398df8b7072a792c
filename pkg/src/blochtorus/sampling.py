"""Fundamental-domain sampling and torus meshing.

Grids cover the cell [0, lambda1) x [0, lambda2) with n_u x n_v corner
representatives in u-major row order.  For lambda2 = 0 the v direction has
no span of its own; a unit imaginary span is substituted and flagged so the
degenerate lattice can still be surveyed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .immersion import closed_form_coordinates
from .spinor import ExponentOverflowError, metric_density
from .torus import Lattice, TorusSolution

PROJECTION_CHOICES = ("123", "124", "134", "234")


@dataclass(frozen=True)
class SamplingGrid:
    """n_u x n_v corner representatives of the fundamental cell."""

    n_u: int
    n_v: int
    lattice: Lattice

    def __post_init__(self) -> None:
        if int(self.n_u) != self.n_u or int(self.n_v) != self.n_v:
            raise ValueError("grid counts must be integers")
        if self.n_u < 2 or self.n_v < 2:
            raise ValueError("grid needs at least 2 points per direction")
        object.__setattr__(self, "n_u", int(self.n_u))
        object.__setattr__(self, "n_v", int(self.n_v))

    @property
    def unit_span_fallback(self) -> bool:
        """True when lambda2 = 0 forced the substitute imaginary span."""
        return self.lattice.lambda2 == 0.0

    @property
    def v_span(self) -> complex:
        if self.unit_span_fallback:
            return 1j
        return 1j * self.lattice.lambda2

    def point(self, i: int, j: int) -> complex:
        return (i / self.n_u) * self.lattice.lambda1 + (j / self.n_v) * self.v_span

    def points(self) -> list[complex]:
        return [self.point(i, j) for i in range(self.n_u) for j in range(self.n_v)]

    def __iter__(self) -> Iterator[complex]:
        return iter(self.points())


@dataclass(frozen=True)
class SampleRow:
    """One surveyed grid point; overflow keeps the row, with NaN data."""

    i: int
    j: int
    z: complex
    x1: float
    x2: float
    x3: float
    x4: float
    u1: float
    u2: float
    density: float
    flag: str  # "ok" or "overflow"


@dataclass(frozen=True)
class SurfaceTable:
    grid: SamplingGrid
    rows: tuple[SampleRow, ...]
    offset_free: bool

    @property
    def overflow_count(self) -> int:
        return sum(1 for r in self.rows if r.flag == "overflow")


def sample_surface(
    sol: TorusSolution, grid: SamplingGrid, offset_free: bool = False
) -> SurfaceTable:
    """Coordinates and metric factors over the grid, u-major order."""
    rows = []
    nan = float("nan")
    for i in range(grid.n_u):
        for j in range(grid.n_v):
            z = grid.point(i, j)
            try:
                pt = closed_form_coordinates(sol, z, offset_free=offset_free)
                ms = metric_density(sol.doublet1, sol.doublet2, z)
            except ExponentOverflowError:
                rows.append(
                    SampleRow(i, j, z, nan, nan, nan, nan, nan, nan, nan, "overflow")
                )
                continue
            rows.append(
                SampleRow(
                    i, j, z, pt.x1, pt.x2, pt.x3, pt.x4, ms.u1, ms.u2, ms.density, "ok"
                )
            )
    return SurfaceTable(grid=grid, rows=tuple(rows), offset_free=offset_free)


def parse_projection(spec: str, size: int) -> tuple[int, ...]:
    """Validate a projection such as "123": distinct 1-based coordinate picks."""
    text = str(spec).strip()
    if len(text) < size:
        raise ValueError(f"projection '{spec}' needs at least {size} indices")
    picks = []
    for ch in text[:size]:
        if ch not in "1234":
            raise ValueError(f"projection index '{ch}' out of range 1..4")
        idx = int(ch)
        if idx in picks:
            raise ValueError(f"projection '{spec}' repeats index {idx}")
        picks.append(idx)
    return tuple(picks)


@dataclass(frozen=True)
class MeshData:
    """Torus quad mesh over the fundamental cell.

    vertices: n_u * n_v projected points, u-major.
    faces: quads as 0-based vertex index tuples, wrapping around both
    directions, face count n_u * n_v.
    """

    n_u: int
    n_v: int
    projection: tuple[int, ...]
    vertices: tuple[tuple[float, ...], ...]
    faces: tuple[tuple[int, int, int, int], ...]


def build_mesh(
    sol: TorusSolution,
    grid: SamplingGrid,
    projection: str = "123",
    offset_free: bool = False,
) -> MeshData:
    """Project sampled coordinates and stitch wraparound quads."""
    picks = parse_projection(projection, 3)
    verts = []
    for i in range(grid.n_u):
        for j in range(grid.n_v):
            pt = closed_form_coordinates(sol, grid.point(i, j), offset_free=offset_free)
            verts.append(pt.project(picks))
    faces = []
    for i in range(grid.n_u):
        for j in range(grid.n_v):
            i2 = (i + 1) % grid.n_u
            j2 = (j + 1) % grid.n_v
            faces.append(
                (
                    i * grid.n_v + j,
                    i2 * grid.n_v + j,
                    i2 * grid.n_v + j2,
                    i * grid.n_v + j2,
                )
            )
    return MeshData(
        n_u=grid.n_u,
        n_v=grid.n_v,
        projection=picks,
        vertices=tuple(verts),
        faces=tuple(faces),
    )


def count_unique_edges(mesh: MeshData) -> int:
    """Undirected edge count by face traversal (Euler bookkeeping)."""
    edges = set()
    for face in mesh.faces:
        m = len(face)
        for idx in range(m):
            a, b = face[idx], face[(idx + 1) % m]
            edges.add((a, b) if a < b else (b, a))
    return len(edges)
