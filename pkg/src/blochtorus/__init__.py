"""Bloch-wave torus solutions of a Weierstrass-type inducing system in R^4,
with numeric audits for every claimed property.

The package builds doubly periodic two-component wave solutions on a rank-2
lattice, evaluates the induced coordinates and metric data, and measures
residuals: nothing downstream of the construction is taken on faith.
"""

from ._version import TOOL_NAME, TOOL_VERSION
from .exporters import (
    SAMPLE_CSV_HEADER,
    dumps_json,
    format_float,
    surface_csv_rows,
    write_csv,
    write_obj,
    write_surface_csv,
)
from .immersion import (
    ImmersionPoint,
    IntegratedCoordinates,
    PhaseState,
    RadiiAudit,
    RewriteComparison,
    closed_form_coordinates,
    coordinate_one_forms,
    integrated_coordinates,
    paper_rewrite_comparison,
    phase_state,
    radii_audit,
)
from .report import (
    AUDIT_SCHEMA,
    AuditReport,
    run_audit,
    validate_report,
)
from .sampling import (
    MeshData,
    SamplingGrid,
    SurfaceTable,
    build_mesh,
    count_unique_edges,
    parse_projection,
    sample_surface,
)
from .spinor import (
    Doublet,
    ExponentOverflowError,
    MetricSample,
    PeriodicityReport,
    PotentialSample,
    SpinorComponent,
    dirac_residual,
    eval_component,
    metric_density,
    periodicity_check,
    potential_condition,
)
from .torus import (
    DehnInvarianceReport,
    DehnTwist,
    Lattice,
    MetricComparison,
    RealityScan,
    TorusParameters,
    TorusSolution,
    WaveVectorSet,
    amplitude_conditions_residual,
    build_solution,
    build_wave_vectors,
    consistency_residual,
    default_parameters,
    dehn_invariance_check,
    dehn_twist,
    metric_polynomial,
    reality_audit,
    transformed_metric_polynomial,
)
from .wirtinger import (
    IntegrationPath,
    OneForm,
    QuadratureError,
    StencilDomainError,
    exactness_residual,
    integrate_one_form,
    wirtinger_dz,
    wirtinger_dzbar,
)

__version__ = TOOL_VERSION

__all__ = [
    "AUDIT_SCHEMA",
    "AuditReport",
    "DehnInvarianceReport",
    "DehnTwist",
    "Doublet",
    "ExponentOverflowError",
    "ImmersionPoint",
    "IntegratedCoordinates",
    "IntegrationPath",
    "Lattice",
    "MeshData",
    "MetricComparison",
    "MetricSample",
    "OneForm",
    "PeriodicityReport",
    "PhaseState",
    "PotentialSample",
    "QuadratureError",
    "RadiiAudit",
    "RealityScan",
    "RewriteComparison",
    "SAMPLE_CSV_HEADER",
    "SamplingGrid",
    "SpinorComponent",
    "StencilDomainError",
    "SurfaceTable",
    "TOOL_NAME",
    "TOOL_VERSION",
    "TorusParameters",
    "TorusSolution",
    "WaveVectorSet",
    "amplitude_conditions_residual",
    "build_mesh",
    "build_solution",
    "build_wave_vectors",
    "closed_form_coordinates",
    "consistency_residual",
    "coordinate_one_forms",
    "count_unique_edges",
    "default_parameters",
    "dehn_invariance_check",
    "dehn_twist",
    "dirac_residual",
    "dumps_json",
    "eval_component",
    "exactness_residual",
    "format_float",
    "integrate_one_form",
    "integrated_coordinates",
    "metric_density",
    "metric_polynomial",
    "paper_rewrite_comparison",
    "parse_projection",
    "periodicity_check",
    "phase_state",
    "potential_condition",
    "radii_audit",
    "reality_audit",
    "run_audit",
    "sample_surface",
    "surface_csv_rows",
    "transformed_metric_polynomial",
    "validate_report",
    "write_csv",
    "write_obj",
    "write_surface_csv",
    "wirtinger_dz",
    "wirtinger_dzbar",
]
