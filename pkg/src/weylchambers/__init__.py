"""Exact and Monte Carlo toolkit for the order cones of types A, B and D.

Exact integer triangles give the conic intrinsic volume tables; the face
lattice of the A and B chambers yields exact external angles; Euclidean
projection with face identification, and seeded simulations, verify
every distributional statement independently.
"""

from .chambers import (
    AngleDescriptor,
    Block,
    Chamber,
    FaceIndex,
    VolumeEstimate,
    dual_cone_description,
    enumerate_faces,
    external_angle_exact,
    internal_angle_closed_form,
    internal_angle_spec,
    normal_block_decomposition,
    reconstruct_volume,
)
from .projection import (
    Certificate,
    ProjectionResult,
    certificate,
    face_dimension_histogram,
    pava_decreasing,
    project,
    project_bruteforce,
)
from .simulation import (
    AngleEstimate,
    SignedPermutation,
    SimReport,
    bernoulli_sum_law,
    estimate_angle_B,
    estimate_angle_D,
    estimate_internal_angle,
    even_cycle_law,
    even_cycle_law_exhaustive,
    majorant_segment_law,
    z_test,
)
from .triangles import (
    IdentityReport,
    IntegerPolynomial,
    IntegerTriangle,
    VolumeRow,
    expand_defining_polynomial,
    intrinsic_volume_row,
    row_sum_law,
    triangle,
    verify_identity,
)

__all__ = [
    "AngleDescriptor",
    "AngleEstimate",
    "Block",
    "Certificate",
    "Chamber",
    "FaceIndex",
    "IdentityReport",
    "IntegerPolynomial",
    "IntegerTriangle",
    "ProjectionResult",
    "SignedPermutation",
    "SimReport",
    "VolumeEstimate",
    "VolumeRow",
    "bernoulli_sum_law",
    "certificate",
    "dual_cone_description",
    "enumerate_faces",
    "estimate_angle_B",
    "estimate_angle_D",
    "estimate_internal_angle",
    "even_cycle_law",
    "even_cycle_law_exhaustive",
    "expand_defining_polynomial",
    "external_angle_exact",
    "face_dimension_histogram",
    "internal_angle_closed_form",
    "internal_angle_spec",
    "intrinsic_volume_row",
    "majorant_segment_law",
    "normal_block_decomposition",
    "pava_decreasing",
    "project",
    "project_bruteforce",
    "reconstruct_volume",
    "row_sum_law",
    "triangle",
    "verify_identity",
    "z_test",
]

__version__ = "0.1.0"
