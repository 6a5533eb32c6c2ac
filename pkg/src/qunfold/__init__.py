"""Monotone quantum metrics and relative g-entropies on the unfolded state space.

The unfolding space is ``U(H) x interior simplex``; a point ``(U, p)`` projects to
the faithful state ``U diag(p) U^dagger``.
"""

from .channels import CPTPChannel, apply_channel, depolarizing_channel, identity_channel, random_cptp, unitary_channel
from .gentropy import ConvexG, catalog_g, f_from_g, get_g, monotonicity_defect, relative_g_entropy
from .matcore import HermitianEig, eig_hermitian, frobenius_inner, matrix_function
from .petz import MonotoneF, catalog_f, check_f_symmetry, get_f, petz_metric
from .states import (
    DensityMatrix,
    ProbabilityVector,
    TangentVectorM,
    TangentVectorS,
    UnfoldedPoint,
    UnitaryMatrix,
    embed_diagonal,
    haar_unitary,
    make_rng,
    random_tangent_m,
    sample_simplex,
)
from .unfold import (
    SplitMetricValue,
    dequantize,
    fisher_rao,
    g_expansion_metric,
    project,
    pullback_metric,
    split_metric,
    tangent_project,
)

__version__ = "0.1.0"
