"""Weaving frames in finite-dimensional Krein spaces.

Frame bounds, weaving verdicts over all subsets, J-frame / J-weaving tests
and a Monte Carlo study of reconstruction under random coefficient erasure.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .krein import (  # noqa: F401
    DEFAULT_TOL,
    KreinSpace,
    Tolerances,
    hermitian_eig,
    indefinite_inner,
    j_apply,
    j_inner,
    j_norm,
    operator_norm,
)
from .frames import (  # noqa: F401
    FrameBounds,
    FrameFamily,
    analysis_coefficients,
    frame_bounds,
    frame_operator,
    gramian,
    is_frame,
)
from .weaving import (  # noqa: F401
    SubsetSpec,
    WeavingReport,
    check_equivalences,
    inverse_operator_weaving_check,
    operator_lower_bound_check,
    perturbation_weaving_check,
    projection_characterization_check,
    universal_bounds,
    weave,
)
from .jframes import (  # noqa: F401
    is_j_frame,
    is_j_weaving,
    sign_partition,
    two_sided_bounds,
    two_sided_sweep,
    uniformly_definite,
)
from .erasure import (  # noqa: F401
    ErasureConfig,
    ErasureReport,
    error_operator,
    erasure_trial,
    monte_carlo_bound,
    uniform_tight_frame,
)
