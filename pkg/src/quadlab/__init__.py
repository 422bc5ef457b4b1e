"""quadlab: geometry, fibers, and embedding certificates for the
Ahern-Rudin map restricted to the complex affine quadric."""

__version__ = "0.1.0"

from .quadric import (  # noqa: F401
    QuadricPoint,
    RealFramePoint,
    Residuals,
    from_w_coords,
    residuals,
    retract,
    sample_mt,
    sample_sphere,
    to_w_coords,
)
from .armap import (  # noqa: F401
    Chart,
    ChartJacobian,
    degeneracy_points_at,
    degeneracy_threshold,
    eval_F,
    eval_f,
    jacobian_F,
    jacobian_restricted,
)
from .fibers import (  # noqa: F401
    FiberSet,
    discriminant,
    fiber,
    partner_norm_excess,
    triple_point,
)
from .certify import (  # noqa: F401
    Certificate,
    certify,
    cond1_minimum,
    eta_hat_lower_bound,
    lhs_perturbation_bound,
    optimize_epsilon,
    rhs_coefficient_bound,
)
from .arfamily import (  # noqa: F401
    Poly4,
    QQi,
    ar_operator,
    build_G,
    divisibility_check,
    f_generator,
    is_harmonic,
    laplacian,
    parse_poly,
    polarize,
    q_nonvanishing_check,
)
from .explore import (  # noqa: F401
    Optimizer,
    ScanConfig,
    ScanReport,
    Verdict,
    arfamily_scan,
    degeneracy_scan,
    empirical_t0,
    injectivity_scan,
    scan_grid,
)
