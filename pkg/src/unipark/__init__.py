"""Smooth parking feedback for the unicycle in polar coordinates.

Eleven steering laws from three design families (passivity, integrator
forwarding, backstepping), the bidirectional velocity law that decouples the
distance dynamics, strict and barrier Lyapunov certificates with analytic
gradients and closed-form decrease rates, composite-certificate construction,
eigenvalue assignment at the target, and a deterministic RK4 simulator with
a scenario CLI.
"""

from .controllers import (
    ControlInput,
    ControllerId,
    Gains,
    controller_space,
    heading_only,
    reverse_parking_wrap,
    steering_tilde,
    steering_total,
    velocity,
)
from .errors import (
    BarrierDomainError,
    ConfigError,
    DomainError,
    InfeasiblePolesError,
    SingularityError,
    TransformError,
    UniparkError,
)
from .kernels import half_tan, psi, sinc, sine_integral, wrap_angle
from .linearization import DesignFamily, PoleSpec, assign_gains, jacobian, jacobian_eigenvalues
from .lyapunov import (
    CompositeKind,
    CompositeOrder,
    LyapunovFn,
    RateKind,
    SteeringClf,
    composite,
    genova_nonstrict,
    logging_clf,
    steering_clf,
)
from .simulate import Scenario, Termination, Trajectory, integrate, integrate_batch, sweep
from .spaces import (
    CartesianState,
    IntegratorState,
    PolarState,
    StateSpaceId,
    barrier_terms_cartesian,
    cartesian_to_polar,
    metric,
    polar_to_cartesian,
    to_integrator,
    wrap_angles,
)

__version__ = "0.1.0"
