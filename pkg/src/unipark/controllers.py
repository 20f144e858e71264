"""The forward-velocity law, the steering split, and all steering families.

Velocity module
---------------
The forward velocity is always ``v = k1 * rho * cos(gamma)`` (equivalently
``-k1*(x*cos(theta) + y*sin(theta))`` in Cartesian form).  It is bidirectional,
never discontinuous away from the origin, and decouples the distance:
``rho' = -k1 * rho * cos(gamma)^2``.  On ``rho > 0`` the remaining steering
subsystem is

    delta' = (k1/2) * sin(2*gamma)
    gamma' = (k1/2) * sin(2*gamma) - omega,

independent of rho, so steering is designed separately.  Most laws use the
cancellation split ``omega = (k1/2)*sin(2*gamma) + omega_tilde`` and design
``omega_tilde(delta, gamma)`` for ``gamma' = -omega_tilde``.

Steering families (Table-style overview; z and zeta are defined per law):

    ==============  =====  ==========================================
    id              space  omega_tilde (or total omega where noted)
    ==============  =====  ==========================================
    genova          S      k2*g + k3*sinc(2g)*d
    bolsa           S1     k2*sin(g) + k3*cos(g)/(1+tan(g/2)^2)^2 * d
    bopa            S2     k2*g + 2*k3*sinc(2g)*(1+tan(d/2)^2)*tan(d/2)
    bagal           S3     k2*sin(g) + 2*k3*cos(g)/(1+tan(g/2)^2)^2
                             * (1+tan(d/2)^2)*tan(d/2)
    glofo           S      k2*g + k3*sinc(2g)*zeta,
                             zeta = d + (k1/2k2)*Si(2g)
    bofo            S1     k2*sin(g) + k3*cos(g)/(1+tan(g/2)^2)^2 * zeta,
                             zeta = d + (k1/k2)*sin(g)
    globa           S      k4*z + (k1/2)*k2*sin(2g)/(1+4k2^2 d^2)
                             + k3*psi(z,g)*d,  z = g + arctan(2k2*d)/2
    barfli          S2     k4*z + (k1/2)*k2*(1+tan(d/2)^2)*sin(2g)
                             / (1+16k2^2 tan(d/2)^2)
                             + 2*k3*psi(z,g)*(1+tan(d/2)^2)*tan(d/2),
                             z = g + arctan(4k2*tan(d/2))/2
    globa-interp    S      total omega = (k4 + (k3/2k2)*C^2/N + k1*|psi|*B)*z
    globa-cons      S      total omega = (k4 + k5 + (k3/k2)*(1+4k2^2 d^2))*z
    libac           S2     total omega = k3*z + (3k1/4)*sin(2g)
                             + k2*tan(d/2)/(1+cos d)*psi(z,g),  z = g + d/2
    ==============  =====  ==========================================

``globa-interp``, ``globa-cons`` and ``libac`` are stated directly as the
total steering input; for uniformity their ``steering_tilde`` is defined as
``omega - (k1/2)*sin(2*gamma)`` so that ``gamma' = -omega_tilde`` holds for
every id.

The general passivity template dividing by the derivative of the barrier
storage is singular at gamma = 0 and is deliberately not exposed; only its
four concrete closed forms above (genova, bolsa, bopa, bagal) are.

Gain conventions: all gains are positive.  For the passivity laws the
strictness condition ``k1*k3 >= k2^2`` is reported as a flag, not enforced,
so the non-strict regime stays explorable.  ``q = sqrt(k1/k3)`` and the
conservative-backstepping gain ``k5 = k1*(1+k2)*(1 + k1*k2*(1+k2)/k3)`` are
derived quantities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .errors import BarrierDomainError, DomainError, SingularityError
from .kernels import psi, sinc, sine_integral
from .spaces import PolarState, StateSpaceId, check_in_space

__all__ = [
    "Gains",
    "ControllerId",
    "ControlInput",
    "RETURNS_TOTAL_OMEGA",
    "controller_space",
    "all_controller_ids",
    "velocity",
    "velocity_cartesian",
    "steering_tilde",
    "steering_total",
    "make_steering_tilde",
    "steering_tilde_many",
    "heading_only",
    "reverse_parking_wrap",
    "backstep_z",
    "forward_zeta",
    "closed_loop_field",
    "open_loop_field",
]


@dataclass(frozen=True)
class Gains:
    """Feedback gains; k1 drives velocity, k2..k4 steering, k0 heading-only.

    k5 is derived from (k1, k2, k3) for the conservative backstepping law.
    """

    k1: float = 1.0
    k2: float = 1.0
    k3: float = 1.0
    k4: float = 1.0
    k0: float = 1.0

    def __post_init__(self) -> None:
        for name in ("k0", "k1", "k2", "k3", "k4"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"gain {name} must be a positive finite number, got {v!r}")

    @property
    def q(self) -> float:
        return math.sqrt(self.k1 / self.k3)

    @property
    def k5(self) -> float:
        return self.k1 * (1.0 + self.k2) * (1.0 + self.k1 * self.k2 * (1.0 + self.k2) / self.k3)

    @property
    def strict_passivity(self) -> bool:
        """Whether k1*k3 >= k2^2 (needed by the passivity strict certificates).

        Tolerant at the equality boundary, where pole-assigned gains land up
        to rounding.
        """
        return self.k1 * self.k3 >= self.k2 * self.k2 * (1.0 - 1e-12)


@dataclass(frozen=True)
class ControlInput:
    """Forward velocity (bidirectional) and steering rate."""

    v: float
    omega: float


class ControllerId(Enum):
    GENOVA = "genova"
    BOLSA = "bolsa"
    BOPA = "bopa"
    BAGAL = "bagal"
    GLOFO = "glofo"
    BOFO = "bofo"
    GLOBA = "globa"
    GLOBA_INTERP = "globa-interp"
    GLOBA_CONS = "globa-cons"
    BARFLI = "barfli"
    LIBAC = "libac"


_SPACE: dict[ControllerId, StateSpaceId] = {
    ControllerId.GENOVA: StateSpaceId.S,
    ControllerId.BOLSA: StateSpaceId.S1,
    ControllerId.BOPA: StateSpaceId.S2,
    ControllerId.BAGAL: StateSpaceId.S3,
    ControllerId.GLOFO: StateSpaceId.S,
    ControllerId.BOFO: StateSpaceId.S1,
    ControllerId.GLOBA: StateSpaceId.S,
    ControllerId.GLOBA_INTERP: StateSpaceId.S,
    ControllerId.GLOBA_CONS: StateSpaceId.S,
    ControllerId.BARFLI: StateSpaceId.S2,
    # libac's backstepping transform constrains only delta; gamma is left
    # unwrapped and its excursions are recorded empirically, not asserted.
    ControllerId.LIBAC: StateSpaceId.S2,
}

# Laws stated directly as the total steering input omega (no cancellation
# term added on top).
RETURNS_TOTAL_OMEGA = frozenset(
    {ControllerId.GLOBA_INTERP, ControllerId.GLOBA_CONS, ControllerId.LIBAC}
)


def controller_space(cid: ControllerId) -> StateSpaceId:
    return _SPACE[cid]


def all_controller_ids() -> tuple[ControllerId, ...]:
    return tuple(ControllerId)


def velocity(p: PolarState, k1: float) -> float:
    """v = k1 * rho * cos(gamma); negative when backing toward the target."""
    return k1 * p.rho * math.cos(p.gamma)


def velocity_cartesian(x: float, y: float, theta: float, k1: float) -> float:
    """Cartesian form of the same law: -k1*(x*cos(theta) + y*sin(theta))."""
    return -k1 * (x * math.cos(theta) + y * math.sin(theta))


# ---------------------------------------------------------------------------
# Scalar steering laws.  Each returns omega_tilde unless noted.
# ---------------------------------------------------------------------------


def _tilde_genova(g: Gains, d: float, c: float) -> float:
    return g.k2 * c + g.k3 * sinc(2.0 * c) * d


def _tilde_bolsa(g: Gains, d: float, c: float) -> float:
    t2 = math.tan(0.5 * c) ** 2
    return g.k2 * math.sin(c) + g.k3 * math.cos(c) / (1.0 + t2) ** 2 * d


def _tilde_bopa(g: Gains, d: float, c: float) -> float:
    s = math.tan(0.5 * d)
    return g.k2 * c + 2.0 * g.k3 * sinc(2.0 * c) * (1.0 + s * s) * s


def _tilde_bagal(g: Gains, d: float, c: float) -> float:
    s = math.tan(0.5 * d)
    t2 = math.tan(0.5 * c) ** 2
    return g.k2 * math.sin(c) + 2.0 * g.k3 * math.cos(c) / (1.0 + t2) ** 2 * (1.0 + s * s) * s


def _tilde_glofo(g: Gains, d: float, c: float) -> float:
    zeta = d + g.k1 / (2.0 * g.k2) * sine_integral(2.0 * c)
    return g.k2 * c + g.k3 * sinc(2.0 * c) * zeta


def _tilde_bofo(g: Gains, d: float, c: float) -> float:
    zeta = d + g.k1 / g.k2 * math.sin(c)
    t2 = math.tan(0.5 * c) ** 2
    return g.k2 * math.sin(c) + g.k3 * math.cos(c) / (1.0 + t2) ** 2 * zeta


def _tilde_globa(g: Gains, d: float, c: float) -> float:
    z = c + 0.5 * math.atan(2.0 * g.k2 * d)
    n2 = 1.0 + 4.0 * g.k2 * g.k2 * d * d
    return g.k4 * z + 0.5 * g.k1 * g.k2 / n2 * math.sin(2.0 * c) + g.k3 * psi(z, c) * d


def _tilde_barfli(g: Gains, d: float, c: float) -> float:
    s = math.tan(0.5 * d)
    z = c + 0.5 * math.atan(4.0 * g.k2 * s)
    n2 = 1.0 + 16.0 * g.k2 * g.k2 * s * s
    sec2 = 1.0 + s * s
    return (
        g.k4 * z
        + 0.5 * g.k1 * g.k2 * sec2 / n2 * math.sin(2.0 * c)
        + 2.0 * g.k3 * psi(z, c) * sec2 * s
    )


def _omega_globa_interp(g: Gains, d: float, c: float) -> float:
    z = c + 0.5 * math.atan(2.0 * g.k2 * d)
    n2 = 1.0 + 4.0 * g.k2 * g.k2 * d * d
    n = math.sqrt(n2)
    b = 1.0 + g.k2 / n2
    p = psi(z, c)
    cc = p * n - g.k1 * g.k2 / g.k3 * b
    return (g.k4 + 0.5 * g.k3 / g.k2 * cc * cc / n + g.k1 * abs(p) * b) * z


def _omega_globa_cons(g: Gains, d: float, c: float) -> float:
    z = c + 0.5 * math.atan(2.0 * g.k2 * d)
    n2 = 1.0 + 4.0 * g.k2 * g.k2 * d * d
    return (g.k4 + g.k5 + g.k3 / g.k2 * n2) * z


def _omega_libac(g: Gains, d: float, c: float) -> float:
    z = c + 0.5 * d
    s = math.tan(0.5 * d)
    return (
        g.k3 * z
        + 0.75 * g.k1 * math.sin(2.0 * c)
        + g.k2 * s / (1.0 + math.cos(d)) * psi(z, c)
    )


_TILDE: dict[ControllerId, Callable[[Gains, float, float], float]] = {
    ControllerId.GENOVA: _tilde_genova,
    ControllerId.BOLSA: _tilde_bolsa,
    ControllerId.BOPA: _tilde_bopa,
    ControllerId.BAGAL: _tilde_bagal,
    ControllerId.GLOFO: _tilde_glofo,
    ControllerId.BOFO: _tilde_bofo,
    ControllerId.GLOBA: _tilde_globa,
    ControllerId.BARFLI: _tilde_barfli,
}

_TOTAL: dict[ControllerId, Callable[[Gains, float, float], float]] = {
    ControllerId.GLOBA_INTERP: _omega_globa_interp,
    ControllerId.GLOBA_CONS: _omega_globa_cons,
    ControllerId.LIBAC: _omega_libac,
}


def steering_tilde(cid: ControllerId, g: Gains, delta: float, gamma: float) -> float:
    """omega_tilde(delta, gamma): the steering term after the cancellation
    split, so the closed-loop line-of-sight dynamics are gamma' = -omega_tilde.

    Raises :class:`BarrierDomainError` outside the id's state space.
    """
    check_in_space(_SPACE[cid], delta, gamma)
    fn = _TILDE.get(cid)
    if fn is not None:
        return fn(g, delta, gamma)
    return _TOTAL[cid](g, delta, gamma) - 0.5 * g.k1 * math.sin(2.0 * gamma)


def steering_total(cid: ControllerId, g: Gains, delta: float, gamma: float) -> float:
    """Total steering input omega = (k1/2)*sin(2*gamma) + omega_tilde.

    globa-interp, globa-cons and libac are stated directly as the total
    omega and are returned verbatim.
    """
    check_in_space(_SPACE[cid], delta, gamma)
    fn = _TOTAL.get(cid)
    if fn is not None:
        return fn(g, delta, gamma)
    return 0.5 * g.k1 * math.sin(2.0 * gamma) + _TILDE[cid](g, delta, gamma)


def make_steering_tilde(cid: ControllerId, g: Gains) -> Callable[[float, float], float]:
    """Bind (cid, gains) once and return a fast omega_tilde(delta, gamma)
    closure for integration loops.  No domain checks: callers guard the
    barrier separately."""
    fn = _TILDE.get(cid)
    if fn is not None:
        return lambda d, c: fn(g, d, c)
    total = _TOTAL[cid]
    half_k1 = 0.5 * g.k1
    return lambda d, c: total(g, d, c) - half_k1 * math.sin(2.0 * c)


def backstep_z(cid: ControllerId, g: Gains, delta: float, gamma: float) -> float:
    """Backstepping residual z for the backstepping-family ids."""
    if cid in (ControllerId.GLOBA, ControllerId.GLOBA_INTERP, ControllerId.GLOBA_CONS):
        return gamma + 0.5 * math.atan(2.0 * g.k2 * delta)
    if cid is ControllerId.BARFLI:
        return gamma + 0.5 * math.atan(4.0 * g.k2 * math.tan(0.5 * delta))
    if cid is ControllerId.LIBAC:
        return gamma + 0.5 * delta
    raise DomainError(f"{cid.value} has no backstepping residual")


def forward_zeta(cid: ControllerId, g: Gains, delta: float, gamma: float) -> float:
    """Forwarding residual zeta for the forwarding-family ids."""
    if cid is ControllerId.GLOFO:
        return delta + g.k1 / (2.0 * g.k2) * sine_integral(2.0 * gamma)
    if cid is ControllerId.BOFO:
        return delta + g.k1 / g.k2 * math.sin(gamma)
    raise DomainError(f"{cid.value} has no forwarding residual")


# ---------------------------------------------------------------------------
# Vectorised mirrors, used for bulk logging/verification.  Kept in lockstep
# with the scalar laws by an equivalence test in the suite.
# ---------------------------------------------------------------------------


def _sinc_arr(a: np.ndarray) -> np.ndarray:
    return np.sinc(a / np.pi)


def _psi_arr(z: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    return _sinc_arr(z) * np.cos(z - 2.0 * gamma)


def steering_tilde_many(
    cid: ControllerId, g: Gains, delta: np.ndarray, gamma: np.ndarray
) -> np.ndarray:
    """Vectorised omega_tilde over arrays of (delta, gamma).  No domain checks."""
    d = np.asarray(delta, dtype=float)
    c = np.asarray(gamma, dtype=float)
    k1, k2, k3, k4 = g.k1, g.k2, g.k3, g.k4
    if cid is ControllerId.GENOVA:
        return k2 * c + k3 * _sinc_arr(2.0 * c) * d
    if cid is ControllerId.BOLSA:
        t2 = np.tan(0.5 * c) ** 2
        return k2 * np.sin(c) + k3 * np.cos(c) / (1.0 + t2) ** 2 * d
    if cid is ControllerId.BOPA:
        s = np.tan(0.5 * d)
        return k2 * c + 2.0 * k3 * _sinc_arr(2.0 * c) * (1.0 + s * s) * s
    if cid is ControllerId.BAGAL:
        s = np.tan(0.5 * d)
        t2 = np.tan(0.5 * c) ** 2
        return k2 * np.sin(c) + 2.0 * k3 * np.cos(c) / (1.0 + t2) ** 2 * (1.0 + s * s) * s
    if cid is ControllerId.GLOFO:
        from scipy.special import sici

        zeta = d + k1 / (2.0 * k2) * sici(2.0 * c)[0]
        return k2 * c + k3 * _sinc_arr(2.0 * c) * zeta
    if cid is ControllerId.BOFO:
        zeta = d + k1 / k2 * np.sin(c)
        t2 = np.tan(0.5 * c) ** 2
        return k2 * np.sin(c) + k3 * np.cos(c) / (1.0 + t2) ** 2 * zeta
    if cid is ControllerId.GLOBA:
        z = c + 0.5 * np.arctan(2.0 * k2 * d)
        n2 = 1.0 + 4.0 * k2 * k2 * d * d
        return k4 * z + 0.5 * k1 * k2 / n2 * np.sin(2.0 * c) + k3 * _psi_arr(z, c) * d
    if cid is ControllerId.BARFLI:
        s = np.tan(0.5 * d)
        z = c + 0.5 * np.arctan(4.0 * k2 * s)
        n2 = 1.0 + 16.0 * k2 * k2 * s * s
        sec2 = 1.0 + s * s
        return (
            k4 * z
            + 0.5 * k1 * k2 * sec2 / n2 * np.sin(2.0 * c)
            + 2.0 * k3 * _psi_arr(z, c) * sec2 * s
        )
    if cid is ControllerId.GLOBA_INTERP:
        z = c + 0.5 * np.arctan(2.0 * k2 * d)
        n2 = 1.0 + 4.0 * k2 * k2 * d * d
        n = np.sqrt(n2)
        b = 1.0 + k2 / n2
        p = _psi_arr(z, c)
        cc = p * n - k1 * k2 / k3 * b
        omega = (k4 + 0.5 * k3 / k2 * cc * cc / n + k1 * np.abs(p) * b) * z
        return omega - 0.5 * k1 * np.sin(2.0 * c)
    if cid is ControllerId.GLOBA_CONS:
        z = c + 0.5 * np.arctan(2.0 * k2 * d)
        n2 = 1.0 + 4.0 * k2 * k2 * d * d
        omega = (k4 + g.k5 + k3 / k2 * n2) * z
        return omega - 0.5 * k1 * np.sin(2.0 * c)
    if cid is ControllerId.LIBAC:
        z = c + 0.5 * d
        s = np.tan(0.5 * d)
        omega = k3 * z + 0.75 * k1 * np.sin(2.0 * c) + k2 * s / (1.0 + np.cos(d)) * _psi_arr(z, c)
        return omega - 0.5 * k1 * np.sin(2.0 * c)
    raise DomainError(f"unknown controller id {cid!r}")


# ---------------------------------------------------------------------------
# rho = 0 heading-only designs and the reverse-parking wrapper.
# ---------------------------------------------------------------------------

_HEADING_VARIANTS = ("linear", "sine", "half_tan")


def heading_only(theta: float, k0: float, variant: str = "linear") -> float:
    """Steering to turn the vehicle in place to theta = 0 (used when rho = 0,
    where the polar angles are undefined).

    linear:   omega = -k0*theta       on R,        V = theta^2,        V' = -2*k0*V
    sine:     omega = -k0*sin(theta)  on (-pi,pi), V = 4*tan^2(th/2),  V' = -2*k0*V
    half_tan: omega = -k0*tan(th/2)   on (-pi,pi), V = 4*tan^2(th/2),  V' = -k0*(1+V/4)*V

    The sine law is defined on all of R but has spurious equilibria at odd
    multiples of pi, so it is restricted to (-pi, pi) here too.
    """
    if variant not in _HEADING_VARIANTS:
        raise DomainError(f"unknown heading variant {variant!r}; expected one of {_HEADING_VARIANTS}")
    if variant == "linear":
        return -k0 * theta
    if abs(theta) >= math.pi:
        raise BarrierDomainError(f"heading variant {variant!r} requires |theta| < pi")
    if variant == "sine":
        return -k0 * math.sin(theta)
    return -k0 * math.tan(0.5 * theta)


def reverse_parking_wrap(u: ControlInput) -> ControlInput:
    """Adapt a forward-parking control to the reverse-parking angle
    convention: negate v, keep omega."""
    return ControlInput(-u.v, u.omega)


# ---------------------------------------------------------------------------
# Polar vector fields.
# ---------------------------------------------------------------------------


def closed_loop_field(
    cid: ControllerId, g: Gains
) -> Callable[[float, float, float], tuple[float, float, float]]:
    """Closed-loop polar field under the velocity law and steering law ``cid``:

        rho'   = -k1 * rho * cos(gamma)^2
        delta' = (k1/2) * sin(2*gamma)
        gamma' = -omega_tilde(delta, gamma)

    The (delta, gamma) block is rho-independent, and the rho/rho cancellation
    is built in, so there is no singularity at rho = 0.
    """
    tilde = make_steering_tilde(cid, g)
    k1 = g.k1

    def field(rho: float, delta: float, gamma: float) -> tuple[float, float, float]:
        cg = math.cos(gamma)
        return (
            -k1 * rho * cg * cg,
            0.5 * k1 * math.sin(2.0 * gamma),
            -tilde(delta, gamma),
        )

    return field


def open_loop_field(p: PolarState, v: float, omega: float) -> tuple[float, float, float]:
    """Open-loop polar dynamics under external inputs (v, omega):

        rho' = -v*cos(gamma), delta' = (v/rho)*sin(gamma),
        gamma' = (v/rho)*sin(gamma) - omega.

    Raises :class:`SingularityError` at rho below 1e-9 because of the v/rho
    terms.
    """
    if p.rho <= 1e-9:
        raise SingularityError("open-loop polar field is singular at rho = 0")
    ratio = v / p.rho * math.sin(p.gamma)
    return (-v * math.cos(p.gamma), ratio, ratio - omega)
