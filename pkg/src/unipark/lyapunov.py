"""Strict (barrier) Lyapunov certificates for the steering designs.

Every steering family carries a positive-definite, radially unbounded
function ``V_dg(delta, gamma)`` of the angle pair alone (the steering
subsystem is rho-independent) together with a closed-form decrease rate
along the closed loop.  The forwarding and backstepping rates are exact time
derivatives and carry the ``EQUALITY`` flag; the passivity-family rates are
obtained through Young-type bounds and carry ``UPPER_BOUND`` (the true
derivative lies at or below them; tests must not assert equality there).

Full-state certificates are built modularly as composites
``V(rho, delta, gamma) = calV(rho^2, V_dg)`` (or with the arguments swapped),
for any scalar combiner ``calV`` that is zero at zero, positive elsewhere,
radially unbounded, and has positive partial derivatives off the origin.
Seven ready-made combiners are provided (:class:`CompositeKind`); the
default ``r + s`` reproduces the plain additive certificates.

All evaluators accept floats or numpy arrays and are pure; gradients are
hand-derived closed forms guarded by finite-difference tests, keeping the
artifact free of automatic differentiation.

Notation: ``q = sqrt(k1/k3)``; ``s = tan(delta/2)``; ``t = tan(gamma/2)``;
``Delta``/``Gamma`` are the (possibly barrier-warped) angle coordinates of
the family's state space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np
from scipy.special import sici as _sici

from .controllers import ControllerId, Gains, controller_space
from .errors import ConfigError, DomainError
from .spaces import StateSpaceId

__all__ = [
    "RateKind",
    "CompositeKind",
    "CompositeOrder",
    "SteeringClf",
    "LyapunovFn",
    "steering_clf",
    "logging_clf",
    "composite",
    "genova_nonstrict",
    "directional_derivative",
    "storage_energy",
    "appendix_bounds_check",
    "appendix_bounds_slack",
    "STRICT_FAMILIES",
]


class RateKind(Enum):
    EQUALITY = "equality"
    UPPER_BOUND = "upper_bound"


def _sinc(a):
    return np.sinc(np.asarray(a, dtype=float) / np.pi)


def _si(a):
    return _sici(np.asarray(a, dtype=float))[0]


# ---------------------------------------------------------------------------
# Per-family V_dg: value, gradient, closed-form rate.
# Each helper takes (g: Gains, d, c) with d, c already float arrays.
# ---------------------------------------------------------------------------


def _passivity_weight(g: Gains, U):
    """W(U) = k3*(1 + (2q^2 + U)/(2 q k2))*U and dW/dU for the genova/bolsa
    certificates."""
    q = g.q
    w = g.k3 * (1.0 + (2.0 * q * q + U) / (2.0 * q * g.k2)) * U
    wp = g.k3 * (1.0 + (q * q + U) / (q * g.k2))
    return w, wp


def _genova_value(g, d, c):
    q = g.q
    U = d * d + q * q * c * c
    w, _ = _passivity_weight(g, U)
    z = d + q * c
    return w + z * z


def _genova_grad(g, d, c):
    q = g.q
    U = d * d + q * q * c * c
    _, wp = _passivity_weight(g, U)
    z = d + q * c
    return wp * 2.0 * d + 2.0 * z, wp * 2.0 * q * q * c + 2.0 * q * z


def _genova_rate(g, d, c):
    q = g.q
    z = d + q * c
    return -2.0 * g.k1 * g.k2 * c * c - 1.5 * g.k2 * z * z - 2.0 * g.k1 * q * c**4


def _bolsa_value(g, d, c):
    q = g.q
    t = np.tan(0.5 * c)
    big_g = 2.0 * t
    U = d * d + q * q * big_g * big_g
    w, _ = _passivity_weight(g, U)
    z = d + q * big_g
    return w + z * z


def _bolsa_grad(g, d, c):
    q = g.q
    t = np.tan(0.5 * c)
    big_g = 2.0 * t
    U = d * d + q * q * big_g * big_g
    _, wp = _passivity_weight(g, U)
    z = d + q * big_g
    sec2 = 1.0 + t * t
    return wp * 2.0 * d + 2.0 * z, (wp * 2.0 * q * q * big_g + 2.0 * q * z) * sec2


def _bolsa_rate(g, d, c):
    q = g.q
    t = np.tan(0.5 * c)
    v0 = 4.0 * t * t
    return (
        -2.0 * g.k1 * g.k2 * v0
        - 1.5 * g.k2 * (d + q * t) ** 2
        - 2.0 * g.k1 * q * v0 * v0
    )


# The two cubic certificates use different constants: bopa's takes
# sqrt(k1*k3) (equal to k3*q) while bagal's takes sqrt(k1*k2).  Easy to
# conflate; each family keeps its own.
def _a_bopa(g: Gains) -> float:
    return max(g.k1 * g.q, math.sqrt(g.k1 * g.k3))


def _a_bagal(g: Gains) -> float:
    return max(g.k1 * g.q, math.sqrt(g.k1 * g.k2))


def _cubic_value(g, a, U, z):
    a_tilde = a / (3.0 * g.k2 * g.q * g.q)
    return a_tilde * ((1.0 + U) ** 3 - 1.0) + z * z


def _bopa_value(g, d, c):
    q = g.q
    s = np.tan(0.5 * d)
    U = 4.0 * s * s + q * q * c * c
    return _cubic_value(g, _a_bopa(g), U, 2.0 * s + q * c)


def _bopa_grad(g, d, c):
    q = g.q
    s = np.tan(0.5 * d)
    U = 4.0 * s * s + q * q * c * c
    a_tilde = _a_bopa(g) / (3.0 * g.k2 * q * q)
    z = 2.0 * s + q * c
    cubic = 3.0 * a_tilde * (1.0 + U) ** 2
    sec2 = 1.0 + s * s
    dd = cubic * 4.0 * s * sec2 + 2.0 * z * sec2
    dc = cubic * 2.0 * q * q * c + 2.0 * q * z
    return dd, dc


def _bopa_rate(g, d, c):
    q = g.q
    s = np.tan(0.5 * d)
    return -1.5 * g.k2 * (s + q * c) ** 2 - 4.0 * _a_bopa(g) * q * q * c**4


def _bagal_value(g, d, c):
    q = g.q
    s = np.tan(0.5 * d)
    t = np.tan(0.5 * c)
    U = 4.0 * s * s + 4.0 * q * q * t * t
    return _cubic_value(g, _a_bagal(g), U, 2.0 * s + 2.0 * q * t)


def _bagal_grad(g, d, c):
    q = g.q
    s = np.tan(0.5 * d)
    t = np.tan(0.5 * c)
    U = 4.0 * s * s + 4.0 * q * q * t * t
    a_tilde = _a_bagal(g) / (3.0 * g.k2 * q * q)
    z = 2.0 * s + 2.0 * q * t
    cubic = 3.0 * a_tilde * (1.0 + U) ** 2
    sec2_d = 1.0 + s * s
    sec2_c = 1.0 + t * t
    dd = cubic * 4.0 * s * sec2_d + 2.0 * z * sec2_d
    dc = cubic * 4.0 * q * q * t * sec2_c + 2.0 * q * z * sec2_c
    return dd, dc


def _bagal_rate(g, d, c):
    q = g.q
    s = np.tan(0.5 * d)
    t = np.tan(0.5 * c)
    return -16.0 * _a_bagal(g) * q * q * t**4 - 1.5 * g.k2 * (s + q * t) ** 2


def _glofo_zeta(g, d, c):
    return d + g.k1 / (2.0 * g.k2) * _si(2.0 * c)


def _glofo_value(g, d, c):
    q = g.q
    zeta = _glofo_zeta(g, d, c)
    return zeta * zeta + q * q * c * c


def _glofo_grad(g, d, c):
    q = g.q
    zeta = _glofo_zeta(g, d, c)
    return 2.0 * zeta, 2.0 * zeta * g.k1 / g.k2 * _sinc(2.0 * c) + 2.0 * q * q * c


def _glofo_rate(g, d, c):
    zeta = _glofo_zeta(g, d, c)
    w = g.k3 / g.k2 * _sinc(2.0 * c) * zeta
    return -g.k1 * g.k2 / g.k3 * (w * w + c * c + (w + c) ** 2)


def _bofo_zeta(g, d, c):
    return d + g.k1 / g.k2 * np.sin(c)


def _bofo_value(g, d, c):
    q = g.q
    t = np.tan(0.5 * c)
    zeta = _bofo_zeta(g, d, c)
    return zeta * zeta + 4.0 * q * q * t * t


def _bofo_grad(g, d, c):
    q = g.q
    t = np.tan(0.5 * c)
    zeta = _bofo_zeta(g, d, c)
    dd = 2.0 * zeta
    dc = 2.0 * zeta * g.k1 / g.k2 * np.cos(c) + 4.0 * q * q * t * (1.0 + t * t)
    return dd, dc


def _bofo_rate(g, d, c):
    t = np.tan(0.5 * c)
    zeta = _bofo_zeta(g, d, c)
    w = g.k3 / g.k2 * np.cos(c) / (1.0 + t * t) * zeta
    return -g.k1 * g.k2 / g.k3 * (w * w + 4.0 * t * t + (w + 2.0 * t) ** 2)


def _globa_z(g, d, c):
    return c + 0.5 * np.arctan(2.0 * g.k2 * d)


def _globa_value(g, d, c):
    q = g.q
    z = _globa_z(g, d, c)
    return d * d + q * q * z * z


def _globa_grad(g, d, c):
    q = g.q
    z = _globa_z(g, d, c)
    n2 = 1.0 + 4.0 * g.k2 * g.k2 * d * d
    return 2.0 * d + 2.0 * q * q * z * g.k2 / n2, 2.0 * q * q * z


def _globa_rate(g, d, c):
    q = g.q
    z = _globa_z(g, d, c)
    n = np.sqrt(1.0 + 4.0 * g.k2 * g.k2 * d * d)
    return -2.0 * g.k1 * g.k2 * d * d / n - 2.0 * q * q * g.k4 * z * z


def _barfli_z(g, d, c):
    return c + 0.5 * np.arctan(4.0 * g.k2 * np.tan(0.5 * d))


def _barfli_value(g, d, c):
    q = g.q
    s = np.tan(0.5 * d)
    z = _barfli_z(g, d, c)
    return 4.0 * s * s + q * q * z * z


def _barfli_grad(g, d, c):
    q = g.q
    s = np.tan(0.5 * d)
    z = _barfli_z(g, d, c)
    sec2 = 1.0 + s * s
    n2 = 1.0 + 16.0 * g.k2 * g.k2 * s * s
    dd = 4.0 * s * sec2 + 2.0 * q * q * z * g.k2 * sec2 / n2
    return dd, 2.0 * q * q * z


def _barfli_rate(g, d, c):
    q = g.q
    s = np.tan(0.5 * d)
    z = _barfli_z(g, d, c)
    n = np.sqrt(1.0 + 16.0 * g.k2 * g.k2 * s * s)
    return -8.0 * g.k1 * g.k2 * (1.0 + s * s) * s * s / n - 2.0 * g.k4 * q * q * z * z


# Interpretable/conservative backstepping reuse the globa certificate; their
# Young-bounded decrease shares one closed form.
def _globa_variant_rate(g, d, c):
    q = g.q
    z = _globa_z(g, d, c)
    n = np.sqrt(1.0 + 4.0 * g.k2 * g.k2 * d * d)
    return -g.k1 * g.k2 * d * d / n - 2.0 * q * q * g.k4 * z * z


# libac: pairing the law with the plain 4*tan^2(delta/2) barrier only
# cancels its cross term at the special gain ratio k2 = 4*k3.  Re-deriving
# the cancellation gives the gain-weighted variant below, whose decrease is
# exact for all gains:
#   V = (k2/k3)*tan^2(delta/2) + q^2*(gamma + delta/2)^2
#   V' = -(k1*k2/k3)*tan^2(delta/2) - 2*k1*(gamma + delta/2)^2


def _libac_value(g, d, c):
    q = g.q
    s = np.tan(0.5 * d)
    z = c + 0.5 * d
    return g.k2 / g.k3 * s * s + q * q * z * z


def _libac_grad(g, d, c):
    q = g.q
    s = np.tan(0.5 * d)
    z = c + 0.5 * d
    dd = g.k2 / g.k3 * s * (1.0 + s * s) + q * q * z
    return dd, 2.0 * q * q * z


def _libac_rate(g, d, c):
    s = np.tan(0.5 * d)
    z = c + 0.5 * d
    return -g.k1 * g.k2 / g.k3 * s * s - 2.0 * g.k1 * z * z


_FamilyFns = tuple[Callable, Callable, Callable, RateKind]

_FAMILIES: dict[ControllerId, _FamilyFns] = {
    ControllerId.GENOVA: (_genova_value, _genova_grad, _genova_rate, RateKind.UPPER_BOUND),
    ControllerId.BOLSA: (_bolsa_value, _bolsa_grad, _bolsa_rate, RateKind.UPPER_BOUND),
    ControllerId.BOPA: (_bopa_value, _bopa_grad, _bopa_rate, RateKind.UPPER_BOUND),
    ControllerId.BAGAL: (_bagal_value, _bagal_grad, _bagal_rate, RateKind.UPPER_BOUND),
    ControllerId.GLOFO: (_glofo_value, _glofo_grad, _glofo_rate, RateKind.EQUALITY),
    ControllerId.BOFO: (_bofo_value, _bofo_grad, _bofo_rate, RateKind.EQUALITY),
    ControllerId.GLOBA: (_globa_value, _globa_grad, _globa_rate, RateKind.EQUALITY),
    ControllerId.BARFLI: (_barfli_value, _barfli_grad, _barfli_rate, RateKind.EQUALITY),
}

STRICT_FAMILIES: tuple[ControllerId, ...] = tuple(_FAMILIES)

_LOGGING_EXTRAS: dict[ControllerId, _FamilyFns] = {
    ControllerId.GLOBA_INTERP: (_globa_value, _globa_grad, _globa_variant_rate, RateKind.UPPER_BOUND),
    ControllerId.GLOBA_CONS: (_globa_value, _globa_grad, _globa_variant_rate, RateKind.UPPER_BOUND),
    ControllerId.LIBAC: (_libac_value, _libac_grad, _libac_rate, RateKind.EQUALITY),
}


@dataclass(frozen=True)
class SteeringClf:
    """Certificate V_dg(delta, gamma) for one steering family.

    ``rate`` returns the closed-form decrease along the steering subsystem
    delta' = (k1/2)sin(2*gamma), gamma' = -omega_tilde; whether it is exact
    or an upper bound is recorded in ``rate_kind``.
    """

    controller: ControllerId
    gains: Gains
    space: StateSpaceId
    rate_kind: RateKind
    _value: Callable = field(repr=False)
    _grad: Callable = field(repr=False)
    _rate: Callable = field(repr=False)

    def value(self, delta, gamma):
        return self._value(self.gains, np.asarray(delta, float), np.asarray(gamma, float))

    def grad(self, delta, gamma):
        return self._grad(self.gains, np.asarray(delta, float), np.asarray(gamma, float))

    def rate(self, delta, gamma):
        return self._rate(self.gains, np.asarray(delta, float), np.asarray(gamma, float))


def steering_clf(cid: ControllerId, gains: Gains) -> SteeringClf:
    """The strict certificate belonging to one of the eight core steering
    families."""
    try:
        value, grad, rate, kind = _FAMILIES[cid]
    except KeyError:
        raise DomainError(
            f"{cid.value} has no strict certificate of its own; use logging_clf for the derived one"
        ) from None
    return SteeringClf(cid, gains, controller_space(cid), kind, value, grad, rate)


def logging_clf(cid: ControllerId, gains: Gains) -> SteeringClf:
    """Certificate used to log V along simulations, defined for all eleven
    controllers (the backstepping variants reuse or adapt the globa/barfli
    certificates)."""
    fns = _FAMILIES.get(cid) or _LOGGING_EXTRAS[cid]
    value, grad, rate, kind = fns
    return SteeringClf(cid, gains, controller_space(cid), kind, value, grad, rate)


# ---------------------------------------------------------------------------
# Composite certificates V(rho, delta, gamma) = calV(rho^2, V_dg).
# ---------------------------------------------------------------------------


class CompositeKind(Enum):
    """The seven ready-made combiners calV(r, s)."""

    ADD = "add"            # r + s
    LOG = "log"            # ln(1 + r) + s
    EXPM1 = "expm1"        # e^r - 1 + s
    EXP_PROD = "exp-prod"  # (1 + r)e^s - 1
    CROSS = "cross"        # r + s + r s
    COSH = "cosh"          # cosh(r) + s - 1
    SQRT = "sqrt"          # sqrt(1 + r) + sqrt(1 + s) - 2


class CompositeOrder(Enum):
    RHO_FIRST = "rho-first"  # calV(rho^2, V_dg)
    V_FIRST = "v-first"      # calV(V_dg, rho^2)


def _cal_value(kind: CompositeKind, r, s):
    if kind is CompositeKind.ADD:
        return r + s
    if kind is CompositeKind.LOG:
        return np.log1p(r) + s
    if kind is CompositeKind.EXPM1:
        return np.expm1(r) + s
    if kind is CompositeKind.EXP_PROD:
        return (1.0 + r) * np.exp(s) - 1.0
    if kind is CompositeKind.CROSS:
        return r + s + r * s
    if kind is CompositeKind.COSH:
        return np.cosh(r) + s - 1.0
    if kind is CompositeKind.SQRT:
        return np.sqrt(1.0 + r) + np.sqrt(1.0 + s) - 2.0
    raise DomainError(f"unknown composite kind {kind!r}")


def _cal_partials(kind: CompositeKind, r, s):
    one = np.ones_like(np.asarray(r, float))
    if kind is CompositeKind.ADD:
        return one, one
    if kind is CompositeKind.LOG:
        return 1.0 / (1.0 + r), one
    if kind is CompositeKind.EXPM1:
        return np.exp(r), one
    if kind is CompositeKind.EXP_PROD:
        es = np.exp(s)
        return es, (1.0 + r) * es
    if kind is CompositeKind.CROSS:
        return 1.0 + s, 1.0 + r
    if kind is CompositeKind.COSH:
        return np.sinh(r), one
    if kind is CompositeKind.SQRT:
        return 0.5 / np.sqrt(1.0 + r), 0.5 / np.sqrt(1.0 + s)
    raise DomainError(f"unknown composite kind {kind!r}")


@dataclass(frozen=True)
class LyapunovFn:
    """Full-state certificate V(rho, delta, gamma) = calV(rho^2, V_dg) (or
    with swapped arguments).  Gradients come from the chain rule; the
    closed-form rate inherits the equality/upper-bound flag of V_dg."""

    clf: SteeringClf
    kind: CompositeKind = CompositeKind.ADD
    order: CompositeOrder = CompositeOrder.RHO_FIRST

    def _args(self, rho, delta, gamma):
        r = np.asarray(rho, float) ** 2
        s = self.clf.value(delta, gamma)
        if self.order is CompositeOrder.RHO_FIRST:
            return r, s
        return s, r

    def value(self, rho, delta, gamma):
        a, b = self._args(rho, delta, gamma)
        return _cal_value(self.kind, a, b)

    def grad(self, rho, delta, gamma):
        rho = np.asarray(rho, float)
        a, b = self._args(rho, delta, gamma)
        pa, pb = _cal_partials(self.kind, a, b)
        p_rho, p_v = (pa, pb) if self.order is CompositeOrder.RHO_FIRST else (pb, pa)
        gd, gc = self.clf.grad(delta, gamma)
        return p_rho * 2.0 * rho, p_v * gd, p_v * gc

    def rate(self, rho, delta, gamma):
        """Closed-form rate along the full closed loop (the rho part
        d(rho^2)/dt = -2*k1*rho^2*cos^2(gamma) is exact)."""
        rho = np.asarray(rho, float)
        gamma_arr = np.asarray(gamma, float)
        a, b = self._args(rho, delta, gamma)
        pa, pb = _cal_partials(self.kind, a, b)
        p_rho, p_v = (pa, pb) if self.order is CompositeOrder.RHO_FIRST else (pb, pa)
        k1 = self.clf.gains.k1
        rho_rate = -2.0 * k1 * rho * rho * np.cos(gamma_arr) ** 2
        return p_rho * rho_rate + p_v * self.clf.rate(delta, gamma), self.clf.rate_kind


_PROBE_POINTS = ((0.25, 0.25), (1.0, 2.0), (3.0, 0.5))


def composite(
    clf: SteeringClf,
    kind: CompositeKind = CompositeKind.ADD,
    order: CompositeOrder = CompositeOrder.RHO_FIRST,
) -> LyapunovFn:
    """Build a composite certificate, checking the contracts at probe points:
    calV(0,0) = 0 with positive partials off the origin, and V_dg zero at the
    origin, positive and growing along rays elsewhere."""
    if abs(float(_cal_value(kind, 0.0, 0.0))) > 1e-15:
        raise ConfigError(f"composite {kind.value} violates calV(0,0) = 0")
    for r, s in _PROBE_POINTS:
        pa, pb = _cal_partials(kind, r, s)
        if not (pa > 0.0 and pb > 0.0):
            raise ConfigError(
                f"composite {kind.value} has a non-positive partial at probe ({r}, {s})"
            )
    if abs(float(clf.value(0.0, 0.0))) > 1e-14:
        raise ConfigError("V_dg is not zero at the origin")
    ray = np.linspace(0.15, min(2.8, math.pi - 0.25), 8)
    for dd, gg in ((ray, 0.3 * ray), (-0.4 * ray, ray), (ray, -ray)):
        vals = np.asarray(clf.value(dd, gg), dtype=float)
        if not (np.all(vals > 0.0) and vals[-1] > vals[0]):
            raise ConfigError("V_dg failed the positive-definite/unboundedness probe")
    return LyapunovFn(clf, kind, order)


# ---------------------------------------------------------------------------
# Non-strict genova certificate, directional derivatives, energy, bounds.
# ---------------------------------------------------------------------------


def genova_nonstrict(g: Gains, rho, delta, gamma):
    """The classic non-strict certificate V_G = rho^2 + k3*(delta^2 +
    q^2*gamma^2) and its exact rate -2*k1*rho^2*cos^2(gamma) -
    2*k1*k2*gamma^2 (negative semi-definite only: it vanishes on
    {rho = 0, gamma = 0} regardless of delta)."""
    rho = np.asarray(rho, float)
    delta = np.asarray(delta, float)
    gamma = np.asarray(gamma, float)
    q = g.q
    value = rho * rho + g.k3 * (delta * delta + q * q * gamma * gamma)
    rate = -2.0 * g.k1 * rho * rho * np.cos(gamma) ** 2 - 2.0 * g.k1 * g.k2 * gamma * gamma
    return value, rate


def directional_derivative(fn: LyapunovFn, f: Callable, rho, delta, gamma):
    """grad V . f for a full-state field f(rho, delta, gamma) -> 3 components."""
    gr, gd, gc = fn.grad(rho, delta, gamma)
    fr, fd, fc = f(rho, delta, gamma)
    return gr * fr + gd * fd + gc * fc


def steering_directional_derivative(clf: SteeringClf, omega_tilde: Callable, delta, gamma):
    """grad V_dg . (delta', gamma') along the steering subsystem with
    gamma' = -omega_tilde(delta, gamma)."""
    gd, gc = clf.grad(delta, gamma)
    delta = np.asarray(delta, float)
    gamma = np.asarray(gamma, float)
    return gd * 0.5 * clf.gains.k1 * np.sin(2.0 * gamma) - gc * omega_tilde(delta, gamma)


def storage_energy(space: StateSpaceId, g: Gains, delta, gamma):
    """Passivity storage U = Delta^2 + q^2*Gamma^2 in the given space's
    coordinates.  Along any of the four passivity closed loops,
    dU/dt = -2*k2*q^2*Gamma^2."""
    delta = np.asarray(delta, float)
    gamma = np.asarray(gamma, float)
    big_d = 2.0 * np.tan(0.5 * delta) if space.delta_constrained else delta
    big_g = 2.0 * np.tan(0.5 * gamma) if space.gamma_constrained else gamma
    q = g.q
    return big_d * big_d + q * q * big_g * big_g


def appendix_bounds_slack(k, x):
    """Slacks (RHS - LHS) of the two scalar inequalities used by the
    passivity proofs, valid for all k >= 1:

        1 - k*sin(2x)/(2x) <= k*x^2
        1 - k*cos(x)*(1 + cos(x)) <= 2*(1 + k)*tan^2(x/2)
    """
    k = np.asarray(k, float)
    x = np.asarray(x, float)
    if np.any(k < 1.0):
        raise DomainError("appendix bounds require k >= 1")
    s1 = k * x * x - (1.0 - k * _sinc(2.0 * x))
    cx = np.cos(x)
    s2 = 2.0 * (1.0 + k) * np.tan(0.5 * x) ** 2 - (1.0 - k * cx * (1.0 + cx))
    return s1, s2


def appendix_bounds_check(k: float, x: float) -> tuple[bool, bool]:
    """Truth of the two appendix inequalities at a single (k, x)."""
    s1, s2 = appendix_bounds_slack(k, x)
    return bool(s1 >= 0.0), bool(s2 >= 0.0)
