"""Deterministic closed-loop integration in polar or Cartesian charts.

Fixed-step classic Runge-Kutta (RK4) is used throughout: reproducibility and
simple per-step monotonicity tolerances matter more than adaptive efficiency
at this scale.  The closed-loop polar field uses the rho-decoupled form
directly (no v/rho division), so it has no singularity at rho = 0; the
open-loop polar field guards rho > 1e-9.

A run terminates when the state-space metric drops below ``stop_tol``
(converged), when t reaches ``t_max``, when a constrained angle comes within
``barrier_margin`` of +-pi (barrier guard), or when the state stops being
finite.  For barrier controllers started inside their domain a guard trip
means the integration contradicts the invariance certificate, so the test
suite treats it as a failure; otherwise it is just a clean termination.

Certificate values, controls, and metrics are logged per step; they are
evaluated vectorised over the stored states after integration, which keeps
the hot loop scalar and fast.

Cartesian-chart runs rebuild a continuous polar state by unwrapping the
transformed angles against the previous step, and record every crossing of
the x-axis with the linearly interpolated crossing abscissa, supporting the
front-line (x > 0, y = 0) avoidance analysis.  No smoothing is applied: the
curvature discontinuity of the underlying feedback is preserved in the log.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from . import controllers as ctl
from .controllers import ControllerId, Gains
from .errors import ConfigError, UniparkError
from .kernels import wrap_angle
from .lyapunov import CompositeKind, CompositeOrder, LyapunovFn, logging_clf
from .spaces import (
    CartesianState,
    PolarState,
    StateSpaceId,
    cartesian_to_polar,
    delta_gamma_in_space,
    polar_to_cartesian,
)

__all__ = [
    "Termination",
    "Scenario",
    "Trajectory",
    "AxisCrossing",
    "SweepRecord",
    "vector_field_polar",
    "vector_field_polar_open",
    "integrate",
    "integrate_cartesian",
    "integrate_batch",
    "BatchResult",
    "sweep",
    "front_line_crossings",
]

# Per-step allowance for certificate increases attributable to integration
# and rounding noise.
V_MONOTONE_TOL = 1e-9


class Termination(Enum):
    CONVERGED = "converged"
    T_MAX = "t_max"
    BARRIER_GUARD = "barrier_guard"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class Scenario:
    """One closed-loop run: controller, gains, initial state, and numerics."""

    controller: ControllerId
    gains: Gains = Gains()
    initial: PolarState | CartesianState = PolarState(1.0, 0.0, 0.0)
    frame: str = "polar"
    dt: float = 1e-3
    t_max: float = 100.0
    stop_tol: float = 1e-4
    barrier_margin: float = 1e-9
    composite: CompositeKind = CompositeKind.ADD
    composite_order: CompositeOrder = CompositeOrder.RHO_FIRST

    def __post_init__(self) -> None:
        if self.frame not in ("polar", "cartesian"):
            raise ConfigError(f"frame must be 'polar' or 'cartesian', got {self.frame!r}")
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise ConfigError(f"dt must be positive, got {self.dt!r}")
        if self.t_max < self.dt:
            raise ConfigError("t_max must be at least dt")
        if self.stop_tol <= 0.0:
            raise ConfigError("stop_tol must be positive")
        try:
            init = self.initial_polar()
        except UniparkError as e:
            raise ConfigError(f"invalid initial state: {e}") from None
        if not delta_gamma_in_space(self.space, init.delta, init.gamma):
            raise ConfigError(
                f"initial state {init} lies outside {self.space.value}, the state space "
                f"of {self.controller.value}"
            )

    @property
    def space(self) -> StateSpaceId:
        return ctl.controller_space(self.controller)

    def initial_polar(self) -> PolarState:
        """Initial design-frame state.

        Polar initial states are taken literally.  Cartesian ones pass
        through the transform, which yields delta in (0, 2*pi]; any axis the
        controller's space constrains is then wrapped to [-pi, pi), the chart
        the barrier laws live on.  Unconstrained axes keep the unwrapped
        transform values.
        """
        if isinstance(self.initial, PolarState):
            return self.initial
        p = cartesian_to_polar(self.initial)
        space = self.space
        delta = wrap_angle(p.delta) if space.delta_constrained else p.delta
        gamma = wrap_angle(p.gamma) if space.gamma_constrained else p.gamma
        return PolarState(p.rho, delta, gamma)

    def initial_cartesian(self) -> CartesianState:
        if isinstance(self.initial, CartesianState):
            return self.initial
        return polar_to_cartesian(self.initial)

    def lyapunov(self) -> LyapunovFn:
        return LyapunovFn(logging_clf(self.controller, self.gains), self.composite, self.composite_order)


@dataclass(frozen=True)
class AxisCrossing:
    """A sign change of y between consecutive samples; x interpolated at y=0."""

    t: float
    x: float

    @property
    def in_front(self) -> bool:
        return self.x > 0.0


@dataclass
class Trajectory:
    """Sampled closed-loop run with logged certificate and metric values."""

    t: np.ndarray
    polar: np.ndarray  # (N, 3): rho, delta, gamma (continuous/unwrapped)
    cartesian: np.ndarray  # (N, 3): x, y, theta
    v: np.ndarray
    omega: np.ndarray
    V: np.ndarray
    metric: np.ndarray
    termination: Termination
    crossings: list[AxisCrossing] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def final_time(self) -> float:
        return float(self.t[-1])

    def v_monotonicity_violations(self, tol: float = V_MONOTONE_TOL) -> int:
        return int(np.sum(np.diff(self.V) > tol))

    def convergence_time(self) -> float | None:
        return self.final_time if self.termination is Termination.CONVERGED else None

    def path_length(self) -> float:
        if len(self.t) < 2:
            return 0.0
        return float(np.sum(np.abs(self.v[:-1]) * np.diff(self.t)))

    def steering_effort(self) -> float:
        if len(self.t) < 2:
            return 0.0
        return float(np.sum(self.omega[:-1] ** 2 * np.diff(self.t)))

    def min_barrier_margin(self, space: StateSpaceId) -> float:
        margins = [np.inf]
        if space.delta_constrained:
            margins.append(float(np.min(math.pi - np.abs(self.polar[:, 1]))))
        if space.gamma_constrained:
            margins.append(float(np.min(math.pi - np.abs(self.polar[:, 2]))))
        return min(margins)


def vector_field_polar(cid: ControllerId, g: Gains, p: PolarState) -> tuple[float, float, float]:
    """Closed-loop polar derivatives (rho', delta', gamma'); the angle block
    is rho-independent and regular at rho = 0."""
    return ctl.closed_loop_field(cid, g)(p.rho, p.delta, p.gamma)


def vector_field_polar_open(p: PolarState, v: float, omega: float) -> tuple[float, float, float]:
    """Open-loop polar derivatives under external inputs; singular at rho = 0."""
    return ctl.open_loop_field(p, v, omega)


def _metric_arrays(space: StateSpaceId, rho, delta, gamma):
    d = 2.0 * np.tan(0.5 * np.asarray(delta)) if space.delta_constrained else np.asarray(delta)
    g = 2.0 * np.tan(0.5 * np.asarray(gamma)) if space.gamma_constrained else np.asarray(gamma)
    return np.asarray(rho) + np.abs(d) + np.abs(g)


def _metric_scalar(space: StateSpaceId, rho: float, delta: float, gamma: float) -> float:
    d = abs(2.0 * math.tan(0.5 * delta)) if space.delta_constrained else abs(delta)
    g = abs(2.0 * math.tan(0.5 * gamma)) if space.gamma_constrained else abs(gamma)
    return rho + d + g


def _guard_tripped(space: StateSpaceId, delta: float, gamma: float, margin: float) -> bool:
    limit = math.pi - margin
    if space.delta_constrained and abs(delta) >= limit:
        return True
    if space.gamma_constrained and abs(gamma) >= limit:
        return True
    return False


def _finish(s: Scenario, t, polar, termination, crossings=None, cartesian=None) -> Trajectory:
    t = np.asarray(t)
    polar = np.asarray(polar, dtype=float).reshape(-1, 3)
    rho, delta, gamma = polar[:, 0], polar[:, 1], polar[:, 2]
    if cartesian is None:
        cart = np.column_stack([-rho * np.cos(delta), -rho * np.sin(delta), delta - gamma])
    else:
        cart = np.asarray(cartesian, dtype=float).reshape(-1, 3)
    v = s.gains.k1 * rho * np.cos(gamma)
    omega = 0.5 * s.gains.k1 * np.sin(2.0 * gamma) + ctl.steering_tilde_many(
        s.controller, s.gains, delta, gamma
    )
    lyap = s.lyapunov()
    V = np.asarray(lyap.value(rho, delta, gamma), dtype=float)
    met = _metric_arrays(s.space, rho, delta, gamma)
    meta = {
        "controller": s.controller.value,
        "dt": s.dt,
        "t_max": s.t_max,
        "stop_tol": s.stop_tol,
        "barrier_margin": s.barrier_margin,
        "frame": s.frame,
        "composite": s.composite.value,
        "composite_order": s.composite_order.value,
    }
    return Trajectory(
        t=t,
        polar=polar,
        cartesian=cart,
        v=v,
        omega=np.asarray(omega, dtype=float),
        V=V,
        metric=np.asarray(met, dtype=float),
        termination=termination,
        crossings=crossings or [],
        meta=meta,
    )


def _rk4_step(f: Callable, y: tuple[float, float, float], h: float) -> tuple[float, float, float]:
    a1, b1, c1 = f(*y)
    a2, b2, c2 = f(y[0] + 0.5 * h * a1, y[1] + 0.5 * h * b1, y[2] + 0.5 * h * c1)
    a3, b3, c3 = f(y[0] + 0.5 * h * a2, y[1] + 0.5 * h * b2, y[2] + 0.5 * h * c2)
    a4, b4, c4 = f(y[0] + h * a3, y[1] + h * b3, y[2] + h * c3)
    sixth = h / 6.0
    return (
        y[0] + sixth * (a1 + 2.0 * (a2 + a3) + a4),
        y[1] + sixth * (b1 + 2.0 * (b2 + b3) + b4),
        y[2] + sixth * (c1 + 2.0 * (c2 + c3) + c4),
    )


def integrate(s: Scenario) -> Trajectory:
    """Run the scenario in the chart selected by ``s.frame``."""
    if s.frame == "cartesian":
        return integrate_cartesian(s)
    f = ctl.closed_loop_field(s.controller, s.gains)
    p0 = s.initial_polar()
    y = (p0.rho, p0.delta, p0.gamma)
    states = [y]
    times = [0.0]
    n_max = int(math.ceil(s.t_max / s.dt - 1e-9))
    space = s.space
    k = 0
    while True:
        if _metric_scalar(space, *y) < s.stop_tol:
            reason = Termination.CONVERGED
            break
        if k >= n_max:
            reason = Termination.T_MAX
            break
        y_next = _rk4_step(f, y, s.dt)
        k += 1
        if not all(map(math.isfinite, y_next)):
            reason = Termination.NUMERIC
            break
        if _guard_tripped(space, y_next[1], y_next[2], s.barrier_margin):
            reason = Termination.BARRIER_GUARD
            break
        y = y_next
        states.append(y)
        times.append(k * s.dt)
    return _finish(s, times, states, reason)


def _unwrap_near(angle: float, ref: float) -> float:
    two_pi = 2.0 * math.pi
    return angle + two_pi * round((ref - angle) / two_pi)


def integrate_cartesian(s: Scenario) -> Trajectory:
    """Integrate the Cartesian kinematics, computing the feedback through the
    polar transform at every stage.  Records x-axis crossings."""
    c0 = s.initial_cartesian()
    if c0.x * c0.x + c0.y * c0.y == 0.0:
        raise ConfigError("cartesian integration requires a nonzero initial position")
    tilde = ctl.make_steering_tilde(s.controller, s.gains)
    k1 = s.gains.k1
    space = s.space
    p0 = s.initial_polar()

    def polar_cont(x: float, y: float, theta: float, delta_ref: float):
        rho = math.hypot(x, y)
        delta = math.atan2(y + 0.0, x) + math.pi
        delta = _unwrap_near(delta, delta_ref)
        return rho, delta, delta - theta

    def make_field(delta_ref: float):
        def field(x: float, y: float, theta: float):
            rho, delta, gamma = polar_cont(x, y, theta, delta_ref)
            v = k1 * rho * math.cos(gamma)
            omega = 0.5 * k1 * math.sin(2.0 * gamma) + tilde(delta, gamma)
            return v * math.cos(theta), v * math.sin(theta), omega

        return field

    y = (c0.x, c0.y, c0.theta)
    delta_ref = p0.delta
    polar_log = [(p0.rho, p0.delta, p0.gamma)]
    cart_log = [y]
    times = [0.0]
    crossings: list[AxisCrossing] = []
    n_max = int(math.ceil(s.t_max / s.dt - 1e-9))
    k = 0
    while True:
        rho, delta, gamma = polar_log[-1]
        if _metric_scalar(space, rho, delta, gamma) < s.stop_tol:
            reason = Termination.CONVERGED
            break
        if k >= n_max:
            reason = Termination.T_MAX
            break
        y_next = _rk4_step(make_field(delta_ref), y, s.dt)
        k += 1
        if not all(map(math.isfinite, y_next)):
            reason = Termination.NUMERIC
            break
        if y_next[0] * y_next[0] + y_next[1] * y_next[1] == 0.0:
            reason = Termination.CONVERGED
            break
        p_next = polar_cont(*y_next, delta_ref)
        if _guard_tripped(space, p_next[1], p_next[2], s.barrier_margin):
            reason = Termination.BARRIER_GUARD
            break
        if y[1] * y_next[1] < 0.0 or (y_next[1] == 0.0 and y[1] != 0.0):
            frac = y[1] / (y[1] - y_next[1])
            crossings.append(AxisCrossing(t=(k - 1 + frac) * s.dt, x=y[0] + frac * (y_next[0] - y[0])))
        y = y_next
        delta_ref = p_next[1]
        polar_log.append(p_next)
        cart_log.append(y)
        times.append(k * s.dt)
    return _finish(s, times, polar_log, reason, crossings, cartesian=cart_log)


def front_line_crossings(traj: Trajectory) -> list[AxisCrossing]:
    """Crossings of {y = 0} with x > 0, interpolated from the logged
    Cartesian samples (usable for polar-chart runs too)."""
    x = traj.cartesian[:, 0]
    y = traj.cartesian[:, 1]
    out: list[AxisCrossing] = []
    sign_change = (y[:-1] * y[1:] < 0.0) | ((y[1:] == 0.0) & (y[:-1] != 0.0))
    for i in np.flatnonzero(sign_change):
        frac = y[i] / (y[i] - y[i + 1])
        xc = x[i] + frac * (x[i + 1] - x[i])
        if xc > 0.0:
            out.append(AxisCrossing(t=float(traj.t[i] + frac * (traj.t[i + 1] - traj.t[i])), x=float(xc)))
    return out


# ---------------------------------------------------------------------------
# Vectorised batch integration across many initial states.
# ---------------------------------------------------------------------------


@dataclass
class BatchResult:
    """Streaming diagnostics of a batch of runs sharing one scenario setup.

    Runs are frozen once they converge or trip a guard, matching the
    single-run termination semantics; only summary statistics are stored.
    """

    converged: np.ndarray
    convergence_time: np.ndarray
    v_violations: np.ndarray
    min_barrier_margin: np.ndarray
    max_abs_delta: np.ndarray
    max_abs_gamma: np.ndarray
    barrier_trips: np.ndarray
    numeric_failures: np.ndarray
    final_states: np.ndarray
    final_metric: np.ndarray
    extra_v_violations: np.ndarray | None = None  # (n_extra, N) when monitored


def integrate_batch(
    s: Scenario,
    initial_states: np.ndarray,
    extra_lyapunov: Sequence[LyapunovFn] = (),
) -> BatchResult:
    """Integrate many polar initial states (N, 3) under one scenario setup.

    Arithmetic mirrors :func:`integrate` (same RK4, same fields); a lockstep
    equivalence test in the suite ties the two paths together.
    ``extra_lyapunov`` adds further certificates whose per-step monotonicity
    violations are counted alongside the scenario's own.
    """
    ys = np.array(initial_states, dtype=float).reshape(-1, 3).T.copy()  # (3, N)
    n = ys.shape[1]
    g = s.gains
    cid = s.controller
    space = s.space
    k1 = g.k1
    lyap = s.lyapunov()

    def field(y):
        rho, delta, gamma = y
        cg = np.cos(gamma)
        dd = 0.5 * k1 * np.sin(2.0 * gamma)
        return np.stack(
            [-k1 * rho * cg * cg, dd, -ctl.steering_tilde_many(cid, g, delta, gamma)]
        )

    active = np.ones(n, dtype=bool)
    converged = np.zeros(n, dtype=bool)
    barrier_trips = np.zeros(n, dtype=bool)
    numeric_failures = np.zeros(n, dtype=bool)
    conv_time = np.full(n, np.nan)
    v_viol = np.zeros(n, dtype=int)
    min_margin = np.full(n, np.inf)
    max_ad = np.abs(ys[1]).copy()
    max_ag = np.abs(ys[2]).copy()

    def margins(y):
        m = np.full(n, np.inf)
        if space.delta_constrained:
            m = np.minimum(m, math.pi - np.abs(y[1]))
        if space.gamma_constrained:
            m = np.minimum(m, math.pi - np.abs(y[2]))
        return m

    extra = list(extra_lyapunov)
    extra_viol = np.zeros((len(extra), n), dtype=int)
    # Certificates like cosh(.) overflow to inf on extreme starts; inf is an
    # honest "very large" for the monotonicity counters, so warnings are off.
    with np.errstate(all="ignore"):
        v_prev = np.asarray(lyap.value(ys[0], ys[1], ys[2]), dtype=float)
        extra_prev = [np.asarray(fn.value(ys[0], ys[1], ys[2]), dtype=float) for fn in extra]
        met = _metric_arrays(space, ys[0], ys[1], ys[2])
    min_margin = np.minimum(min_margin, margins(ys))
    newly = active & (met < s.stop_tol)
    converged |= newly
    conv_time[newly] = 0.0
    active &= ~newly

    n_max = int(math.ceil(s.t_max / s.dt - 1e-9))
    h = s.dt
    with np.errstate(all="ignore"):
        for k in range(1, n_max + 1):
            if not active.any():
                break
            k1s = field(ys)
            k2s = field(ys + 0.5 * h * k1s)
            k3s = field(ys + 0.5 * h * k2s)
            k4s = field(ys + h * k3s)
            ys_next = ys + (h / 6.0) * (k1s + 2.0 * (k2s + k3s) + k4s)
            ys = np.where(active, ys_next, ys)

            bad = active & ~np.isfinite(ys).all(axis=0)
            numeric_failures |= bad
            active &= ~bad

            limit = math.pi - s.barrier_margin
            tripped = np.zeros(n, dtype=bool)
            if space.delta_constrained:
                tripped |= np.abs(ys[1]) >= limit
            if space.gamma_constrained:
                tripped |= np.abs(ys[2]) >= limit
            tripped &= active
            barrier_trips |= tripped
            active &= ~tripped

            max_ad = np.maximum(max_ad, np.where(active, np.abs(ys[1]), max_ad))
            max_ag = np.maximum(max_ag, np.where(active, np.abs(ys[2]), max_ag))
            min_margin = np.minimum(min_margin, np.where(active, margins(ys), min_margin))

            v_now = np.asarray(lyap.value(ys[0], ys[1], ys[2]), dtype=float)
            v_viol += (active & (v_now > v_prev + V_MONOTONE_TOL)).astype(int)
            v_prev = np.where(active, v_now, v_prev)
            for ei, fn in enumerate(extra):
                e_now = np.asarray(fn.value(ys[0], ys[1], ys[2]), dtype=float)
                extra_viol[ei] += (active & (e_now > extra_prev[ei] + V_MONOTONE_TOL)).astype(int)
                extra_prev[ei] = np.where(active, e_now, extra_prev[ei])
            met = _metric_arrays(space, ys[0], ys[1], ys[2])
            newly = active & (met < s.stop_tol)
            converged |= newly
            conv_time[newly] = k * h
            active &= ~newly

    return BatchResult(
        converged=converged,
        convergence_time=conv_time,
        v_violations=v_viol,
        min_barrier_margin=min_margin,
        max_abs_delta=max_ad,
        max_abs_gamma=max_ag,
        barrier_trips=barrier_trips,
        numeric_failures=numeric_failures,
        final_states=ys.T.copy(),
        final_metric=met,
        extra_v_violations=extra_viol if extra else None,
    )


# ---------------------------------------------------------------------------
# Sweeps.
# ---------------------------------------------------------------------------


@dataclass
class SweepRecord:
    """Per-grid-point summary of one run."""

    index: int
    initial: tuple[float, float, float]
    termination: str
    convergence_time: float | None
    path_length: float
    steering_effort: float
    min_barrier_margin: float
    v_violations: int
    front_crossings: int
    error: str | None = None


def _replace_initial(s: Scenario, initial) -> Scenario:
    return Scenario(
        controller=s.controller,
        gains=s.gains,
        initial=initial,
        frame=s.frame,
        dt=s.dt,
        t_max=s.t_max,
        stop_tol=s.stop_tol,
        barrier_margin=s.barrier_margin,
        composite=s.composite,
        composite_order=s.composite_order,
    )


def _run_one(args) -> SweepRecord:
    i, s, initial = args
    try:
        traj = integrate(_replace_initial(s, initial))
    except UniparkError as e:
        return SweepRecord(
            index=i,
            initial=_initial_tuple(initial),
            termination="error",
            convergence_time=None,
            path_length=math.nan,
            steering_effort=math.nan,
            min_barrier_margin=math.nan,
            v_violations=0,
            front_crossings=0,
            error=str(e),
        )
    return SweepRecord(
        index=i,
        initial=_initial_tuple(initial),
        termination=traj.termination.value,
        convergence_time=traj.convergence_time(),
        path_length=traj.path_length(),
        steering_effort=traj.steering_effort(),
        min_barrier_margin=traj.min_barrier_margin(ctl.controller_space(s.controller)),
        v_violations=traj.v_monotonicity_violations(),
        front_crossings=len(front_line_crossings(traj)),
        error=None,
    )


def _initial_tuple(initial) -> tuple[float, float, float]:
    if isinstance(initial, PolarState):
        return (initial.rho, initial.delta, initial.gamma)
    return (initial.x, initial.y, initial.theta)


def sweep(base: Scenario, grid: Sequence, workers: int = 1) -> list[SweepRecord]:
    """Run :func:`integrate` for every initial state in ``grid``.

    Runs are independent; with ``workers > 1`` they execute concurrently and
    the records are still returned in grid order.  Per-point failures are
    recorded in the ``error`` field rather than raised.
    """
    if len(grid) == 0:
        raise ConfigError("sweep grid is empty")
    jobs = [(i, base, initial) for i, initial in enumerate(grid)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            records = list(ex.map(_run_one, jobs))
    else:
        records = [_run_one(j) for j in jobs]
    return records
