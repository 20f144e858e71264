"""Numerical certificate verification.

Runs, per steering family: positive-definiteness sampling, analytic-gradient
checks against central finite differences, closed-form rate checks (exact
match for the forwarding/backstepping rates, domination for the Young-bounded
passivity rates), barrier blow-up checks, Jacobian checks against finite
differences of the nonlinear closed loops, pole-assignment round trips, and
the two scalar appendix inequalities on a dense grid.

Every check returns a :class:`CheckResult` with its worst margin so reports
stay machine-readable; :func:`run_all` aggregates them into the JSON report
emitted by the CLI.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import controllers as ctl
from .controllers import ControllerId, Gains
from .linearization import (
    DesignFamily,
    PoleSpec,
    assign_gains,
    family_of_controller,
    jacobian,
    jacobian_eigenvalues,
)
from .lyapunov import (
    RateKind,
    SteeringClf,
    appendix_bounds_slack,
    steering_clf,
    steering_directional_derivative,
)
from .spaces import StateSpaceId

__all__ = [
    "CheckResult",
    "sample_interior",
    "sample_metric_ball",
    "positive_definiteness_check",
    "gradient_check",
    "rate_check",
    "barrier_blowup_check",
    "jacobian_fd_check",
    "pole_roundtrip_check",
    "lemma_grid_check",
    "strict_gain_sets",
    "run_all",
]

GRAD_RTOL = 1e-6
RATE_EQ_RTOL = 1e-9
RATE_DOM_SLACK = -1e-12
JACOBIAN_ATOL = 1e-6
POLE_ROUNDTRIP_TOL = 1e-10
LEMMA_SLACK = -1e-12


@dataclass
class CheckResult:
    name: str
    subject: str
    passed: bool
    worst: float
    details: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        # Keep records JSON-serialisable regardless of numpy scalar leakage.
        self.passed = bool(self.passed)
        self.worst = float(self.worst)

    def to_record(self) -> dict:
        return asdict(self)


def sample_interior(
    space: StateSpaceId, n: int, rng: np.random.Generator, angle_span: float = 2.9
) -> np.ndarray:
    """(n, 2) samples of (delta, gamma) strictly inside ``space``.

    Unconstrained axes draw from [-3, 3]; constrained axes stay a safe
    distance from the barrier so finite differences have room.
    """
    d_hi = min(angle_span, math.pi - 0.2) if space.delta_constrained else 3.0
    g_hi = min(angle_span, math.pi - 0.2) if space.gamma_constrained else 3.0
    return np.column_stack([rng.uniform(-d_hi, d_hi, n), rng.uniform(-g_hi, g_hi, n)])


def sample_metric_ball(
    space: StateSpaceId, n: int, rng: np.random.Generator, max_metric: float = 10.0
) -> np.ndarray:
    """(n, 3) polar states with metric in (0.3, max_metric], inside ``space``."""
    m = rng.uniform(0.3, max_metric, n)
    w = rng.dirichlet((1.0, 1.0, 1.0), n)
    signs = rng.choice((-1.0, 1.0), size=(n, 2))
    rho = w[:, 0] * m
    big_d = w[:, 1] * m * signs[:, 0]
    big_g = w[:, 2] * m * signs[:, 1]
    delta = 2.0 * np.arctan(0.5 * big_d) if space.delta_constrained else big_d
    gamma = 2.0 * np.arctan(0.5 * big_g) if space.gamma_constrained else big_g
    return np.column_stack([rho, delta, gamma])


def strict_gain_sets(n: int, rng: np.random.Generator) -> list[Gains]:
    """Random positive gain sets satisfying k1*k3 >= k2^2 exactly by
    construction (k2 drawn below sqrt(k1*k3))."""
    out = []
    for _ in range(n):
        k1 = rng.uniform(0.4, 3.0)
        k3 = rng.uniform(0.4, 3.0)
        k2 = math.sqrt(k1 * k3) * rng.uniform(0.3, 1.0)
        out.append(Gains(k1=k1, k2=k2, k3=k3, k4=rng.uniform(0.4, 3.0)))
    return out


def positive_definiteness_check(clf: SteeringClf, samples: np.ndarray) -> CheckResult:
    """V(0,0) = 0 and V > 0 at every off-origin sample."""
    v0 = float(clf.value(0.0, 0.0))
    vals = np.asarray(clf.value(samples[:, 0], samples[:, 1]))
    worst = float(np.min(vals))
    passed = abs(v0) < 1e-14 and worst > 0.0
    return CheckResult(
        "positive_definiteness", clf.controller.value, passed, worst, {"value_at_origin": v0}
    )


def gradient_check(
    clf: SteeringClf, samples: np.ndarray, grad_fn: Callable | None = None
) -> CheckResult:
    """Analytic gradient vs central finite differences, relative error below
    GRAD_RTOL.  ``grad_fn`` can substitute a (deliberately wrong) gradient,
    which the suite uses as a negative control."""
    grad_fn = grad_fn or clf.grad
    d, c = samples[:, 0], samples[:, 1]
    gd, gc = grad_fn(d, c)
    hd = 1e-6 * np.maximum(1.0, np.abs(d))
    hc = 1e-6 * np.maximum(1.0, np.abs(c))
    fd_d = (clf.value(d + hd, c) - clf.value(d - hd, c)) / (2.0 * hd)
    fd_c = (clf.value(d, c + hc) - clf.value(d, c - hc)) / (2.0 * hc)
    scale = np.maximum(1.0, np.maximum(np.abs(fd_d), np.abs(fd_c)))
    err = np.maximum(np.abs(gd - fd_d), np.abs(gc - fd_c)) / scale
    worst = float(np.max(err))
    return CheckResult("gradient_fd", clf.controller.value, worst < GRAD_RTOL, worst)


def rate_check(clf: SteeringClf, samples: np.ndarray) -> CheckResult:
    """Closed-form rate vs the directional derivative along the steering
    subsystem: equal to RATE_EQ_RTOL for equality-flag families, dominating
    with slack >= RATE_DOM_SLACK for upper-bound families."""
    d, c = samples[:, 0], samples[:, 1]
    tilde = lambda dd, cc: ctl.steering_tilde_many(clf.controller, clf.gains, dd, cc)
    vdot = np.asarray(steering_directional_derivative(clf, tilde, d, c))
    rate = np.asarray(clf.rate(d, c))
    if clf.rate_kind is RateKind.EQUALITY:
        err = np.abs(vdot - rate) / np.maximum(1.0, np.abs(rate))
        worst = float(np.max(err))
        return CheckResult("rate_equality", clf.controller.value, worst < RATE_EQ_RTOL, worst)
    slack = rate - vdot
    worst = float(np.min(slack))
    return CheckResult("rate_domination", clf.controller.value, worst >= RATE_DOM_SLACK, worst)


_BLOWUP_EXPONENTS = np.arange(1, 9)


def barrier_blowup_check(clf: SteeringClf) -> CheckResult:
    """V diverges monotonically along approach sequences to each constrained
    axis boundary (angle = pi - 10^-i)."""
    space = clf.space
    seqs = []
    approach = math.pi - 10.0 ** (-_BLOWUP_EXPONENTS.astype(float))
    if space.delta_constrained:
        seqs.append(("delta", clf.value(approach, np.full_like(approach, 0.5))))
        seqs.append(("delta-", clf.value(-approach, np.full_like(approach, 0.5))))
    if space.gamma_constrained:
        seqs.append(("gamma", clf.value(np.full_like(approach, 0.5), approach)))
        seqs.append(("gamma-", clf.value(np.full_like(approach, 0.5), -approach)))
    if not seqs:
        return CheckResult("barrier_blowup", clf.controller.value, True, math.inf,
                           {"note": "no constrained axis"})
    worst = math.inf
    ok = True
    for _, vals in seqs:
        vals = np.asarray(vals, dtype=float)
        ok &= bool(np.all(np.diff(vals) > 0.0)) and vals[-1] > 1e6
        worst = min(worst, float(vals[-1]))
    return CheckResult("barrier_blowup", clf.controller.value, ok, worst)


# Controllers covered by the closed-form Jacobians, with their design family.
JACOBIAN_CONTROLLERS: tuple[ControllerId, ...] = (
    ControllerId.GENOVA,
    ControllerId.BOLSA,
    ControllerId.BOPA,
    ControllerId.BAGAL,
    ControllerId.GLOFO,
    ControllerId.BOFO,
    ControllerId.GLOBA,
    ControllerId.BARFLI,
)


def jacobian_fd_check(cid: ControllerId, g: Gains, at_rho: float = 1e-6) -> CheckResult:
    """Analytic closed-loop Jacobian vs a central finite-difference Jacobian
    of the nonlinear closed loop at (at_rho, 0, 0)."""
    family = family_of_controller(cid)
    analytic = jacobian(family, g)
    f = ctl.closed_loop_field(cid, g)
    p0 = np.array([at_rho, 0.0, 0.0])
    h = 1e-6
    fd = np.zeros((3, 3))
    for j in range(3):
        dp = np.zeros(3)
        dp[j] = h
        hi = f(*(p0 + dp))
        lo = f(*(p0 - dp))
        fd[:, j] = (np.asarray(hi) - np.asarray(lo)) / (2.0 * h)
    worst = float(np.max(np.abs(fd - analytic)))
    return CheckResult(
        "jacobian_fd", cid.value, worst < JACOBIAN_ATOL, worst, {"family": family.value}
    )


def _sample_poles(family: DesignFamily, rng: np.random.Generator) -> PoleSpec:
    p1 = rng.uniform(0.2, 3.0)
    if family is DesignFamily.PASSIVITY:
        re = rng.uniform(0.2, 2.0)
        im = math.sqrt(3.0) * re * (1.0 + rng.uniform(0.0, 1.5))
        return PoleSpec(p1, complex(re, im), complex(re, -im))
    if family is DesignFamily.FORWARDING:
        p2, p3 = sorted(rng.uniform(0.2, 3.0, 2))
        return PoleSpec(p1, p2, p3)
    if rng.random() < 0.5:
        p2, p3 = sorted(rng.uniform(0.2, 3.0, 2))
        return PoleSpec(p1, p2, p3)
    re = rng.uniform(0.2, 2.0)
    im = rng.uniform(0.1, 2.0)
    return PoleSpec(p1, complex(re, im), complex(re, -im))


def _eig_error(family: DesignFamily, g: Gains, poles: PoleSpec) -> float:
    achieved = sorted(jacobian_eigenvalues(family, g), key=lambda z: (z.real, z.imag))
    wanted = sorted(poles.as_eigenvalues(), key=lambda z: (z.real, z.imag))
    return max(abs(a - w) for a, w in zip(achieved, wanted))


def pole_roundtrip_check(
    family: DesignFamily, rng: np.random.Generator, n: int = 1000
) -> CheckResult:
    """assign_gains -> jacobian -> eigenvalues reproduces the request."""
    worst = 0.0
    for _ in range(n):
        poles = _sample_poles(family, rng)
        kwargs = {}
        if family is DesignFamily.BACKSTEPPING:
            kwargs["epsilon"] = rng.uniform(0.05, 0.95) * poles.p2.real
        for g in assign_gains(family, poles, **kwargs):
            worst = max(worst, _eig_error(family, g, poles))
            if family is DesignFamily.PASSIVITY and not g.strict_passivity:
                return CheckResult("pole_roundtrip", family.value, False, worst,
                                   {"note": "strict-mode output violated k1*k3 >= k2^2"})
    return CheckResult("pole_roundtrip", family.value, worst < POLE_ROUNDTRIP_TOL, worst)


def lemma_grid_check(step: float = 1e-3, span: float = 20.0) -> CheckResult:
    """Both appendix inequalities on the grid k in {1..10}, x in [-span, span]."""
    x = np.arange(-span, span + 0.5 * step, step)
    worst = math.inf
    for k in range(1, 11):
        s1, s2 = appendix_bounds_slack(float(k), x)
        worst = min(worst, float(np.min(s1)), float(np.min(s2)))
    return CheckResult("lemma_grid", "appendix", worst >= LEMMA_SLACK, worst)


def certificate_samples(clf: SteeringClf, pts: np.ndarray, cap: int = 20) -> list[dict]:
    """Per-sample certificate records (V, rate, flag, slack margin) for the
    first ``cap`` points, for the machine-readable report."""
    pts = pts[:cap]
    d, c = pts[:, 0], pts[:, 1]
    v = np.asarray(clf.value(d, c), dtype=float)
    rate = np.asarray(clf.rate(d, c), dtype=float)
    tilde = lambda dd, cc: ctl.steering_tilde_many(clf.controller, clf.gains, dd, cc)
    vdot = np.asarray(steering_directional_derivative(clf, tilde, d, c), dtype=float)
    return [
        {
            "delta": float(d[i]),
            "gamma": float(c[i]),
            "V": float(v[i]),
            "rate": float(rate[i]),
            "flag": clf.rate_kind.value,
            "margin": float(rate[i] - vdot[i]),
        }
        for i in range(len(pts))
    ]


def run_all(seed: int = 0, samples: int = 1000, extra_gain_sets: int = 3) -> dict:
    """Full verification sweep; returns a JSON-ready report."""
    rng = np.random.default_rng(seed)
    gain_sets = [Gains()] + strict_gain_sets(extra_gain_sets, rng)
    checks: list[CheckResult] = []
    for cid in JACOBIAN_CONTROLLERS:
        for gi, g in enumerate(gain_sets):
            clf = steering_clf(cid, g)
            pts = sample_interior(clf.space, samples, rng)
            for res in (
                positive_definiteness_check(clf, pts),
                gradient_check(clf, pts),
                rate_check(clf, pts),
            ):
                res.details["gain_set"] = gi
                if gi == 0 and res.name == "positive_definiteness":
                    res.details["sample_records"] = certificate_samples(clf, pts)
                checks.append(res)
        checks.append(barrier_blowup_check(steering_clf(cid, Gains())))
        checks.append(jacobian_fd_check(cid, gain_sets[1]))
    for family in DesignFamily:
        checks.append(pole_roundtrip_check(family, rng, n=max(100, samples)))
    checks.append(lemma_grid_check())
    return {
        "schema_version": 1,
        "seed": seed,
        "samples": samples,
        "checks": [c.to_record() for c in checks],
        "all_passed": all(c.passed for c in checks),
    }
