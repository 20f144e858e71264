"""Independent high-precision oracles for the steering laws.

Each law is transliterated here directly from its closed form using mpmath
at 40 significant digits, with mpmath's own sine integral.  These oracles
share no code with the package implementation, so agreement to 1e-12 is a
genuine cross-check and not a tautology.
"""

from __future__ import annotations

import mpmath as mp

mp.mp.dps = 40


def _sinc(a):
    return mp.mpf(1) if a == 0 else mp.sin(a) / a


def _psi(z, gamma):
    if z == 0:
        return mp.cos(2 * gamma)
    return (mp.sin(2 * z - 2 * gamma) + mp.sin(2 * gamma)) / (2 * z)


def tilde_genova(k, d, c):
    return k["k2"] * c + k["k3"] * _sinc(2 * c) * d


def tilde_bolsa(k, d, c):
    return k["k2"] * mp.sin(c) + k["k3"] * mp.cos(c) / (1 + mp.tan(c / 2) ** 2) ** 2 * d


def tilde_bopa(k, d, c):
    s = mp.tan(d / 2)
    return k["k2"] * c + 2 * k["k3"] * _sinc(2 * c) * (1 + s**2) * s


def tilde_bagal(k, d, c):
    s = mp.tan(d / 2)
    return k["k2"] * mp.sin(c) + 2 * k["k3"] * mp.cos(c) / (1 + mp.tan(c / 2) ** 2) ** 2 * (1 + s**2) * s


def tilde_glofo(k, d, c):
    zeta = d + k["k1"] / (2 * k["k2"]) * mp.si(2 * c)
    return k["k2"] * c + k["k3"] * _sinc(2 * c) * zeta


def tilde_bofo(k, d, c):
    zeta = d + k["k1"] / k["k2"] * mp.sin(c)
    return k["k2"] * mp.sin(c) + k["k3"] * mp.cos(c) / (1 + mp.tan(c / 2) ** 2) ** 2 * zeta


def tilde_globa(k, d, c):
    z = c + mp.atan(2 * k["k2"] * d) / 2
    return (
        k["k4"] * z
        + k["k1"] / 2 * k["k2"] / (1 + 4 * k["k2"] ** 2 * d**2) * mp.sin(2 * c)
        + k["k3"] * _psi(z, c) * d
    )


def tilde_barfli(k, d, c):
    s = mp.tan(d / 2)
    z = c + mp.atan(4 * k["k2"] * s) / 2
    return (
        k["k4"] * z
        + k["k1"] / 2 * k["k2"] * (1 + s**2) / (1 + 16 * k["k2"] ** 2 * s**2) * mp.sin(2 * c)
        + 2 * k["k3"] * _psi(z, c) * (1 + s**2) * s
    )


def omega_globa_interp(k, d, c):
    z = c + mp.atan(2 * k["k2"] * d) / 2
    n2 = 1 + 4 * k["k2"] ** 2 * d**2
    n = mp.sqrt(n2)
    b = 1 + k["k2"] / n2
    p = _psi(z, c)
    cc = p * n - k["k1"] * k["k2"] / k["k3"] * b
    return (k["k4"] + k["k3"] / (2 * k["k2"]) * cc**2 / n + k["k1"] * abs(p) * b) * z


def omega_globa_cons(k, d, c):
    z = c + mp.atan(2 * k["k2"] * d) / 2
    k5 = k["k1"] * (1 + k["k2"]) * (1 + k["k1"] * k["k2"] * (1 + k["k2"]) / k["k3"])
    return (k["k4"] + k5 + k["k3"] / k["k2"] * (1 + 4 * k["k2"] ** 2 * d**2)) * z


def omega_libac(k, d, c):
    z = c + d / 2
    return (
        k["k3"] * z
        + 3 * k["k1"] / 4 * mp.sin(2 * c)
        + k["k2"] * mp.tan(d / 2) / (1 + mp.cos(d)) * _psi(z, c)
    )


# Laws stated directly as the total steering input.
DIRECT_TOTAL = {"globa-interp", "globa-cons", "libac"}

TILDE_ORACLES = {
    "genova": tilde_genova,
    "bolsa": tilde_bolsa,
    "bopa": tilde_bopa,
    "bagal": tilde_bagal,
    "glofo": tilde_glofo,
    "bofo": tilde_bofo,
    "globa": tilde_globa,
    "barfli": tilde_barfli,
    "globa-interp": omega_globa_interp,
    "globa-cons": omega_globa_cons,
    "libac": omega_libac,
}


def steering_total_oracle(name: str, k: dict, d, c):
    """Total steering input at 40-digit precision."""
    law = TILDE_ORACLES[name](k, mp.mpf(d), mp.mpf(c))
    if name in DIRECT_TOTAL:
        return law
    return k["k1"] / 2 * mp.sin(2 * mp.mpf(c)) + law


def steering_tilde_oracle(name: str, k: dict, d, c):
    """Post-cancellation steering term at 40-digit precision."""
    law = TILDE_ORACLES[name](k, mp.mpf(d), mp.mpf(c))
    if name in DIRECT_TOTAL:
        return law - k["k1"] / 2 * mp.sin(2 * mp.mpf(c))
    return law
