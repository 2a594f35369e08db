"""Dense-grid intensity kernels, NumPy implementation.

The compiled extension (_kernels_cy) exposes the same callables; pattern.py
uses whichever module the backend selector picked.  All kernels take the raw
grid plus scalar physics parameters and return unnormalized intensities in
the convention where the full (equal-amplitude) pattern integrates to ~1.
"""
import math

import numpy as np

_SQRT2 = math.sqrt(2.0)


def packet_grid(xs, center, eps, tau):
    """Complex evolved packet amplitude on a grid."""
    xs = np.asarray(xs, dtype=float)
    prefactor = 1.0 / _SQRT2 / np.sqrt(math.sqrt(2.0 * math.pi) * (eps + 0.5j * tau / eps))
    return prefactor * np.exp(-((xs - center) ** 2) / (4.0 * eps * eps + 2.0j * tau))


def direct_grid(xs, slit_sep, eps, tau, a1, a2, ip):
    """Screen intensity from the complex amplitudes of both branches.

    ip is the detector overlap <d1|d2>; a1, a2 are the (complex, normalized)
    path amplitudes.  The branch tied to d1 is the packet centered at
    +slit_sep/2.
    """
    g1 = packet_grid(xs, +0.5 * slit_sep, eps, tau)
    g2 = packet_grid(xs, -0.5 * slit_sep, eps, tau)
    cross = np.conj(a1) * a2 * ip * np.conj(g1) * g2
    return 2.0 * (
        abs(a1) ** 2 * (g1.real**2 + g1.imag**2)
        + abs(a2) ** 2 * (g2.real**2 + g2.imag**2)
        + 2.0 * cross.real
    )


def closed_grid(xs, slit_sep, eps, tau, s, theta):
    """Closed-form screen intensity for equal path amplitudes."""
    envelope, interference = closed_parts_grid(xs, slit_sep, eps, tau, s, theta)
    return envelope + interference


def closed_parts_grid(xs, slit_sep, eps, tau, s, theta):
    """(envelope, interference) decomposition of the closed-form intensity.

    envelope: Gaussian-cosh hump sum; interference: the overlap-weighted
    cosine cross term.  Their sum is the closed-form intensity.
    """
    xs = np.asarray(xs, dtype=float)
    sig2 = eps * eps + (tau / (2.0 * eps)) ** 2
    kap = slit_sep * tau / (4.0 * eps**4 + tau * tau)
    pref = 1.0 / math.sqrt(2.0 * math.pi * sig2)
    gauss = pref * np.exp(-(xs * xs + 0.25 * slit_sep * slit_sep) / (2.0 * sig2))
    envelope = gauss * np.cosh(xs * slit_sep / (2.0 * sig2))
    interference = gauss * (s * np.cos(kap * xs - theta))
    return envelope, interference


def conditional_grid(xs, slit_sep, eps, tau, a1, a2, b_d1, b_d2, p_d1, p_d2):
    """Screen intensities conditioned on the two detector-basis outcomes.

    b_d1 = <b|d1> etc. for the first basis state, p_* for its orthogonal
    partner.  Returns the two branch intensities; their sum equals
    direct_grid for the same state.
    """
    g1 = packet_grid(xs, +0.5 * slit_sep, eps, tau)
    g2 = packet_grid(xs, -0.5 * slit_sep, eps, tau)
    u = _SQRT2 * (b_d1 * a1 * g1 + b_d2 * a2 * g2)
    v = _SQRT2 * (p_d1 * a1 * g1 + p_d2 * a2 * g2)
    return u.real**2 + u.imag**2, v.real**2 + v.imag**2
