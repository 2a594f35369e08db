# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Dense-grid intensity kernels, compiled implementation.

Mirrors _kernels_np exactly (same signatures, same math); the hot loops run
in C with the complex packet amplitudes assembled from exp/cos/sin.
"""
import cmath
import math

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, cosh, exp, sin, sqrt

cnp.import_array()

cdef double _SQRT2 = sqrt(2.0)
cdef double _TWO_PI = 6.283185307179586


cdef inline (double, double) _packet(double x, double center, double inv_beta_re,
                                     double inv_beta_im) noexcept nogil:
    # exp(-(x-center)^2 / beta) with 1/beta passed in split form
    cdef double q = -(x - center) * (x - center)
    cdef double re = q * inv_beta_re
    cdef double im = q * inv_beta_im
    cdef double m = exp(re)
    return m * cos(im), m * sin(im)


def _prefactor(double eps, double tau):
    # A_t, principal branch (python complex; evaluated once per call)
    return 1.0 / math.sqrt(2.0) / cmath.sqrt(math.sqrt(2.0 * math.pi) * (eps + 0.5j * tau / eps))


def packet_grid(xs, double center, double eps, double tau):
    """Complex evolved packet amplitude on a grid."""
    cdef cnp.ndarray[double, ndim=1] x = np.ascontiguousarray(xs, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=np.complex128)
    pref = _prefactor(eps, tau)
    cdef double pre_re = pref.real, pre_im = pref.imag
    cdef double beta_re = 4.0 * eps * eps, beta_im = 2.0 * tau
    cdef double den = beta_re * beta_re + beta_im * beta_im
    cdef double ib_re = beta_re / den, ib_im = -beta_im / den
    cdef double gre, gim
    cdef Py_ssize_t i
    for i in range(n):
        gre, gim = _packet(x[i], center, ib_re, ib_im)
        out[i] = complex(pre_re * gre - pre_im * gim, pre_re * gim + pre_im * gre)
    return out


def direct_grid(xs, double slit_sep, double eps, double tau,
                a1, a2, ip):
    """Screen intensity from the complex amplitudes of both branches."""
    cdef cnp.ndarray[double, ndim=1] x = np.ascontiguousarray(xs, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n, dtype=np.float64)
    pref = _prefactor(eps, tau)
    cdef double pnorm = pref.real * pref.real + pref.imag * pref.imag
    ccross = complex(a1).conjugate() * complex(a2) * complex(ip)
    cdef double k_re = ccross.real, k_im = ccross.imag
    cdef double w1 = abs(complex(a1)) ** 2, w2 = abs(complex(a2)) ** 2
    cdef double beta_re = 4.0 * eps * eps, beta_im = 2.0 * tau
    cdef double den = beta_re * beta_re + beta_im * beta_im
    cdef double ib_re = beta_re / den, ib_im = -beta_im / den
    cdef double half = 0.5 * slit_sep
    cdef double g1r, g1i, g2r, g2i, zre, zim
    cdef Py_ssize_t i
    for i in range(n):
        g1r, g1i = _packet(x[i], half, ib_re, ib_im)
        g2r, g2i = _packet(x[i], -half, ib_re, ib_im)
        # z = conj(g1) * g2
        zre = g1r * g2r + g1i * g2i
        zim = g1r * g2i - g1i * g2r
        out[i] = 2.0 * pnorm * (
            w1 * (g1r * g1r + g1i * g1i)
            + w2 * (g2r * g2r + g2i * g2i)
            + 2.0 * (k_re * zre - k_im * zim)
        )
    return out


def closed_grid(xs, double slit_sep, double eps, double tau, double s, double theta):
    """Closed-form screen intensity for equal path amplitudes."""
    envelope, interference = closed_parts_grid(xs, slit_sep, eps, tau, s, theta)
    return envelope + interference


def closed_parts_grid(xs, double slit_sep, double eps, double tau, double s, double theta):
    """(envelope, interference) decomposition of the closed-form intensity."""
    cdef cnp.ndarray[double, ndim=1] x = np.ascontiguousarray(xs, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0]
    cdef cnp.ndarray[double, ndim=1] env = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] intf = np.empty(n, dtype=np.float64)
    cdef double sig2 = eps * eps + (tau / (2.0 * eps)) ** 2
    cdef double kap = slit_sep * tau / (4.0 * eps * eps * eps * eps + tau * tau)
    cdef double pref = 1.0 / sqrt(_TWO_PI * sig2)
    cdef double quarter_d2 = 0.25 * slit_sep * slit_sep
    cdef double inv2sig2 = 1.0 / (2.0 * sig2)
    cdef double gauss
    cdef Py_ssize_t i
    for i in range(n):
        gauss = pref * exp(-(x[i] * x[i] + quarter_d2) * inv2sig2)
        env[i] = gauss * cosh(x[i] * slit_sep * inv2sig2)
        intf[i] = gauss * (s * cos(kap * x[i] - theta))
    return env, intf


def conditional_grid(xs, double slit_sep, double eps, double tau,
                     a1, a2, b_d1, b_d2, p_d1, p_d2):
    """Screen intensities conditioned on the two detector-basis outcomes."""
    cdef cnp.ndarray[double, ndim=1] x = np.ascontiguousarray(xs, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0]
    cdef cnp.ndarray[double, ndim=1] out_b = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] out_p = np.empty(n, dtype=np.float64)
    pref = _prefactor(eps, tau)
    cb1 = _SQRT2 * complex(b_d1) * complex(a1) * pref
    cb2 = _SQRT2 * complex(b_d2) * complex(a2) * pref
    cp1 = _SQRT2 * complex(p_d1) * complex(a1) * pref
    cp2 = _SQRT2 * complex(p_d2) * complex(a2) * pref
    cdef double cb1r = cb1.real, cb1i = cb1.imag, cb2r = cb2.real, cb2i = cb2.imag
    cdef double cp1r = cp1.real, cp1i = cp1.imag, cp2r = cp2.real, cp2i = cp2.imag
    cdef double beta_re = 4.0 * eps * eps, beta_im = 2.0 * tau
    cdef double den = beta_re * beta_re + beta_im * beta_im
    cdef double ib_re = beta_re / den, ib_im = -beta_im / den
    cdef double half = 0.5 * slit_sep
    cdef double g1r, g1i, g2r, g2i, ur, ui, vr, vi
    cdef Py_ssize_t i
    for i in range(n):
        g1r, g1i = _packet(x[i], half, ib_re, ib_im)
        g2r, g2i = _packet(x[i], -half, ib_re, ib_im)
        ur = cb1r * g1r - cb1i * g1i + cb2r * g2r - cb2i * g2i
        ui = cb1r * g1i + cb1i * g1r + cb2r * g2i + cb2i * g2r
        vr = cp1r * g1r - cp1i * g1i + cp2r * g2r - cp2i * g2i
        vi = cp1r * g1i + cp1i * g1r + cp2r * g2i + cp2i * g2r
        out_b[i] = ur * ur + ui * ui
        out_p[i] = vr * vr + vi * vi
    return out_b, out_p
