"""Joint particle-detector state at the screen and its intensity patterns.

Two independent routes compute the same physics: ``intensity_direct`` expands
the squared norm of the superposed complex branch amplitudes with the
detector inner products, while ``intensity_closed_form`` evaluates the
Gaussian-cosh/cosine closed form.  They must agree to ~1e-10 relative on any
grid, which the test suite enforces; keep them independent.

``conditional_patterns`` projects the detector side onto a measurement basis
before squaring, producing the eraser's conditioned fringe/antifringe pair.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import NumericFailure, ValidationError
from .packets import Geometry, effective_tau
from .qubit import DetectorPair, MeasurementBasis, inner_product

#: Values in [CLAMP_FLOOR, 0) are rounding residue and are clamped to 0;
#: anything below is a numeric failure, not noise.
CLAMP_FLOOR = -1e-15

_SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class ScreenGrid:
    """Uniform grid of screen positions (meters)."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise ValidationError("grid bounds must be finite")
        if not self.x_min < self.x_max:
            raise ValidationError(f"x_min must be below x_max, got [{self.x_min}, {self.x_max}]")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ValidationError(f"n_points must be an integer >= 2, got {self.n_points!r}")
        object.__setattr__(self, "n_points", int(self.n_points))

    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)


@dataclass(frozen=True)
class JointState:
    """Entangled particle-detector state evolved to the screen.

    path_amps are the complex amplitudes multiplying the two branches
    (detector state d1 rides the packet centered at +slit_sep/2); they must
    be normalized.  The default is the symmetric illumination the closed form
    assumes.
    """

    geom: Geometry
    pair: DetectorPair
    path_amps: tuple[complex, complex] = (_SQRT_HALF, _SQRT_HALF)

    def __post_init__(self):
        amps = tuple(complex(a) for a in self.path_amps)
        if len(amps) != 2 or not all(cmath.isfinite(a) for a in amps):
            raise ValidationError("path_amps must be two finite complex numbers")
        norm = abs(amps[0]) ** 2 + abs(amps[1]) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValidationError(f"path amplitudes not normalized: {norm!r}")
        object.__setattr__(self, "path_amps", amps)

    def has_equal_amps(self) -> bool:
        return abs(self.path_amps[0] - self.path_amps[1]) <= 1e-12


@dataclass(frozen=True, eq=False)
class PatternSamples:
    """Screen-intensity samples (probability density per meter).

    norm_constant is the raw trapezoid integral divided out during
    normalization.  provenance records which route produced the samples;
    "conditional" branches share their normalization with their partner so
    that the pair sums to the unconditioned pattern.
    """

    grid: ScreenGrid
    intensity: np.ndarray
    norm_constant: float
    provenance: str


@dataclass(frozen=True, eq=False)
class EraserResult:
    """Conditioned patterns for the two outcomes of a detector measurement."""

    i_b: PatternSamples
    i_b_perp: PatternSamples
    i_sum: PatternSamples
    branch_weights: tuple[float, float]


def fringe_width(geom: Geometry) -> float:
    """Spacing of neighbouring fringes:
    wavelength*L/d + 16 pi^2 eps^4 / (wavelength*d*L)."""
    lam, d, dist, eps = geom.wavelength, geom.slit_sep, geom.screen_dist, geom.packet_width
    return lam * dist / d + 16.0 * math.pi**2 * eps**4 / (lam * d * dist)


def default_grid(geom: Geometry, n_points: int = 8192) -> ScreenGrid:
    """Centered grid spanning +-5 fringe widths.

    Wide enough to hold >= 10 oscillation periods for stable visibility
    extraction, fine enough to satisfy the fringe-resolution guard.
    """
    half_span = 5.0 * fringe_width(geom)
    return ScreenGrid(-half_span, half_span, n_points)


def _eval_checked(x, fn):
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = fn(xs)
    return float(out[0]) if np.isscalar(x) or np.ndim(x) == 0 else out


def intensity_direct(x, js: JointState):
    """Screen intensity via the four-term amplitude expansion.

    sum_ij conj(a_i) a_j <d_i|d_j> conj(g_i) g_j over the two branches, each
    g the evolved complex packet.  Works for any path amplitudes.
    """
    geom = js.geom
    tau = effective_tau(geom)
    ip = inner_product(js.pair.d1, js.pair.d2)
    a1, a2 = js.path_amps
    return _eval_checked(
        x,
        lambda xs: _backend.direct_grid(
            xs, geom.slit_sep, geom.packet_width, tau, a1, a2, ip
        ),
    )


def intensity_closed_form(x, js: JointState):
    """Screen intensity via the Gaussian-cosh/cosine closed form.

    Only valid for equal path amplitudes (the symmetric state the closed form
    is derived for); raises ValidationError otherwise.
    """
    _require_equal_amps(js)
    geom = js.geom
    tau = effective_tau(geom)
    return _eval_checked(
        x,
        lambda xs: _backend.closed_grid(
            xs, geom.slit_sep, geom.packet_width, tau,
            js.pair.overlap_mag, js.pair.overlap_phase,
        ),
    )


def closed_form_parts(x, js: JointState):
    """(envelope, interference) decomposition of the closed-form intensity.

    The envelope is the smooth hump sum; the interference term carries the
    overlap-weighted cosine.  envelope + interference == closed form.
    """
    _require_equal_amps(js)
    geom = js.geom
    tau = effective_tau(geom)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    env, intf = _backend.closed_parts_grid(
        xs, geom.slit_sep, geom.packet_width, tau,
        js.pair.overlap_mag, js.pair.overlap_phase,
    )
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(env[0]), float(intf[0])
    return env, intf


def _require_equal_amps(js: JointState):
    if not js.has_equal_amps():
        raise ValidationError(
            "the closed form assumes equal path amplitudes; use intensity_direct"
        )


def _check_fringe_resolution(grid: ScreenGrid, geom: Geometry):
    w = fringe_width(geom)
    if grid.spacing() > w / 8.0:
        raise ValidationError(
            f"grid spacing {grid.spacing():g} m cannot resolve fringes of width "
            f"{w:g} m (need spacing <= w/8); refusing to alias"
        )


def _clamp_and_normalize(raw: np.ndarray, xs: np.ndarray):
    if not np.all(np.isfinite(raw)):
        raise NumericFailure("non-finite intensity values on the grid")
    low = raw.min()
    if low < CLAMP_FLOOR:
        raise NumericFailure(
            f"intensity {low!r} below the clamp floor {CLAMP_FLOOR}; "
            "this is a bug, not rounding"
        )
    clamped = np.where(raw < 0.0, 0.0, raw)
    total = float(np.trapezoid(clamped, xs))
    if not (math.isfinite(total) and total > 0.0):
        raise NumericFailure(f"pattern integral {total!r} is not a positive number")
    return clamped / total, total


def pattern_on_grid(grid: ScreenGrid, js: JointState, mode: str = "direct") -> PatternSamples:
    """Evaluate the screen pattern on a grid and normalize it to unit integral.

    mode selects the computation route ("direct" or "closed_form").  Grids
    too coarse to resolve the fringes are rejected whenever the detector
    overlap is nonzero (aliased fringes silently corrupt visibility
    estimates).
    """
    if mode not in ("direct", "closed_form"):
        raise ValidationError(f"mode must be 'direct' or 'closed_form', got {mode!r}")
    if js.pair.overlap_mag > 0.0:
        _check_fringe_resolution(grid, js.geom)
    xs = grid.xs()
    if mode == "direct":
        raw = intensity_direct(xs, js)
    else:
        raw = intensity_closed_form(xs, js)
    intensity, total = _clamp_and_normalize(np.asarray(raw), xs)
    return PatternSamples(grid=grid, intensity=intensity, norm_constant=total, provenance=mode)


def conditional_patterns(grid: ScreenGrid, js: JointState, basis: MeasurementBasis) -> EraserResult:
    """Patterns conditioned on each outcome of a detector-basis measurement.

    The two branches share one normalization constant (the one that makes
    their sum integrate to 1), so i_b + i_b_perp reproduces the unconditioned
    pattern pointwise and each branch integrates to its outcome weight.
    """
    _check_fringe_resolution(grid, js.geom)
    geom = js.geom
    tau = effective_tau(geom)
    a1, a2 = js.path_amps
    b_d1 = inner_product(basis.b1, js.pair.d1)
    b_d2 = inner_product(basis.b1, js.pair.d2)
    p_d1 = inner_product(basis.b2, js.pair.d1)
    p_d2 = inner_product(basis.b2, js.pair.d2)
    xs = grid.xs()
    raw_b, raw_p = _backend.conditional_grid(
        xs, geom.slit_sep, geom.packet_width, tau, a1, a2, b_d1, b_d2, p_d1, p_d2
    )
    raw_b = np.asarray(raw_b)
    raw_p = np.asarray(raw_p)
    for raw in (raw_b, raw_p):
        if not np.all(np.isfinite(raw)):
            raise NumericFailure("non-finite intensity values in a conditioned branch")
        if raw.min() < CLAMP_FLOOR:
            raise NumericFailure("conditioned intensity below the clamp floor")
    raw_b = np.where(raw_b < 0.0, 0.0, raw_b)
    raw_p = np.where(raw_p < 0.0, 0.0, raw_p)
    total = float(np.trapezoid(raw_b + raw_p, xs))
    if not (math.isfinite(total) and total > 0.0):
        raise NumericFailure(f"eraser pattern integral {total!r} is not a positive number")
    i_b = PatternSamples(grid, raw_b / total, total, "conditional")
    i_p = PatternSamples(grid, raw_p / total, total, "conditional")
    i_sum = PatternSamples(grid, i_b.intensity + i_p.intensity, total, "conditional")
    weights = (
        float(np.trapezoid(i_b.intensity, xs)),
        float(np.trapezoid(i_p.intensity, xs)),
    )
    return EraserResult(i_b=i_b, i_b_perp=i_p, i_sum=i_sum, branch_weights=weights)
