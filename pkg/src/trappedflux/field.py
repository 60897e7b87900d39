"""Exterior magnetostatics of a point flux source on a spherical rotor.

A unit point source (one flux quantum, Phi_0 = 1 internally) sits on the
rotor surface r = r_g and feeds a scalar potential in the exterior region.
This module provides the potential as a Legendre series and in closed
elementary form, the Dirichlet counterpart, the magnetic field B = -grad psi,
and the z-component of B on the pick-up-loop plane.

All functions broadcast over numpy arrays stored in the point objects.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularPointError, TruncationWarning

__all__ = [
    "GyroGeometry",
    "SourcePoint",
    "FieldPoint",
    "cos_gamma",
    "psi_series",
    "psi_closed",
    "greens_dirichlet",
    "b_field",
    "bz_on_loop_plane",
]

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi

_DELTA_CONSISTENCY = 1e-12


@dataclass(frozen=True)
class GyroGeometry:
    """Static geometry: rotor radius r_g, pick-up-loop radius R, gap delta.

    delta = (R - r_g)/R is stored explicitly; when passed in it must agree
    with the radii to 1e-12.
    """

    rotor_radius: float
    loop_radius: float
    delta: float = None  # type: ignore[assignment]

    def __post_init__(self):
        r_g, big_r = self.rotor_radius, self.loop_radius
        if not (0.0 < r_g < big_r) or not math.isfinite(r_g) or not math.isfinite(big_r):
            raise DomainError(f"need 0 < rotor_radius < loop_radius, got {r_g!r}, {big_r!r}")
        derived = (big_r - r_g) / big_r
        if self.delta is None:
            object.__setattr__(self, "delta", derived)
        elif not math.isfinite(self.delta) or abs(self.delta - derived) > _DELTA_CONSISTENCY:
            raise DomainError(
                f"delta={self.delta!r} inconsistent with radii (expected {derived!r})"
            )
        if not 0.0 < self.delta < 1.0:
            raise DomainError(f"gap delta must lie in (0, 1), got {self.delta!r}")

    @classmethod
    def from_gap(cls, delta: float, loop_radius: float = 1.0) -> "GyroGeometry":
        """Geometry with the loop radius as the unit of length."""
        if not (0.0 < delta < 1.0):
            raise DomainError(f"gap delta must lie in (0, 1), got {delta!r}")
        return cls(loop_radius * (1.0 - delta), loop_radius, delta)


@dataclass(frozen=True)
class SourcePoint:
    """Flux-source angles on the rotor surface (radius r_g implied)."""

    theta_f: float
    phi_f: float = 0.0

    def __post_init__(self):
        tf = np.asarray(self.theta_f, dtype=float)
        pf = np.asarray(self.phi_f, dtype=float)
        if np.any(tf < 0.0) or np.any(tf > math.pi) or np.any(~np.isfinite(tf)):
            raise DomainError("source polar angle must lie in [0, pi]")
        if np.any(pf < 0.0) or np.any(pf >= TWO_PI) or np.any(~np.isfinite(pf)):
            raise DomainError("source azimuth must lie in [0, 2*pi)")


@dataclass(frozen=True)
class FieldPoint:
    """Observation point in spherical coordinates; fields may be arrays."""

    r: float
    theta: float
    phi: float

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        if np.any(r <= 0.0) or np.any(~np.isfinite(r)):
            raise DomainError("observation radius must be positive and finite")


def cos_gamma(obs: FieldPoint, src: SourcePoint):
    """Cosine of the great-circle angle between observer and source directions."""
    c = (
        np.cos(obs.theta) * np.cos(src.theta_f)
        + np.sin(obs.theta) * np.sin(src.theta_f) * np.cos(obs.phi - src.phi_f)
    )
    return np.clip(c, -1.0, 1.0)


def _check_exterior(obs: FieldPoint, geom: GyroGeometry, strict: bool):
    r = np.asarray(obs.r, dtype=float)
    r_g = geom.rotor_radius
    bad = r < r_g if strict else r < r_g * (1.0 - 1e-12)
    if np.any(bad):
        raise DomainError(f"observation radius must be >= rotor radius {r_g!r}")
    return r


def psi_series(obs: FieldPoint, src: SourcePoint, geom: GyroGeometry, l_max: int):
    """Partial Legendre sum of the exterior potential through degree l_max.

    Warns if the truncated tail is still significant (last-term/sum ratio
    above 1e-12), which happens close to the rotor on the source ray.
    """
    if l_max < 0 or l_max != int(l_max):
        raise DomainError(f"l_max must be a nonnegative integer, got {l_max!r}")
    r = _check_exterior(obs, geom, strict=True)
    r_g = geom.rotor_radius
    c = cos_gamma(obs, src)
    x = r_g / r
    p_prev = np.ones_like(c)
    xp = x
    total = xp * p_prev  # l = 0 term: (1/(0+1)) x P_0, weight (2l+1)/(l+1) = 1
    p = np.asarray(c, dtype=float)
    term = total
    for l in range(1, int(l_max) + 1):
        xp = xp * x
        term = (2 * l + 1) / (l + 1) * xp * p
        total = total + term
        p, p_prev = ((2 * l + 1) * c * p - l * p_prev) / (l + 1), p
    ratio = np.max(np.abs(term) / np.maximum(np.abs(total), np.finfo(float).tiny))
    if ratio > 1e-12:
        warnings.warn(
            f"potential series truncated at l_max={l_max} with tail ratio {ratio:.2e}",
            TruncationWarning,
            stacklevel=2,
        )
    return total / (FOUR_PI * r_g)


def _separation(r, c, r_g):
    return np.sqrt(np.maximum(r * r - 2.0 * r * r_g * c + r_g * r_g, 0.0))


def psi_closed(obs: FieldPoint, src: SourcePoint, geom: GyroGeometry):
    """Closed-form exterior potential (unit source, Phi_0 = 1).

    The boundary term is evaluated as log((d + r + r_g)/(d + r - r_g)) with
    d = |r - r_f|, which is algebraically identical to the quotient of the
    raw numerator/denominator but stays finite on the open ray through the
    source where both vanish.
    """
    r = _check_exterior(obs, geom, strict=False)
    r_g = geom.rotor_radius
    c = cos_gamma(obs, src)
    d = _separation(r, c, r_g)
    if np.any(d == 0.0):
        raise SingularPointError("potential evaluated at the source point")
    log_term = np.log((d + r + r_g) / (d + r - r_g))
    return (1.0 / d - log_term / (2.0 * r_g)) / TWO_PI


def greens_dirichlet(obs: FieldPoint, src: SourcePoint, geom: GyroGeometry):
    """Closed-form kernel of the exterior Dirichlet problem for the sphere."""
    r = _check_exterior(obs, geom, strict=False)
    r_g = geom.rotor_radius
    c = cos_gamma(obs, src)
    d = _separation(r, c, r_g)
    if np.any(d == 0.0):
        raise SingularPointError("kernel evaluated at the source point")
    return (r * r - r_g * r_g) / (FOUR_PI * d**3)


def b_field(obs: FieldPoint, src: SourcePoint, geom: GyroGeometry):
    """Magnetic field B = -grad psi in spherical components (B_r, B_theta, B_phi).

    Analytic gradient of the closed-form potential; broadcasts over array
    observation points.  Result has shape (3,) + broadcast shape.
    """
    r = _check_exterior(obs, geom, strict=True)
    r_g = geom.rotor_radius
    theta = np.asarray(obs.theta, dtype=float)
    c = cos_gamma(obs, src)
    d = _separation(r, c, r_g)
    if np.any(d == 0.0):
        raise SingularPointError("field evaluated at the source point")
    dd_dr = (r - r_g * c) / d
    dd_dc = -r * r_g / d
    a = d + r + r_g
    b = d + r - r_g
    inv_d2 = 1.0 / (d * d)
    dlog_dr = (dd_dr + 1.0) * (1.0 / a - 1.0 / b)
    dlog_dc = dd_dc * (1.0 / a - 1.0 / b)
    dpsi_dr = (-inv_d2 * dd_dr - dlog_dr / (2.0 * r_g)) / TWO_PI
    dpsi_dc = (-inv_d2 * dd_dc - dlog_dc / (2.0 * r_g)) / TWO_PI
    dc_dtheta = (
        -np.sin(theta) * np.cos(src.theta_f)
        + np.cos(theta) * np.sin(src.theta_f) * np.cos(obs.phi - src.phi_f)
    )
    dc_dphi = -np.sin(theta) * np.sin(src.theta_f) * np.sin(obs.phi - src.phi_f)
    b_r = -dpsi_dr
    b_theta = -dpsi_dc * dc_dtheta / r
    b_phi = -dpsi_dc * dc_dphi / (r * np.sin(theta))
    return np.stack(np.broadcast_arrays(b_r, b_theta, b_phi))


def bz_on_loop_plane(rho, phi, src: SourcePoint, geom: GyroGeometry):
    """B_z on the loop plane z = 0 for a source at azimuth phi_f.

    Only the relative azimuth phi - phi_f enters.  This is the analytic
    continuation of the exterior field: it diverges like 1/rho at the plane
    origin (which lies inside the rotor) and on the in-plane source circle
    when theta_f = pi/2; integrated against rho drho it stays finite.
    """
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0.0) or np.any(~np.isfinite(rho)):
        raise DomainError("polar radius must be nonnegative and finite")
    if np.any(rho == 0.0):
        raise SingularPointError("B_z continuation diverges at rho = 0")
    r_g = geom.rotor_radius
    st = np.sin(src.theta_f)
    ct = np.cos(src.theta_f)
    cphi = np.cos(np.asarray(phi, dtype=float) - src.phi_f)
    x = np.sqrt(r_g * r_g - 2.0 * r_g * rho * st * cphi + rho * rho)
    y_plus = 1.0 + st * cphi
    y_minus = 1.0 - st * cphi
    if np.any(x == 0.0) or np.any(y_minus == 0.0) or np.any(y_plus == 0.0):
        raise SingularPointError("B_z evaluated on the in-plane source circle")
    bracket = (
        1.0 / x**3
        + (rho - r_g * st * cphi) / (2.0 * r_g**2 * rho * x * y_plus * y_minus)
        + st * cphi / (2.0 * r_g**2 * rho * y_plus * y_minus)
        - 1.0 / (2.0 * r_g**2 * rho * y_minus)
    )
    return -(r_g * ct / TWO_PI) * bracket
