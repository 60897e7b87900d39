"""Rigid-body kinematics of flux sources on a spinning, rolling rotor.

Frames: L-coordinates are fixed along the rotor angular momentum, r-coordinates
follow the vehicle roll axis, and the body frame (x_B, y_B, z_B) is locked to
the rotor with z_B on its symmetry axis.  A slightly asymmetric rotor precesses
about the angular momentum at the spin rate while the body frame turns
internally at the polhode rate; the loop normal rotates about the roll axis.

Everything is a pure function of parameters and time; all operations
broadcast over numpy arrays of times, returning vectors with the component
axis first (shape (3,) + t.shape).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "RotorDynamics",
    "Fluxon",
    "phases",
    "body_frame",
    "fluxon_direction",
    "loop_normal",
    "cos_theta_exact",
    "cos_theta_first_order",
    "slow_amplitudes",
]

_OMEGA_P_CONSISTENCY = 1e-9


@dataclass(frozen=True)
class RotorDynamics:
    """Rotor and readout-geometry rates, misalignments, and initial phases.

    omega_s : spin angular frequency (rad/s), > 0
    omega_r : roll angular frequency (rad/s)
    inertia_ratio : signed asymmetry (I_axis - I)/I of the symmetric top
    gamma_B : angle between angular momentum and body symmetry axis, [0, pi]
    alpha : roll-axis-to-loop-plane misalignment (rad, small)
    beta0 : roll-axis-to-angular-momentum misalignment (rad, small)
    theta_s0, theta_p0, theta_r0 : initial spin/polhode/roll phases
    omega_p_override : explicit polhode rate; must agree with the value
        derived from inertia_ratio when both are given
    """

    omega_s: float
    omega_r: float
    inertia_ratio: float = 0.0
    gamma_B: float = 0.0
    alpha: float = 0.0
    beta0: float = 0.0
    theta_s0: float = 0.0
    theta_p0: float = 0.0
    theta_r0: float = 0.0
    omega_p_override: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if not (math.isfinite(self.omega_s) and self.omega_s > 0.0):
            raise DomainError(f"spin rate must be positive, got {self.omega_s!r}")
        if not math.isfinite(self.omega_r):
            raise DomainError(f"roll rate must be finite, got {self.omega_r!r}")
        if not 0.0 <= self.gamma_B <= math.pi:
            raise DomainError(f"gamma_B must lie in [0, pi], got {self.gamma_B!r}")
        if self.alpha < 0.0 or self.beta0 < 0.0:
            raise DomainError("misalignments alpha, beta0 must be >= 0")
        if abs(self.inertia_ratio) > 0.01:
            warnings.warn(
                f"inertia asymmetry {self.inertia_ratio!r} is large for the "
                "symmetric-top model",
                UserWarning,
                stacklevel=2,
            )
        if self.omega_p_override is not None and self.inertia_ratio != 0.0:
            derived = self._omega_p_derived()
            scale = max(abs(derived), abs(self.omega_p_override))
            if abs(derived - self.omega_p_override) > _OMEGA_P_CONSISTENCY * scale:
                raise DomainError(
                    f"omega_p_override={self.omega_p_override!r} conflicts with the "
                    f"inertia-derived polhode rate {derived!r}"
                )

    def _omega_p_derived(self) -> float:
        return self.omega_s * abs(self.inertia_ratio) * math.cos(self.gamma_B)

    @property
    def omega_p(self) -> float:
        """Polhode angular frequency omega_s |dI/I| cos(gamma_B), or the override."""
        if self.omega_p_override is not None:
            return self.omega_p_override
        return self._omega_p_derived()

    @property
    def omega_rot(self) -> float:
        """Body-axis rotation rate omega_s cos(gamma_B)/(1 + dI/I).

        Reported for completeness; the signal path needs only the spin and
        polhode phases.
        """
        return self.omega_s * math.cos(self.gamma_B) / (1.0 + self.inertia_ratio)


@dataclass(frozen=True)
class Fluxon:
    """A pinned flux source at body angles (xi, eta) with polarity +-1."""

    xi: float
    eta: float
    polarity: int = 1

    def __post_init__(self):
        if not 0.0 <= self.xi <= math.pi:
            raise DomainError(f"body polar angle must lie in [0, pi], got {self.xi!r}")
        if not 0.0 <= self.eta < 2.0 * math.pi:
            raise DomainError(f"body azimuth must lie in [0, 2*pi), got {self.eta!r}")
        if self.polarity not in (-1, 1):
            raise DomainError(f"polarity must be +1 or -1, got {self.polarity!r}")


def phases(dyn: RotorDynamics, t):
    """Unwrapped spin, polhode, and roll phases at time t (scalar or array)."""
    t = np.asarray(t, dtype=float)
    theta_s = dyn.omega_s * t + dyn.theta_s0
    theta_p = dyn.omega_p * t + dyn.theta_p0
    theta_r = dyn.omega_r * t + dyn.theta_r0
    return theta_s, theta_p, theta_r


def body_frame(dyn: RotorDynamics, t):
    """Body unit vectors (x_B, y_B, z_B) in L-coordinates at time t.

    z_B precesses on a cone of half-angle gamma_B about the angular
    momentum at the spin phase; x_B, y_B additionally turn about z_B at the
    polhode phase.
    """
    theta_s, theta_p, _ = phases(dyn, t)
    cg, sg = math.cos(dyn.gamma_B), math.sin(dyn.gamma_B)
    cs, ss = np.cos(theta_s), np.sin(theta_s)
    cp, sp = np.cos(theta_p), np.sin(theta_p)
    z_b = np.stack(np.broadcast_arrays(sg * cs, sg * ss, cg * np.ones_like(cs)))
    y_b = np.stack((cg * cs * cp - ss * sp, cg * ss * cp + cs * sp, -sg * cp))
    x_b = np.stack((cg * cs * sp + ss * cp, cg * ss * sp - cs * cp, -sg * sp))
    return x_b, y_b, z_b


def fluxon_direction(fluxon: Fluxon, dyn: RotorDynamics, t):
    """Unit vector toward the fluxon in L-coordinates, shape (3,) + t.shape.

    Composed directly from the body frame, e = cos(xi) z_B +
    sin(xi)(cos(eta) x_B + sin(eta) y_B), which keeps |e| = 1 identically.
    """
    x_b, y_b, z_b = body_frame(dyn, t)
    cxi, sxi = math.cos(fluxon.xi), math.sin(fluxon.xi)
    ceta, seta = math.cos(fluxon.eta), math.sin(fluxon.eta)
    return cxi * z_b + sxi * (ceta * x_b + seta * y_b)


def loop_normal(dyn: RotorDynamics, t):
    """Unit normal of the pick-up loop in L-coordinates, shape (3,) + t.shape.

    The normal lies an angle alpha out of the plane swept about the roll
    axis; the roll frame is tilted from the L frame by beta0 about their
    common x axis.
    """
    _, _, theta_r = phases(dyn, t)
    ca, sa = math.cos(dyn.alpha), math.sin(dyn.alpha)
    cb, sb = math.cos(dyn.beta0), math.sin(dyn.beta0)
    cr, sr = np.cos(theta_r), np.sin(theta_r)
    return np.stack(
        np.broadcast_arrays(ca * cr, ca * sr * cb - sa * sb, sa * cb + ca * sr * sb)
    )


def cos_theta_exact(fluxon: Fluxon, dyn: RotorDynamics, t):
    """Exact cosine of the fluxon-to-loop-normal angle: e(t) . z(t)."""
    e = fluxon_direction(fluxon, dyn, t)
    z = loop_normal(dyn, t)
    out = np.einsum("i...,i...->...", e, z)
    return out if np.ndim(out) else float(out)


def slow_amplitudes(fluxon: Fluxon, dyn: RotorDynamics, tau):
    """Polhode-slow amplitudes (a_sr, q_sr, a) at slow phase tau = omega_p t.

    a_sr and phase q_sr modulate the spin-minus-roll carrier; a scales the
    misalignment-driven offset and roll harmonic.  All are 2*pi-periodic in
    tau.  With P = tau + theta_p0 + eta:

        a_sr^2 = [cos(xi) sin(gB) + sin(xi) cos(gB) sin(P)]^2
                 + sin(xi)^2 cos(P)^2
        q_sr   = atan2(cos(xi) sin(gB) + sin(xi) cos(gB) sin(P),
                       sin(xi) cos(P))
        a      = cos(xi) cos(gB) - sin(xi) sin(gB) sin(P)
    """
    tau = np.asarray(tau, dtype=float)
    cxi, sxi = math.cos(fluxon.xi), math.sin(fluxon.xi)
    cg, sg = math.cos(dyn.gamma_B), math.sin(dyn.gamma_B)
    p = tau + dyn.theta_p0 + fluxon.eta
    cos_part = cxi * sg + sxi * cg * np.sin(p)
    sin_part = sxi * np.cos(p)
    a_sr = np.hypot(cos_part, sin_part)
    q_sr = np.arctan2(cos_part, sin_part)
    a = cxi * cg - sxi * sg * np.sin(p)
    if tau.ndim:
        return a_sr, q_sr, a
    return float(a_sr), float(q_sr), float(a)


def cos_theta_first_order(fluxon: Fluxon, dyn: RotorDynamics, t):
    """First-order (in alpha, beta0) cosine of the fluxon-to-normal angle.

    a_sr(tau) sin(Theta) + a(tau)(beta0 sin(theta_r) + alpha) with carrier
    phase Theta = (omega_s - omega_r) t + theta_s0 - theta_r0 + q_sr(tau).
    Deviation from the exact dot product is quadratic in the misalignments.
    """
    t = np.asarray(t, dtype=float)
    a_sr, q_sr, a = slow_amplitudes(fluxon, dyn, dyn.omega_p * t)
    theta = (dyn.omega_s - dyn.omega_r) * t + dyn.theta_s0 - dyn.theta_r0 + q_sr
    theta_r = dyn.omega_r * t + dyn.theta_r0
    out = a_sr * np.sin(theta) + a * (dyn.beta0 * np.sin(theta_r) + dyn.alpha)
    return out if np.ndim(out) else float(out)
