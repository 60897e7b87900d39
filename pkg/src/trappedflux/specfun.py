"""Special-function kernel: Legendre polynomials and complete elliptic integrals.

Everything here is self-contained double-precision code with no dependency
beyond numpy.  Legendre values come from stable forward recurrences; the
elliptic integrals K, E and Pi are evaluated through Carlson symmetric forms
(duplication algorithm), including the Cauchy principal value of Pi for a
hyperbolic characteristic nu > 1.

Sign convention for the associated functions: no Condon-Shortley phase,
i.e. P^1_1(x) = sqrt(1 - x^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularPointError

__all__ = [
    "EllipticModulus",
    "legendre_p",
    "legendre_p_assoc",
    "legendre_p_deriv",
    "ellip_k",
    "ellip_e",
    "ellip_pi",
]


@dataclass(frozen=True)
class EllipticModulus:
    """Validated modulus k of a complete elliptic integral.

    k must lie in [0, 1).  k = 1 is accepted only with ``unit_ok=True``,
    for targets that stay finite there (the second-kind integral E).
    """

    k: float
    unit_ok: bool = False

    def __post_init__(self):
        k = self.k
        if not math.isfinite(k):
            raise DomainError(f"elliptic modulus must be finite, got {k!r}")
        if k < 0.0:
            raise DomainError(f"elliptic modulus must be >= 0, got {k!r}")
        if k > 1.0 or (k == 1.0 and not self.unit_ok):
            raise DomainError(f"elliptic modulus must be < 1, got {k!r}")


def _check_degree(l: int) -> int:
    if l != int(l) or l < 0:
        raise DomainError(f"Legendre degree must be a nonnegative integer, got {l!r}")
    return int(l)


def _check_argument(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)) or np.any(np.abs(x) > 1.0):
        raise DomainError("Legendre argument must lie in [-1, 1]")
    return x


def legendre_p(l: int, x):
    """Legendre polynomial P_l(x) for |x| <= 1, scalar or array `x`.

    Forward recurrence (l+1) P_{l+1} = (2l+1) x P_l - l P_{l-1}; exact at
    the endpoints x = +-1.
    """
    l = _check_degree(l)
    x = _check_argument(x)
    p_prev = np.ones_like(x)
    if l == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = x.copy()
    for n in range(1, l):
        p, p_prev = ((2 * n + 1) * x * p - n * p_prev) / (n + 1), p
    return p if p.ndim else float(p)


def legendre_p_deriv(l: int, x):
    """Derivative dP_l/dx via the ladder P'_{l+1} = P'_{l-1} + (2l+1) P_l.

    The ladder needs no division by 1 - x^2, so it is exact at x = +-1.
    """
    l = _check_degree(l)
    x = _check_argument(x)
    if l == 0:
        d = np.zeros_like(x)
        return d if d.ndim else 0.0
    p_prev = np.ones_like(x)
    p = x.copy()
    d_prev = np.zeros_like(x)
    d = np.ones_like(x)
    for n in range(1, l):
        d, d_prev = d_prev + (2 * n + 1) * p, d
        p, p_prev = ((2 * n + 1) * x * p - n * p_prev) / (n + 1), p
    return d if d.ndim else float(d)


def legendre_p_assoc(l: int, m: int, x):
    """Associated Legendre function P^m_l(x), 0 <= m <= l, no Condon-Shortley.

    Starts from P^m_m = (2m-1)!! (1-x^2)^{m/2} and climbs in degree with
    (l-m+1) P^m_{l+1} = (2l+1) x P^m_l - (l+m) P^m_{l-1}.
    """
    l = _check_degree(l)
    if m != int(m) or m < 0 or m > l:
        raise DomainError(f"order must satisfy 0 <= m <= l, got m={m!r}, l={l!r}")
    m = int(m)
    x = _check_argument(x)
    if m == 0:
        return legendre_p(l, x)
    s2 = (1.0 - x) * (1.0 + x)
    pmm = np.ones_like(x)
    fact = 1.0
    for _ in range(m):
        pmm = pmm * fact * np.sqrt(s2)
        fact += 2.0
    if l == m:
        return pmm if pmm.ndim else float(pmm)
    p_prev = pmm
    p = (2 * m + 1) * x * pmm
    for n in range(m + 1, l):
        p, p_prev = ((2 * n + 1) * x * p - (n + m) * p_prev) / (n - m + 1), p
    return p if p.ndim else float(p)


# ---------------------------------------------------------------------------
# Carlson symmetric forms.  Duplication is iterated until the homogeneous
# error bound guarantees that the 5th-order Taylor tail is below double
# rounding; see Carlson's duplication-theorem algorithm.

_MAX_ITER = 120


def carlson_rc(x: float, y: float) -> float:
    """Degenerate integral R_C(x, y) = (1/2) int_0^inf dt / (sqrt(t+x)(t+y)).

    x >= 0; for y < 0 the Cauchy principal value is returned via
    R_C(x, y) = sqrt(x/(x-y)) R_C(x-y, -y).
    """
    if x < 0.0 or y == 0.0 or not (math.isfinite(x) and math.isfinite(y)):
        raise DomainError(f"R_C requires x >= 0, y != 0, got ({x!r}, {y!r})")
    if y < 0.0:
        return math.sqrt(x / (x - y)) * carlson_rc(x - y, -y)
    if x == y:
        return 1.0 / math.sqrt(x)
    if y > x:
        return math.atan(math.sqrt((y - x) / x)) / math.sqrt(y - x) if x > 0.0 \
            else math.pi / (2.0 * math.sqrt(y))
    return math.atanh(math.sqrt((x - y) / x)) / math.sqrt(x - y)


def carlson_rf(x: float, y: float, z: float) -> float:
    """Symmetric integral of the first kind R_F(x, y, z); at most one zero arg."""
    if min(x, y, z) < 0.0 or sorted((x, y, z))[1] == 0.0:
        raise DomainError(f"R_F requires nonnegative args, at most one zero: {(x, y, z)!r}")
    a = (x + y + z) / 3.0
    q = (3.0 * np.finfo(float).eps) ** (-1.0 / 8.0) * max(
        abs(a - x), abs(a - y), abs(a - z)
    )
    for _ in range(_MAX_ITER):
        if q < abs(a):
            break
        lam = math.sqrt(x) * math.sqrt(y) + math.sqrt(y) * math.sqrt(z) \
            + math.sqrt(z) * math.sqrt(x)
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        a = 0.25 * (a + lam)
        q *= 0.25
    dx = 1.0 - x / a
    dy = 1.0 - y / a
    dz = -(dx + dy)
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    return (
        1.0
        + e3 * (1.0 / 14.0 + 3.0 * e3 / 104.0)
        + e2 * (-1.0 / 10.0 + e2 / 24.0 - 3.0 * e3 / 44.0
                - 5.0 * e2 * e2 / 208.0 + e2 * e3 / 16.0)
    ) / math.sqrt(a)


def carlson_rd(x: float, y: float, z: float) -> float:
    """Degenerate third-kind integral R_D(x, y, z) = R_J(x, y, z, z); z > 0."""
    if min(x, y) < 0.0 or z <= 0.0 or x + y == 0.0:
        raise DomainError(f"R_D requires x, y >= 0 (not both 0), z > 0: {(x, y, z)!r}")
    a = (x + y + 3.0 * z) / 5.0
    q = (0.25 * np.finfo(float).eps) ** (-1.0 / 8.0) * max(
        abs(a - x), abs(a - y), abs(a - z)
    )
    acc = 0.0
    fac = 1.0
    for _ in range(_MAX_ITER):
        if q < abs(a):
            break
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sy * sz + sz * sx
        acc += fac / (sz * (z + lam))
        fac *= 0.25
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        a = 0.25 * (a + lam)
        q *= 0.25
    dx = 1.0 - x / a
    dy = 1.0 - y / a
    dz = -(dx + dy) / 3.0
    e2 = dx * dy - 6.0 * dz * dz
    e3 = (3.0 * dx * dy - 8.0 * dz * dz) * dz
    e4 = 3.0 * (dx * dy - dz * dz) * dz * dz
    e5 = dx * dy * dz * dz * dz
    series = _rdj_series(e2, e3, e4, e5)
    return 3.0 * acc + fac * series / (a * math.sqrt(a))


def _rdj_series(e2, e3, e4, e5):
    return (
        1.0
        - 3.0 * e2 / 14.0
        + e3 / 6.0
        + 9.0 * e2 * e2 / 88.0
        - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0
        - e2 * e2 * e2 / 16.0
        + 3.0 * e3 * e3 / 40.0
        + 3.0 * e2 * e4 / 20.0
        + 45.0 * e2 * e2 * e3 / 272.0
        - 9.0 * (e3 * e4 + e2 * e5) / 68.0
    )


def carlson_rj(x: float, y: float, z: float, p: float) -> float:
    """Symmetric integral of the third kind R_J(x, y, z, p).

    x, y, z >= 0 with at most one zero.  p > 0 gives the ordinary value;
    p < 0 returns the Cauchy principal value through the shift
    p' = y + (z - y)(y - x)/(y - p) with x <= y <= z.
    """
    if min(x, y, z) < 0.0 or sorted((x, y, z))[1] == 0.0:
        raise DomainError(f"R_J requires nonnegative args, at most one zero: {(x, y, z)!r}")
    if p == 0.0 or not math.isfinite(p):
        raise DomainError(f"R_J requires finite p != 0, got {p!r}")
    if p < 0.0:
        xt, yt, zt = sorted((x, y, z))
        a = 1.0 / (yt - p)
        b = a * (zt - yt) * (yt - xt)
        pt = yt + b
        rho = xt * zt / yt
        tau = p * pt / yt
        rcx = carlson_rc(rho, tau)
        return a * (b * carlson_rj(xt, yt, zt, pt)
                    + 3.0 * (rcx - carlson_rf(xt, yt, zt)))
    a0 = (x + y + z + 2.0 * p) / 5.0
    delta = (p - x) * (p - y) * (p - z)
    q = (0.25 * np.finfo(float).eps) ** (-1.0 / 8.0) * max(
        abs(a0 - x), abs(a0 - y), abs(a0 - z), abs(a0 - p)
    )
    a = a0
    acc = 0.0
    fac = 1.0
    for _ in range(_MAX_ITER):
        if q < abs(a):
            break
        sx, sy, sz, sp = math.sqrt(x), math.sqrt(y), math.sqrt(z), math.sqrt(p)
        lam = sx * sy + sy * sz + sz * sx
        dn = (sp + sx) * (sp + sy) * (sp + sz)
        en = delta / (dn * dn)
        if -1.5 < en < -0.5:
            # rc1p loses accuracy near its branch point; use the equivalent
            # direct form of the duplication correction instead.
            b = 2.0 * sp * (p + sx * (sy + sz) + sy * sz) / dn
            acc += fac / dn * carlson_rc(1.0, b)
        else:
            acc += fac / dn * _rc1p(en)
        fac *= 0.25
        delta /= 64.0
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        p = 0.25 * (p + lam)
        a = 0.25 * (a + lam)
        q *= 0.25
    dx = 1.0 - x / a
    dy = 1.0 - y / a
    dz = 1.0 - z / a
    dp = -(dx + dy + dz) / 2.0
    e2 = dx * dy + dy * dz + dz * dx - 3.0 * dp * dp
    e3 = dx * dy * dz + 2.0 * e2 * dp + 4.0 * dp * dp * dp
    e4 = (2.0 * dx * dy * dz + e2 * dp + 3.0 * dp * dp * dp) * dp
    e5 = dx * dy * dz * dp * dp
    series = _rdj_series(e2, e3, e4, e5)
    return 6.0 * acc + fac * series / (a * math.sqrt(a))


def _rc1p(w: float) -> float:
    """R_C(1, 1 + w) for w > -1, used inside the R_J duplication."""
    if w == 0.0:
        return 1.0
    if w > 0.0:
        s = math.sqrt(w)
        return math.atan(s) / s
    s = math.sqrt(-w)
    return math.atanh(s) / s


def _modulus_value(k) -> float:
    if isinstance(k, EllipticModulus):
        return k.k
    k = float(k)
    if not math.isfinite(k):
        raise DomainError(f"elliptic modulus must be finite, got {k!r}")
    return k


def ellip_k(k) -> float:
    """Complete elliptic integral of the first kind K(k), modulus convention."""
    k = _modulus_value(k)
    if not 0.0 <= k < 1.0:
        raise DomainError(f"K(k) requires 0 <= k < 1, got {k!r}")
    return carlson_rf(0.0, (1.0 - k) * (1.0 + k), 1.0)


def ellip_e(k) -> float:
    """Complete elliptic integral of the second kind E(k); E(1) = 1 allowed."""
    k = _modulus_value(k)
    if not 0.0 <= k <= 1.0:
        raise DomainError(f"E(k) requires 0 <= k <= 1, got {k!r}")
    if k == 1.0:
        return 1.0
    kc2 = (1.0 - k) * (1.0 + k)
    return carlson_rf(0.0, kc2, 1.0) - (k * k / 3.0) * carlson_rd(0.0, kc2, 1.0)


def ellip_pi(nu: float, k) -> float:
    """Complete elliptic integral of the third kind.

    Convention Pi(nu, k) = int_0^{pi/2} dpsi / ((1 - nu sin^2 psi)
    sqrt(1 - k^2 sin^2 psi)).  For the hyperbolic case nu > 1 the Cauchy
    principal value is returned; nu = 1 is singular.
    """
    k = _modulus_value(k)
    if not 0.0 <= k < 1.0:
        raise DomainError(f"Pi(nu, k) requires 0 <= k < 1, got k={k!r}")
    nu = float(nu)
    if not math.isfinite(nu):
        raise DomainError(f"characteristic must be finite, got {nu!r}")
    if nu == 1.0:
        raise SingularPointError("Pi(nu, k) has a non-integrable pole at nu = 1")
    kc2 = (1.0 - k) * (1.0 + k)
    if nu == 0.0:
        return carlson_rf(0.0, kc2, 1.0)
    return carlson_rf(0.0, kc2, 1.0) + (nu / 3.0) * carlson_rj(0.0, kc2, 1.0, 1.0 - nu)
