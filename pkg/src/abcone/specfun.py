"""Real-argument special functions.

Gamma, Bessel J/Y/I/K of real non-negative order and their derivatives, and
Kummer's confluent hypergeometric function 1F1.

Algorithms
----------
J, Y
    x < 2: Temme's series for Y_mu, Y_{mu+1} with |mu| <= 1/2, J from the
    continued fraction for J'/J plus the Wronskian; upward recurrence in
    order for Y.
    2 <= x < max(25, nu^2): Steed's complex continued fraction.
    x >= max(25, nu^2): Hankel asymptotic expansion.
I, K
    Computed exponentially scaled (e^-x I, e^x K) so large arguments do not
    overflow. x < 2: Temme's series for K; x >= 2: Steed/Temme continued
    fraction. I from its continued fraction and the Wronskian.

Integer orders need no special casing: the Temme series are regular at
mu = 0 because 1/Gamma(1 +- mu) is expanded in a Taylor series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from abcone.errors import AccuracyError, GammaPoleError

__all__ = [
    "Accuracy",
    "DEFAULT_ACCURACY",
    "bessel_deriv",
    "bessel_i",
    "bessel_i_scaled",
    "bessel_j",
    "bessel_k",
    "bessel_k_scaled",
    "bessel_y",
    "gamma",
    "kummer_1f1",
    "log_derivatives_ik",
]

NU_MAX = 50.0

# Argument below which the Temme small-x series is used (J/Y and I/K).
_TEMME_X = 2.0
# Hankel expansion is used for x >= max(_ASYMPTOTIC_X, nu**2).
_ASYMPTOTIC_X = 25.0
_MAX_CF_ITER = 200_000
_FPMIN = 1e-300
_DBL_EPS = 2.220446049250313e-16

# Taylor coefficients of 1/Gamma(z) about z = 0, c[k] multiplies z**k.
_RGAMMA_TAYLOR = (
    0.0,
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
    -1.1812593016974587695e-16,
    1.1866922547516003326e-18,
    1.4123806553180317816e-18,
    -2.2987456844353702066e-19,
)


@dataclass(frozen=True)
class Accuracy:
    """Accuracy request passed explicitly to every kernel.

    Attributes
    ----------
    target_relative_error : float
        Relative error the result must meet.
    max_terms : int
        Cap on the number of terms of any power series.
    """

    target_relative_error: float = 1e-12
    max_terms: int = 500

    def __post_init__(self) -> None:
        if not self.target_relative_error > 0:
            raise ValueError("target_relative_error must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")

    @property
    def loop_tol(self) -> float:
        # Convergence threshold inside iterations; floor keeps Lentz loops finite.
        return max(self.target_relative_error * 1e-4, 4 * _DBL_EPS)


DEFAULT_ACCURACY = Accuracy()


def gamma(x: float) -> float:
    """Gamma function for real x; negative arguments via reflection."""
    if x <= 0 and x == math.floor(x):
        raise GammaPoleError(f"Gamma has a pole at x={x!r}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * math.gamma(1.0 - x))
    return math.gamma(x)


def _check_args(nu: float, x: float) -> None:
    if not (math.isfinite(nu) and math.isfinite(x)):
        raise ValueError("order and argument must be finite")
    if nu < 0:
        raise ValueError(f"order must be non-negative, got {nu!r}")
    if nu > NU_MAX:
        raise ValueError(f"order {nu!r} outside supported range [0, {NU_MAX}]")
    if x <= 0:
        raise ValueError(f"argument must be positive, got {x!r}")


def _temme_gammas(mu: float) -> tuple[float, float, float, float]:
    """Return gam1, gam2, 1/Gamma(1+mu), 1/Gamma(1-mu) for |mu| <= 1/2.

    gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)
    gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2
    """
    mu2 = mu * mu
    gam1 = 0.0
    gam2 = 0.0
    power = 1.0
    for k in range(1, len(_RGAMMA_TAYLOR) - 1, 2):
        gam2 += _RGAMMA_TAYLOR[k] * power
        gam1 -= _RGAMMA_TAYLOR[k + 1] * power
        power *= mu2
    return gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1


def _hankel_pq(nu: float, x: float, tol: float) -> tuple[float, float] | None:
    """Asymptotic P, Q of the Hankel expansion, or None if it diverges first."""
    four_nu2 = 4.0 * nu * nu
    p = 1.0
    q = 0.0
    term = 1.0
    for k in range(1, 400):
        prev = abs(term)
        term *= (four_nu2 - (2 * k - 1) ** 2) / (8.0 * k * x)
        if k % 2 == 1:
            q += term if (k // 2) % 2 == 0 else -term
        else:
            p += term if (k // 2) % 2 == 0 else -term
        if abs(term) < tol:
            return p, q
        if abs(term) > prev and k > nu:
            return None
    return None


def _jy_asymptotic(nu: float, x: float, tol: float) -> tuple[float, float] | None:
    pq = _hankel_pq(nu, x, tol)
    if pq is None:
        return None
    p, q = pq
    chi = x - (0.5 * nu + 0.25) * math.pi
    amp = math.sqrt(2.0 / (math.pi * x))
    c, s = math.cos(chi), math.sin(chi)
    return amp * (p * c - q * s), amp * (p * s + q * c)


def _jy_steed(xnu: float, x: float, acc: Accuracy) -> tuple[float, float, float, float]:
    """J, Y, J', Y' by Temme series / Steed continued fraction."""
    eps = acc.loop_tol
    if x < _TEMME_X:
        nl = int(xnu + 0.5)
    else:
        nl = max(0, int(xnu - x + 1.5))
    xmu = xnu - nl
    xmu2 = xmu * xmu
    xi = 1.0 / x
    xi2 = 2.0 * xi
    w = xi2 / math.pi

    # CF1: J'_nu / J_nu by modified Lentz.
    isign = 1
    h = max(xnu * xi, _FPMIN)
    b = xi2 * xnu
    d = 0.0
    c = h
    for _ in range(_MAX_CF_ITER):
        b += xi2
        d = b - d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b - 1.0 / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = c * d
        h *= delta
        if d < 0:
            isign = -isign
        if abs(delta - 1.0) < eps:
            break
    else:
        raise AccuracyError(f"J'/J continued fraction did not converge (nu={xnu}, x={x})")

    rjl = isign * _FPMIN
    rjpl = h * rjl
    rjl1 = rjl
    rjp1 = rjpl
    fact = xnu * xi
    for _ in range(nl, 0, -1):
        rjtemp = fact * rjl + rjpl
        fact -= xi
        rjpl = fact * rjtemp - rjl
        rjl = rjtemp
    if rjl == 0.0:
        rjl = eps
    f = rjpl / rjl

    if x < _TEMME_X:
        x2 = 0.5 * x
        pimu = math.pi * xmu
        fact = 1.0 if abs(pimu) < eps else pimu / math.sin(pimu)
        d = -math.log(x2)
        e = xmu * d
        fact2 = 1.0 if abs(e) < eps else math.sinh(e) / e
        gam1, gam2, gampl, gammi = _temme_gammas(xmu)
        ff = 2.0 / math.pi * fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
        e = math.exp(e)
        p = e / (gampl * math.pi)
        q = 1.0 / (e * math.pi * gammi)
        pimu2 = 0.5 * pimu
        fact3 = 1.0 if abs(pimu2) < eps else math.sin(pimu2) / pimu2
        r = math.pi * pimu2 * fact3 * fact3
        c = 1.0
        d = -x2 * x2
        total = ff + r * q
        total1 = p
        for i in range(1, acc.max_terms + 1):
            ff = (i * ff + p + q) / (i * i - xmu2)
            c *= d / i
            p /= i - xmu
            q /= i + xmu
            delta = c * (ff + r * q)
            total += delta
            delta1 = c * p - i * delta
            total1 += delta1
            if abs(delta) < (1.0 + abs(total)) * eps:
                break
        else:
            raise AccuracyError(f"Temme series for Y did not converge (nu={xnu}, x={x})")
        rymu = -total
        ry1 = -total1 * xi2
        rymup = xmu * xi * rymu - ry1
        rjmu = w / (rymup - f * rymu)
    else:
        a = 0.25 - xmu2
        p = -0.5 * xi
        q = 1.0
        br = 2.0 * x
        bi = 2.0
        fact = a * xi / (p * p + q * q)
        cr = br + q * fact
        ci = bi + p * fact
        den = br * br + bi * bi
        dr = br / den
        di = -bi / den
        dlr = cr * dr - ci * di
        dli = cr * di + ci * dr
        temp = p * dlr - q * dli
        q = p * dli + q * dlr
        p = temp
        for i in range(2, _MAX_CF_ITER):
            a += 2 * (i - 1)
            bi += 2.0
            dr = a * dr + br
            di = a * di + bi
            if abs(dr) + abs(di) < _FPMIN:
                dr = _FPMIN
            fact = a / (cr * cr + ci * ci)
            cr = br + cr * fact
            ci = bi - ci * fact
            if abs(cr) + abs(ci) < _FPMIN:
                cr = _FPMIN
            den = dr * dr + di * di
            dr /= den
            di /= -den
            dlr = cr * dr - ci * di
            dli = cr * di + ci * dr
            temp = p * dlr - q * dli
            q = p * dli + q * dlr
            p = temp
            if abs(dlr - 1.0) + abs(dli) < eps:
                break
        else:
            raise AccuracyError(f"Steed continued fraction did not converge (nu={xnu}, x={x})")
        gam = (p - f) / q
        rjmu = math.copysign(math.sqrt(w / ((p - f) * gam + q)), rjl)
        rymu = rjmu * gam
        rymup = rymu * (p + q / gam)
        ry1 = xmu * xi * rymu - rymup

    fact = rjmu / rjl
    rj = rjl1 * fact
    rjp = rjp1 * fact
    for i in range(1, nl + 1):
        rytemp = (xmu + i) * xi2 * ry1 - rymu
        rymu = ry1
        ry1 = rytemp
    ry = rymu
    ryp = xnu * xi * rymu - ry1
    return rj, ry, rjp, ryp


def _jy(nu: float, x: float, acc: Accuracy) -> tuple[float, float]:
    if x >= max(_ASYMPTOTIC_X, nu * nu):
        res = _jy_asymptotic(nu, x, acc.loop_tol)
        if res is not None:
            return res
    rj, ry, _, _ = _jy_steed(nu, x, acc)
    return rj, ry


def _ik_scaled(xnu: float, x: float, acc: Accuracy) -> tuple[float, float, float, float]:
    """Return e^-x times (I_nu, I'_nu) and e^x times (K_nu, K'_nu) at x."""
    eps = acc.loop_tol
    nl = int(xnu + 0.5)
    xmu = xnu - nl
    xmu2 = xmu * xmu
    xi = 1.0 / x
    xi2 = 2.0 * xi

    h = max(xnu * xi, _FPMIN)
    b = xi2 * xnu
    d = 0.0
    c = h
    for _ in range(_MAX_CF_ITER):
        b += xi2
        d = 1.0 / (b + d)
        c = b + 1.0 / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < eps:
            break
    else:
        raise AccuracyError(f"I'/I continued fraction did not converge (nu={xnu}, x={x})")

    ril = _FPMIN
    ripl = h * ril
    ril1 = ril
    rip1 = ripl
    fact = xnu * xi
    for _ in range(nl, 0, -1):
        ritemp = fact * ril + ripl
        fact -= xi
        ripl = fact * ritemp + ril
        ril = ritemp
    f = ripl / ril

    if x < _TEMME_X:
        x2 = 0.5 * x
        pimu = math.pi * xmu
        fact = 1.0 if abs(pimu) < eps else pimu / math.sin(pimu)
        d = -math.log(x2)
        e = xmu * d
        fact2 = 1.0 if abs(e) < eps else math.sinh(e) / e
        gam1, gam2, gampl, gammi = _temme_gammas(xmu)
        ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
        total = ff
        e = math.exp(e)
        p = 0.5 * e / gampl
        q = 0.5 / (e * gammi)
        c = 1.0
        d = x2 * x2
        total1 = p
        for i in range(1, acc.max_terms + 1):
            ff = (i * ff + p + q) / (i * i - xmu2)
            c *= d / i
            p /= i - xmu
            q /= i + xmu
            delta = c * ff
            total += delta
            total1 += c * (p - i * ff)
            if abs(delta) < abs(total) * eps:
                break
        else:
            raise AccuracyError(f"Temme series for K did not converge (nu={xnu}, x={x})")
        ex = math.exp(x)
        rkmu = total * ex
        rk1 = total1 * xi2 * ex
    else:
        b = 2.0 * (1.0 + x)
        d = 1.0 / b
        h = delh = d
        q1 = 0.0
        q2 = 1.0
        a1 = 0.25 - xmu2
        q = c = a1
        a = -a1
        s = 1.0 + q * delh
        for i in range(2, _MAX_CF_ITER):
            a -= 2 * (i - 1)
            c = -a * c / i
            qnew = (q1 - b * q2) / a
            q1 = q2
            q2 = qnew
            q += c * qnew
            b += 2.0
            d = 1.0 / (b + a * d)
            delh = (b * d - 1.0) * delh
            h += delh
            dels = q * delh
            s += dels
            if abs(dels / s) < eps:
                break
        else:
            raise AccuracyError(f"K continued fraction did not converge (nu={xnu}, x={x})")
        h = a1 * h
        rkmu = math.sqrt(math.pi / (2.0 * x)) / s
        rk1 = rkmu * (xmu + x + 0.5 - h) * xi

    rkmup = xmu * xi * rkmu - rk1
    rimu = xi / (f * rkmu - rkmup)
    ri = rimu * ril1 / ril
    rip = rimu * rip1 / ril
    for i in range(1, nl + 1):
        rktemp = (xmu + i) * xi2 * rk1 + rkmu
        rkmu = rk1
        rk1 = rktemp
    rkp = xnu * xi * rkmu - rk1
    return ri, rkmu, rip, rkp


def bessel_j(nu: float, x: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """Bessel function of the first kind J_nu(x), nu >= 0, x > 0."""
    _check_args(nu, x)
    return _jy(nu, x, acc)[0]


def bessel_y(nu: float, x: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """Bessel function of the second kind Y_nu(x), nu >= 0, x > 0."""
    _check_args(nu, x)
    return _jy(nu, x, acc)[1]


def bessel_i_scaled(nu: float, x: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """e^-x I_nu(x)."""
    _check_args(nu, x)
    return _ik_scaled(nu, x, acc)[0]


def bessel_k_scaled(nu: float, x: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """e^x K_nu(x); accepts negative order (K is even in nu)."""
    nu = abs(nu)
    _check_args(nu, x)
    return _ik_scaled(nu, x, acc)[1]


def log_derivatives_ik(nu: float, x: float, acc: Accuracy = DEFAULT_ACCURACY) -> tuple[float, float]:
    """I'_nu(x)/I_nu(x) and K'_nu(x)/K_nu(x), free of overflow for large x."""
    nu = abs(nu)
    _check_args(nu, x)
    ri, rk, rip, rkp = _ik_scaled(nu, x, acc)
    return rip / ri, rkp / rk


def bessel_i(nu: float, x: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """Modified Bessel function I_nu(x), nu >= 0, x > 0."""
    return bessel_i_scaled(nu, x, acc) * math.exp(x)


def bessel_k(nu: float, x: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """Modified Bessel function K_nu(x) = K_{-nu}(x), x > 0."""
    return bessel_k_scaled(nu, x, acc) * math.exp(-x)


def bessel_deriv(kind: str, nu: float, x: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """Derivative d/dx of J, Y, I or K of order nu at x.

    Uses the recurrences
        J'_nu = (nu/x) J_nu - J_{nu+1}     (same for Y)
        I'_nu = (nu/x) I_nu + I_{nu+1}
        K'_nu = (nu/x) K_nu - K_{nu+1}
    """
    kind = kind.upper()
    if kind == "K":
        nu = abs(nu)
    _check_args(nu, x)
    r = nu / x
    if kind in ("J", "Y"):
        idx = 0 if kind == "J" else 1
        return r * _jy(nu, x, acc)[idx] - _jy(nu + 1.0, x, acc)[idx]
    if kind == "I":
        return math.exp(x) * (r * _ik_scaled(nu, x, acc)[0] + _ik_scaled(nu + 1.0, x, acc)[0])
    if kind == "K":
        return math.exp(-x) * (r * _ik_scaled(nu, x, acc)[1] - _ik_scaled(nu + 1.0, x, acc)[1])
    raise ValueError(f"unknown Bessel kind {kind!r}; expected J, Y, I or K")


def _is_nonpositive_int(v: float) -> bool:
    return v <= 0 and v == math.floor(v)


def _kummer_series(a: float, b: float, x: float, acc: Accuracy) -> float:
    term = 1.0
    total = 1.0
    biggest = 1.0
    tol = acc.target_relative_error * 1e-3
    for k in range(acc.max_terms):
        term *= (a + k) / (b + k) * x / (k + 1)
        total += term
        biggest = max(biggest, abs(term))
        if term == 0.0:
            break
        # Only stop once terms are shrinking; early terms may grow.
        if abs(term) <= tol * abs(total) and abs((a + k + 1) * x / ((b + k + 1) * (k + 2))) < 1:
            break
    else:
        raise AccuracyError(f"1F1({a}, {b}, {x}) needs more than {acc.max_terms} terms")
    if total == 0.0 or biggest / abs(total) * _DBL_EPS > acc.target_relative_error:
        raise AccuracyError(f"1F1({a}, {b}, {x}): cancellation exceeds target accuracy")
    return total


def kummer_1f1(a: float, b: float, x: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """Confluent hypergeometric function 1F1(a; b; x) for real arguments.

    Negative x goes through Kummer's transformation
    1F1(a, b, x) = e^x 1F1(b - a, b, -x), so the summed series has
    non-alternating tails.
    """
    if _is_nonpositive_int(b):
        raise ValueError(f"1F1 undefined for b={b!r} (zero or negative integer)")
    if x == 0.0:
        return 1.0
    if x < 0:
        return math.exp(x) * _kummer_series(b - a, b, -x, acc)
    return _kummer_series(a, b, x, acc)
