"""q-special functions: Pochhammer symbols, q-numbers and binomials,
q-exponentials, q-trigonometric functions, lattice theta sums, and basic
hypergeometric series.

Conventions.  Two q-exponentials are used throughout:

    little:  e(z) = sum z^n / (b;b)_n   = 1/(z;b)_inf
    big:     E(z) = sum b^(n(n-1)/2) z^n / (b;b)_n = (-z;b)_inf

where b is the working base (q or q^2).  The trig functions come in two
unrelated families selected by the `base` keyword:

    q2_sec5   sub-unit base q^2, the even/odd splits of e and E above;
    wz_sec4   super-unit series in 1/q built on symmetric q-factorials.

Infinite products and bilateral sums require 0 < q < 1; operations that
cannot converge in the requested regime raise RegimeError rather than
returning garbage.
"""

from __future__ import annotations

import math

from . import _kernels as K
from .context import QContext
from .errors import (
    ConvergenceError,
    DomainError,
    PoleError,
    RegimeError,
    UnsupportedVariant,
)

_POLE_EPS = 1e-12


def _require_sub_unit(ctx: QContext, what: str) -> None:
    if ctx.regime != "sub-unit":
        raise RegimeError(f"{what} requires 0 < q < 1, got q = {ctx.q}")


def _require_super_unit(ctx: QContext, what: str) -> None:
    if ctx.regime != "super-unit":
        raise RegimeError(f"{what} requires q > 1, got q = {ctx.q}")


# ---------------------------------------------------------------------------
# Pochhammer symbols and q-numbers

def qpochhammer(a, ctx: QContext, n: int | None = None, base: str = "q"):
    """(a;b)_n for integer n >= 0, or (a;b)_inf when n is None."""
    b = ctx.base(base)
    if n is None:
        if b >= 1.0:
            raise RegimeError("infinite q-Pochhammer product needs base < 1")
        try:
            # cut scaled by 1-b so the dropped geometric tail stays under tol
            return K.poch_inf(a, b, ctx.trunc.tail_tol * (1.0 - b),
                              ctx.trunc.max_terms)
        except ValueError as exc:
            raise ConvergenceError(str(exc)) from exc
    if not isinstance(n, int) or n < 0:
        raise DomainError("finite q-Pochhammer order must be a nonnegative integer")
    return K.poch_prod(a, b, n)


def qnumber(n, ctx: QContext, kind: str = "symmetric"):
    """[n] in the symmetric convention, or [[n]] in the base-q^2 one."""
    q = ctx.q
    if kind == "symmetric":
        return (q ** n - q ** (-n)) / (q - 1.0 / q)
    if kind == "bracket2":
        return (q ** (2 * n) - 1.0) / (q * q - 1.0)
    raise DomainError(f"unknown q-number kind {kind!r}")


def qfactorial(n: int, ctx: QContext, kind: str = "symmetric"):
    """[n]! built from qnumber; [0]! = 1."""
    if not isinstance(n, int) or n < 0:
        raise DomainError("q-factorial needs a nonnegative integer")
    out = 1.0
    for j in range(2, n + 1):
        out *= qnumber(j, ctx, kind)
    return out


def qbinomial(n: int, m: int, ctx: QContext, kind: str = "symmetric"):
    """q-binomial coefficient, either symmetric-factorial form (with its
    q^(m(n-m)) weight) or the Gaussian ratio of base-q Pochhammers."""
    if not (isinstance(n, int) and isinstance(m, int)):
        raise DomainError("q-binomial arguments must be integers")
    if m < 0 or m > n:
        raise DomainError(f"q-binomial undefined for m={m}, n={n}")
    if kind == "symmetric":
        num = qfactorial(n, ctx)
        den = qfactorial(m, ctx) * qfactorial(n - m, ctx)
        return num / den * ctx.q ** ((n - m) * m)
    if kind == "gauss":
        q = ctx.q
        num = K.poch_prod(q, q, n)
        den = K.poch_prod(q, q, m) * K.poch_prod(q, q, n - m)
        return num / den
    raise DomainError(f"unknown q-binomial kind {kind!r}")


# ---------------------------------------------------------------------------
# q-exponentials

def qexp(z, ctx: QContext, kind: str = "little", base: str = "q",
         method: str = "product"):
    """Little/big q-exponential in the given base.

    method='product' evaluates the closed product form (valid for any z,
    modulo poles of the little kind); method='series' sums the defining
    series, which for the little kind converges only for |z| < 1.
    """
    _require_sub_unit(ctx, "q-exponential")
    b = ctx.base(base)
    tol, mx = ctx.trunc.tail_tol, ctx.trunc.max_terms
    if kind not in ("little", "big"):
        raise DomainError(f"unknown q-exponential kind {kind!r}")
    if method == "product":
        cut = tol * (1.0 - b)
        try:
            if kind == "little":
                return K.eq_product(z, b, cut, mx, _POLE_EPS)
            return K.Eq_product(z, b, cut, mx)
        except ZeroDivisionError as exc:
            raise PoleError(str(exc)) from exc
        except ValueError as exc:
            raise ConvergenceError(str(exc)) from exc
    if method == "series":
        if kind == "little" and abs(z) >= 1.0:
            raise ConvergenceError("little q-exponential series needs |z| < 1")
        acc = 0.0 + 0.0j
        term = 1.0 + 0.0j
        for n in range(mx):
            acc += term
            if abs(term) < 0.1 * tol * (1.0 + abs(acc)) and n > 2:
                return acc
            ratio = z / (1.0 - b ** (n + 1))
            if kind == "big":
                ratio *= b ** n
            term *= ratio
        raise ConvergenceError("q-exponential series did not settle")
    raise DomainError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# q-trigonometric functions

def qtrig(z, ctx: QContext, fn: str = "cos", base: str = "q2_sec5",
          method: str = "split"):
    """q-analogue trig functions.

    base='q2_sec5': cos/sin are the even/odd parts of the little
    q^2-exponential at iz, Cos/Sin those of the big one.  method may be
    'split' (default, evaluates the exponential products) or
    'partial-fractions' (cos/sin only; the pole expansion, useful for
    bound checking and large real z).

    base='wz_sec4': the super-unit lattice pair cos/sin built from
    symmetric q-factorials; Cos/Sin do not exist in this family.
    """
    if base == "q2_sec5":
        return _qtrig_sec5(z, ctx, fn, method)
    if base == "wz_sec4":
        return _qtrig_wz(z, ctx, fn)
    raise DomainError(f"unknown trig base {base!r}")


def _qtrig_sec5(z, ctx: QContext, fn: str, method: str):
    _require_sub_unit(ctx, "q^2 trig")
    if method == "partial-fractions":
        if fn not in ("cos", "sin"):
            raise UnsupportedVariant("partial fractions only for the little pair")
        return _qtrig_partial_fractions(z, ctx, fn)
    if method != "split":
        raise DomainError(f"unknown method {method!r}")
    kind = "little" if fn in ("cos", "sin") else "big"
    if fn not in ("cos", "sin", "Cos", "Sin"):
        raise DomainError(f"unknown trig fn {fn!r}")
    ep = qexp(1j * z, ctx, kind, "q2")
    em = qexp(-1j * z, ctx, kind, "q2")
    if fn in ("cos", "Cos"):
        return 0.5 * (ep + em)
    return (ep - em) / 2j


def _qtrig_partial_fractions(z, ctx: QContext, fn: str):
    # cos: sum_k (-1)^k q^(k(k+1)) / [(q2;q2)_k (1 + z^2 q^(4k))], all over (q2;q2)_inf
    # sin: same with q^(k(k+3)) and a leading factor z
    q = ctx.q
    q2 = ctx.q2
    tol, mx = ctx.trunc.tail_tol, ctx.trunc.max_terms
    pref = 1.0 / qpochhammer(q2, ctx, None, base="q2")
    z2 = z * z
    acc = 0.0 + 0.0j
    sign = 1.0
    qpow = 1.0          # q^(k(k+1)) for cos, times q^(2k) more for sin
    poch = 1.0          # (q2;q2)_k
    q4k = 1.0
    for k in range(mx):
        if k > 0:
            qpow *= q2 ** k           # q^(k(k+1)) = prod q^(2j), j<=k
            poch *= 1.0 - q2 ** k
            q4k *= q2 * q2
        den = 1.0 + z2 * q4k
        if abs(den) < _POLE_EPS:
            raise PoleError("partial-fraction denominator vanishes")
        extra = q ** (2 * k) if fn == "sin" else 1.0
        term = sign * qpow * extra / (poch * den)
        acc += term
        if abs(term) < tol * (1.0 + abs(acc)) and k > 2:
            break
        sign = -sign
    else:
        raise ConvergenceError("partial-fraction series did not settle")
    out = pref * acc
    if fn == "sin":
        out = z * out
    return out


def _qtrig_wz(z, ctx: QContext, fn: str):
    _require_super_unit(ctx, "lattice trig pair")
    if fn not in ("cos", "sin"):
        raise UnsupportedVariant("only cos/sin exist in the super-unit family")
    lam = ctx.lam
    q = ctx.q
    tol, mx = ctx.trunc.tail_tol, ctx.trunc.max_terms
    acc = 0.0
    if fn == "cos":
        # sum (-1)^k x^(2k) q^(-k) / ([2k]! lam^(2k))
        term = 1.0
        for k in range(mx):
            acc += term
            if abs(term) < tol * (1.0 + abs(acc)) and k > 2:
                return acc
            br1 = qnumber(2 * k + 1, ctx)
            br2 = qnumber(2 * k + 2, ctx)
            term *= -(z * z) / (q * lam * lam * br1 * br2)
        raise ConvergenceError("lattice cosine series did not settle")
    # sin: sum (-1)^k x^(2k+1) q^(k+1) / ([2k+1]! lam^(2k+1))
    term = z * q / lam
    for k in range(mx):
        acc += term
        if abs(term) < tol * (1.0 + abs(acc)) and k > 2:
            return acc
        br1 = qnumber(2 * k + 2, ctx)
        br2 = qnumber(2 * k + 3, ctx)
        term *= -(z * z) * q / (lam * lam * br1 * br2)
    raise ConvergenceError("lattice sine series did not settle")


# ---------------------------------------------------------------------------
# Lattice theta sums

def theta(z, ctx: QContext, route: str = "product"):
    """Bilateral lattice sum Theta(z), invariant under z -> q^2 z.

    route='product' uses the closed bilateral form
    (1-q^2) * sum_m 1/(w q^(2m) + q^(-2m)/w) at w = (1-q^2) z;
    route='sin' sums (1-q^2) * sum_m sin((1-q^2) q^(2m) z) with the
    q^2 sine, term by term.  Both are geometrically convergent in each
    direction; they agree and the tests pin that down.
    """
    _require_sub_unit(ctx, "theta sum")
    c = 1.0 - ctx.q2
    tol, mx = ctx.trunc.tail_tol, ctx.trunc.max_terms
    if route == "product":
        try:
            return K.theta_bilateral(c * z, ctx.q, tol, mx)
        except ZeroDivisionError as exc:
            raise PoleError(str(exc)) from exc
        except ValueError as exc:
            raise ConvergenceError(str(exc)) from exc
    if route == "sin":
        q2 = ctx.q2
        acc = qtrig(c * z, ctx, "sin")
        wp = c * z
        wm = c * z
        for _ in range(mx):
            wp *= q2
            wm /= q2
            tp = qtrig(wp, ctx, "sin")
            tm = qtrig(wm, ctx, "sin")
            acc += tp + tm
            if abs(tp) < tol and abs(tm) < tol:
                return c * acc
        raise ConvergenceError("theta sine route did not settle")
    raise DomainError(f"unknown route {route!r}")


def theta0(ctx: QContext):
    """theta(1); normalization constant of the lattice inversion theory."""
    return theta(1.0, ctx)


# ---------------------------------------------------------------------------
# Basic hypergeometric series

def hyper_rphis(num, den, ctx: QContext, z, base: str = "q"):
    """r_phi_s(num; den; b; z) with the standard extra factor
    [(-1)^n b^(n(n-1)/2)]^(1+s-r) when s+1 > r.

    Entire in z when r <= s; for r = s+1 the series converges on |z| < 1
    (a ConvergenceError is raised outside).  r > s+1 is refused.
    """
    _require_sub_unit(ctx, "basic hypergeometric series")
    b = ctx.base(base)
    r, s = len(num), len(den)
    p = 1 + s - r
    if p < 0:
        raise DomainError("series with r > s+1 diverges for z != 0")
    if p == 0 and abs(z) >= 1.0:
        raise ConvergenceError("r = s+1 series needs |z| < 1")
    tol, mx = ctx.trunc.tail_tol, ctx.trunc.max_terms
    acc = 0.0 + 0.0j
    term = 1.0 + 0.0j
    bn = 1.0
    quiet = 0
    for n in range(mx):
        acc += term
        if abs(term) < tol * (1.0 + abs(acc)):
            quiet += 1
            if quiet >= 3 and n > 2:
                return acc
        else:
            quiet = 0
        ratio = z
        for a in num:
            ratio *= 1.0 - a * bn
        for d in den:
            fac = 1.0 - d * bn
            if abs(fac) < _POLE_EPS:
                raise PoleError("lower parameter hits a pole of the series")
            ratio /= fac
        fac = 1.0 - bn * b  # the (b;b)_{n+1} update
        if abs(fac) < _POLE_EPS:
            raise PoleError("base Pochhammer factor vanishes")
        ratio /= fac
        if p:
            ratio *= ((-1.0) ** p) * (bn ** p)
        term *= ratio
        bn *= b
    raise ConvergenceError("hypergeometric series did not settle")


def phi01(w, ctx: QContext):
    """The 0-phi-1 series with lower parameter 0 in base q^2; the series
    form of the big q^2-exponential kernel used by the lattice transform."""
    return hyper_rphis([], [0.0], ctx, w, base="q2")
