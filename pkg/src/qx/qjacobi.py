"""Little q-Jacobi functions and their q-difference/transmutation operators.

The function family phi_lambda(x; a, b) = 2phi1(a*sigma, a/sigma; ab; q; -bx/a)
with lambda = (sigma + 1/sigma)/2 diagonalizes a second-order q-difference
operator on the lattice y*q^Z.  This module provides:

  * the functions themselves and the two equivalent operator normalizations
    (`apply_L` with which="L" or "frakL"),
  * the weighted sequence norm and its q-integral rewriting,
  * the forward transform against the weight, plus quadrature plumbing for
    caller-supplied spectral measures (`MeasureQuadrature`, `kernel_pkl`),
  * fractional q-integral operators of Weyl type: the one-parameter family
    `weyl_simple` (finite sum for nonpositive integer order, W_0 = id,
    W_{-1} = the backward difference `bq`), its iterated-q-integral
    characterization `weyl_iterated_integral`, and the two-parameter
    generalizations `weyl_generalized` / `abel_generalized` that intertwine
    the operator families at shifted parameters.

Everything runs in the sub-unit regime 0 < q < 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import qcore as qc
from .context import QContext
from .errors import (ConvergenceError, DomainError, PoleError, RegimeError,
                     WindowError)
from .qops import LatticeFunction

__all__ = [
    "JacobiParams", "TransformOrder", "MeasureQuadrature",
    "little_q_jacobi", "apply_L", "frakl_pointwise", "weighted_norm",
    "forward_transform", "kernel_pkl",
    "weyl_simple", "bq", "qintegral_to_infinity", "weyl_iterated_integral",
    "weyl_generalized", "abel_generalized",
]

# How many consecutive exactly-zero leading terms a lattice series scans
# before concluding the summand is identically zero.  Supports that begin
# deeper than this many lattice steps above the evaluation point are out
# of range for the adaptive sums here.
_ZERO_SCAN = 96

# Factors this close to zero in a terminating series denominator are poles.
_POLE_EPS = 1e-13


def _require_sub_unit(ctx: QContext, what: str) -> None:
    if ctx.q >= 1.0:
        raise RegimeError(f"{what} needs the sub-unit regime 0 < q < 1")


# ---------------------------------------------------------------------------
# Parameter bundles


@dataclass(frozen=True)
class JacobiParams:
    """Parameter bundle (a, b, y, sigma) with the derived spectral data.

    a, b are the function parameters (positive, ab < 1), y > 0 is the base
    point of the lattice y*q^Z, and sigma encodes the spectral value
    lambda = (sigma + 1/sigma)/2.  alpha and beta are the exponents with
    a = q^((alpha+beta+1)/2) and b = q^((alpha-beta+1)/2), so ab = q^(alpha+1)
    and b/a = q^(-beta).
    """

    ctx: QContext
    a: float
    b: float
    y: float = 1.0
    sigma: complex = 1.0
    lambda_spec: complex = field(init=False)
    alpha: float = field(init=False)
    beta: float = field(init=False)

    def __post_init__(self) -> None:
        _require_sub_unit(self.ctx, "the little q-Jacobi family")
        if self.a <= 0 or self.b <= 0:
            raise DomainError("parameters a and b must be positive")
        if self.a * self.b >= 1.0:
            raise DomainError("need ab < 1")
        if self.y <= 0:
            raise DomainError("lattice base y must be positive")
        sigma = complex(self.sigma)
        if sigma == 0:
            raise DomainError("sigma must be nonzero")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "lambda_spec", (sigma + 1.0 / sigma) / 2.0)
        lq = math.log(self.ctx.q)
        object.__setattr__(self, "alpha", math.log(self.a * self.b) / lq - 1.0)
        object.__setattr__(self, "beta", math.log(self.a / self.b) / lq)

    def weight(self, k: int) -> float:
        """Sequence weight (ab)^k (-b y q^k / a; q)_inf / (-y q^k; q)_inf."""
        x = self.y * self.ctx.q ** k
        num = qc.qpochhammer(-self.b * x / self.a, self.ctx)
        den = qc.qpochhammer(-x, self.ctx)
        return (self.a * self.b) ** k * complex(num / den).real

    def point(self, k: int) -> float:
        """Lattice point y*q^k."""
        return self.y * self.ctx.q ** k


@dataclass(frozen=True)
class TransformOrder:
    """Order pair (nu, mu) for the two-parameter transmutation operators.

    No constraints are enforced at construction; each operator checks the
    domain conditions it actually needs (sign of nu, integrality of mu,
    the |q^(nu-mu) b/a| < 1 convergence bound, ...).
    """

    nu: complex
    mu: complex = 0.0


@dataclass(frozen=True)
class MeasureQuadrature:
    """Finite quadrature rule standing in for a spectral measure.

    nodes is a sequence of (lambda_j, w_j) pairs with w_j >= 0.  The inverse
    transform and the kernel formulas need a measure the theory does not pin
    down in closed form here, so the caller supplies one.
    """

    nodes: tuple

    def __post_init__(self) -> None:
        cleaned = []
        for entry in self.nodes:
            if len(entry) != 2:
                raise DomainError("each quadrature node is a (lambda, weight) pair")
            lam, w = float(entry[0]), float(entry[1])
            if not (math.isfinite(lam) and math.isfinite(w)):
                raise DomainError("quadrature nodes must be finite")
            if w < 0:
                raise DomainError("quadrature weights must be nonnegative")
            cleaned.append((lam, w))
        object.__setattr__(self, "nodes", tuple(cleaned))

    def to_dict(self) -> dict:
        return {"nodes": [[lam, w] for lam, w in self.nodes]}

    @classmethod
    def from_dict(cls, d: dict) -> "MeasureQuadrature":
        if "nodes" not in d:
            raise DomainError("measure dict needs a 'nodes' list")
        return cls(tuple((row[0], row[1]) for row in d["nodes"]))


# ---------------------------------------------------------------------------
# The function family and its q-difference operators


def _sigma_from_lambda(lam: complex) -> complex:
    """One root of sigma + 1/sigma = 2*lambda; the other root gives the
    same function value (parameter symmetry of the series)."""
    lam = complex(lam)
    return lam + cmath.sqrt(lam * lam - 1.0)


def _phi_sigma(x, a: float, b: float, sigma: complex, ctx: QContext) -> complex:
    return qc.hyper_rphis([a * sigma, a / sigma], [a * b], ctx,
                          -(b * x / a), base="q")


def little_q_jacobi(x, p: JacobiParams, ctx: QContext | None = None) -> complex:
    """phi_lambda(x; a, b) = 2phi1(a*sigma, a/sigma; ab; q; -bx/a).

    The series converges for |bx/a| < 1 (ConvergenceError outside).  The
    optional ctx overrides the truncation policy carried by p.
    """
    return _phi_sigma(x, p.a, p.b, p.sigma, ctx if ctx is not None else p.ctx)


def _check_lattice(f: LatticeFunction, p: JacobiParams, op: str) -> None:
    if not isinstance(f, LatticeFunction):
        raise DomainError(f"{op} expects a LatticeFunction")
    if f.step != 1:
        raise DomainError(f"{op} works on the step-1 lattice y*q^Z")
    if f.ctx.q != p.ctx.q:
        raise DomainError("lattice and parameter contexts disagree on q")
    if f.base != p.y:
        raise DomainError("lattice base must equal the parameter base y")


def apply_L(f: LatticeFunction, p: JacobiParams,
            which: str = "L") -> LatticeFunction:
    """Apply the hypergeometric q-difference operator on the lattice y*q^Z.

    which="L" applies
        a^2 (1 + 1/x)(T_q - id) + (1 + aq/(bx))(T_q^{-1} - id),
    for which the function family satisfies L phi = (-1 - a^2 + 2a*lambda) phi;
    which="frakL" applies the renormalized operator
        (a/2)(1 + 1/x) T_q - (a/(2x) + q/(2bx)) id + (1/(2a))(1 + aq/(bx)) T_q^{-1}
    with eigenvalue lambda.  The two are related by
    frakL = (1/(2a)) L + (a + 1/a)/2; both are coded from their own
    coefficient functions so that identity is a checkable statement, not a
    definition.

    The stencil reads one neighbor on each side, so the output window loses
    its two edge indices rather than fabricating boundary values; a window
    with no interior raises WindowError.
    """
    if which not in ("L", "frakL"):
        raise DomainError(f"unknown operator variant {which!r}")
    _check_lattice(f, p, "apply_L")
    lo, hi = f.window
    if hi - lo < 2:
        raise WindowError("window has no interior once both edges are dropped")
    q, a, b = f.ctx.q, p.a, p.b

    def stencil(vals: np.ndarray, sign: float) -> np.ndarray:
        out = np.empty(hi - lo - 1, dtype=complex)
        for i, n in enumerate(range(lo + 1, hi)):
            x = sign * p.y * q ** n
            up = vals[n + 1 - lo]     # T_q f at x, i.e. f(qx)
            mid = vals[n - lo]
            dn = vals[n - 1 - lo]     # T_q^{-1} f at x, i.e. f(x/q)
            if which == "L":
                out[i] = (a * a * (1.0 + 1.0 / x) * (up - mid)
                          + (1.0 + a * q / (b * x)) * (dn - mid))
            else:
                out[i] = ((a / 2.0) * (1.0 + 1.0 / x) * up
                          - (a / (2.0 * x) + q / (2.0 * b * x)) * mid
                          + (1.0 + a * q / (b * x)) * dn / (2.0 * a))
        return out

    plus = stencil(f.plus, 1.0)
    minus = stencil(f.minus, -1.0) if f.minus is not None else None
    return f.with_values(plus, minus, window=(lo + 1, hi - 1))


def frakl_pointwise(f, ctx: QContext, a: float, b: float):
    """The renormalized q-difference operator as a map on callables.

    Returns x -> (a/2)(1+1/x) f(qx) - (a/(2x) + q/(2bx)) f(x)
                 + (1/(2a))(1 + aq/(bx)) f(x/q).
    Composition helpers like the transmutation intertwinings need the
    operator off any fixed window, which is why this pointwise form exists
    alongside apply_L.
    """
    q = ctx.q

    def g(x):
        if x == 0:
            raise DomainError("operator coefficients have a pole at x = 0")
        return ((a / 2.0) * (1.0 + 1.0 / x) * f(q * x)
                - (a / (2.0 * x) + q / (2.0 * b * x)) * f(x)
                + (1.0 + a * q / (b * x)) * f(x / q) / (2.0 * a))

    return g


# ---------------------------------------------------------------------------
# Norm, transform, quadrature kernel


def weighted_norm(u: LatticeFunction, p: JacobiParams,
                  route: str = "sum") -> float:
    """Squared weighted norm of the sequence u_k = u(y q^k).

    route="sum" evaluates sum_k |u_k|^2 (ab)^k (-byq^k/a;q)_inf/(-yq^k;q)_inf
    directly.  route="integral" evaluates the equivalent q-integral form
    y^(-alpha-1) * Integral |f|^2 x^alpha (-x q^(-beta);q)_inf/(-x;q)_inf d_q x
    over the lattice (the Jackson sum y * sum_k g(yq^k) q^k); the two routes
    agree to rounding and disagreement flags a weight bug.  Only the positive
    branch enters; sample with branches="plus-only".
    """
    _check_lattice(u, p, "weighted_norm")
    if u.minus is not None:
        raise DomainError("the sequence norm reads the positive branch only; "
                          "sample with branches='plus-only'")
    if route not in ("sum", "integral"):
        raise DomainError(f"unknown route {route!r}")
    q = p.ctx.q
    total = 0.0
    for n in u.indices():
        v = abs(u.value(n)) ** 2
        if v == 0.0:
            continue
        if route == "sum":
            total += v * p.weight(n)
        else:
            x = p.y * q ** n
            num = qc.qpochhammer(-x * q ** (-p.beta), p.ctx)
            den = qc.qpochhammer(-x, p.ctx)
            total += v * (q ** n) * (x ** p.alpha) * complex(num / den).real
    if route == "integral":
        total *= p.y ** (-p.alpha - 1.0) * p.y
    return float(total)


def forward_transform(u: LatticeFunction, p: JacobiParams, lam) -> complex:
    """Transform value sum_k u_k phi_lambda(y q^k; a, b) * weight(k).

    lam is the spectral point; the sigma root chosen for it is irrelevant
    because the function is symmetric under sigma -> 1/sigma.  Raises
    ConvergenceError if a nonzero u_k sits at a lattice point where the
    series for phi does not converge (|b y q^k / a| >= 1).
    """
    _check_lattice(u, p, "forward_transform")
    if u.minus is not None:
        raise DomainError("the transform reads the positive branch only; "
                          "sample with branches='plus-only'")
    sigma = _sigma_from_lambda(lam)
    acc = 0.0 + 0.0j
    for n in u.indices():
        c = u.value(n)
        if c == 0.0:
            continue
        acc += c * _phi_sigma(p.point(n), p.a, p.b, sigma, p.ctx) * p.weight(n)
    return acc


def kernel_pkl(p: JacobiParams, shifts: tuple, k: int, l: int,
               m: MeasureQuadrature) -> complex:
    """Quadrature value of the parameter-shift kernel P_{k,l}.

    For shifts (r, s) this is
        sum_j w_j phi_{lambda_j}(y q^l / s; ar, bs) phi_{lambda_j}(y q^k; a, b)
    over the caller-supplied measure nodes.  The shifted parameter pair
    (ar, bs) must stay in the positive, product-below-one range.
    """
    r, s = shifts
    if r <= 0 or s <= 0:
        raise DomainError("shift factors must be positive")
    ar, bs = p.a * r, p.b * s
    if ar * bs >= 1.0:
        raise DomainError("shifted parameters leave the ab < 1 range")
    x_shift = p.y * p.ctx.q ** l / s
    x_plain = p.y * p.ctx.q ** k
    acc = 0.0 + 0.0j
    for lam_j, w_j in m.nodes:
        sig = _sigma_from_lambda(lam_j)
        acc += (w_j * _phi_sigma(x_shift, ar, bs, sig, p.ctx)
                * _phi_sigma(x_plain, p.a, p.b, sig, p.ctx))
    return acc


# ---------------------------------------------------------------------------
# Adaptive lattice sums


def _settled_sum(terms, ctx: QContext, scan: int = _ZERO_SCAN) -> complex:
    """Sum a lattice series until three consecutive terms fall below the
    relative tail tolerance.

    The tolerance is relative to the largest magnitude the sum has seen
    (terms or partial sums), never to an absolute unit scale: these sums
    appear nested inside other lattice sums, where a value of size 1e-12
    still needs its full relative accuracy because the caller multiplies
    it back up by q^(-l) weights.

    Exactly-zero leading terms (a support that starts above the evaluation
    point) do not trigger settling until `scan` of them have passed with
    nothing nonzero, at which point the sum is declared zero.
    """
    tol, mx = ctx.trunc.tail_tol, ctx.trunc.max_terms
    acc = 0.0 + 0.0j
    quiet = 0
    started = False
    scale = 0.0
    for n, term in enumerate(terms):
        if n >= mx:
            break
        acc += term
        a = abs(term)
        if a > 0.0:
            started = True
            if a > scale:
                scale = a
        aa = abs(acc)
        if aa > scale:
            scale = aa
        small = (a <= tol * scale) if started else True
        if small:
            quiet += 1
            if quiet >= 3 and n > 2 and (started or n >= scan):
                return acc
        else:
            quiet = 0
    raise ConvergenceError("lattice series did not settle within max_terms")


def _phi_terminating(num, den, q: float, z, kmax: int) -> complex:
    """Terminating basic hypergeometric sum: terms k = 0..kmax of the
    r=s+1 series with the given parameter lists.

    The loop never forms the ratio for the term past kmax, so parameter
    degeneracies sitting just beyond the last term (the usual situation
    when a lower parameter is q^(1-kmax-nu) with integer nu) cannot raise
    spurious pole errors.
    """
    acc = 1.0 + 0.0j
    term = 1.0 + 0.0j
    for k in range(kmax):
        qk = q ** k
        ratio = complex(z)
        for a in num:
            ratio *= 1.0 - a * qk
        for d in den:
            fac = 1.0 - d * qk
            if abs(fac) < _POLE_EPS:
                raise PoleError("lower parameter pole inside a terminating series")
            ratio /= fac
        ratio /= 1.0 - q ** (k + 1)
        term *= ratio
        acc += term
    return acc


# ---------------------------------------------------------------------------
# Weyl-type fractional q-integrals


def weyl_simple(f, ctx: QContext, nu, x: float) -> complex:
    """Fractional q-integral of order nu:

        (W_nu f)(x) = x^nu sum_{l>=0} f(x q^(-l)) q^(-l*nu) (q^nu;q)_l/(q;q)_l.

    For nu in Z_{<=0} the coefficient (q^nu;q)_l vanishes beyond l = -nu and
    the sum is finite: W_0 = id and W_{-1} = bq.  Otherwise the sum is
    truncated adaptively and the summand must decay (f(x q^(-l)) =
    O(q^(l(nu+eps)))); a non-decaying input raises ConvergenceError.
    """
    _require_sub_unit(ctx, "the fractional q-integral")
    if x <= 0:
        raise DomainError("evaluation point must be positive")
    q = ctx.q
    nu = complex(nu)
    n_int = None
    if nu.imag == 0.0 and nu.real <= 0.0 and nu.real == round(nu.real):
        n_int = int(-round(nu.real))
    pref = x ** nu

    if n_int is not None:
        # finite branch: l = 0..n_int
        acc = complex(f(x))
        coeff = 1.0 + 0.0j
        for l in range(1, n_int + 1):
            coeff *= q ** (-nu) * (1.0 - q ** (nu + l - 1)) / (1.0 - q ** l)
            acc += f(x * q ** (-l)) * coeff
        return pref * acc

    def terms():
        coeff = 1.0 + 0.0j
        l = 0
        while True:
            yield f(x * q ** (-l)) * coeff
            coeff *= q ** (-nu) * (1.0 - q ** (nu + l)) / (1.0 - q ** (l + 1))
            l += 1

    return pref * _settled_sum(terms(), ctx)


def bq(f, ctx: QContext, x: float) -> complex:
    """Backward difference (B_q f)(x) = (f(x) - f(x/q)) / x; equals W_{-1}."""
    if x == 0:
        raise DomainError("backward difference has a pole at x = 0")
    return (f(x) - f(x / ctx.q)) / x


def qintegral_to_infinity(f, ctx: QContext, a: float) -> complex:
    """Upward Jackson integral from a:  a * sum_{k>=0} f(a q^(-k)) q^(-k).

    Converges only when f decays faster than the lattice measure grows;
    compactly supported integrands terminate exactly.
    """
    _require_sub_unit(ctx, "the upward q-integral")
    if a <= 0:
        raise DomainError("lower endpoint must be positive")
    q = ctx.q

    def terms():
        k = 0
        while True:
            yield f(a * q ** (-k)) * q ** (-k)
            k += 1

    return a * _settled_sum(terms(), ctx)


def weyl_iterated_integral(f, ctx: QContext, n: int, x: float) -> complex:
    """n-fold upward q-integral of f evaluated at x.

    Computes integral_x^inf ... integral_{x_{n-1}}^inf f d_q x_n ... d_q x_1
    on the lattice x q^(-N), memoizing every level so the cost stays linear
    in the lattice range.  Agrees with weyl_simple at positive integer order.
    """
    _require_sub_unit(ctx, "the iterated q-integral")
    if not isinstance(n, int) or n < 1:
        raise DomainError("iteration depth must be a positive integer")
    if x <= 0:
        raise DomainError("evaluation point must be positive")
    q = ctx.q
    memo: dict = {}

    def value(k: int, d: int) -> complex:
        key = (k, d)
        if key in memo:
            return memo[key]
        if d == 0:
            v = complex(f(x * q ** (-k)))
        else:
            def terms():
                j = 0
                while True:
                    yield value(k + j, d - 1) * q ** (-j)
                    j += 1
            v = (x * q ** (-k)) * _settled_sum(terms(), ctx)
        memo[key] = v
        return v

    return value(0, n)


def weyl_generalized(f, p: JacobiParams, o: TransformOrder, x: float) -> complex:
    """Two-parameter Weyl-type operator W_{nu,mu}(a,b) applied to f at x > 0:

        q^(-mu^2) (b/a)^mu x^(mu+nu) [(-x;q)_inf / (-x q^(-mu);q)_inf] *
        sum_{p>=0} f(x q^(-mu-p)) q^(-p(nu+mu)) (q^nu;q)_p/(q;q)_p *
                   [(-x q^(-p);q)_p / (-x q^(-mu-p);q)_p] *
        3phi2(q^(-p), q^mu, -(b/a) x q^(-mu-p);
              q^(1-nu-p), -x q^(-p); q, q).

    This kernel is the transport of abel_generalized through the weighted
    sequence pairing, taken at the reflected parameters
    (a q^(-nu), b q^(-mu)); the telescoped form above follows from the
    weight ratios collapsing to finite q-Pochhammers.  It intertwines the
    three-point stencils,

        frakL^{(a q^(-nu), b q^(-mu))} o W_{nu,mu} = W_{nu,mu} o frakL^{(a,b)},

    and at mu = 0 the 3phi2 terminates at its first term, the Pochhammer
    pair cancels, and the kernel degenerates term-by-term to weyl_simple.
    Needs real nu > 0 (nu = 0 only together with mu = 0, where the whole
    series collapses to the identity), |q^(nu-mu) b/a| < 1 (DomainError
    otherwise), and a summand that still decays after the q^(-p(nu+mu))
    growth; compact support always qualifies.
    """
    ctx = p.ctx
    q = ctx.q
    nu, mu = complex(o.nu), complex(o.mu)
    if x <= 0:
        raise DomainError("evaluation point must be positive")
    if nu.imag != 0.0 or nu.real < 0.0 or (nu.real == 0.0 and mu != 0.0):
        raise DomainError("order nu must be a positive real for this operator "
                          "(nu = 0 is the identity and needs mu = 0)")
    if abs(q ** (nu - mu) * p.b / p.a) >= 1.0:
        raise DomainError("need |q^(nu-mu) b/a| < 1")
    pref = (qc.qpochhammer(-x, ctx) / qc.qpochhammer(-x * q ** (-mu), ctx)
            * q ** (-mu * mu) * (p.b / p.a) ** mu * x ** (mu + nu))
    b_over_a = p.b / p.a
    # keep f's evaluation points on the real axis when the order is real
    mu_pt = mu.real if mu.imag == 0.0 else mu

    def terms():
        coeff = 1.0 + 0.0j  # q^(-p(nu+mu)) (q^nu;q)_p / (q;q)_p
        pi = 0
        while True:
            xp = x * q ** (-mu_pt - pi)
            fv = f(xp)
            # coeff hits an exact zero at integer-orders' finite collapse;
            # skip before the inner series divides by its dead factor
            if fv == 0 or coeff == 0:
                yield 0.0
            else:
                ratio = (qc.qpochhammer(-x * q ** (-pi), ctx, pi)
                         / qc.qpochhammer(-complex(xp), ctx, pi))
                inner = _phi_terminating(
                    [q ** (-pi), q ** mu, -b_over_a * xp],
                    [q ** (1.0 - nu - pi), -x * q ** (-pi)],
                    q, q, pi)
                yield fv * coeff * ratio * inner
            coeff *= (q ** (-(nu + mu))
                      * (1.0 - q ** (nu + pi)) / (1.0 - q ** (pi + 1)))
            pi += 1

    return pref * _settled_sum(terms(), ctx)


def abel_generalized(f, p: JacobiParams, o: TransformOrder, x: float) -> complex:
    """Two-parameter Abel-type operator A_{nu,mu}(a,b) applied to f at x > 0:

        [(-bxq^mu/a;q)_inf / (-bxq^(mu-nu)/a;q)_inf] *
        sum_{k>=0} f(x q^(mu+k)) (ab)^k (q^nu;q)_k (-xq^mu;q)_k
                   / [(q;q)_k (-bxq^mu/a;q)_k] *
        3phi2(q^(-k), q^mu, -bxq^(mu-nu)/a; q^(1-nu-k), -xq^mu; q, q).

    Defined for real nu > 0 and mu not a nonpositive integer (DomainError
    otherwise); f need only be bounded since (ab)^k does the damping.  On
    the function family this shifts parameters:
        A phi_lambda(.; a, b) = [(abq^(nu+mu);q)_inf / (ab;q)_inf]
                                 * phi_lambda(.; aq^nu, bq^mu).
    """
    ctx = p.ctx
    q = ctx.q
    nu, mu = complex(o.nu), complex(o.mu)
    if x <= 0:
        raise DomainError("evaluation point must be positive")
    if nu.imag != 0.0 or nu.real <= 0.0:
        raise DomainError("order nu must be a positive real for this operator")
    if mu.imag == 0.0 and mu.real <= 0.0 and mu.real == round(mu.real):
        raise DomainError("order mu must avoid the nonpositive integers")
    bx_over_a = p.b * x / p.a
    pref = (qc.qpochhammer(-bx_over_a * q ** mu, ctx)
            / qc.qpochhammer(-bx_over_a * q ** (mu - nu), ctx))
    inner_num3 = -bx_over_a * q ** (mu - nu)
    mu_pt = mu.real if mu.imag == 0.0 else mu

    def terms():
        coeff = 1.0 + 0.0j  # (ab)^k (q^nu;q)_k (-xq^mu;q)_k / [(q;q)_k (-bxq^mu/a;q)_k]
        k = 0
        while True:
            fv = f(x * q ** (mu_pt + k))
            if fv == 0:
                yield 0.0
            else:
                inner = _phi_terminating(
                    [q ** (-k), q ** mu, inner_num3],
                    [q ** (1.0 - nu - k), -x * q ** mu],
                    q, q, k)
                yield fv * coeff * inner
            coeff *= (p.a * p.b * (1.0 - q ** (nu + k)) * (1.0 + x * q ** (mu + k))
                      / ((1.0 - q ** (k + 1)) * (1.0 + bx_over_a * q ** (mu + k))))
            k += 1

    return pref * _settled_sum(terms(), ctx)
