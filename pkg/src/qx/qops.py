"""Lattice functions and one-dimensional q-difference operators.

A LatticeFunction stores samples on the geometric lattice {±y q^(s n)}
for n in a finite window, s the step (1 or 2).  Outside the window the
function is 0 (compact support) unless a power-law decay_hint is set, in
which case the bilateral series operators may extend it as
f(edge) * (x/x_edge)^rho.

Derivative stencils are local except for the twisted derivative
('frakD'), whose q^(-2n) factor couples to the monomial degree and is
therefore only defined on power-series data; use frakd_poly, or
fit_power_series to adapt sampled data first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .context import QContext
from .errors import (
    ConvergenceError,
    DomainError,
    RangeError,
    RegimeError,
    WindowError,
)

__all__ = [
    "LatticeFunction",
    "GridRuleInput",
    "shift",
    "qderivative",
    "nabla_inverse",
    "jackson_integral",
    "grid_spacing",
    "frakd_poly",
    "fit_power_series",
    "poly_eval",
]


@dataclass(frozen=True)
class LatticeFunction:
    ctx: QContext
    base: float
    step: int
    window: tuple[int, int]
    plus: np.ndarray
    minus: np.ndarray | None = None
    decay_hint: float | None = None

    def __post_init__(self):
        if self.base <= 0:
            raise DomainError("lattice base point must be positive")
        if self.step not in (1, 2):
            raise DomainError("lattice step must be 1 or 2")
        lo, hi = self.window
        if hi < lo:
            raise DomainError("window is empty")
        n = hi - lo + 1
        plus = np.asarray(self.plus, dtype=complex)
        object.__setattr__(self, "plus", plus)
        if plus.shape != (n,):
            raise DomainError("plus values do not match the window length")
        if not np.all(np.isfinite(plus)):
            raise DomainError("non-finite sample values")
        if self.minus is not None:
            minus = np.asarray(self.minus, dtype=complex)
            object.__setattr__(self, "minus", minus)
            if minus.shape != (n,):
                raise DomainError("minus values do not match the window length")
            if not np.all(np.isfinite(minus)):
                raise DomainError("non-finite sample values")

    # -- basic geometry ----------------------------------------------------

    @property
    def branches(self) -> str:
        return "both" if self.minus is not None else "plus-only"

    @property
    def ratio(self) -> float:
        """Multiplier between consecutive lattice points, q^step."""
        return self.ctx.q ** self.step

    def point(self, n: int, branch: str = "+") -> float:
        x = self.base * self.ctx.q ** (self.step * n)
        return x if branch == "+" else -x

    def indices(self):
        return range(self.window[0], self.window[1] + 1)

    def _arr(self, branch: str) -> np.ndarray:
        if branch == "+":
            return self.plus
        if branch == "-":
            if self.minus is None:
                raise DomainError("no minus branch stored")
            return self.minus
        raise DomainError(f"unknown branch {branch!r}")

    def value(self, n: int, branch: str = "+") -> complex:
        """Stored sample, 0 outside the window (compact-support view)."""
        lo, hi = self.window
        if n < lo or n > hi:
            if branch == "-" and self.minus is None:
                return 0.0
            return 0.0
        if branch == "-" and self.minus is None:
            return 0.0
        return complex(self._arr(branch)[n - lo])

    def value_extended(self, n: int, branch: str = "-") -> complex:
        """Sample with the power-law extension when decay_hint is set."""
        lo, hi = self.window
        if lo <= n <= hi or self.decay_hint is None:
            return self.value(n, branch)
        rho = self.decay_hint
        edge = lo if n < lo else hi
        scale = self.ctx.q ** (self.step * (n - edge) * rho)
        return self.value(edge, branch) * scale

    # -- construction ------------------------------------------------------

    @classmethod
    def sample(cls, func, ctx: QContext, base: float = 1.0, step: int = 2,
               window: tuple[int, int] = (-20, 20), branches: str = "both",
               decay_hint: float | None = None) -> "LatticeFunction":
        lo, hi = window
        xs = [base * ctx.q ** (step * n) for n in range(lo, hi + 1)]
        plus = np.array([func(x) for x in xs], dtype=complex)
        minus = None
        if branches == "both":
            minus = np.array([func(-x) for x in xs], dtype=complex)
        elif branches != "plus-only":
            raise DomainError(f"unknown branches mode {branches!r}")
        return cls(ctx, base, step, window, plus, minus, decay_hint)

    def with_values(self, plus: np.ndarray, minus=None,
                    window: tuple[int, int] | None = None) -> "LatticeFunction":
        return LatticeFunction(self.ctx, self.base, self.step,
                               self.window if window is None else window,
                               plus, minus, self.decay_hint)

    # -- pointwise algebra (intersected windows) ----------------------------

    def _binary(self, other: "LatticeFunction", op) -> "LatticeFunction":
        if not isinstance(other, LatticeFunction):
            raise DomainError("operand must be a LatticeFunction")
        if (other.ctx.q != self.ctx.q or other.base != self.base
                or other.step != self.step):
            raise DomainError("lattice mismatch")
        lo = max(self.window[0], other.window[0])
        hi = min(self.window[1], other.window[1])
        if hi < lo:
            raise WindowError("windows do not overlap")
        a = self.plus[lo - self.window[0]: hi - self.window[0] + 1]
        b = other.plus[lo - other.window[0]: hi - other.window[0] + 1]
        plus = op(a, b)
        minus = None
        if self.minus is not None and other.minus is not None:
            am = self.minus[lo - self.window[0]: hi - self.window[0] + 1]
            bm = other.minus[lo - other.window[0]: hi - other.window[0] + 1]
            minus = op(am, bm)
        return LatticeFunction(self.ctx, self.base, self.step, (lo, hi),
                               plus, minus)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            minus = None if self.minus is None else self.minus * other
            return self.with_values(self.plus * other, minus)
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        def pairs(arr):
            return [[float(v.real), float(v.imag)] for v in arr]
        out = {
            "q": self.ctx.q,
            "base": self.base,
            "step": self.step,
            "window": [self.window[0], self.window[1]],
            "plus": pairs(self.plus),
        }
        if self.minus is not None:
            out["minus"] = pairs(self.minus)
        if self.decay_hint is not None:
            out["decay_hint"] = self.decay_hint
        return out

    @classmethod
    def from_dict(cls, d: dict, trunc=None) -> "LatticeFunction":
        from .context import QTruncation
        ctx = QContext(d["q"], trunc or QTruncation())
        def arr(key):
            if key not in d:
                return None
            return np.array([complex(re, im) for re, im in d[key]], dtype=complex)
        return cls(ctx, d["base"], int(d["step"]),
                   (int(d["window"][0]), int(d["window"][1])),
                   arr("plus"), arr("minus"), d.get("decay_hint"))


@dataclass(frozen=True)
class GridRuleInput:
    T: float
    tau: float

    def __post_init__(self):
        if self.T <= 0 or self.tau <= 0:
            raise DomainError("grid rule needs positive T and tau")


def grid_spacing(g: GridRuleInput) -> float:
    """Spacing rule sigma = sqrt(2/T) * tau^(3/2)."""
    return math.sqrt(2.0 / g.T) * g.tau ** 1.5


# ---------------------------------------------------------------------------
# shifts and derivatives

def shift(f: LatticeFunction, power: int) -> LatticeFunction:
    """Lattice translation: (shift(f,p))(x) = f(x * q^(step*p)).

    Pure re-indexing; the window moves so no samples are lost.
    """
    if power == 0:
        return f
    lo, hi = f.window
    return replace(f, window=(lo - power, hi - power))


# stencil table: kind -> (offsets in q-units, terms builder)
# each derivative is sum_j c_j(x) f(q^(o_j) x)

def _stencil(kind: str, ctx: QContext):
    q = ctx.q
    lam = ctx.lam
    if kind == "Dq":
        return {1: lambda x: 1.0 / ((q - 1.0) * x),
                0: lambda x: -1.0 / ((q - 1.0) * x)}
    if kind == "Dq2":
        return {2: lambda x: 1.0 / ((q * q - 1.0) * x),
                0: lambda x: -1.0 / ((q * q - 1.0) * x)}
    if kind == "Dplus":
        return {0: lambda x: 1.0 / x,
                1: lambda x: -1.0 / x}
    if kind == "Dminus":
        return {0: lambda x: 1.0 / x,
                -1: lambda x: -1.0 / x}
    if kind == "CalDplus":
        return {0: lambda x: 1.0 / x,
                2: lambda x: -1.0 / x}
    if kind == "CalDminus":
        return {0: lambda x: 1.0 / x,
                -2: lambda x: -1.0 / x}
    if kind == "nabla":
        return {1: lambda x: 1.0 / (lam * x),
                -1: lambda x: -1.0 / (lam * x)}
    if kind == "Lmap":
        return {-1: lambda x: 1.0}
    raise DomainError(f"unknown derivative kind {kind!r}")


def qderivative(f: LatticeFunction, kind: str,
                boundary: str = "zero") -> LatticeFunction:
    """Apply a q-difference operator pointwise.

    boundary='zero' treats f as exactly 0 outside its window (compact
    support) and returns the enlarged window carrying every nonzero
    output.  boundary='shrink' only keeps output points whose whole
    stencil lies inside the stored window, for sampled restrictions of
    functions that are not compactly supported; it raises WindowError
    when nothing is left.
    """
    if kind == "frakD":
        raise DomainError(
            "the twisted derivative has no local stencil; use frakd_poly "
            "on series data (fit_power_series adapts samples)")
    table = _stencil(kind, f.ctx)
    if any(o % f.step for o in table):
        raise DomainError(f"{kind} needs a step-1 lattice, got step {f.step}")
    offs = sorted(o // f.step for o in table)  # in window-index units
    coefs = {o // f.step: c for o, c in table.items()}
    lo, hi = f.window
    if boundary == "zero":
        new_lo, new_hi = lo - max(offs), hi - min(offs)
    elif boundary == "shrink":
        new_lo, new_hi = lo - min(offs), hi - max(offs)
        if new_hi < new_lo:
            raise WindowError("stencil leaves no interior points")
    else:
        raise DomainError(f"unknown boundary mode {boundary!r}")

    def apply_branch(branch: str) -> np.ndarray:
        out = np.zeros(new_hi - new_lo + 1, dtype=complex)
        for i, n in enumerate(range(new_lo, new_hi + 1)):
            x = f.point(n, branch)
            acc = 0.0 + 0.0j
            for o, c in coefs.items():
                acc += c(x) * f.value(n + o, branch)
            out[i] = acc
        return out

    plus = apply_branch("+")
    minus = apply_branch("-") if f.minus is not None else None
    return LatticeFunction(f.ctx, f.base, f.step, (new_lo, new_hi),
                           plus, minus, f.decay_hint)


# ---------------------------------------------------------------------------
# inverse of nabla

def nabla_inverse(f: LatticeFunction, branch_rule: str = "auto") -> LatticeFunction:
    """Antidifference for nabla: marching series in one lattice direction.

    forward-series sums lam * sum_v q^(-(2v+1)) x f(q^(-(2v+1)) x); the
    backward variant mirrors it.  On compactly supported data both
    terminate; with a decay_hint extension the tail is geometric and a
    hint of exactly -1 is refused (that profile has no antidifference).
    """
    if f.step != 1:
        raise DomainError("antidifference needs a step-1 lattice")
    if f.decay_hint is not None and f.decay_hint == -1:
        raise RangeError("x^-1 profile is outside the range of the difference")
    if branch_rule == "auto":
        try:
            return nabla_inverse(f, "forward-series")
        except ConvergenceError:
            return nabla_inverse(f, "backward-series")
    if branch_rule not in ("forward-series", "backward-series"):
        raise DomainError(f"unknown branch rule {branch_rule!r}")
    fwd = branch_rule == "forward-series"
    ctx = f.ctx
    q = ctx.q
    lam = ctx.lam
    lo, hi = f.window
    # output window: one stencil-reach wider on both sides so that
    # nabla(out) reproduces f across its whole support
    new_lo, new_hi = lo - 1, hi + 1
    tol, mx = ctx.trunc.tail_tol, ctx.trunc.max_terms

    def series_at(n: int, branch: str) -> complex:
        acc = 0.0 + 0.0j
        x = f.point(n, branch)
        for v in range(mx):
            k = 2 * v + 1
            m = n - k if fwd else n + k
            past_support = m < lo if fwd else m > hi
            if f.decay_hint is None:
                if past_support:
                    break  # every further sample is 0
                fv = f.value(m, branch)
            else:
                fv = f.value_extended(m, branch)
            term = (q ** (-k) if fwd else q ** k) * x * fv
            acc += term
            if (f.decay_hint is not None and past_support
                    and abs(term) < tol * (1 + abs(acc))):
                break
        else:
            raise ConvergenceError(
                f"{branch_rule} antidifference tail did not settle")
        sign = 1.0 if fwd else -1.0
        return sign * lam * acc

    plus = np.array([series_at(n, "+") for n in range(new_lo, new_hi + 1)])
    minus = None
    if f.minus is not None:
        minus = np.array([series_at(n, "-") for n in range(new_lo, new_hi + 1)])
    return LatticeFunction(ctx, f.base, f.step, (new_lo, new_hi), plus, minus)


# ---------------------------------------------------------------------------
# Jackson integrals

def jackson_integral(f, ctx: QContext, range_: str = "zero_to_y",
                     base: str = "q2", y: float | None = None,
                     x0: float | None = None) -> complex:
    """Weighted geometric-lattice sums replacing the Riemann integral.

    range_ is one of zero_to_y, zero_to_inf, x_to_inf, full_line.  f may
    be a callable (tail-monitored truncation) or a LatticeFunction whose
    lattice multiplier matches the requested base (finite sum under the
    compact-support convention).
    """
    b = ctx.base(base)
    if b >= 1.0:
        raise RegimeError("Jackson integral sums need a sub-unit base; "
                          "super-unit antidifferences go through nabla_inverse")
    if isinstance(f, LatticeFunction):
        return _jackson_lattice(f, b, range_, y, x0)
    yv = 1.0 if y is None else y
    tol, mx = ctx.trunc.tail_tol, ctx.trunc.max_terms
    if range_ == "zero_to_y":
        return _sum_down(lambda j: b ** j * yv * f(yv * b ** j), tol, mx) * (1 - b)
    if range_ == "zero_to_inf":
        up = _sum_up(lambda j: b ** (-j) * yv * f(yv * b ** (-j)), tol, mx)
        down = _sum_down(lambda j: b ** j * yv * f(yv * b ** j), tol, mx)
        return (1 - b) * (down + up)
    if range_ == "x_to_inf":
        if x0 is None:
            raise DomainError("x_to_inf needs the lower endpoint x0")
        return (1 - b) * _sum_up(
            lambda k: b ** (-k) * x0 * f(b ** (-k) * x0), tol, mx)
    if range_ == "full_line":
        def g(x):
            return f(x) + f(-x)
        up = _sum_up(lambda j: b ** (-j) * yv * g(yv * b ** (-j)), tol, mx)
        down = _sum_down(lambda j: b ** j * yv * g(yv * b ** j), tol, mx)
        return (1 - b) * (down + up)
    raise DomainError(f"unknown integral range {range_!r}")


def _sum_down(term, tol, mx):
    # j = 0, 1, 2, ...: geometric decay toward 0
    acc = 0.0 + 0.0j
    for j in range(mx):
        t = term(j)
        acc += t
        if j > 3 and abs(t) < tol * (1 + abs(acc)):
            return acc
    raise ConvergenceError("integral tail toward 0 did not settle")


def _sum_up(term, tol, mx):
    # j = 1, 2, ...: the large-|x| tail, must be killed by f's decay
    acc = 0.0 + 0.0j
    for j in range(1, mx):
        t = term(j)
        acc += t
        if j > 3 and abs(t) < tol * (1 + abs(acc)):
            return acc
    raise ConvergenceError("integral tail toward infinity did not settle")


def _jackson_lattice(f: LatticeFunction, b: float, range_: str,
                     y: float | None, x0: float | None) -> complex:
    if abs(f.ratio - b) > 1e-15:
        raise DomainError("lattice multiplier does not match requested base")
    yv = f.base if y is None else y
    if y is not None and abs(y - f.base) > 1e-15:
        raise DomainError("y must be the lattice base point")
    lo, hi = f.window
    if range_ == "zero_to_y":
        # points y b^j, j >= 0: lattice indices n >= 0
        acc = sum(b ** n * f.value(n) for n in range(max(lo, 0), hi + 1))
        return (1 - b) * yv * acc
    if range_ == "zero_to_inf":
        acc = sum(b ** n * f.value(n) for n in range(lo, hi + 1))
        return (1 - b) * yv * acc
    if range_ == "x_to_inf":
        if x0 is None:
            raise DomainError("x_to_inf needs the lower endpoint x0")
        # locate x0 on the lattice
        n0 = round(math.log(x0 / f.base) / math.log(b))
        if abs(f.base * b ** n0 - x0) > 1e-12 * abs(x0):
            raise DomainError("x0 is not a lattice point")
        acc = sum(b ** n * f.value(n) for n in range(lo, n0))
        return (1 - b) * yv * acc
    if range_ == "full_line":
        acc = 0.0 + 0.0j
        for n in range(lo, hi + 1):
            acc += b ** n * (f.value(n, "+") + f.value(n, "-"))
        return (1 - b) * yv * acc
    raise DomainError(f"unknown integral range {range_!r}")


# ---------------------------------------------------------------------------
# twisted derivative on power-series data

def frakd_poly(coeffs: dict[int, complex], ctx: QContext) -> dict[int, complex]:
    """Twisted derivative on Laurent coefficients:
    x^n -> [[n]] q^(-2n) x^(n-1), [[n]] = (q^(2n)-1)/(q^2-1)."""
    q = ctx.q
    out: dict[int, complex] = {}
    for n, c in coeffs.items():
        if c == 0 or n == 0:
            continue
        br = (q ** (2 * n) - 1.0) / (q * q - 1.0)
        out[n - 1] = out.get(n - 1, 0.0) + c * br * q ** (-2 * n)
    return {k: v for k, v in out.items() if v != 0}


def poly_eval(coeffs: dict[int, complex], x) -> complex:
    return sum(c * x ** n for n, c in coeffs.items())


def fit_power_series(f: LatticeFunction, degrees) -> dict[int, complex]:
    """Least-squares fit of the plus-branch samples to the given powers.

    Adapter for the twisted derivative on sampled data.  The geometric
    Vandermonde matrix conditions badly on wide windows; keep the window
    and the degree list small.
    """
    degrees = sorted(set(int(d) for d in degrees))
    lo, hi = f.window
    xs = np.array([f.point(n) for n in f.indices()], dtype=float)
    A = np.column_stack([xs.astype(complex) ** d for d in degrees])
    sol, *_ = np.linalg.lstsq(A, f.plus, rcond=None)
    resid = np.max(np.abs(A @ sol - f.plus))
    if resid > 1e-8 * (1 + np.max(np.abs(f.plus))):
        raise DomainError("samples are not well represented by these powers")
    return {d: complex(c) for d, c in zip(degrees, sol)}
