"""Pure-Python kernel loops.

Same callable surface as the compiled module _fast; the loader in
__init__ picks whichever is available.  These functions are deliberately
dependency-free and raise plain ValueError / ZeroDivisionError; the
public modules translate those into the package error types.
"""

from __future__ import annotations


def poch_prod(a: complex, q: float, n: int) -> complex:
    """Finite product prod_{j<n} (1 - a q^j)."""
    out: complex = 1.0
    t = a
    for _ in range(n):
        out *= 1.0 - t
        t *= q
    return out


def poch_inf(a: complex, q: float, tol: float, max_terms: int) -> complex:
    """Infinite product prod_{j>=0} (1 - a q^j) for 0 < q < 1."""
    out: complex = 1.0
    t = a
    for _ in range(max_terms):
        if abs(t) < tol:
            return out
        out *= 1.0 - t
        t *= q
    raise ValueError("pochhammer product did not reach tail tolerance")


def eq_product(z: complex, q: float, tol: float, max_terms: int,
               pole_eps: float) -> complex:
    """1 / (z;q)_inf with pole detection on each factor."""
    out: complex = 1.0
    t = z
    for _ in range(max_terms):
        if abs(t) < tol:
            return out
        fac = 1.0 - t
        if abs(fac) < pole_eps:
            raise ZeroDivisionError("factor vanishes: evaluation at a pole")
        out /= fac
        t *= q
    raise ValueError("exponential product did not reach tail tolerance")


def Eq_product(z: complex, q: float, tol: float, max_terms: int) -> complex:
    """(-z;q)_inf, entire in z."""
    out: complex = 1.0
    t = z
    for _ in range(max_terms):
        if abs(t) < tol:
            return out
        out *= 1.0 + t
        t *= q
    raise ValueError("exponential product did not reach tail tolerance")


def theta_bilateral(z: complex, q: float, tol: float, max_terms: int) -> complex:
    """(1-q^2) * sum_{m in Z} 1 / (z q^{2m} + q^{-2m}/z), 0 < q < 1.

    Terms decay geometrically in both directions; the sum is accumulated
    symmetrically outward from m = 0.
    """
    if z == 0:
        raise ZeroDivisionError("theta sum undefined at z = 0")
    q2 = q * q
    zi = 1.0 / z
    # m = 0 term
    den = z + zi
    if abs(den) < 1e-12:
        raise ZeroDivisionError("theta sum hits a vanishing denominator")
    acc = 1.0 / den
    up = z       # z q^{2m}, m > 0 wing
    ui = zi      # z^{-1} q^{-2m} -> zi q^{2|m|} on the other wing
    for _ in range(max_terms):
        up_next = up * q2
        ui_next = ui * q2
        d_plus = up_next + 1.0 / up_next   # careful: this is z q^{2m} + q^{-2m}/z
        # d_plus built from up_next = z q^{2m}; 1/up_next = q^{-2m}/z, matches the sum
        d_minus = 1.0 / ui_next + ui_next  # m < 0 wing, z q^{2m} = 1/(zi q^{2|m|})
        if abs(d_plus) < 1e-12 or abs(d_minus) < 1e-12:
            raise ZeroDivisionError("theta sum hits a vanishing denominator")
        t_plus = 1.0 / d_plus
        t_minus = 1.0 / d_minus
        acc += t_plus + t_minus
        up = up_next
        ui = ui_next
        if abs(t_plus) < tol and abs(t_minus) < tol:
            return (1.0 - q2) * acc
    raise ValueError("bilateral theta sum did not reach tail tolerance")


def paired_ratio_product(ta: complex, tb: complex, q2: float, tol: float,
                         max_terms: int) -> complex:
    """prod_{j>=0} (1 + tb q2^j) / (1 - ta q2^j), factors consumed in pairs.

    Multiplying numerator and denominator factors together keeps the
    running value bounded when the separate products overflow/underflow.
    """
    out: complex = 1.0
    a = ta
    b = tb
    for _ in range(max_terms):
        if abs(a) < tol and abs(b) < tol:
            return out
        den = 1.0 - a
        if abs(den) < 1e-14:
            raise ZeroDivisionError("paired product hits a vanishing factor")
        out *= (1.0 + b) / den
        a *= q2
        b *= q2
    raise ValueError("paired product did not reach tail tolerance")
