# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel loops, mirroring _pure exactly.

Scalar complex arithmetic on C doubles; no numpy dependency so the
module stays a drop-in twin of the pure implementation.
"""


def poch_prod(double complex a, double q, int n):
    cdef double complex out = 1.0
    cdef double complex t = a
    cdef int i
    for i in range(n):
        out = out * (1.0 - t)
        t = t * q
    return out


def poch_inf(double complex a, double q, double tol, int max_terms):
    cdef double complex out = 1.0
    cdef double complex t = a
    cdef int i
    for i in range(max_terms):
        if abs(t) < tol:
            return out
        out = out * (1.0 - t)
        t = t * q
    raise ValueError("pochhammer product did not reach tail tolerance")


def eq_product(double complex z, double q, double tol, int max_terms,
               double pole_eps):
    cdef double complex out = 1.0
    cdef double complex t = z
    cdef double complex fac
    cdef int i
    for i in range(max_terms):
        if abs(t) < tol:
            return out
        fac = 1.0 - t
        if abs(fac) < pole_eps:
            raise ZeroDivisionError("factor vanishes: evaluation at a pole")
        out = out / fac
        t = t * q
    raise ValueError("exponential product did not reach tail tolerance")


def Eq_product(double complex z, double q, double tol, int max_terms):
    cdef double complex out = 1.0
    cdef double complex t = z
    cdef int i
    for i in range(max_terms):
        if abs(t) < tol:
            return out
        out = out * (1.0 + t)
        t = t * q
    raise ValueError("exponential product did not reach tail tolerance")


def theta_bilateral(double complex z, double q, double tol, int max_terms):
    if z == 0:
        raise ZeroDivisionError("theta sum undefined at z = 0")
    cdef double q2 = q * q
    cdef double complex zi = 1.0 / z
    cdef double complex den = z + zi
    if abs(den) < 1e-12:
        raise ZeroDivisionError("theta sum hits a vanishing denominator")
    cdef double complex acc = 1.0 / den
    cdef double complex up = z
    cdef double complex ui = zi
    cdef double complex up_next, ui_next, d_plus, d_minus, t_plus, t_minus
    cdef int i
    for i in range(max_terms):
        up_next = up * q2
        ui_next = ui * q2
        d_plus = up_next + 1.0 / up_next
        d_minus = 1.0 / ui_next + ui_next
        if abs(d_plus) < 1e-12 or abs(d_minus) < 1e-12:
            raise ZeroDivisionError("theta sum hits a vanishing denominator")
        t_plus = 1.0 / d_plus
        t_minus = 1.0 / d_minus
        acc = acc + t_plus + t_minus
        up = up_next
        ui = ui_next
        if abs(t_plus) < tol and abs(t_minus) < tol:
            return (1.0 - q2) * acc
    raise ValueError("bilateral theta sum did not reach tail tolerance")


def paired_ratio_product(double complex ta, double complex tb, double q2,
                         double tol, int max_terms):
    cdef double complex out = 1.0
    cdef double complex a = ta
    cdef double complex b = tb
    cdef double complex den
    cdef int i
    for i in range(max_terms):
        if abs(a) < tol and abs(b) < tol:
            return out
        den = 1.0 - a
        if abs(den) < 1e-14:
            raise ZeroDivisionError("paired product hits a vanishing factor")
        out = out * (1.0 + b) / den
        a = a * q2
        b = b * q2
    raise ValueError("paired product did not reach tail tolerance")
