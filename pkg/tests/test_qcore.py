"""qcore: special-function values, dualities, and series/product consistency.

Expected numbers are either closed-form (exact), frozen from an
independent high-precision evaluation (mpmath, 40 digits; see
tests/oracles/make_oracles.py), or direct consequences of definitions.
"""

import cmath
import math

import pytest
from hypothesis import given, settings, strategies as st

from qx import QContext, QTruncation
from qx import qcore as qc
from qx.errors import (
    ConvergenceError,
    DomainError,
    PoleError,
    RegimeError,
    UnsupportedVariant,
)

CTX8 = QContext(0.8)
CTX5 = QContext(0.5)


# ---------------------------------------------------------------------------
# Pochhammer

def test_pochhammer_finite_closed_form():
    # (0.5; 0.5)_2 = (1 - 0.5)(1 - 0.25)
    assert qc.qpochhammer(0.5, CTX5, 2) == pytest.approx(0.375, abs=0)


def test_pochhammer_empty_product():
    assert qc.qpochhammer(0.9, CTX5, 0) == 1.0


def test_pochhammer_recursion_exact():
    a, q = 0.3, 0.8
    ctx = QContext(q)
    for n in range(12):
        lhs = qc.qpochhammer(a, ctx, n + 1)
        rhs = qc.qpochhammer(a, ctx, n) * (1 - a * q ** n)
        assert lhs == pytest.approx(rhs, rel=1e-15)


def test_pochhammer_infinite_requires_sub_unit():
    with pytest.raises(RegimeError):
        qc.qpochhammer(0.5, QContext(2.0), None)


def test_pochhammer_infinite_vs_deep_finite():
    val = qc.qpochhammer(0.5, CTX8, None)
    deep = qc.qpochhammer(0.5, CTX8, 400)
    assert val == pytest.approx(deep, rel=1e-12)


def test_pochhammer_rejects_negative_order():
    with pytest.raises(DomainError):
        qc.qpochhammer(0.5, CTX5, -1)


# ---------------------------------------------------------------------------
# q-numbers, factorials, binomials

def test_qnumber_symmetric_value():
    assert qc.qnumber(2, QContext(2.0)) == pytest.approx(2.5, abs=0)


def test_qnumber_bracket2_value():
    # (q^4 - 1)/(q^2 - 1) at q = 2 -> 15/3
    assert qc.qnumber(2, QContext(2.0), kind="bracket2") == pytest.approx(5.0)


def test_qnumber_classical_limit():
    ctx = QContext(1.0 + 1e-7)
    for n in range(1, 6):
        assert qc.qnumber(n, ctx) == pytest.approx(n, rel=1e-6)
        assert qc.qnumber(n, ctx, kind="bracket2") == pytest.approx(n, rel=1e-6)


def test_qbinomial_symmetric_value():
    assert qc.qbinomial(2, 1, QContext(2.0)) == pytest.approx(5.0)


def test_qbinomial_gauss_matches_product_ratio():
    ctx = QContext(0.7)
    q = 0.7
    for n in range(7):
        for m in range(n + 1):
            want = (qc.qpochhammer(q, ctx, n)
                    / (qc.qpochhammer(q, ctx, m) * qc.qpochhammer(q, ctx, n - m)))
            assert qc.qbinomial(n, m, ctx, kind="gauss") == pytest.approx(want, rel=1e-13)


def test_qbinomial_symmetric_is_gauss_in_squared_base():
    # the symmetric-factorial form with its q^(m(n-m)) weight equals the
    # Gaussian coefficient taken in base q^2
    ctx = QContext(2.0)
    ctx2 = QContext(4.0)
    for n in range(6):
        for m in range(n + 1):
            sym = qc.qbinomial(n, m, ctx)
            # Gaussian in base q^2 = 4: evaluate by explicit products
            q2 = 4.0
            num = den1 = den2 = 1.0
            for j in range(n):
                num *= 1 - q2 ** (j + 1)
            for j in range(m):
                den1 *= 1 - q2 ** (j + 1)
            for j in range(n - m):
                den2 *= 1 - q2 ** (j + 1)
            assert sym == pytest.approx(num / (den1 * den2), rel=1e-12)


def test_qbinomial_domain_checks():
    with pytest.raises(DomainError):
        qc.qbinomial(2, 3, CTX5)
    with pytest.raises(DomainError):
        qc.qbinomial(2, -1, CTX5)


@given(n=st.integers(0, 10), m=st.integers(0, 10))
@settings(max_examples=60, deadline=None)
def test_qbinomial_symmetry_property(n, m):
    if m > n:
        return
    ctx = QContext(0.6)
    assert qc.qbinomial(n, m, ctx, kind="gauss") == pytest.approx(
        qc.qbinomial(n, n - m, ctx, kind="gauss"), rel=1e-12)


# ---------------------------------------------------------------------------
# q-exponentials

def test_exponential_duality_grid():
    # little(z) * big(-z) = 1 on a disk grid, all listed q
    for q in (0.3, 0.5, 0.8, 0.95):
        ctx = QContext(q, QTruncation(max_terms=4000))
        for j in range(20):
            z = 0.9 * math.sqrt((j + 1) / 20.0) * cmath.exp(2j * math.pi * j / 7.0)
            d = qc.qexp(z, ctx, "little") * qc.qexp(-z, ctx, "big")
            assert abs(d - 1.0) < 1e-10


def test_exp_series_vs_product_default_tol():
    # base q^2 keeps the factor count small enough that truncation
    # dominates rounding at the default tolerance
    for z in (0.2, -0.4, 0.3 + 0.2j):
        s = qc.qexp(z, CTX8, "little", base="q2", method="series")
        p = qc.qexp(z, CTX8, "little", base="q2", method="product")
        assert abs(s - p) < 10 * CTX8.trunc.tail_tol


def test_exp_series_vs_product_configured_tol():
    ctx = QContext(0.8, QTruncation(tail_tol=1e-12))
    for kind in ("little", "big"):
        for z in (0.2, -0.35, 0.3 + 0.2j, -0.1 - 0.4j):
            s = qc.qexp(z, ctx, kind, method="series")
            p = qc.qexp(z, ctx, kind, method="product")
            assert abs(s - p) < 10 * ctx.trunc.tail_tol


def test_exp_frozen_value():
    # e(0.3+0.2j) in base q^2 at q = 0.8; mpmath 40-digit product
    want = 1.846788815696552 + 1.498158717645735j
    got = qc.qexp(0.3 + 0.2j, CTX8, "little", base="q2")
    assert abs(got - want) < 1e-12


def test_exp_little_pole():
    # little kind has poles at z = q^(-k)
    with pytest.raises(PoleError):
        qc.qexp(1.25, CTX8, "little")  # 1/q at q = 0.8


def test_exp_super_unit_refused():
    with pytest.raises(RegimeError):
        qc.qexp(0.2, QContext(2.0), "little")


def test_exp_little_series_radius():
    with pytest.raises(ConvergenceError):
        qc.qexp(1.5, CTX8, "little", method="series")


# ---------------------------------------------------------------------------
# trig, base q2_sec5

def test_trig_split_matches_series_coefficients():
    # cos(z) = sum (-1)^k z^(2k) / (q2;q2)_(2k), checked against the split
    z = 0.4
    acc = 0.0
    for k in range(60):
        acc += (-1) ** k * z ** (2 * k) / qc.qpochhammer(0.64, CTX8, 2 * k, base="q2")
    assert qc.qtrig(z, CTX8, "cos") == pytest.approx(acc, rel=1e-12)


def test_trig_big_split_matches_series_coefficients():
    z = 0.7
    q = 0.8
    acc = 0.0
    for k in range(80):
        acc += ((-1) ** k * q ** (2 * k * (2 * k - 1)) * z ** (2 * k)
                / qc.qpochhammer(0.64, CTX8, 2 * k, base="q2"))
    assert qc.qtrig(z, CTX8, "Cos") == pytest.approx(acc, rel=1e-11)


def test_trig_partial_fractions_agrees_with_split():
    for z in (0.3, 1.7, 4.0, 9.5):
        pf_c = qc.qtrig(z, CTX8, "cos", method="partial-fractions")
        sp_c = qc.qtrig(z, CTX8, "cos")
        pf_s = qc.qtrig(z, CTX8, "sin", method="partial-fractions")
        sp_s = qc.qtrig(z, CTX8, "sin")
        assert abs(pf_c - sp_c) < 1e-11
        assert abs(pf_s - sp_s) < 1e-11


def test_trig_little_pair_bound():
    # |cos(z)| and |sin(z)|/|z| are bounded by (-q2;q2)_inf/((1+z^2)(q2;q2)_inf)
    num = qc.qpochhammer(-0.64, CTX8, None, base="q2").real
    den = qc.qpochhammer(0.64, CTX8, None, base="q2").real
    for z in (0.1, 0.9, 2.0, 7.3, 31.0):
        cap = num / (den * (1 + z * z))
        assert abs(qc.qtrig(z, CTX8, "cos")) <= cap * (1 + 1e-12)
        assert abs(qc.qtrig(z, CTX8, "sin")) <= abs(z) * cap * (1 + 1e-12)


def test_trig_big_pair_not_bounded_by_one():
    # the big pair grows; the often-quoted unit bound fails already at z = 1
    val = qc.qtrig(1.0, CTX8, "Cos")
    assert abs(val) > 1.4


# ---------------------------------------------------------------------------
# trig, base wz_sec4

def test_wz_trig_requires_super_unit():
    with pytest.raises(RegimeError):
        qc.qtrig(0.5, CTX8, "cos", base="wz_sec4")


def test_wz_trig_no_big_pair():
    with pytest.raises(UnsupportedVariant):
        qc.qtrig(0.5, QContext(2.0), "Cos", base="wz_sec4")


def test_wz_trig_leading_terms():
    # cos: 1 - x^2/([2]! q lam^2) + ...; sin: x q/lam - x^3 q^2/([3]! lam^3) + ...
    q = 2.0
    ctx = QContext(q)
    lam = q - 1 / q
    x = 0.3
    b2 = (q ** 2 - q ** -2) / lam
    b3 = (q ** 3 - q ** -3) / lam
    cos2 = 1 - x ** 2 / (b2 * q * lam ** 2)
    sin2 = x * q / lam - x ** 3 * q ** 2 / (b2 * b3 * lam ** 3)
    assert qc.qtrig(x, ctx, "cos", base="wz_sec4") == pytest.approx(cos2, abs=1e-5)
    assert qc.qtrig(x, ctx, "sin", base="wz_sec4") == pytest.approx(sin2, abs=1e-5)


def test_wz_trig_pythagoras_variant():
    # cos(x) cos(qx) + q^-1 sin(x) sin(x/q) = 1 on the lattice family
    ctx = QContext(2.0)
    q = 2.0
    for x in (0.2, 0.7, 1.3):
        val = (qc.qtrig(x, ctx, "cos", base="wz_sec4")
               * qc.qtrig(q * x, ctx, "cos", base="wz_sec4")
               + qc.qtrig(x, ctx, "sin", base="wz_sec4")
               * qc.qtrig(x / q, ctx, "sin", base="wz_sec4") / q)
        assert val == pytest.approx(1.0, abs=1e-8)


# ---------------------------------------------------------------------------
# theta

def test_theta0_frozen():
    # frozen from two independent bilateral summations at q = 0.8
    assert qc.theta0(CTX8).real == pytest.approx(1.267091686446886, abs=1e-10)


def test_theta_routes_agree():
    for z in (1.0, 0.5, 2.3):
        a = qc.theta(z, CTX8, route="product")
        b = qc.theta(z, CTX8, route="sin")
        assert abs(a - b) < 1e-10


def test_theta_scale_invariance():
    q2 = 0.64
    base = qc.theta(1.3, CTX8)
    for k in range(-5, 6):
        assert qc.theta(1.3 * q2 ** k, CTX8) == pytest.approx(base, rel=1e-10)


def test_theta_super_unit_refused():
    with pytest.raises(RegimeError):
        qc.theta(1.0, QContext(2.0))


# ---------------------------------------------------------------------------
# hypergeometric series

def test_q_binomial_theorem():
    # sum (a;q)_n z^n/(q;q)_n = (az;q)_inf/(z;q)_inf at a=q, z=0.2, q=0.5
    ctx = QContext(0.5)
    a, z = 0.5, 0.2
    lhs = qc.hyper_rphis([a], [], ctx, z)
    rhs = qc.qpochhammer(a * z, ctx, None) / qc.qpochhammer(z, ctx, None)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_phi01_matches_big_exponential_series():
    # the 0-phi-1 kernel series evaluates the big q^2 exponential after
    # the argument substitution z -> -w (coefficient identity)
    ctx = CTX8
    for w in (0.3, -0.2, 0.15 + 0.1j):
        direct = qc.phi01(w, ctx)
        series = sum(
            0.8 ** (2 * n * (n - 1)) * w ** n
            / qc.qpochhammer(0.64, ctx, n, base="q2")
            for n in range(80)
        )
        assert abs(direct - series) < 1e-12


def test_hyper_r_exceeds_s_plus_one_refused():
    with pytest.raises(DomainError):
        qc.hyper_rphis([0.5, 0.4, 0.3], [0.2], CTX8, 0.1)


def test_hyper_radius_guard():
    with pytest.raises(ConvergenceError):
        qc.hyper_rphis([0.5, 0.3], [0.2], CTX8, 1.2)


@given(z=st.floats(-0.8, 0.8))
@settings(max_examples=40, deadline=None)
def test_exp_duality_property(z):
    d = qc.qexp(z, CTX5, "little") * qc.qexp(-z, CTX5, "big")
    assert abs(d - 1.0) < 1e-11


# ---------------------------------------------------------------------------
# context

def test_context_rejects_bad_q():
    with pytest.raises(DomainError):
        QContext(-0.5)
    with pytest.raises(DomainError):
        QContext(0.0)
    with pytest.raises(DomainError):
        QContext(1.0)


def test_context_regime_and_lambda():
    assert QContext(0.5).regime == "sub-unit"
    assert QContext(2.0).regime == "super-unit"
    assert QContext(2.0).lam == pytest.approx(1.5)


def test_truncation_validation():
    with pytest.raises(DomainError):
        QTruncation(max_terms=0)
    with pytest.raises(DomainError):
        QTruncation(tail_tol=2.0)
