"""Regenerate the frozen high-precision reference values in this directory.

Run from the repository root:

    python3 tests/oracles/make_oracles.py

Everything here is computed with mpmath from series/product definitions
written out independently of the package code (no qx imports), so the
frozen numbers are an external check, not an echo.

Covered:
  * theta0.json      bilateral lattice normalization at a few sub-unit q
  * wz_q2.json       super-unit (q = 2) lattice trig data: normalization
                     N_q, and the full orthogonality tables
                     N_q^2 sum_v q^(2v) trig(q^(2(n+v))) trig(q^(2(m+v)))
                     for |n|, |m| <= 3, cos and sin branches.

The trig series at lattice argument q^(2k) suffers catastrophic
cancellation that costs about 0.61 k^2 decimal digits at q = 2, so each
point is summed at a working precision sized to its own k.  The
orthogonality sums are truncated at |v| <= 60: the v -> -infinity tail is
geometric (ratio q^-2 = 1/4, remainder ~ 1e-36) and the v -> +infinity
tail is super-geometric (values die like q^(-k^2)).
"""

import json
import os

from mpmath import mp, mpf

Q = mpf(2)
NMAX = 3          # orthogonality table covers |n|, |m| <= NMAX
VWIN = 60         # symmetric truncation of the bilateral sums
DIGITS = 40       # digits kept in the frozen strings


def qnum(n, q, lam):
    return (q ** n - q ** (-n)) / lam


def trig_pair(k, q):
    """cos_q(q^(2k)), sin_q(q^(2k)) by direct series, self-sized precision."""
    # the series peaks near q^(2k^2) before cancelling down to a value of
    # order q^(-2k^2), so resolving the value costs ~4 k^2 log10(q) digits
    need = 60 + (int(4.4 * k * k * mp.log(q) / mp.log(10)) if k > 0 else 0)
    with mp.workdps(need):
        lam = q - 1 / q
        x = q ** (2 * k)
        x2 = x * x
        # cos: term_0 = 1, ratio -x^2 / (q lam^2 [2j+1][2j+2])
        acc_c = mpf(0)
        term = mpf(1)
        j = 0
        while True:
            acc_c += term
            if abs(term) < mpf(10) ** (-(need - 5)) * (1 + abs(acc_c)) and j > 2:
                break
            term *= -x2 / (q * lam * lam * qnum(2 * j + 1, q, lam)
                           * qnum(2 * j + 2, q, lam))
            j += 1
            if j > 4000:
                raise RuntimeError("cos series did not settle")
        # sin: term_0 = x q / lam, ratio -x^2 q / (lam^2 [2j+2][2j+3])
        acc_s = mpf(0)
        term = x * q / lam
        j = 0
        while True:
            acc_s += term
            if abs(term) < mpf(10) ** (-(need - 5)) * (1 + abs(acc_s)) and j > 2:
                break
            term *= -x2 * q / (lam * lam * qnum(2 * j + 2, q, lam)
                               * qnum(2 * j + 3, q, lam))
            j += 1
            if j > 4000:
                raise RuntimeError("sin series did not settle")
        return +acc_c, +acc_s


def nq(q):
    """prod_{j>=0} (1 - q^(-2-4j)) / (1 - q^(-4-4j))."""
    with mp.workdps(80):
        num = mpf(1)
        den = mpf(1)
        j = 0
        while True:
            a = q ** (-2 - 4 * j)
            b = q ** (-4 - 4 * j)
            num *= 1 - a
            den *= 1 - b
            if a < mpf(10) ** (-75):
                break
            j += 1
        return +(num / den)


def theta0(q):
    """(1-q^2) sum_m 1/(w q^(2m) + q^(-2m)/w), w = 1-q^2, 0 < q < 1.

    Terms decay like q^(2|m|) in both directions, so the range is sized
    from q itself rather than fixed (q = 0.95 needs |m| ~ 1100 for 1e-45).
    """
    with mp.workdps(80):
        w = 1 - q * q
        span = int(mp.ceil(50 * mp.log(10) / (2 * abs(mp.log(q))))) + 10
        acc = mpf(0)
        for m in range(-span, span + 1):
            acc += 1 / (w * q ** (2 * m) + q ** (-2 * m) / w)
        return +(w * acc)


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    mp.dps = DIGITS + 10

    th = {str(q): mp.nstr(theta0(mpf(str(q))), DIGITS)
          for q in ("0.3", "0.5", "0.8", "0.95")}
    with open(os.path.join(here, "theta0.json"), "w") as f:
        json.dump({"definition": "bilateral lattice normalization Theta(1)",
                   "values": th}, f, indent=1)
    print("theta0.json:", th)

    cos_v = {}
    sin_v = {}
    for k in range(-VWIN - NMAX, VWIN + NMAX + 1):
        cos_v[k], sin_v[k] = trig_pair(k, Q)
    n_q = nq(Q)
    trig_tab = {"cos": {str(k): mp.nstr(cos_v[k], DIGITS)
                        for k in range(-6, 13)},
                "sin": {str(k): mp.nstr(sin_v[k], DIGITS)
                        for k in range(-6, 13)}}
    tables = {"cos": {}, "sin": {}}
    for trig, tv in (("cos", cos_v), ("sin", sin_v)):
        for n in range(-NMAX, NMAX + 1):
            for m in range(-NMAX, NMAX + 1):
                acc = mpf(0)
                for v in range(-VWIN, VWIN + 1):
                    acc += Q ** (2 * v) * tv[n + v] * tv[m + v]
                val = n_q * n_q * acc
                tables[trig]["%d,%d" % (n, m)] = mp.nstr(+val, DIGITS)
    out = {
        "q": "2",
        "nq": {"2": mp.nstr(n_q, DIGITS), "1.5": mp.nstr(nq(mpf("1.5")), DIGITS)},
        "window": VWIN,
        "trig": trig_tab,
        "orth": tables,
    }
    with open(os.path.join(here, "wz_q2.json"), "w") as f:
        json.dump(out, f, indent=1)
    print("wz_q2.json: nq =", out["nq"])
    print("diag cos:", [tables["cos"]["%d,%d" % (n, n)] for n in range(-1, 2)])


if __name__ == "__main__":
    main()
