"""Quantitative radii: properness bound, openness radius, boundary minimum."""

import cmath
import math

import numpy as np
from scipy import optimize

from .errors import DegreeZero, NonzeroConstantTerm, ZeroPolynomial
from .polycore import eval_poly


def reich_radius(p):
    """Radius R >= 1 with |p(z)| >= |a_n| |z|^n / 2 for all |z| >= R.

    Uses R = max(1, 2 sum(|a_i|, i < n) / |a_n|): for |z| >= R the lower
    terms sum to at most half the leading term.
    """
    n = p.degree
    if n == 0:
        raise DegreeZero("properness bound needs degree >= 1")
    lead = abs(p.coeffs[-1])
    lower = sum(abs(c) for c in p.coeffs[:-1])
    return max(1.0, 2.0 * lower / lead)


def openness_radius(p):
    """A radius r > 0 with |a_n| r^n + sum(|a_i| r^i, j < i < n) < |a_j| r^j.

    j is the lowest index with a_j != 0; requires p(0) = 0.  Found by
    halving from r = 1 (the inequality persists for smaller r).  The
    monomial case j = n returns 1: every r works there.
    """
    if all(c == 0 for c in p.coeffs):
        raise ZeroPolynomial("openness radius of the zero polynomial")
    if p.coeffs[0] != 0:
        raise NonzeroConstantTerm("openness radius requires p(0) = 0")
    n = p.degree
    j = next(i for i, c in enumerate(p.coeffs) if c != 0)
    if j == n:
        return 1.0
    aj = abs(p.coeffs[j])
    r = 1.0
    while True:
        lhs = abs(p.coeffs[n]) * r**n
        lhs += sum(abs(p.coeffs[i]) * r**i for i in range(j + 1, n))
        # keep a 1% margin so the strict inequality is unambiguous
        if 1.01 * lhs < aj * r**j:
            return r
        r *= 0.5
        if r < 1e-300:  # unreachable for a_j != 0
            raise ZeroPolynomial("radius underflow")


def boundary_min(p, r, samples=None):
    """Approximate min of |p| on the circle |z| = r; returns (d, d/2).

    Dense angular sampling (4096 * max(1, n) points by default) refined
    by golden-section search around the sample minimum.  Approximate,
    not certified.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    n = max(1, p.degree)
    m = int(samples) if samples else 4096 * n
    theta = np.linspace(0.0, 2.0 * math.pi, m, endpoint=False)
    desc = np.array(p.coeffs[::-1], dtype=complex)
    vals = np.abs(np.polyval(desc, r * np.exp(1j * theta)))
    i = int(np.argmin(vals))
    d = float(vals[i])

    step = 2.0 * math.pi / m
    fa = float(vals[(i - 1) % m])
    fc = float(vals[(i + 1) % m])
    if d < fa and d < fc:
        f = lambda t: abs(eval_poly(p, r * cmath.exp(1j * t)))
        try:
            _, fval, _ = optimize.golden(
                f, brack=(theta[i] - step, theta[i], theta[i] + step),
                full_output=True)
            d = min(d, float(fval))
        except ValueError:
            pass  # flat-to-rounding bracket: the sample min is exact enough
    return d, d / 2.0
