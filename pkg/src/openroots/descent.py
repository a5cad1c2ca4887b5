"""Strict-decrease descent steps and the root solver built on them.

The core move: recenter f at v, take the lowest nonvanishing Taylor
coefficient b_s (s >= 1), and step by p = beta * exp(i psi) with the
phase chosen so b_s p^s points from f(v) straight at the target t.
With beta small enough the residual |t - f(v + p)| strictly drops.
Iterating (with a halving line search and a Newton shortcut when
s = 1) drives the residual to tolerance; deflation then yields all
roots, and root counting over perturbed targets checks that preimage
cardinalities are locally constant.
"""

import cmath
from dataclasses import dataclass

from .errors import (
    AtTarget,
    ConvergenceFailure,
    DegenerateConstant,
    DegreeZero,
)
from .polycore import Poly, eval_poly, eval_with_derivative, synthetic_div, taylor_shift


@dataclass(frozen=True)
class DescentStepReport:
    """One accepted descent step.

    s is the lowest index >= 1 with b_s != 0 after recentering; psi the
    step phase; before/after the residuals |t - f(v)| and |t - f(v+p)|.
    Guarantees after < before and s*psi + arg(b_s) = arg(t - f(v))
    modulo 2 pi.
    """

    s: int
    beta: float
    psi: float
    before: float
    after: float
    step: complex


def descent_step(p, v, t, radius_cap=None):
    """Compute one strictly decreasing step for |t - f(.)| from v.

    beta is 0.9 times the smallest of three bounds: the largest power
    of 1/2 with sum(|b_k| beta^(k-s), k > s) < |b_s|; the phase-aligned
    cap (|q| / |b_s|)^(1/s); and radius_cap - |v| when a cap is given.
    The decrease is re-verified numerically; if a b_s sits so close to
    the noise floor that its step cannot move the residual in floating
    point (a near-critical v), the next admissible index is used.

    Raises AtTarget if f(v) is already within the coefficient noise
    floor of t, DegenerateConstant if no b_s exists.
    """
    if p.degree < 1:
        raise DegreeZero("descent needs degree >= 1")
    v = complex(v)
    t = complex(t)
    b = taylor_shift(p, v).coeffs
    drop = 1e-13 * (1.0 + max(abs(c) for c in b))
    q = t - b[0]
    before = abs(q)
    if before <= drop:
        raise AtTarget(f"|t - f(v)| = {before:.3e} at the noise floor")
    candidates = [k for k in range(1, len(b)) if abs(b[k]) > drop]
    if not candidates:
        raise DegenerateConstant("all recentered coefficients b_k, k >= 1, vanish")

    cap = None
    if radius_cap is not None:
        cap = radius_cap - abs(v)
        if cap <= 0:
            raise ValueError("v lies outside the radius cap")

    phi = cmath.phase(q)
    for s in candidates:
        theta = cmath.phase(b[s])
        psi = (phi - theta) / s

        beta_ii = 1.0
        while sum(abs(b[k]) * beta_ii ** (k - s)
                  for k in range(s + 1, len(b))) >= abs(b[s]):
            beta_ii *= 0.5
        beta_iii = (before / abs(b[s])) ** (1.0 / s)
        beta = 0.9 * min(beta_ii, beta_iii)
        if cap is not None:
            beta = min(beta, 0.9 * cap)

        step = beta * cmath.exp(1j * psi)
        after = abs(t - eval_poly(p, v + step))
        if after < before:
            return DescentStepReport(s=s, beta=beta, psi=psi, before=before,
                                     after=after, step=step)
    raise ConvergenceFailure(
        f"no numerically decreasing step at v = {v} (residual {before:.3e})")


def solve_root(p, v0, t=0j, tol=1e-9, max_iter=10_000):
    """Iterate descent steps until |f(z) - t| <= tol; returns z.

    Each iteration line-searches beta over
    {beta*, beta*/2, ..., beta*/2^8} and, when s = 1, also tries the
    Newton point v + (t - f(v))/f'(v), keeping whichever candidate
    decreases the residual most.  The descent step alone guarantees
    monotone decrease; Newton accelerates the tail.
    """
    if p.degree < 1:
        raise DegreeZero("solve_root needs degree >= 1")
    v = complex(v0)
    t = complex(t)
    res = abs(eval_poly(p, v) - t)
    for _ in range(max_iter):
        if res <= tol:
            return v
        try:
            rep = descent_step(p, v, t)
        except AtTarget:
            res = abs(eval_poly(p, v) - t)
            if res <= tol:
                return v
            raise ConvergenceFailure(
                f"residual {res:.3e} stuck at the noise floor above tol {tol:.3e}")
        best_v = v + rep.step
        best_res = rep.after
        beta = rep.beta
        phase = cmath.exp(1j * rep.psi)
        for _ in range(8):
            beta *= 0.5
            cand = v + beta * phase
            r = abs(eval_poly(p, cand) - t)
            if r < best_res:
                best_v, best_res = cand, r
        if rep.s == 1:
            fv, dfv = eval_with_derivative(p, v)
            cand = v + (t - fv) / dfv
            r = abs(eval_poly(p, cand) - t)
            if r < best_res:
                best_v, best_res = cand, r
        v, res = best_v, best_res
    raise ConvergenceFailure(
        f"no root after {max_iter} iterations; residual {res:.3e}")


def all_roots(p, tol=1e-9, max_iter=10_000):
    """All n roots of p (with multiplicity) via solve + deflation.

    Every deflated root is re-polished against the original p before
    being reported, so residuals are |p(z)| <= tol, not residuals of
    the deflated factor.
    """
    if p.degree < 1:
        raise DegreeZero("all_roots needs degree >= 1")
    roots = []
    work = p
    while work.degree >= 1:
        if work.degree == 1:
            raw = -work.coeffs[0] / work.coeffs[1]
        else:
            raw = solve_root(work, 0j, 0j, tol, max_iter)
        polished = solve_root(p, raw, 0j, tol, max_iter)
        roots.append(polished)
        work, _ = synthetic_div(work, polished)
    return roots


def preimage_count(p, w, tol=1e-9, cluster_tol=1e-6):
    """Count preimages of w: returns (distinct, total).

    total is always degree(p) (roots of p - w with multiplicity);
    distinct collapses roots closer than cluster_tol into clusters.
    """
    if p.degree < 1:
        raise DegreeZero("preimage_count needs degree >= 1")
    shifted = Poly((p.coeffs[0] - complex(w),) + p.coeffs[1:])
    roots = all_roots(shifted, tol)
    reps = []
    for z in roots:
        if all(abs(z - r) > cluster_tol for r in reps):
            reps.append(z)
    return len(reps), len(roots)
