"""Sign-change scanning and bisection shared by the spectral modules."""
from __future__ import annotations

import math


def bracket_sign_changes(points, signs):
    """Adjacent grid pairs whose signs differ, plus points where f is exactly 0.

    Exact zeros become degenerate brackets ``(p, p)``.
    """
    brackets = []
    last_p, last_s = None, 0
    for p, s in zip(points, signs):
        if s == 0:
            brackets.append((p, p))
            last_p, last_s = None, 0
            continue
        if last_s and s != last_s:
            brackets.append((last_p, p))
        last_p, last_s = p, s
    return brackets


class SignScanner:
    """Evaluate ``f`` (returning a real ScaledValue) on nested grids with a
    missed-zero guard: the grid is halved until two consecutive levels agree
    on the number of sign changes."""

    def __init__(self, f, max_halvings=4):
        self.f = f
        self.max_halvings = max_halvings
        self.values = {}

    def value(self, p):
        v = self.values.get(p)
        if v is None:
            v = self.values[p] = self.f(p)
        return v

    def sign(self, p):
        return self.value(p).sign()

    def brackets(self, points):
        pts = list(points)
        return bracket_sign_changes(pts, [self.sign(p) for p in pts])

    def guarded(self, points):
        """Brackets on ``points`` refined by midpoint insertion until stable.

        Returns ``(brackets, final_points)``.
        """
        pts = list(points)
        coarse = self.brackets(pts)
        for _ in range(self.max_halvings):
            fine_pts = _with_midpoints(pts)
            fine = self.brackets(fine_pts)
            pts = fine_pts
            if len(fine) == len(coarse):
                return fine, pts
            coarse = fine
        return coarse, pts

    def touches(self, points, rel=1e-8):
        """Local minima of |f| without a sign change, far below their neighbours."""
        out = []
        pts = list(points)
        for a, m, b in zip(pts, pts[1:], pts[2:]):
            va, vm, vb = self.value(a), self.value(m), self.value(b)
            if va.sign() == vm.sign() == vb.sign() and vm.sign() != 0:
                ref = max(va.log10_abs(), vb.log10_abs())
                if vm.log10_abs() < ref + math.log10(rel):
                    out.append(m)
        return out

    def bisect(self, a, b, tol):
        """Shrink a sign-change bracket to width <= tol; returns (a, b)."""
        if a == b:
            return a, b
        sa = self.sign(a)
        while b - a > tol:
            m = 0.5 * (a + b)
            if m <= a or m >= b:
                break
            sm = self.sign(m)
            if sm == 0:
                return m, m
            if sm == sa:
                a = m
            else:
                b = m
        return a, b


def _with_midpoints(pts):
    out = [pts[0]]
    for a, b in zip(pts, pts[1:]):
        out.append(0.5 * (a + b))
        out.append(b)
    return out
