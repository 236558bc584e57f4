"""Independent high-precision values frozen into the C++ tests.

Run: python3 tests/oracles/derive_constants.py
Needs mpmath. Nothing here imports the C++ code.
"""

from fractions import Fraction as F

import mpmath

mpmath.mp.dps = 80


def circle_intersections(c1, r1, c2, r2):
    (x1, y1), (x2, y2) = c1, c2
    dx, dy = x2 - x1, y2 - y1
    d2 = dx * dx + dy * dy
    d = mpmath.sqrt(d2)
    a = (r1 * r1 - r2 * r2 + d2) / (2 * d)
    h = mpmath.sqrt(r1 * r1 - a * a)
    mx, my = x1 + a * dx / d, y1 + a * dy / d
    return (mx - h * dy / d, my + h * dx / d), (mx + h * dy / d, my - h * dx / d)


def d_point_single():
    # one integer, so the scaled alpha is the whole budget 1/10
    step = (F(4), F(3))
    a1 = (F(5, 2), F(0))
    a2 = (a1[0] + 3 * step[0], a1[1] + 3 * step[1])
    c1 = (a1[0] + F(4, 5) * step[0], a1[1] + F(4, 5) * step[1])
    mp = lambda p: (mpmath.mpf(p[0].numerator) / p[0].denominator, mpmath.mpf(p[1].numerator) / p[1].denominator)
    r1 = mpmath.mpf(9) + mpmath.mpf(1) / 10
    r2 = mpmath.mpf(2)
    both = circle_intersections(mp(c1), r1, mp(a2), r2)
    # keep the one left of the a1 -> a2 direction (4, 3)
    return max(both, key=lambda p: 4 * p[1] - 3 * (p[0] - mpmath.mpf(5) / 2))


if __name__ == "__main__":
    x, y = d_point_single()
    print("d1 for alphas (1):")
    print("  x =", mpmath.nstr(x, 63))
    print("  y =", mpmath.nstr(y, 63))
