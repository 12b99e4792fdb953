"""Independent reference computations used to pin expected test values.

Everything here is computed without the library under test: integer 2x2
matrix arithmetic for homology actions, the Gauss-Bonnet area formula, and
Fibonacci numbers for the torus twist orbit.
"""


def area_formula(genus: int, boundary: int, cusps: int) -> float:
    """Gauss-Bonnet: area of a complete finite-type hyperbolic surface."""
    import math

    return 2.0 * math.pi * (2 * genus - 2 + boundary + cusps)


def mat_mul(m1, m2):
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def mat_pow(m, n):
    out = ((1, 0), (0, 1))
    for _ in range(n):
        out = mat_mul(out, m)
    return out


def fibonacci(k: int) -> int:
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a


# Homology actions of the two generating twists on the once-punctured torus,
# in the (a-coefficient, b-coefficient) basis; columns are generator images.
TWIST_A_H1 = ((1, 1), (0, 1))
TWIST_B_H1 = ((1, 0), (-1, 1))
