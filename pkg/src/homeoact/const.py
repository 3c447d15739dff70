from __future__ import annotations

from fractions import Fraction

ENV_PREFIX   = "HOMEOACT_"

# Recovery of the lamination: bump radii 2^-k for k = FIRST_RADIUS_EXPONENT, ...
FIRST_RADIUS_EXPONENT = 2
BUMPS_PER_RADIUS      = 2
# Exact recovery keeps halving the radius until endpoints settle, down to 2^-LAST_RADIUS_EXPONENT.
LAST_RADIUS_EXPONENT  = 64

# Displacement test: the gap midpoint first, then these relative positions s in (0, 1).
SIGN_PROBE_MIDPOINT = Fraction(1, 2)
SIGN_PROBE_RETRIES  = (
    Fraction(1, 3), Fraction(2, 5), Fraction(3, 7), Fraction(5, 11),
    Fraction(7, 13), Fraction(10, 17), Fraction(13, 19), Fraction(17, 23),
)
SIGN_PROBE_RADIUS = Fraction(1, 4)

# Line recovery shrinks the fixed neighbourhood through these radii by default.
LINE_SHRINK_SCHEDULE = tuple(Fraction(1, 2 ** k) for k in range(4, 37, 4))
LINE_WINDOW_MARGIN   = Fraction(1)
LINE_BISECTION_EXPONENT = 40

# Family used to verify conjugacy witnesses.
STANDARD_ROTATIONS   = (Fraction(1, 3), Fraction(1, 2))
STANDARD_BUMP_RADIUS = Fraction(1, 8)
STANDARD_FAMILY_NAME = "R_1/3, R_1/2, two bumps of radius 1/8 at 0, one composite"
