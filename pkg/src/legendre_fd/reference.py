"""Published reference values for the logarithmic test potential.

The experiment: ``q(x) = ln|(5/12 - x)(1/3 + x)|`` on the mesh with
breakpoints ``-1, -1/3, 0, 5/12, 1`` and ``K = 250``.
"""

from fractions import Fraction

BENCH_K = 250
BENCH_M = 30
BENCH_N = (0, 1, 2, 3, 4)
BENCH_BREAKPOINTS = (Fraction(-1), Fraction(-1, 3), Fraction(0), Fraction(5, 12), Fraction(1))
BENCH_POTENTIAL = (Fraction(5, 12), Fraction(1, 3))  # log_product(r, s)
UNIFORM_BREAKPOINTS = (Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1))

# independent shooting-code eigenvalues, as printed (9-10 digits)
SLEIGN2 = {
    0: -1.98326983,
    1: 0.855187683,
    2: 4.89606686,
    3: 10.4183770,
    4: 18.8163965,
}
SLEIGN2_TOL = {0: 0.46748e-08, 1: 0.73426e-07, 2: 0.35447e-07, 3: 0.40228e-07, 4: 0.61329e-11}

# truncated eigenvalues after 30 steps (quadruple-precision run)
LAMBDA_M30 = {
    0: -1.98314427097744064,
    1: 0.857270328373118208,
    2: 4.893950682679907660,
    3: 10.42051129625743390,
    4: 18.81639652150898795,
}
UNORM_M30 = {
    0: 1.26598694672e-15,
    1: 8.83118381572e-16,
    2: 1.22013435336e-18,
    3: 4.58227541331e-25,
    4: 5.43628701044e-32,
}
ETA_M30 = {
    0: 1.9052706379e-15,
    1: 6.92114145514e-16,
    2: 2.72086325283e-18,
    3: 2.28096722974e-25,
    4: 5.26360265358e-32,
}
# printed |lambda - SLEIGN2| column
SLEIGN2_DIFF_M30 = {0: 0.000125559, 1: 0.0020826454, 2: 0.0021161773, 3: 0.0021342963, 4: 0.0000000215}

# Convergence history for n = 0: (row, lambda, |u| column, eta column).
# Row r of this block corresponds to the state after r + 1 correction steps.
CONVERGENCE_N0 = (
    (0, -1.8538570587, 0.2270941786, 0.4851738751),
    (1, -2.0002817053, 0.0478946893, 0.0863600316),
    (2, -1.9826820263, 0.0140616365, 0.0200439342),
    (3, -1.9827492251, 0.0032752573, 0.0044828399),
    (4, -1.9832100727, 0.000281665, 0.0004743141),
    (5, -1.9831500665, 0.0001734894, 0.0002452252),
    (6, -1.9831433619, 9.61416137299e-05, 0.0001358145),
    (7, -1.9831424182, 2.99030462249e-05, 4.5191830517e-05),
    (8, -1.9831451284, 5.71179849936e-06, 9.49092804135e-06),
    (9, -1.9831441732, 3.7195952769e-07, 8.68014240854e-07),
)
CONVERGENCE_STEP_OFFSET = 1

# Tail of the same history from the extended-precision run; here the row
# label equals the number of correction steps.
CONVERGENCE_N0_TAIL = (
    (50, 3.6458910063e-24, 5.42202004605e-24),
    (51, 1.45758164365e-24, 2.17584093998e-24),
    (52, 3.59257473326e-25, 5.46661601878e-25),
    (53, 2.29601032831e-26, 5.40330904597e-26),
    (54, 4.24716018236e-26, 6.37606340182e-26),
    (55, 2.6000804557e-26, 3.86695510098e-26),
    (56, 9.47336776012e-27, 1.41695598924e-26),
    (57, 2.02349833941e-27, 3.116321958e-27),
    (58, 1.81719782215e-28, 3.7965999043e-28),
    (59, 3.43816989604e-28, 5.133026339e-28),
    (60, 1.8365375822e-28, 2.7327040704e-28),
)

# lambda_0 after 30 steps for three meshes
SUBDIVISION = {
    "none": (-1.9318815213501200317, 0.051388309),
    "uniform": (-1.9776298960768203497, 0.005639934),
    "aligned": (-1.9831442710817836887, 0.000125559),
}
SUBDIVISION_BREAKPOINTS = {
    "none": (Fraction(-1), Fraction(1)),
    "uniform": UNIFORM_BREAKPOINTS,
    "aligned": BENCH_BREAKPOINTS,
}


def sleign2_difference(n, lam):
    """``|lam - lambda_sl2|`` or ``None`` when no reference exists for ``n``."""
    ref = SLEIGN2.get(n)
    return None if ref is None else abs(lam - ref)
