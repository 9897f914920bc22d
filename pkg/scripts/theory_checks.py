"""Print the numerical checks of the convergence theory."""

import argparse

from legendre_fd.fd import solve
from legendre_fd.potential import GAMMA, PotentialSpec
from legendre_fd.quadrature import build_mesh
from legendre_fd.theory import (
    generating_function_check,
    generating_function_tail,
    kernel_bound_check,
    stirling_coefficient_check,
    v_closed_form,
    v_sequence,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=100_000, help="kernel sample pairs per n")
    parser.add_argument("--nmax", type=int, default=20)
    args = parser.parse_args()

    v = v_sequence(30)
    worst = max(abs(v_closed_form(j) - v[j - 1]) / v[j - 1] for j in range(1, 32))
    print(f"V_0..V_6 = {[int(x) for x in v[:7]]}")
    print(f"closed form vs recurrence, j <= 31: max relative gap {worst:.2e}")

    for z in (0.1, -0.15, 0.9 * GAMMA):
        for jmax in (40, 80):
            d = generating_function_check(z, jmax)
            print(f"generating function z={z:+.4f} jmax={jmax}: {d:.2e} (allowed {generating_function_tail(z, jmax):.2e})")

    print(f"double-factorial coefficient bound, j = 2..50: max ratio {stirling_coefficient_check(50):.4f}")

    ratios = [kernel_bound_check(n, args.samples) for n in range(args.nmax + 1)]
    print(f"kernel inequality, n = 0..{args.nmax}: max ratio {max(ratios):.4f}")

    spec = PotentialSpec.polynomial([0, 0, 0.001])
    mesh = build_mesh(250)
    print("\nq = 0.001 x^2: actual lambda error vs a-priori bound")
    for n in (2, 4):
        ref = solve(n, 60, spec, mesh).lambda_m
        for m in (1, 2, 3):
            sol = solve(n, m, spec, mesh)
            print(f"  n={n} m={m}: error {abs(sol.lambda_m - ref):.2e}  bound {sol.bound.lambda_bound():.2e}")


if __name__ == "__main__":
    main()
