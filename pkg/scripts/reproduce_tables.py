"""Recompute the published tables for the logarithmic test potential.

    python scripts/reproduce_tables.py            # double precision, ~5 s
    python scripts/reproduce_tables.py --extended # adds the 60-step tail, ~15 s
"""

import argparse

from legendre_fd import reference
from legendre_fd.cli import compare_reference
from legendre_fd.fd import solve
from legendre_fd.potential import PotentialSpec
from legendre_fd.quadrature import build_mesh


def eigenvalue_table(spec, mesh):
    print("n  lambda (ours)          published               |diff|     |lambda - SLEIGN2|")
    for n, published in reference.LAMBDA_M30.items():
        sol = solve(n, reference.BENCH_M, spec, mesh)
        cmp = compare_reference(sol)
        print(f"{n}  {sol.lambda_m:<22.16g} {published:<22.18g}  {abs(sol.lambda_m - published):.1e}"
              f"    {cmp['difference']:.10f} (printed {cmp['printed_difference']})")


def convergence_table(spec, mesh):
    offset = reference.CONVERGENCE_STEP_OFFSET
    sol = solve(0, 10 + offset, spec, mesh)
    print(f"row  step  lambda           published        |u| (L2)     published    eta          published")
    for row, lam, unorm, eta in reference.CONVERGENCE_N0:
        d = row + offset
        print(f"{row:<4} {d:<5} {sol.lambda_partial[d]:<16.10f} {lam:<16.10f} "
              f"{sol.unorm_l2[d]:<12.5e} {unorm:<12.5e} {sol.eta[d]:<12.5e} {eta:.5e}")


def tail_table(spec):
    mesh = build_mesh(reference.BENCH_K, reference.BENCH_BREAKPOINTS, precision="extended")
    sol = solve(0, 60, spec, mesh)
    print(f"extended lambda_0 = {sol.lambda_text}")
    print("step  |u| (L2)     published    eta          published")
    for d, unorm, eta in reference.CONVERGENCE_N0_TAIL:
        print(f"{d:<5} {sol.unorm_l2[d]:<12.5e} {unorm:<12.5e} {sol.eta[d]:<12.5e} {eta:.5e}")


def subdivision_table(spec):
    print("mesh      N  lambda_0 (ours)     published           |diff|")
    for label, bps in reference.SUBDIVISION_BREAKPOINTS.items():
        mesh = build_mesh(reference.BENCH_K, bps)
        lam = solve(0, reference.BENCH_M, spec, mesh, allow_interior_singularities=True).lambda_m
        published = reference.SUBDIVISION[label][0]
        print(f"{label:<9} {mesh.N}  {lam:<19.13f} {published:<19.13f} {abs(lam - published):.2e}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--extended", action="store_true", help="also run the 60-step double-double solve")
    args = parser.parse_args()

    spec = PotentialSpec.log_product(*reference.BENCH_POTENTIAL)
    mesh = build_mesh(reference.BENCH_K, reference.BENCH_BREAKPOINTS)
    eigenvalue_table(spec, mesh)
    print()
    convergence_table(spec, mesh)
    print()
    subdivision_table(spec)
    if args.extended:
        print()
        tail_table(spec)


if __name__ == "__main__":
    main()
