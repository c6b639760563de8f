"""Finite-lattice eigenvalue error against N, next to the predicted |xi0|^(2N) decay."""

import math

from bilaplacian.eigen import solve_eigenvalue
from bilaplacian.lattice import secular_eigenvalue
from bilaplacian.spectral import residue_data


def main(mu: float = 1.0):
    ref = solve_eigenvalue(mu, 1e-15)
    xi = abs(residue_data(ref.e).xi0) if ref.e < 0 else float("nan")
    print("N,e_N,abs_error,xi0_power_2N")
    for N in (2, 4, 6, 8, 12, 16, 24, 32, 125, 250, 500, 1000, 2000):
        eN = secular_eigenvalue(N, mu, 1e-15)
        print(f"{N},{eN:.17g},{abs(eN - ref.e):.3e},{xi ** (2 * N):.3e}")
    print(f"# errors below ~1e-15 are rounding; log|xi0| = {math.log(xi):.6f}")


if __name__ == "__main__":
    main()
