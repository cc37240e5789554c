"""Lens spaces through even continued fractions."""

from tpc_invariants import lattice, lens

for p, q in [(2, 1), (4, 1), (8, 1), (8, 3), (10, 3), (16, 5), (9, 2)]:
    if p % 2:
        print(f"L({p},{q}): p odd, exception {lens.lens_exception(p, q)}")
        continue
    cf = lens.even_cf(p, q)
    P = lens.chain_matrix(cf)
    a, b = lens.rohlin_pair(p, q)
    print(f"L({p},{q}): -{p}/{q} = {list(cf.coeffs)}  det {lattice.determinant(P.L)}  "
          f"H1 {lattice.cokernel(P.L).group}  mu pair ({a}, {b})  odd sum {cf.odd_sum}  "
          f"exception {lens.lens_exception(p, q)}")
