"""3-manifolds from linking matrices: homology, spin structures, Rohlin
invariants and the Kirby-Siebenmann delta."""

from tpc_invariants import kirby
from tpc_invariants.kirby import LinkingPresentation

examples = {
    "empty (S^3)": kirby.EMPTY,
    "0-framed unknot (S^2 x S^1)": kirby.S2xS1,
    "-E8 plumbing (Poincare sphere)": kirby.E8,
    "+2 unknot (RP^3)": LinkingPresentation([[2]]),
    "Hopf link, framings 0 and 2": LinkingPresentation([[0, 1], [1, 2]]),
}

for name, P in examples.items():
    inv = kirby.invariants(P)
    print(f"{name}: chi(Y)={inv.chi_Y} sigma(Y)={inv.sigma_Y} H1(M)={inv.H1_M} b1={inv.b1_M}")
    for s in kirby.spin_structures(P):
        print(f"    sublink {s.c}: mu = {kirby.rohlin(P, s)} mod 16")

# two smoothings whose Rohlin invariants differ by 8 sit in different classes
print("ks_delta(8, 0) =", kirby.ks_delta(8, 0))
print("ks_delta(3, 3) =", kirby.ks_delta(3, 3))

# a knot whose Arf invariant is not visible in the matrix can be declared
trefoil = LinkingPresentation([[1]], component_names=["trefoil"], arf_overrides={(1,): 1})
print("+1 trefoil surgery, mu =", kirby.rohlin(trefoil, kirby.spin_structures(trefoil)[0]))
