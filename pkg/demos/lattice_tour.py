"""Integer lattices: Smith form, cokernels, signatures, characteristic vectors
and the classification of indefinite unimodular forms."""

from tpc_invariants import lattice
from tpc_invariants.lattice import EVEN, FormDescriptor

A = [[2, 1, 0], [1, 2, 1], [0, 1, 4]]
snf = lattice.smith_normal_form(A)
print("matrix", A)
print("Smith diagonal", snf.diagonal)
coker = lattice.cokernel(A)
print("cokernel", coker.group)
g = coker.project([1, 0, 0])
print("image of e1", g.coords, "has order", g.order())

inert = lattice.inertia(A)
print("inertia (b+, b-, null) =", (inert.b_plus, inert.b_minus, inert.nullity))

lk = lattice.linking_form(A)
print("linking square of e1:", lk.square(g))

E8 = lattice.E8_NEGATIVE
print("E8 determinant", lattice.determinant(E8), "signature", lattice.signature(E8))
c = [0] * 8
print("zero is characteristic on E8:", lattice.is_characteristic(c, E8))

# an odd unimodular form and one characteristic vector on it
B = [[1, 0], [0, -1]]
c = [1, 1]
print("c^2 - sigma on <1> + <-1>:", lattice.char_square_defect(c, B))

for desc in [FormDescriptor(3, 19, EVEN), FormDescriptor(2, 3, "odd"), FormDescriptor.of(lattice.HYPERBOLIC)]:
    print(desc, "=>", lattice.describe_summands(lattice.classify_indefinite(desc)))

print("complement of -E8 inside 2(-E8) + 3H: ", end="")
try:
    lattice.perp_complement(FormDescriptor(3, 19, EVEN), FormDescriptor(0, 8, EVEN))
except Exception as e:
    print(type(e).__name__, e)
print("complement of 2(-E8):", lattice.perp_complement(FormDescriptor(3, 19, EVEN), FormDescriptor(0, 16, EVEN)))
