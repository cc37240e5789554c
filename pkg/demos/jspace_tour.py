"""Homotopy classes of almost-complex structures over R x M: the class Gamma,
the secondary invariant Theta~ and the Z-action."""

from tpc_invariants import jspace, kirby
from tpc_invariants.jspace import SurfaceData
from tpc_invariants.kirby import LinkingPresentation, SpinStructureRep

# the ball: the standard structure and one step of the action
d = jspace.theta_tilde(kirby.EMPTY, SpinStructureRep(()), SurfaceData(()))
print("ball: Theta~ =", d.theta, "orbit order", d.orbit_order)
print("  act_J(-1):", jspace.act_J(d, -1).theta, " act_omega(1):", jspace.act_omega(d, 1).theta)

# S^2 x S^1 with c1 = 6 times a generator: a finite orbit of size 6
P = kirby.S2xS1
d = jspace.theta_tilde(P, SpinStructureRep((0,)), SurfaceData((3,)))
print("S2xS1, a=3: Gamma", d.gamma.coords, "c1", d.c1.coords, "Theta~", d.theta)
print("  orbit:", [jspace.act_J(d, k).theta.value for k in range(d.orbit_order)])
print("  act_J(6) returns:", jspace.act_J(d, 6) == d)

# RP^3: torsion c1 and the rational invariant
P = LinkingPresentation([[2]])
F = SurfaceData((1,))
d = jspace.theta_tilde(P, SpinStructureRep((0,)), F)
print("RP3, a=1: Gamma", d.gamma, "Theta~", d.theta, "theta", jspace.theta_rational(P, d.spin, F))
print("  coset residue 2(1+b1)-mu mod 4:", jspace.coset_residue(P, d.spin))

# moving to the other spin structure changes Gamma by a Bockstein
e = jspace.vary_spin(d, SpinStructureRep((1,)), SurfaceData((1,)))
print("  other spin structure: Gamma", e.gamma.coords, "Theta~", e.theta)

# when 2 Gamma = c1 has several solutions, list them
Q = LinkingPresentation([[0, 0], [0, 2]])
c1 = jspace.gamma_from_surface(Q, SurfaceData((4, 0)))
print("Z + Z/2, c1 =", c1.coords, "halves:", [g.coords for g in jspace.gamma_candidates(Q, c1)])
