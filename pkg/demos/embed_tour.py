"""Where can a class of almost-complex structures live inside a closed
complex surface?  Necessary conditions, a sufficient bound and a checked
quadratic-form plan."""

from tpc_invariants import embed, jspace
from tpc_invariants.jspace import SurfaceData
from tpc_invariants.kirby import LinkingPresentation, SpinStructureRep

P = LinkingPresentation([[0, 0], [0, 2]])  # H1 = Z + Z/2
s = SpinStructureRep((0, 0))

for a in [(2, 0), (2, 1)]:
    F = SurfaceData(a)
    d = jspace.theta_tilde(P, s, F)
    nM = embed.n_M(P, F)
    print(f"surface {a}: Gamma {d.gamma.coords}, c1 {d.c1.coords}, n_M {nM}")
    for X in [embed.TargetSurface(40, 40, 4, True, c1_squared=0),
              embed.TargetSurface(10, 10, 4, True, c1_squared=0),
              embed.TargetSurface(40, 40, 3, False, c1_squared=9 * 0)]:
        r = embed.embedding_feasible(d, X, nM)
        print(f"  X(b+={X.b_plus}, b-={X.b_minus}, div={X.div_c1}): {r.verdict}, spin {r.spin_realizable}")
        for c in r.reasons:
            if not c.passed:
                print(f"      failed {c.name}: need {c.required}, have {c.actual}")
    print("  factor of Gamma by spin structure (m = 4):",
          [(r.spin.c, r.gamma.coords, r.passes) for r in embed.factor_spin_selection(d, 4)])

F = SurfaceData((2, 0))
d = jspace.theta_tilde(P, s, F)
X = embed.TargetSurface(40, 40, 4, True, c1_squared=0)
cert = embed.construct_plan(P, s, F, d, X)
ok, report = embed.check_certificate(cert)
print(f"plan: {cert.tuning_blocks} tuning blocks, {cert.projective_blocks} projective blocks, verified {ok}")
for c in report:
    print(f"  {c.name}: {c.actual} ({'ok' if c.passed else 'FAILED'})")

try:
    embed.construct_plan(P, s, SurfaceData((2, 1)), jspace.theta_tilde(P, s, SurfaceData((2, 1))), X)
except Exception as e:
    print("Gamma = (2,1):", type(e).__name__, e)
