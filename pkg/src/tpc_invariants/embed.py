"""Feasibility arithmetic for TPC embeddings and immersions, and a planner
that produces a checkable quadratic-form certificate for the embedding
construction.

Construction outline (all lattices unimodular except the base):

* ``Y1`` is the base presentation, with one split hyperbolic block
  reserved away from the surface (appended if none is present).
* The tuning class ``T = k_f·(1, k)`` in the reserved block shifts the
  Euler number by ``T²``; ``N`` extra hyperbolic blocks each lower ``Θ̃``
  by 4.  Together they move ``Θ̃`` of ``Y'' = Y1 ⊕ N·H`` onto the target.
* ``Z = D(Y1) ⊕ N·H ⊕ p<+1> ⊕ q<-1>`` where ``D(Y1)`` has form
  ``[[L1, I], [I, 0]]``.  The class ``c`` is twice the sum of the doubled
  surface, ``T`` and a class ``S`` in the mirror of the reserved block,
  plus ``μ`` on each projective block.  ``S`` fixes the square.

Here ``k_f`` is ``m/2`` for spin ``X`` and ``m`` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Any, Sequence

from . import jspace, kirby, lattice
from .errors import InfeasibleInput, InvariantError, NotSpin
from .jspace import JClassDescriptor, SurfaceData
from .kirby import LinkingPresentation, SpinStructureRep
from .lattice import EVEN, ODD, FinAbGroup, FormDescriptor, GroupElement
from .residue import Residue

FEASIBLE, INFEASIBLE, NOT_COVERED = "feasible", "infeasible", "not-covered"
ALL, SOME, BLOCKED = "all", "some", "blocked-by-caveat"


@dataclass(frozen=True)
class TargetSurface:
    """A closed complex surface ``X`` as far as the embedding criteria see it.

    ``c1_squared`` is only needed by the construction planner.
    """

    b_plus: int
    b_minus: int
    div_c1: int
    spin: bool
    pairing_values: tuple[int, ...] | None = None
    c1_squared: int | None = None
    simply_connected: bool = True

    def __post_init__(self):
        if self.b_plus < 1 or self.b_minus < 1:
            raise ValueError("b_plus and b_minus must be positive")
        if self.div_c1 < 0:
            raise ValueError("div_c1 must be non-negative")
        if self.spin and self.div_c1 % 2:
            raise ValueError("a spin surface has even div c1")
        if self.simply_connected and not self.spin and self.div_c1 % 2 == 0:
            raise ValueError("a simply connected surface with even div c1 is spin")
        if self.pairing_values is not None:
            object.__setattr__(self, "pairing_values", tuple(int(v) for v in self.pairing_values))

    @property
    def signature(self) -> int:
        return self.b_plus - self.b_minus

    @property
    def form(self) -> FormDescriptor:
        return FormDescriptor(self.b_plus, self.b_minus, EVEN if self.spin else ODD)


@dataclass(frozen=True)
class Condition:
    name: str
    required: Any
    actual: Any
    passed: bool


@dataclass(frozen=True)
class FeasibilityReport:
    verdict: str
    reasons: tuple[Condition, ...]
    spin_realizable: str = ALL
    witness_m: int | None = None
    witness_beta: GroupElement | None = None

    def __post_init__(self):
        if self.verdict == FEASIBLE:
            assert all(r.passed for r in self.reasons)


# ---------------------------------------------------------------------------
# n_M


def find_hyperbolic_block(L: lattice.Matrix, a: Sequence[int] | None = None) -> tuple[int, int] | None:
    """First pair ``(i, j)`` spanning a split summand ``[[0, ±1], [±1, 0]]``
    on which ``a`` (if given) vanishes."""
    n = len(L)
    for i in range(n):
        for j in range(i + 1, n):
            if L[i][i] or L[j][j] or abs(L[i][j]) != 1:
                continue
            if any(L[i][k] or L[j][k] for k in range(n) if k not in (i, j)):
                continue
            if a is not None and (a[i] or a[j]):
                continue
            return i, j
    return None


def n_M(P: LinkingPresentation, F: SurfaceData | None = None) -> int:
    """``b₂(Y) + 7`` after making sure ``Y`` has a free hyperbolic summand."""
    if not P.is_even:
        raise NotSpin("n_M needs an even presentation")
    a = None if F is None else F.a
    b2 = P.n if find_hyperbolic_block(P.L, a) is not None else P.n + 2
    return b2 + 7


# ---------------------------------------------------------------------------
# decisions


def spin_caveat(H1: FinAbGroup, m: int) -> str:
    """``blocked`` iff ``H1`` has 2-torsion and ``4 | m``, else ``all``."""
    return "blocked" if H1.has_two_torsion() and m % 4 == 0 else "all"


@dataclass(frozen=True)
class SpinSelection:
    spin: SpinStructureRep | None
    gamma: GroupElement
    k: int
    passes: bool
    witness: GroupElement | None


def gammas_by_spin(d: JClassDescriptor) -> list[tuple[SpinStructureRep, GroupElement]]:
    """``Γ(J, s')`` for every spin structure ``s'``, via the Bockstein of ``s' − s``."""
    P = d.presentation
    out = []
    for s in kirby.spin_structures(P):
        diff = [(x - y) % 2 for x, y in zip(s.c, d.spin.c)]
        out.append((s, d.gamma + jspace.bockstein(P, diff)))
    return out


def factor_spin_selection(d: JClassDescriptor, m: int, all_gammas=None) -> list[SpinSelection]:
    """For each candidate ``Γ``, whether ``m`` (odd) or ``m/2`` (even) is a factor.

    ``all_gammas`` is a list of ``(spin, gamma)`` pairs or bare gammas; it
    defaults to :func:`gammas_by_spin`.
    """
    if all_gammas is None:
        all_gammas = gammas_by_spin(d)
    k = m if m % 2 else m // 2
    out = []
    for item in all_gammas:
        s, g = item if isinstance(item, tuple) else (None, item)
        w = lattice.factor_witness(k, g)
        out.append(SpinSelection(s, g, k, w is not None, w))
    if m and lattice.is_factor(m, d.c1) and out:
        assert any(r.passes for r in out)
        if spin_caveat(d.c1.group, m) == "all":
            assert all(r.passes for r in out)
    return out


def immersion_feasible(d: JClassDescriptor, X: TargetSurface) -> FeasibilityReport:
    if X.pairing_values is not None:
        values = sorted(set(abs(v) for v in X.pairing_values))
    elif X.simply_connected:
        values = sorted({X.div_c1, 0})
    else:
        return FeasibilityReport(NOT_COVERED, (Condition("pairing values known", True, False, False),))
    reasons = []
    for v in values:
        w = lattice.factor_witness(v, d.c1)
        reasons.append(Condition(f"{v} is a factor of c1", True, w is not None, w is not None))
        if w is not None:
            return FeasibilityReport(FEASIBLE, (reasons[-1],),
                                     _spin_realizable(d, X, v), v, w)
    verdict = INFEASIBLE if X.simply_connected else NOT_COVERED
    return FeasibilityReport(verdict, tuple(reasons), _spin_realizable(d, X, values[0] if values else 0))


def _spin_realizable(d: JClassDescriptor, X: TargetSurface, m: int) -> str:
    if not X.spin or spin_caveat(d.c1.group, m) == "all":
        return ALL
    sel = factor_spin_selection(d, m)
    return SOME if any(r.passes for r in sel) else BLOCKED


def embedding_bound(X: TargetSurface, nM: int) -> int:
    m = X.div_c1
    return nM + (m * m + 1) // 2 if X.spin else nM + 2 * m * m


def embedding_feasible(d: JClassDescriptor, X: TargetSurface, nM: int) -> FeasibilityReport:
    if not X.simply_connected:
        return FeasibilityReport(NOT_COVERED, (Condition("simply connected", True, False, False),))
    m = X.div_c1
    if m == 0:
        return FeasibilityReport(NOT_COVERED, (Condition("div c1(X) > 0", True, 0, False),))
    w = lattice.factor_witness(m, d.c1)
    bound = embedding_bound(X, nM)
    reasons = (
        Condition(f"{m} is a factor of c1", True, w is not None, w is not None),
        Condition("b_plus bound" + (" (spin)" if X.spin else ""), bound, X.b_plus, X.b_plus >= bound),
        Condition("b_minus bound" + (" (spin)" if X.spin else ""), bound, X.b_minus, X.b_minus >= bound),
    )
    verdict = FEASIBLE if all(r.passed for r in reasons) else INFEASIBLE
    return FeasibilityReport(verdict, reasons, _spin_realizable(d, X, m), m, w)


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Block:
    """A summand of ``Z``: ``double`` (of the base), ``H`` or ``I`` (``<±1>``)."""

    kind: str
    role: str = ""
    sign: int = 1

    def matrix(self, base: lattice.Matrix) -> lattice.Matrix:
        if self.kind == "double":
            n = len(base)
            return lattice.as_matrix(
                [list(base[i]) + [int(i == j) for j in range(n)] for i in range(n)]
                + [[int(i == j) for j in range(n)] + [0] * n for i in range(n)])
        if self.kind == "H":
            return lattice.HYPERBOLIC
        if self.kind == "I":
            return ((self.sign,),)
        raise ValueError(f"unknown block kind {self.kind!r}")


@dataclass(frozen=True)
class ConstructionCertificate:
    base: LinkingPresentation
    summands: tuple[Block, ...]
    c: tuple[int, ...]
    claimed: dict
    perp: FormDescriptor | None
    surface: SurfaceData
    theta_target: Residue
    target: TargetSurface | None = None
    reserved: tuple[int, int] | None = None
    params: dict = field(default_factory=dict)

    @property
    def tuning_blocks(self) -> int:
        return sum(1 for b in self.summands if b.kind == "H" and b.role == "tuning")

    @property
    def projective_blocks(self) -> int:
        return sum(1 for b in self.summands if b.kind == "I")

    def z_matrix(self) -> lattice.Matrix:
        return lattice.block_diag(*(b.matrix(self.base.L) for b in self.summands))

    def y_presentation(self) -> LinkingPresentation:
        """``Y'' = base ⊕ (tuning blocks)·H``, the handlebody carrying ``surface``."""
        return LinkingPresentation(lattice.block_diag(
            self.base.L, *([lattice.HYPERBOLIC] * self.tuning_blocks)))


def _recompute(cert: ConstructionCertificate) -> dict:
    blocks = [b.matrix(cert.base.L) for b in cert.summands]
    Z = lattice.block_diag(*blocks)
    if len(cert.c) != len(Z):
        return {"rank": len(Z)}
    det = 1
    sig = 0
    for b in blocks:
        det *= lattice.determinant(b)
        sig += lattice.signature(b)
    Y = cert.y_presentation()
    d = jspace.theta_tilde(Y, SpinStructureRep((0,) * Y.n), cert.surface)
    div_c = 0
    for x in cert.c:
        div_c = gcd(div_c, x)
    out = {
        "unimodular": abs(det) == 1,
        "c_square": lattice.quad(Z, cert.c),
        "div_c": div_c,
        "characteristic": lattice.is_characteristic(cert.c, Z),
        "sigma_Z_mod16": sig % 16,
        "theta": d.theta,
        "tuning_blocks": cert.tuning_blocks,
        "projective_blocks": cert.projective_blocks,
    }
    if cert.target is not None:
        bp = (len(Z) + sig) // 2
        zform = FormDescriptor(bp, len(Z) - bp, EVEN if lattice.is_even(Z) else ODD)
        try:
            out["perp"] = lattice.perp_complement(cert.target.form, zform)
        except InvariantError as e:
            out["perp"] = type(e).__name__
    return out


def check_certificate(cert: ConstructionCertificate) -> tuple[bool, list[Condition]]:
    """Recompute every claim from the base and the summand list."""
    try:
        got = _recompute(cert)
    except InvariantError as e:
        return False, [Condition("recompute", "ok", type(e).__name__, False)]
    if "rank" in got:
        return False, [Condition("length of c", got["rank"], len(cert.c), False)]
    report = [Condition("unimodular", True, got["unimodular"], got["unimodular"])]
    for name, want in cert.claimed.items():
        have = got.get(name)
        report.append(Condition(name, want, have, have == want))
    report.append(Condition("theta matches target", cert.theta_target, got["theta"],
                            got["theta"] == cert.theta_target))
    X = cert.target
    if X is not None:
        m = X.div_c1
        unit = m * m // 2 if X.spin else 2 * m * m
        report += [
            Condition("c_square is c1^2(X)", X.c1_squared, got["c_square"], got["c_square"] == X.c1_squared),
            Condition("div_c is div c1(X)", m, got["div_c"], got["div_c"] == m),
            Condition("sigma matches X mod 16", X.signature % 16, got["sigma_Z_mod16"],
                      got["sigma_Z_mod16"] == X.signature % 16),
            Condition("perp", cert.perp, got["perp"], got["perp"] == cert.perp),
            Condition("tuning budget", f"< {unit}", got["tuning_blocks"], got["tuning_blocks"] < unit),
            Condition("projective budget", "<= 10", got["projective_blocks"], got["projective_blocks"] <= 10),
        ]
    return all(r.passed for r in report), report


def _mu_choice(m: int) -> int:
    # m odd: m² ≡ 1 or 9 mod 16, and (3m)² = 9m² flips between the two
    return m if m * m % 16 == 1 else 3 * m


def construct_plan(P: LinkingPresentation, s: SpinStructureRep, F: SurfaceData,
                   d: JClassDescriptor, X: TargetSurface) -> ConstructionCertificate:
    """Quadratic-form plan realizing ``d`` inside ``X``; see the module docstring."""
    m = X.div_c1
    C = X.c1_squared
    if not X.simply_connected or m < 1:
        raise InfeasibleInput("needs a simply connected target with div c1 > 0")
    if C is None:
        raise InfeasibleInput("target needs c1_squared")
    try:
        d0 = jspace.theta_tilde(P, s, F)
    except InvariantError as e:
        raise InfeasibleInput(f"base data rejected: {type(e).__name__}: {e}") from e
    if d.presentation != P or d.gamma != d0.gamma or d.orbit_order != d0.orbit_order:
        raise InfeasibleInput("descriptor does not belong to this presentation and surface")
    nM = n_M(P, F)
    rep = embedding_feasible(d, X, nM)
    if rep.verdict != FEASIBLE:
        failed = ", ".join(r.name for r in rep.reasons if not r.passed)
        raise InfeasibleInput(f"embedding is {rep.verdict}: {failed}")
    sX = X.signature
    if (C - sX) % 8:
        raise InfeasibleInput("c1^2 must be congruent to the signature mod 8")
    if X.spin and (C % (2 * m * m) or sX % 16):
        raise InfeasibleInput("spin target needs 2m^2 | c1^2 and 16 | signature")
    if C % (m * m):
        raise InfeasibleInput("m^2 must divide c1^2")

    kf = m // 2 if X.spin else m
    beta = lattice.factor_witness(kf, d.gamma)
    if beta is None:
        raise InfeasibleInput(f"{kf} is not a factor of Gamma for this spin structure")
    a0 = list(F.a)
    tw = list(F.twists)
    if any(x % kf for x in a0):
        a0 = [kf * x for x in lattice.cokernel(P.L).lift(beta)]

    block = find_hyperbolic_block(P.L, F.a)
    if block is None:
        base = LinkingPresentation(lattice.block_diag(P.L, lattice.HYPERBOLIC))
        block = (P.n, P.n + 1)
        a0 += [0, 0]
        tw += [0, 0]
    else:
        base = P
    i, j = block
    sign = base.L[i][j]
    # the reserved block is split and unimodular, so clearing a there keeps the class
    a0[i] = a0[j] = 0
    tw[i] = tw[j] = 0
    n1 = base.n

    inv = kirby.invariants(base)
    theta_Y = 4 * jspace.euler_rel(base, SurfaceData(a0, tw)) - 2 * inv.chi_Y - 3 * inv.sigma_Y
    gap = d.theta.value - theta_Y
    if gap % 4:
        raise InfeasibleInput("target theta is not in the coset of this spin structure")
    G = gap // 4
    unit = m * m // 2 if X.spin else 2 * m * m
    k = -(-G // unit)
    N = unit * k - G
    assert 0 <= N < unit

    mu = None
    proj: list[Block] = []
    if X.spin:
        jj = C // (2 * m * m) - k
    else:
        mu = _mu_choice(m)
        rho = mu * mu // (m * m)
        delta = (sX + 7) % 16 - 7
        if delta > 0:
            proj = [Block("I", "projective", 1)] * delta
        elif delta < 0:
            proj = [Block("I", "projective", -1)] * -delta
        else:
            proj = [Block("I", "projective", 1), Block("I", "projective", -1)]
        num = C // (m * m) - rho * delta
        assert num % 8 == 0
        jj = num // 8 - k

    T = (kf, kf * k * sign)
    alpha = (kf, -kf * jj * sign)
    mirror_y = (-sign * alpha[1], -sign * alpha[0])

    a_surf = list(a0)
    a_surf[i], a_surf[j] = T
    surface = SurfaceData(a_surf + [0] * (2 * N), tw + [0] * (2 * N))

    x = [0] * n1
    x[i], x[j] = T[0] + alpha[0], T[1] + alpha[1]
    y = list(a0)
    y[i], y[j] = mirror_y
    c = [2 * v for v in x + y] + [0] * (2 * N) + [mu] * len(proj)

    summands = (Block("double", "base"),) + (Block("H", "tuning"),) * N + tuple(proj)
    Z_rank = 2 * n1 + 2 * N + len(proj)
    zsig = sum(b.sign for b in proj)
    zform = FormDescriptor((Z_rank + zsig) // 2, (Z_rank - zsig) // 2, EVEN if not proj else ODD)
    perp = lattice.perp_complement(X.form, zform)

    claimed = {
        "c_square": C,
        "div_c": m,
        "characteristic": True,
        "sigma_Z_mod16": sX % 16,
        "theta": d.theta,
        "tuning_blocks": N,
        "projective_blocks": len(proj),
    }
    cert = ConstructionCertificate(
        base=base, summands=summands, c=tuple(c), claimed=claimed, perp=perp,
        surface=surface, theta_target=d.theta, target=X, reserved=block,
        params={"k": k, "j": jj, "mu": mu, "k_f": kf, "n_M": nM,
                "appended_hyperbolic": base is not P},
    )
    ok, report = check_certificate(cert)
    assert ok, [r for r in report if not r.passed]
    return cert
