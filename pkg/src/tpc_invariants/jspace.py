"""Homotopy classes of almost-complex structures on ``R × M``.

A class is recorded by its ``Γ`` class in ``H²(M) = coker L`` together with
the secondary invariant ``Θ̃``, which lives in ``Z/4·div c₁``.  Surfaces are
given by their class ``a`` in ``H₂(Y, ∂Y)`` (coordinates dual to the
2-handles) and a framing offset per component, with the surgery framing as
zero reference.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from . import kirby, lattice
from .errors import (
    ClassMismatch,
    CongruenceViolation,
    DegenerateMatrix,
    InfiniteOrder,
    NoSolution,
    SpinMismatch,
)
from .kirby import LinkingPresentation, SpinStructureRep
from .lattice import GroupElement
from .residue import Residue


@dataclass(frozen=True)
class SurfaceData:
    a: tuple[int, ...]
    twists: tuple[int, ...] = None  # type: ignore[assignment]

    def __post_init__(self):
        a = lattice.as_vector(self.a)
        t = (0,) * len(a) if self.twists is None else lattice.as_vector(self.twists)
        if len(t) != len(a):
            raise ValueError("a and twists must have the same length")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "twists", t)

    @classmethod
    def empty(cls, n: int) -> SurfaceData:
        return cls((0,) * n)


@dataclass(frozen=True)
class JClassDescriptor:
    presentation: LinkingPresentation = field(repr=False)
    gamma: GroupElement
    c1: GroupElement
    spin: SpinStructureRep
    theta: Residue
    orbit_order: int

    @property
    def theta_phi(self) -> Residue:
        """The spin-independent variant, ``Θ̃`` reduced mod ``2·div c₁``."""
        return self.theta.reduce(2 * self.orbit_order)


def _check_length(P: LinkingPresentation, F: SurfaceData) -> None:
    if len(F.a) != P.n:
        raise ValueError(f"surface has {len(F.a)} coordinates, presentation has {P.n}")


def gamma_from_surface(P: LinkingPresentation, F: SurfaceData) -> GroupElement:
    _check_length(P, F)
    return lattice.cokernel(P.L).project(F.a)


def euler_rel(P: LinkingPresentation, F: SurfaceData) -> int:
    """Relative normal Euler number ``aᵀLa − Σ tᵢaᵢ²``."""
    _check_length(P, F)
    return lattice.quad(P.L, F.a) - sum(t * x * x for t, x in zip(F.twists, F.a))


def coset_residue(P: LinkingPresentation, s: SpinStructureRep) -> int:
    """``2(1 + b₁(M)) − μ(M, s) mod 4``, the coset every ``Θ̃`` must lie in."""
    b1 = kirby.invariants(P).b1_M
    return (2 * (1 + b1) - kirby.rohlin(P, s)) % 4


def _check_coset(P, s, theta: Residue) -> None:
    want = coset_residue(P, s)
    if not theta.congruent(want, 4):
        raise CongruenceViolation(
            f"theta {theta} is not {want} mod 4 as required by 2(1+b1) - mu")


def theta_tilde(P: LinkingPresentation, s: SpinStructureRep, F: SurfaceData) -> JClassDescriptor:
    """Descriptor of the class bounded by the spin handlebody ``Y``.

    ``Y`` must be spin (even ``L``) and ``s`` its restriction, the empty
    sublink; other spin structures are reached with :func:`vary_spin`.
    """
    kirby.check_spin(P, s)
    if not P.is_even:
        raise SpinMismatch("handlebody is not spin: linking matrix has odd framings")
    if any(s.c):
        raise SpinMismatch(f"spin structure {s} is not the restriction of the handlebody's")
    inv = kirby.invariants(P)
    gamma = gamma_from_surface(P, F)
    c1 = 2 * gamma
    m = lattice.divisibility(c1)
    theta = Residue(4 * euler_rel(P, F) - 2 * inv.chi_Y - 3 * inv.sigma_Y, 4 * m)
    _check_coset(P, s, theta)
    return JClassDescriptor(P, gamma, c1, s, theta, m)


def act_J(d: JClassDescriptor, k: int) -> JClassDescriptor:
    """``k`` times the generator acting on the structure: ``Θ̃`` drops by ``4k``."""
    return replace(d, theta=d.theta - 4 * k)


def act_omega(d: JClassDescriptor, k: int) -> JClassDescriptor:
    """``k`` times the generator acting on the framing class: ``Θ̃`` rises by ``4k``."""
    return replace(d, theta=d.theta + 4 * k)


def omega_orbit_order(P: LinkingPresentation, F: SurfaceData) -> int:
    return 2 * lattice.divisibility(gamma_from_surface(P, F))


def gamma_candidates(P: LinkingPresentation, c1: GroupElement) -> list[GroupElement]:
    """All ``x`` with ``2x = c1``, sorted by coordinates."""
    x = lattice.factor_witness(2, c1)
    if x is None:
        raise NoSolution(f"{c1} is not twice any class")
    return sorted((x + t for t in c1.group.two_torsion()), key=lambda g: g.coords)


def bockstein(P: LinkingPresentation, d: Sequence[int]) -> GroupElement:
    """Image in ``H²(M)`` of a class ``d`` in ``H¹(M; Z/2) = ker(L mod 2)``."""
    Ld = lattice.matvec(P.L, [x % 2 for x in d])
    if any(x % 2 for x in Ld):
        raise ClassMismatch(f"{tuple(d)} is not in the mod-2 kernel of L")
    out = lattice.cokernel(P.L).project([x // 2 for x in Ld])
    assert (2 * out).is_zero()
    return out


def vary_spin(d: JClassDescriptor, s_new: SpinStructureRep,
              correction_surface: SurfaceData) -> JClassDescriptor:
    """Move a descriptor to another spin structure.

    ``correction_surface`` is the caller's choice of ``F̂``; its class must
    reduce mod 2 to the difference of the two sublinks.
    """
    P = d.presentation
    kirby.check_spin(P, s_new)
    _check_length(P, correction_surface)
    diff = tuple((x - y) % 2 for x, y in zip(s_new.c, d.spin.c))
    if tuple(x % 2 for x in correction_surface.a) != diff:
        raise ClassMismatch(
            f"correction surface {correction_surface.a} is not {diff} mod 2")
    gamma = d.gamma + bockstein(P, diff)
    theta = d.theta + euler_rel(P, correction_surface)
    _check_coset(P, s_new, theta)
    return replace(d, gamma=gamma, spin=s_new, theta=theta)


def theta_rational(P: LinkingPresentation, s: SpinStructureRep, F: SurfaceData) -> Fraction:
    """The rational invariant ``θ = c₁² − 2χ(Y) − 3σ(Y)`` for torsion ``c₁``.

    ``c₁² = 4aᵀL⁻¹a`` does not see the framing offsets.  With the linking
    form sign of :class:`lattice.LinkingForm`, ``θ ≡ Θ̃ − 4λ(Γ, Γ) mod 4``.
    """
    d = theta_tilde(P, s, F)
    if d.orbit_order:
        raise InfiniteOrder("theta is only defined when c1 has finite order")
    if lattice.determinant(P.L) == 0:
        raise DegenerateMatrix("theta needs a nondegenerate linking matrix")
    inv = kirby.invariants(P)
    Linv = lattice.rational_inverse(P.L)
    a = F.a
    aLa = sum(a[i] * Linv[i][j] * a[j] for i in range(len(a)) for j in range(len(a)))
    theta = 4 * aLa - 2 * inv.chi_Y - 3 * inv.sigma_Y
    lam = lattice.linking_form(P.L).square(d.gamma)
    assert (theta - (d.theta.value - 4 * lam)) % 4 == 0
    return theta
