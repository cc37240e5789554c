"""Invariants of a 2-handlebody ``Y`` (no 1-handles) and its boundary ``M``.

The handlebody is given by the linking matrix ``L`` of a framed link.  The
Arf invariant of a characteristic sublink is not determined by ``L``; it is
read from ``arf_overrides`` and defaults to 0.  For even ``L`` and the empty
sublink this never matters, but for odd presentations the caller must
supply the right values or ``rohlin`` may be off by 8.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from . import lattice
from .errors import InvalidSpin, NotMod8
from .lattice import FinAbGroup, Matrix


@dataclass(frozen=True)
class LinkingPresentation:
    L: Matrix
    component_names: tuple[str, ...] | None = None
    arf_overrides: Mapping[tuple[int, ...], int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "L", lattice.symmetric(self.L))
        if self.component_names is not None:
            names = tuple(self.component_names)
            if len(names) != self.n:
                raise ValueError("component_names length does not match L")
            object.__setattr__(self, "component_names", names)
        arf = {}
        for k, v in dict(self.arf_overrides).items():
            key = tuple(int(x) % 2 for x in k)
            if len(key) != self.n or v not in (0, 1):
                raise ValueError(f"bad arf override {k!r}: {v!r}")
            arf[key] = int(v)
        object.__setattr__(self, "arf_overrides", arf)

    def __hash__(self):
        return hash((self.L, self.component_names, tuple(sorted(self.arf_overrides.items()))))

    @property
    def n(self) -> int:
        return len(self.L)

    @property
    def is_even(self) -> bool:
        return lattice.is_even(self.L)

    def validate_arf(self) -> None:
        for key in self.arf_overrides:
            if not is_spin_vector(self.L, key):
                raise InvalidSpin(f"arf override key {key} is not a characteristic sublink")

    def block_sum(self, other: LinkingPresentation) -> LinkingPresentation:
        return LinkingPresentation(lattice.block_diag(self.L, other.L))


@dataclass(frozen=True)
class SpinStructureRep:
    """Characteristic sublink indicator, entries in {0, 1}."""

    c: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(int(x) % 2 for x in self.c))

    def __str__(self) -> str:
        return "".join(map(str, self.c)) or "()"


@dataclass(frozen=True)
class ManifoldInvariants:
    chi_Y: int
    sigma_Y: int
    b_plus: int
    b_minus: int
    nullity: int
    H1_M: FinAbGroup
    b1_M: int
    spin_count: int


def invariants(P: LinkingPresentation) -> ManifoldInvariants:
    i = lattice.inertia(P.L)
    H1 = lattice.cokernel(P.L).group
    assert H1.free_rank == i.nullity
    return ManifoldInvariants(
        chi_Y=1 + P.n,
        sigma_Y=i.signature,
        b_plus=i.b_plus,
        b_minus=i.b_minus,
        nullity=i.nullity,
        H1_M=H1,
        b1_M=i.nullity,
        spin_count=2 ** (P.n - gf2_rank(P.L)),
    )


# ---------------------------------------------------------------------------
# GF(2) linear algebra


def _gf2_reduce(rows: list[list[int]], ncols: int):
    """Row reduce in place; return pivot columns."""
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                rows[i] = [x ^ y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    return pivots


def gf2_rank(a: Sequence[Sequence[int]]) -> int:
    rows = [[x % 2 for x in row] for row in a]
    return len(_gf2_reduce(rows, len(rows[0]) if rows else 0))


def gf2_solve(a: Sequence[Sequence[int]], b: Sequence[int]) -> tuple[tuple[int, ...], list[tuple[int, ...]]] | None:
    """A particular solution of ``a·x = b`` over GF(2) and a kernel basis."""
    n = len(a[0]) if a else 0
    rows = [[x % 2 for x in row] + [y % 2] for row, y in zip(a, b)]
    pivots = _gf2_reduce(rows, n)
    if any(row[n] and not any(row[:n]) for row in rows):
        return None
    x = [0] * n
    for r, col in enumerate(pivots):
        x[col] = rows[r][n]
    basis = []
    for free in (j for j in range(n) if j not in pivots):
        v = [0] * n
        v[free] = 1
        for r, col in enumerate(pivots):
            v[col] = rows[r][free]
        basis.append(tuple(v))
    return tuple(x), basis


def mod2_kernel(a: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    sol = gf2_solve(a, [0] * len(a))
    assert sol is not None
    return sol[1]


# ---------------------------------------------------------------------------
# spin structures and Rohlin


def is_spin_vector(L: Matrix, c: Sequence[int]) -> bool:
    if len(c) != len(L):
        return False
    Lc = lattice.matvec(L, c)
    return all((Lc[i] - L[i][i]) % 2 == 0 for i in range(len(L)))


def spin_structures(P: LinkingPresentation) -> list[SpinStructureRep]:
    """All characteristic sublinks, sorted lexicographically."""
    n = P.n
    sol = gf2_solve(P.L, [P.L[i][i] for i in range(n)])
    # a symmetric matrix always has its diagonal in its mod-2 column space
    assert sol is not None
    x0, basis = sol
    out = set()
    for mask in range(2 ** len(basis)):
        v = list(x0)
        for j, b in enumerate(basis):
            if mask >> j & 1:
                v = [p ^ q for p, q in zip(v, b)]
        out.add(tuple(v))
    return [SpinStructureRep(v) for v in sorted(out)]


def check_spin(P: LinkingPresentation, s: SpinStructureRep) -> None:
    if not is_spin_vector(P.L, s.c):
        raise InvalidSpin(f"sublink {s} is not characteristic for this presentation")


def arf(P: LinkingPresentation, s: SpinStructureRep) -> int:
    return P.arf_overrides.get(s.c, 0)


def rohlin(P: LinkingPresentation, s: SpinStructureRep | None = None) -> int:
    """``μ(M, s) = σ(L) − cᵀLc + 8·Arf(c) mod 16``, in ``[0, 16)``."""
    if s is None:
        s = SpinStructureRep((0,) * P.n)
    check_spin(P, s)
    return (lattice.signature(P.L) - lattice.quad(P.L, s.c) + 8 * arf(P, s)) % 16


def ks_delta(mu_a: int, mu_b: int) -> int:
    """Kirby–Siebenmann difference ``(μa − μb)/8 mod 2``."""
    d = mu_a - mu_b
    if d % 8:
        raise NotMod8(f"Rohlin values {mu_a} and {mu_b} differ by {d}, not a multiple of 8")
    return (d // 8) % 2


# ---------------------------------------------------------------------------
# standard presentations

EMPTY = LinkingPresentation(())
S2xS1 = LinkingPresentation(((0,),))
E8 = LinkingPresentation(lattice.E8_NEGATIVE)  # boundary is the Poincaré sphere
HYPERBOLIC = LinkingPresentation(lattice.HYPERBOLIC)
