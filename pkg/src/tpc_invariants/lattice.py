"""Exact integer lattice arithmetic.

Everything here works with plain Python integers (arbitrary precision) and
:class:`fractions.Fraction`; no floating point ever enters an invariant.
Matrices are tuples of row tuples.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Iterator, Sequence

from .errors import (
    DefiniteForm,
    DegenerateMatrix,
    NotCharacteristic,
    NotUnimodular,
    ParityViolation,
    RankObstruction,
    SignatureObstruction,
)

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


# ---------------------------------------------------------------------------
# basic matrix helpers


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    """Convert to an immutable integer matrix, rejecting non-integral entries."""
    m = tuple(tuple(operator.index(x) for x in row) for row in rows)
    if m and len({len(r) for r in m}) != 1:
        raise ValueError("ragged matrix")
    return m


def as_vector(v: Iterable[int]) -> Vector:
    return tuple(operator.index(x) for x in v)


def symmetric(rows: Iterable[Iterable[int]]) -> Matrix:
    """Validate and return a symmetric integer matrix (``IntSymMatrix``)."""
    m = as_matrix(rows)
    n = len(m)
    for i, row in enumerate(m):
        if len(row) != n:
            raise ValueError("matrix is not square")
        for j in range(i):
            if row[j] != m[j][i]:
                raise ValueError(f"matrix is not symmetric at ({i}, {j})")
    return m


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> Matrix:
    return tuple((0,) * cols for _ in range(rows))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = list(zip(*b)) if b else []
    if not a:
        return ()
    if not bt:
        return tuple(() for _ in a)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(u, v))


def quad(a: Sequence[Sequence[int]], v: Sequence[int]) -> int:
    """The square ``vᵀ A v``."""
    return dot(v, matvec(a, v))


def block_diag(*blocks: Sequence[Sequence[int]]) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[k + i][k + j] = x
        k += len(b)
    return as_matrix(out)


def is_even(a: Matrix) -> bool:
    return all(a[i][i] % 2 == 0 for i in range(len(a)))


def determinant(a: Matrix) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rational_inverse(a: Matrix) -> tuple[tuple[Fraction, ...], ...]:
    """Exact inverse over the rationals; raises DegenerateMatrix if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise DegenerateMatrix("matrix is singular over Q")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(tuple(row[n:]) for row in m)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U · A · V = D`` with ``U``, ``V`` unimodular and ``D`` diagonal.

    ``U_inv`` is carried along so that cokernel elements can be lifted back
    to integer vectors without a second inversion.
    """

    U: Matrix
    V: Matrix
    D: Matrix
    U_inv: Matrix

    @property
    def diagonal(self) -> Vector:
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.V))))


def smith_normal_form(a: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivot rule: the nonzero entry of least absolute value in the remaining
    block, first in row-major order.  Diagonal entries are non-negative and
    each divides the next (trailing zeros last).
    """
    a = as_matrix(a)
    m = len(a)
    n = len(a[0]) if m else 0
    D = [list(r) for r in a]
    U = [list(r) for r in identity(m)]
    Ui = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def add_row(i, j, c):  # row_i += c * row_j
        D[i] = [x + c * y for x, y in zip(D[i], D[j])]
        U[i] = [x + c * y for x, y in zip(U[i], U[j])]
        for r in Ui:
            r[j] -= c * r[i]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def negate_row(i):
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]
        for r in Ui:
            r[i] = -r[i]

    def add_col(i, j, c):  # col_i += c * col_j
        for r in D:
            r[i] += c * r[j]
        for r in V:
            r[i] += c * r[j]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = D[i][j]
                    if x and (best is None or abs(x) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            if best[0] != t:
                swap_rows(t, best[0])
            if best[1] != t:
                swap_cols(t, best[1])
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                q = D[i][t] // p
                if q:
                    add_row(i, t, -q)
                if D[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = D[t][j] // p
                if q:
                    add_col(j, t, -q)
                if D[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            negate_row(t)
    return SmithDecomposition(as_matrix(U), as_matrix(V), as_matrix(D), as_matrix(Ui))


# ---------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class FinAbGroup:
    """``Z^free_rank ⊕ Z/t1 ⊕ ... ⊕ Z/tk`` with ``t1 | t2 | ... ``, all ``ti >= 2``."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for i, t in enumerate(self.torsion):
            if t < 2:
                raise ValueError("torsion coefficients must be >= 2")
            if i and t % self.torsion[i - 1]:
                raise ValueError("torsion coefficients must form a divisibility chain")

    @property
    def rank(self) -> int:
        """Number of normal-form coordinates."""
        return self.free_rank + len(self.torsion)

    @property
    def order(self) -> int:
        """Group order, 0 when infinite."""
        if self.free_rank:
            return 0
        out = 1
        for t in self.torsion:
            out *= t
        return out

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0

    @property
    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.rank)

    def element(self, coords: Iterable[int]) -> GroupElement:
        return GroupElement(self, tuple(coords))

    def torsion_elements(self) -> Iterator[GroupElement]:
        """All elements with vanishing free part, in lexicographic order."""
        def rec(i, acc):
            if i == len(self.torsion):
                yield self.element((0,) * self.free_rank + tuple(acc))
                return
            for x in range(self.torsion[i]):
                yield from rec(i + 1, acc + [x])
        yield from rec(0, [])

    def two_torsion(self) -> list[GroupElement]:
        """Elements of order at most 2."""
        out = [()]
        for t in self.torsion:
            opts = (0, t // 2) if t % 2 == 0 else (0,)
            out = [o + (x,) for o in out for x in opts]
        return [self.element((0,) * self.free_rank + o) for o in out]

    def has_two_torsion(self) -> bool:
        return any(t % 2 == 0 for t in self.torsion)

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GroupElement:
    """An element in normal-form coordinates: free part first, then one
    coordinate per torsion factor reduced into ``[0, t)``."""

    group: FinAbGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        g = self.group
        c = tuple(operator.index(x) for x in self.coords)
        if len(c) != g.rank:
            raise ValueError(f"expected {g.rank} coordinates, got {len(c)}")
        c = c[:g.free_rank] + tuple(x % t for x, t in zip(c[g.free_rank:], g.torsion))
        object.__setattr__(self, "coords", c)

    @property
    def free_part(self) -> tuple[int, ...]:
        return self.coords[:self.group.free_rank]

    @property
    def torsion_part(self) -> tuple[int, ...]:
        return self.coords[self.group.free_rank:]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: GroupElement) -> None:
        if other.group != self.group:
            raise ValueError("elements of different groups")

    def __add__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return GroupElement(self.group, tuple(x + y for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return GroupElement(self.group, tuple(x - y for x, y in zip(self.coords, other.coords)))

    def __neg__(self) -> GroupElement:
        return GroupElement(self.group, tuple(-x for x in self.coords))

    def __rmul__(self, k: int) -> GroupElement:
        k = operator.index(k)
        return GroupElement(self.group, tuple(k * x for x in self.coords))

    __mul__ = __rmul__

    def order(self) -> int:
        """Order of the element, 0 when infinite."""
        if any(self.free_part):
            return 0
        out = 1
        for x, t in zip(self.torsion_part, self.group.torsion):
            o = t // gcd(x, t)
            out = out * o // gcd(out, o)
        return out

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.coords)) + ")"


class Cokernel:
    """``coker(A) = Z^m / A·Z^n`` with a projection to normal-form coordinates."""

    def __init__(self, a: Sequence[Sequence[int]]):
        self.matrix = as_matrix(a)
        self.snf = smith_normal_form(self.matrix)
        m = len(self.matrix)
        diag = list(self.snf.diagonal) + [0] * (m - len(self.snf.diagonal))
        self._free_idx = [i for i, d in enumerate(diag) if d == 0]
        self._tors_idx = [i for i, d in enumerate(diag) if d > 1]
        self.group = FinAbGroup(len(self._free_idx), tuple(diag[i] for i in self._tors_idx))
        self.ambient_rank = m

    def project(self, x: Sequence[int]) -> GroupElement:
        """Image in the cokernel of an integer vector."""
        if len(x) != self.ambient_rank:
            raise ValueError(f"expected a vector of length {self.ambient_rank}")
        y = matvec(self.snf.U, as_vector(x))
        return GroupElement(self.group, tuple(y[i] for i in self._free_idx + self._tors_idx))

    __call__ = project

    def lift(self, g: GroupElement) -> Vector:
        """An integer vector projecting to ``g``."""
        if g.group != self.group:
            raise ValueError("element of a different group")
        y = [0] * self.ambient_rank
        for i, c in zip(self._free_idx + self._tors_idx, g.coords):
            y[i] = c
        return matvec(self.snf.U_inv, y)


def cokernel(a: Sequence[Sequence[int]]) -> Cokernel:
    return Cokernel(a)


# ---------------------------------------------------------------------------
# divisibility and factors


def divisibility(g: GroupElement) -> int:
    """Divisibility modulo torsion; 0 for elements of finite order."""
    out = 0
    for x in g.free_part:
        out = gcd(out, x)
    return out


def factor_witness(k: int, c: GroupElement) -> GroupElement | None:
    """Some ``β`` with ``k·β = c``, or ``None`` if there is none."""
    g = c.group
    out = []
    for x in c.free_part:
        if k == 0:
            if x:
                return None
            out.append(0)
        elif x % k:
            return None
        else:
            out.append(x // k)
    for x, t in zip(c.torsion_part, g.torsion):
        d = gcd(k, t)
        if x % d:
            return None
        tt = t // d
        out.append((x // d) * pow(k // d, -1, tt) % tt if tt > 1 else 0)
    beta = g.element(out)
    assert k * beta == c
    return beta


def is_factor(k: int, c: GroupElement) -> bool:
    """Whether ``k·β = c`` is solvable."""
    return factor_witness(k, c) is not None


# ---------------------------------------------------------------------------
# signatures


@dataclass(frozen=True)
class Inertia:
    b_plus: int
    b_minus: int
    nullity: int

    @property
    def signature(self) -> int:
        return self.b_plus - self.b_minus

    @property
    def rank(self) -> int:
        return self.b_plus + self.b_minus + self.nullity


def inertia(a: Sequence[Sequence[int]]) -> Inertia:
    """Sylvester inertia by exact symmetric reduction over Q."""
    a = symmetric(a)
    s = [[Fraction(x) for x in row] for row in a]
    active = list(range(len(a)))
    pos = neg = 0
    while active:
        piv = next((i for i in active if s[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if s[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # congruence e_i -> e_i + e_j makes the diagonal 2 s_ij
            for k in range(len(s)):
                s[i][k] += s[j][k]
            for k in range(len(s)):
                s[k][i] += s[k][j]
            piv = i
        p = s[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for j in active:
            f = s[j][piv] / p
            if f:
                for k in active:
                    s[j][k] -= f * s[piv][k]
    return Inertia(pos, neg, len(a) - pos - neg)


def signature(a: Sequence[Sequence[int]]) -> int:
    return inertia(a).signature


# ---------------------------------------------------------------------------
# characteristic vectors


def is_characteristic(c: Sequence[int], a: Sequence[Sequence[int]]) -> bool:
    """``cᵀAx ≡ xᵀAx (mod 2)`` for all x; checked on the standard basis."""
    a = symmetric(a)
    if len(c) != len(a):
        raise ValueError("vector length does not match matrix rank")
    ac = matvec(a, c)
    return all((ac[i] - a[i][i]) % 2 == 0 for i in range(len(a)))


def char_square_defect(c: Sequence[int], a: Sequence[Sequence[int]]) -> int:
    """``cᵀAc − σ(A)`` for a characteristic ``c`` on a unimodular form.

    The result is always divisible by 8.  Unimodularity is required: on
    ``[[2]]`` the characteristic vector 0 has defect −1.
    """
    a = symmetric(a)
    if abs(determinant(a)) != 1:
        raise NotUnimodular("the characteristic square law needs a unimodular form")
    if not is_characteristic(c, a):
        raise NotCharacteristic(f"{tuple(c)} is not characteristic")
    out = quad(a, c) - signature(a)
    assert out % 8 == 0, out
    return out


# ---------------------------------------------------------------------------
# unimodular forms


EVEN, ODD = "even", "odd"


@dataclass(frozen=True)
class FormDescriptor:
    """Rank/signature/parity data of a unimodular form.

    Construction only checks non-negativity; the realizability condition
    (even forms need σ ≡ 0 mod 8) is enforced by the operations that use it.
    """

    b_plus: int
    b_minus: int
    parity: str

    def __post_init__(self):
        if self.b_plus < 0 or self.b_minus < 0:
            raise ValueError("b_plus and b_minus must be non-negative")
        if self.parity not in (EVEN, ODD):
            raise ValueError("parity must be 'even' or 'odd'")

    @property
    def signature(self) -> int:
        return self.b_plus - self.b_minus

    @property
    def rank(self) -> int:
        return self.b_plus + self.b_minus

    @property
    def is_indefinite(self) -> bool:
        return self.b_plus > 0 and self.b_minus > 0

    @property
    def realizable(self) -> bool:
        if self.parity == ODD:
            return self.rank > 0
        return self.signature % 8 == 0

    @classmethod
    def of(cls, a: Sequence[Sequence[int]]) -> FormDescriptor:
        a = symmetric(a)
        if abs(determinant(a)) != 1:
            raise NotUnimodular("form is not unimodular")
        i = inertia(a)
        return cls(i.b_plus, i.b_minus, EVEN if is_even(a) else ODD)


@dataclass(frozen=True)
class Summand:
    """One block of a canonical decomposition: ``H``, ``E8`` or ``<±1>``."""

    kind: str
    sign: int = 1

    @property
    def matrix(self) -> Matrix:
        if self.kind == "H":
            return HYPERBOLIC
        if self.kind == "E8":
            return E8_POSITIVE if self.sign > 0 else E8_NEGATIVE
        if self.kind == "I":
            return ((self.sign,),)
        raise ValueError(self.kind)

    def __str__(self) -> str:
        if self.kind == "H":
            return "H"
        if self.kind == "E8":
            return "E8" if self.sign > 0 else "-E8"
        return "<+1>" if self.sign > 0 else "<-1>"


def summands_matrix(summands: Iterable[Summand]) -> Matrix:
    return block_diag(*(s.matrix for s in summands))


def summands_descriptor(summands: Sequence[Summand]) -> FormDescriptor:
    bp = bm = 0
    odd = False
    for s in summands:
        if s.kind == "H":
            bp += 1
            bm += 1
        elif s.kind == "E8":
            if s.sign > 0:
                bp += 8
            else:
                bm += 8
        else:
            odd = True
            if s.sign > 0:
                bp += 1
            else:
                bm += 1
    return FormDescriptor(bp, bm, ODD if odd else EVEN)


def describe_summands(summands: Sequence[Summand]) -> str:
    counts: dict[str, int] = {}
    for s in summands:
        counts[str(s)] = counts.get(str(s), 0) + 1
    if not counts:
        return "0"
    return " + ".join(k if c == 1 else f"{c}({k})" if k.startswith("-") else f"{c}{k}"
                      for k, c in counts.items())


def even_form_summands(f: FormDescriptor) -> list[Summand]:
    """``min(b±)·H ⊕ (|σ|/8)·(±E8)``, the canonical even form with these numbers."""
    if f.parity != EVEN:
        raise ParityViolation("descriptor is not even")
    if f.signature % 8:
        raise ParityViolation(f"even form with signature {f.signature} not divisible by 8")
    sign = 1 if f.signature >= 0 else -1
    return [Summand("E8", sign)] * (abs(f.signature) // 8) + [Summand("H")] * min(f.b_plus, f.b_minus)


def classify_indefinite(f: FormDescriptor) -> list[Summand]:
    """Canonical representative of an indefinite unimodular form."""
    if not f.is_indefinite:
        raise DefiniteForm(f"({f.b_plus}, {f.b_minus}) is not indefinite")
    if f.parity == ODD:
        return [Summand("I", 1)] * f.b_plus + [Summand("I", -1)] * f.b_minus
    out = even_form_summands(f)
    assert summands_descriptor(out) == f
    return out


def perp_complement(target: FormDescriptor, sub: FormDescriptor) -> FormDescriptor:
    """The even complement ``Q⊥`` with ``target ≅ sub ⊕ Q⊥``.

    Parities must agree; the complement's signature must be divisible by 16
    so that it is realized with vanishing Kirby–Siebenmann invariant.
    """
    if sub.b_plus > target.b_plus or sub.b_minus > target.b_minus:
        raise RankObstruction(
            f"({sub.b_plus}, {sub.b_minus}) does not fit in ({target.b_plus}, {target.b_minus})")
    if sub.parity != target.parity:
        raise ParityViolation("target and subform must have the same parity")
    s = target.signature - sub.signature
    if s % 16:
        raise SignatureObstruction(f"complement signature {s} is not divisible by 16")
    return FormDescriptor(target.b_plus - sub.b_plus, target.b_minus - sub.b_minus, EVEN)


# ---------------------------------------------------------------------------
# linking form


class LinkingForm:
    """Torsion linking form ``λ(x, y) = −x̃ᵀ A⁻¹ ỹ mod 1`` on ``coker(A)``."""

    def __init__(self, a: Sequence[Sequence[int]]):
        self.matrix = symmetric(a)
        if determinant(self.matrix) == 0:
            raise DegenerateMatrix("linking form needs det(A) != 0")
        self.cokernel = Cokernel(self.matrix)
        self.group = self.cokernel.group
        self._inv = rational_inverse(self.matrix)

    def pair_vectors(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        v = sum(xi * sum(r * yj for r, yj in zip(row, y)) for xi, row in zip(x, self._inv))
        return (-v) % 1

    def __call__(self, x: GroupElement, y: GroupElement) -> Fraction:
        return self.pair_vectors(self.cokernel.lift(x), self.cokernel.lift(y))

    def square(self, x: GroupElement) -> Fraction:
        return self(x, x)

    def gram(self) -> tuple[tuple[Fraction, ...], ...]:
        """Values on the torsion generators."""
        g = self.group
        gens = [g.element([int(i == j) for j in range(g.rank)]) for i in range(g.rank)]
        return tuple(tuple(self(x, y) for y in gens) for x in gens)


def linking_form(a: Sequence[Sequence[int]]) -> LinkingForm:
    return LinkingForm(a)


# ---------------------------------------------------------------------------
# constants

HYPERBOLIC: Matrix = ((0, 1), (1, 0))


def _e8(sign: int) -> Matrix:
    # Dynkin diagram: chain 0-1-2-3-4-5-6 with node 7 attached to node 4
    edges = [(i, i + 1) for i in range(6)] + [(4, 7)]
    m = [[0] * 8 for _ in range(8)]
    for i in range(8):
        m[i][i] = 2 * sign
    for i, j in edges:
        m[i][j] = m[j][i] = -sign
    return as_matrix(m)


E8_POSITIVE: Matrix = _e8(1)
E8_NEGATIVE: Matrix = _e8(-1)
