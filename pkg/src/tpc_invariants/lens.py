"""Lens spaces ``L(p, q)`` for even ``p``: even continued fractions and
the Rohlin invariants of their two spin structures."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd

from . import kirby, lattice
from .errors import NotCoprime, OddP
from .kirby import LinkingPresentation, SpinStructureRep


@dataclass(frozen=True)
class LensSpace:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0:
            raise ValueError("p must be non-negative")
        if gcd(self.p, self.q) != 1:
            raise NotCoprime(f"gcd({self.p}, {self.q}) != 1")
        if self.p > 0:
            object.__setattr__(self, "q", self.q % self.p)


@dataclass(frozen=True)
class EvenCF:
    coeffs: tuple[int, ...]

    def value(self) -> Fraction:
        """``a₁ − 1/(a₂ − 1/(… − 1/aₙ))``."""
        if not self.coeffs:
            raise ValueError("empty expansion has no value")
        x = Fraction(self.coeffs[-1])
        for a in reversed(self.coeffs[:-1]):
            x = a - 1 / x
        return x

    @property
    def odd_sum(self) -> int:
        """``a₁ + a₃ + …`` (1-based odd indices)."""
        return sum(self.coeffs[::2])


def _nearest_even(x: Fraction) -> int:
    # ties sit at odd integers and go down
    k = floor(x / 2)
    lo, hi = 2 * k, 2 * k + 2
    return lo if x - lo <= hi - x else hi


def _validate(p: int, q: int) -> int:
    if p <= 0 or p % 2:
        raise OddP(f"p = {p} must be even and positive")
    if gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) != 1")
    return q % p


def even_cf(p: int, q: int) -> EvenCF:
    """Expansion of ``−p/q`` by rounding to the nearest even integer."""
    q = _validate(p, q)
    target = Fraction(-p, q)
    x = target
    coeffs = []
    while True:
        a = _nearest_even(x)
        coeffs.append(a)
        if x == a:
            break
        x = 1 / (a - x)
        assert len(coeffs) <= 2 * p + 2
    cf = EvenCF(tuple(coeffs))
    assert cf.value() == target
    assert len(coeffs) % 2 == 1 and all(a % 2 == 0 and abs(a) >= 2 for a in coeffs), coeffs
    return cf


def chain_matrix(cf: EvenCF) -> LinkingPresentation:
    """Linear plumbing: diagonal ``aᵢ``, ones next to the diagonal."""
    n = len(cf.coeffs)
    return LinkingPresentation(tuple(
        tuple(cf.coeffs[i] if i == j else int(abs(i - j) == 1) for j in range(n))
        for i in range(n)))


def rohlin_pair(p: int, q: int) -> tuple[int, int]:
    """Rohlin invariants of the two spin structures, sorted.

    One is ``σ`` of the even chain; the other comes from the sublink of
    odd-indexed components and differs from it by ``Σ a_odd`` up to sign.
    """
    cf = even_cf(p, q)
    P = chain_matrix(cf)
    n = len(cf.coeffs)
    mu1 = kirby.rohlin(P, SpinStructureRep((0,) * n))
    mu2 = kirby.rohlin(P, SpinStructureRep(tuple(int(i % 2 == 0) for i in range(n))))
    assert (mu1 - mu2 - cf.odd_sum) % 16 == 0
    return tuple(sorted((mu1, mu2)))  # type: ignore[return-value]


def lens_exception(p: int, q: int) -> bool:
    if gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) != 1")
    if p == 0 or p % 2:
        return False
    return even_cf(abs(p), q).odd_sum % 16 == 8
