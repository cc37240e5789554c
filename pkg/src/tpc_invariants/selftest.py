"""Reference values recomputed from scratch."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from . import jspace, kirby, lens
from .jspace import SurfaceData
from .kirby import SpinStructureRep


@dataclass(frozen=True)
class Check:
    name: str
    expected: Any
    actual: Any

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


def _standard():
    return jspace.theta_tilde(kirby.EMPTY, SpinStructureRep(()), SurfaceData(()))


CHECKS: list[tuple[str, Any, Callable[[], Any]]] = [
    ("theta of the standard structure on the boundary of C^2", -2,
     lambda: _standard().theta.value),
    ("theta after the negative generator (ball removed from a closed surface)", 2,
     lambda: jspace.act_J(_standard(), -1).theta.value),
    ("mu of the Poincare sphere from the E8 plumbing", 8,
     lambda: kirby.rohlin(kirby.E8)),
    ("mu of both spin structures on S^2 x S^1", [0, 0],
     lambda: [kirby.rohlin(kirby.S2xS1, s) for s in kirby.spin_structures(kirby.S2xS1)]),
    ("Kirby-Siebenmann delta of a shift by 8", 1,
     lambda: kirby.ks_delta(8, 0)),
    ("L(8,1) is the lens exception", True,
     lambda: lens.lens_exception(8, 1)),
    ("L(p,1) Rohlin pair differs by p mod 16, p = 2..30", True,
     lambda: all((lambda a, b: (a - b - p) % 16 == 0 or (b - a - p) % 16 == 0)(*lens.rohlin_pair(p, 1))
                 for p in range(2, 31, 2))),
]


def run() -> list[Check]:
    return [Check(name, expected, fn()) for name, expected, fn in CHECKS]
