from __future__ import annotations

import operator
from dataclasses import dataclass


@dataclass(frozen=True)
class Residue:
    """An integer modulo ``mod``; ``mod == 0`` means a plain integer."""

    value: int
    mod: int = 0

    def __post_init__(self):
        mod = abs(operator.index(self.mod))
        v = operator.index(self.value)
        object.__setattr__(self, "mod", mod)
        object.__setattr__(self, "value", v % mod if mod else v)

    def __add__(self, k: int) -> Residue:
        return Residue(self.value + k, self.mod)

    def __sub__(self, k: int) -> Residue:
        return Residue(self.value - k, self.mod)

    def reduce(self, mod: int) -> Residue:
        """Push down to a quotient ``Z/mod``; ``mod`` must divide the current modulus."""
        if self.mod % mod if mod else self.mod:
            raise ValueError(f"Z/{self.mod} does not map to Z/{mod}")
        return Residue(self.value, mod)

    def congruent(self, other: int, mod: int) -> bool:
        """Whether the residue is ``other`` modulo ``mod`` (which must divide ``self.mod``)."""
        return (self.reduce(mod).value - other) % mod == 0 if mod else self.value == other

    def __str__(self) -> str:
        return f"{self.value} (mod {self.mod})" if self.mod else str(self.value)
