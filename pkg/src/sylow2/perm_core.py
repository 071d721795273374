"""Permutations of {1, ..., n}: composition, parity, cycle structure, and the
2-adic valuation of factorials.

Points are 1-based in every public interface; the image table is stored
0-based internally. Permutation values are immutable and hashable, so they
are safe to share between threads.
"""

from __future__ import annotations

import math
import re
from typing import Iterable, Sequence


class Permutation:
    """A permutation of {1, ..., n}.

    ``images`` is the 0-based image tuple: point ``i+1`` maps to
    ``images[i] + 1``. Multiplication is ordinary function composition:
    ``(p * q)(x) == p(q(x))``, i.e. ``q`` acts first.
    """

    __slots__ = ("_images",)

    def __init__(self, images: Sequence[int]):
        imgs = tuple(images)
        n = len(imgs)
        if n == 0:
            raise ValueError("a permutation needs at least one point")
        if len(set(imgs)) != n or min(imgs) != 0 or max(imgs) != n - 1:
            raise ValueError(f"{imgs!r} is not a bijection of 0..{n - 1}")
        object.__setattr__(self, "_images", imgs)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_one_based(cls, images: Sequence[int]) -> "Permutation":
        """Build from a 1-based image list (images[i] = image of point i+1)."""
        return cls(tuple(x - 1 for x in images))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        """The transposition (i j) on n points, i and j 1-based."""
        if not (1 <= i <= n and 1 <= j <= n and i != j):
            raise ValueError(f"bad transposition ({i} {j}) on {n} points")
        imgs = list(range(n))
        imgs[i - 1], imgs[j - 1] = j - 1, i - 1
        return cls(imgs)

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        """Build from disjoint cycles of 1-based points."""
        imgs = list(range(n))
        seen: set[int] = set()
        for cyc in cycles:
            for x in cyc:
                if not 1 <= x <= n:
                    raise ValueError(f"point {x} outside 1..{n}")
                if x in seen:
                    raise ValueError(f"point {x} repeated across cycles")
                seen.add(x)
            for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
                imgs[a - 1] = b - 1
        return cls(imgs)

    @property
    def degree(self) -> int:
        return len(self._images)

    @property
    def images(self) -> tuple[int, ...]:
        """The 0-based image tuple."""
        return self._images

    def __call__(self, point: int) -> int:
        """Image of a 1-based point."""
        return self._images[point - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        a = self._images
        return Permutation(tuple(map(a.__getitem__, other._images)))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self._images)
        for i, y in enumerate(self._images):
            inv[y] = i
        return Permutation(inv)

    def __pow__(self, exponent: int) -> "Permutation":
        base = self if exponent >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def is_identity(self) -> bool:
        return all(y == i for i, y in enumerate(self._images))

    def order(self) -> int:
        return math.lcm(*cycle_type(self))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self._images == other._images

    def __hash__(self) -> int:
        return hash(self._images)

    def __repr__(self) -> str:
        return f"Permutation[{cycle_notation(self)}]"


def cycles(p: Permutation, include_fixed: bool = False) -> list[tuple[int, ...]]:
    """Disjoint cycles as tuples of 1-based points, each starting at its
    smallest point, ordered by that point."""
    out = []
    seen = [False] * p.degree
    imgs = p.images
    for start in range(p.degree):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x + 1)
            x = imgs[x]
        if len(cyc) > 1 or include_fixed:
            out.append(tuple(cyc))
    return out


def cycle_type(p: Permutation) -> tuple[int, ...]:
    """Cycle lengths in decreasing order; lengths sum to the degree.

    >>> cycle_type(Permutation.identity(3))
    (1, 1, 1)
    >>> cycle_type(Permutation.transposition(4, 1, 2))
    (2, 1, 1)
    """
    lengths = [len(c) for c in cycles(p, include_fixed=True)]
    return tuple(sorted(lengths, reverse=True))


def parity_bit(p: Permutation) -> int:
    """1 for an odd permutation, 0 for an even one.

    Computed as (degree - number of cycles) mod 2, which avoids building a
    transposition decomposition.
    """
    return (p.degree - len(cycles(p, include_fixed=True))) % 2


def is_even(p: Permutation) -> bool:
    return parity_bit(p) == 0


def parity(p: Permutation) -> str:
    """"even" or "odd"."""
    return "odd" if parity_bit(p) else "even"


def cycle_notation(p: Permutation) -> str:
    """One-line cycle notation, e.g. ``(1 2)(7 8)``; the identity is ``()``.

    >>> cycle_notation(Permutation.from_cycles(8, [(1, 2), (7, 8)]))
    '(1 2)(7 8)'
    """
    nontrivial = cycles(p)
    if not nontrivial:
        return "()"
    return "".join("(" + " ".join(str(x) for x in c) + ")" for c in nontrivial)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycle_notation(text: str, degree: int | None = None) -> Permutation:
    """Inverse of :func:`cycle_notation`. ``degree`` defaults to the largest
    point mentioned; ``"()"`` needs an explicit degree."""
    stripped = text.replace(" ", "")
    if not stripped or _CYCLE_RE.sub("", stripped):
        raise ValueError(f"bad cycle notation: {text!r}")
    cycs = []
    for body in _CYCLE_RE.findall(text):
        points = [int(tok) for tok in body.split()]
        if points:
            cycs.append(tuple(points))
    n = degree if degree is not None else max((max(c) for c in cycs), default=0)
    if n < 1:
        raise ValueError("degree required for the identity permutation")
    return Permutation.from_cycles(n, cycs)


def legendre_nu2(n: int) -> int:
    """Largest e with 2^e dividing n!, i.e. sum over i >= 1 of floor(n / 2^i).

    Equals n - popcount(n); the equality is exercised in the test suite.

    >>> legendre_nu2(8)
    7
    >>> legendre_nu2(22)
    19
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    total = 0
    while n:
        n >>= 1
        total += n
    return total
