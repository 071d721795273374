"""Automorphisms of the truncated binary rooted tree of depth k, stored as
portraits: one swap/no-swap bit per internal vertex.

Tree layout. Levels run from 0 (the root) to k; the 2^l vertices of level l
are numbered 1..2^l left to right, and the 2^k leaves sit at level k,
numbered 1..2^k. The vertex at position p of level l corresponds to the
address string of p-1 written msb-first with l bits, one branch bit per
level. Only levels 0..k-1 carry state bits.

Action. An active state at a vertex swaps the two complete subtrees below
it. The image of a leaf is found by walking its original root-to-leaf path
and flipping the branch bit at every vertex of that path whose state is
active. States are looked up along the domain path, so the state at v acts
on the subtree below v before anything above relocates it.

Composition. compose(a, b) applies b first and then a, matching ordinary
function composition, and to_permutation is a homomorphism for that order:
to_permutation(compose(a, b)) == to_permutation(a) * to_permutation(b).
At the portrait level this forces the transport rule
s_ab(v) = s_a(b(v)) XOR s_b(v), with b(v) the image vertex of v under b.

Each level's bits are packed into an int, bit p-1 for position p, so depth
is capped at MAX_DEPTH to keep the bit budget sane. All values here are
immutable and all functions pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .perm_core import Permutation

MAX_DEPTH = 16


@dataclass(frozen=True)
class VertexAddress:
    """A vertex: level in 0..k, position 1-based within the level."""

    level: int
    position: int

    def __post_init__(self):
        if self.level < 0:
            raise ValueError(f"negative level {self.level}")
        if not 1 <= self.position <= 1 << self.level:
            raise ValueError(
                f"position {self.position} outside 1..{1 << self.level} on level {self.level}"
            )


class ElementKind(Enum):
    TYPE_T = "T"
    TYPE_C = "C"
    NEITHER = "neither"


@dataclass(frozen=True)
class ElementClass:
    """Classification of an automorphism by its last-level state pattern.

    ``first_half_states`` / ``second_half_states`` count the active states at
    level k-1 among positions 1..2^(k-2) and 2^(k-2)+1..2^(k-1); they are the
    witnesses behind a TYPE_T or TYPE_C verdict and are None otherwise.
    """

    kind: ElementKind
    first_half_states: int | None = None
    second_half_states: int | None = None


@dataclass(frozen=True)
class Portrait:
    """An automorphism of the depth-k tree as per-level state bitmasks.

    ``levels[l]`` has bit p-1 set iff the vertex at position p of level l
    carries an active state. Equal bit content means equal automorphism; the
    converse (faithfulness of the leaf action) is exercised by the tests
    rather than assumed.
    """

    depth: int
    levels: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.depth <= MAX_DEPTH:
            raise ValueError(f"depth must be in 1..{MAX_DEPTH}, got {self.depth}")
        if len(self.levels) != self.depth:
            raise ValueError(f"expected {self.depth} levels, got {len(self.levels)}")
        for l, mask in enumerate(self.levels):
            if not 0 <= mask < (1 << (1 << l)):
                raise ValueError(f"level {l} mask {mask} out of range")

    @property
    def leaf_count(self) -> int:
        return 1 << self.depth

    def is_identity(self) -> bool:
        return all(m == 0 for m in self.levels)

    def state(self, level: int, position: int) -> bool:
        """Whether the vertex at (level, position) carries an active state."""
        if not 0 <= level < self.depth:
            raise ValueError(f"level {level} outside 0..{self.depth - 1}")
        VertexAddress(level, position)
        return bool(self.levels[level] >> (position - 1) & 1)

    def active_vertices(self) -> list[VertexAddress]:
        out = []
        for l, mask in enumerate(self.levels):
            while mask:
                low = mask & -mask
                out.append(VertexAddress(l, low.bit_length()))
                mask ^= low
        return out


def identity(k: int) -> Portrait:
    """The all-zero portrait of depth k; acts trivially on the leaves."""
    return Portrait(k, (0,) * k)


def from_states(k: int, active: Iterable[tuple[int, int]]) -> Portrait:
    """Portrait with active states exactly at the given (level, position)
    pairs, positions 1-based."""
    masks = [0] * k
    for level, position in active:
        if not 0 <= level < k:
            raise ValueError(f"level {level} outside 0..{k - 1}")
        VertexAddress(level, position)
        bit = 1 << (position - 1)
        if masks[level] & bit:
            raise ValueError(f"duplicate state at level {level}, position {position}")
        masks[level] |= bit
    return Portrait(k, tuple(masks))


def vertex_images(a: Portrait) -> list[tuple[int, ...]]:
    """Per-level vertex action: entry l maps each 0-based position of level l
    to its image position; entry k is the 0-based leaf action."""
    imgs: list[tuple[int, ...]] = [(0,)]
    for l in range(a.depth):
        mask = a.levels[l]
        prev = imgs[l]
        nxt = [0] * (2 << l)
        for v in range(1 << l):
            w2 = prev[v] << 1
            s = mask >> v & 1
            nxt[2 * v] = w2 | s
            nxt[2 * v + 1] = w2 | (1 - s)
        imgs.append(tuple(nxt))
    return imgs


def to_permutation(a: Portrait) -> Permutation:
    """The leaf action on {1, ..., 2^k}."""
    return Permutation(vertex_images(a)[a.depth])


def compose(a: Portrait, b: Portrait) -> Portrait:
    """The automorphism "apply b, then a"."""
    if a.depth != b.depth:
        raise ValueError(f"depth mismatch: {a.depth} != {b.depth}")
    imgs_b = vertex_images(b)
    masks = []
    for l in range(a.depth):
        amask, bmask, img = a.levels[l], b.levels[l], imgs_b[l]
        m = 0
        for v in range(1 << l):
            if (bmask >> v ^ amask >> img[v]) & 1:
                m |= 1 << v
        masks.append(m)
    return Portrait(a.depth, tuple(masks))


def inverse(a: Portrait) -> Portrait:
    """The portrait with each state bit relocated to its image vertex, so
    that compose(a, inverse(a)) is the identity."""
    imgs = vertex_images(a)
    masks = []
    for l in range(a.depth):
        mask, img = a.levels[l], imgs[l]
        m = 0
        for v in range(1 << l):
            if mask >> v & 1:
                m |= 1 << img[v]
        masks.append(m)
    return Portrait(a.depth, tuple(masks))


def level_index(a: Portrait, l: int) -> int:
    """Number of active states on level l."""
    if not 0 <= l < a.depth:
        raise ValueError(f"level {l} outside 0..{a.depth - 1}")
    return a.levels[l].bit_count()


def vp_distance(a: Portrait) -> int:
    """Maximal tree distance between two level-(k-1) vertices with active
    states; 0 when fewer than two such vertices exist.

    Two positions at depth k-1 whose msb-first addresses first differ at bit
    t are 2*(k-1-t) apart, so the maximum over the active set is twice the
    bit length of min XOR max.
    """
    mask = a.levels[a.depth - 1]
    if mask.bit_count() < 2:
        return 0
    positions = []
    m = mask
    while m:
        low = m & -m
        positions.append(low.bit_length() - 1)
        m ^= low
    return 2 * (min(positions) ^ max(positions)).bit_length()


def classify_element(a: Portrait) -> ElementClass:
    """Type T: states only on level k-1, with an odd number of them in each
    half of that level. Type C: the same odd/odd half counts, with arbitrary
    states above. Anything else is NEITHER.
    """
    if a.depth < 2:
        raise ValueError("classification needs depth >= 2")
    half = 1 << (a.depth - 2)
    last = a.levels[a.depth - 1]
    c1 = (last & ((1 << half) - 1)).bit_count()
    c2 = (last >> half).bit_count()
    if c1 % 2 == 1 and c2 % 2 == 1:
        upper_trivial = all(a.levels[l] == 0 for l in range(a.depth - 1))
        kind = ElementKind.TYPE_T if upper_trivial else ElementKind.TYPE_C
        return ElementClass(kind, c1, c2)
    return ElementClass(ElementKind.NEITHER)


def to_text(a: Portrait) -> str:
    """Text form ``k=3;L0=1;L1=00;L2=1001``: one bit string per level, the
    leftmost character being position 1."""
    parts = [f"k={a.depth}"]
    for l, mask in enumerate(a.levels):
        bits = "".join("1" if mask >> p & 1 else "0" for p in range(1 << l))
        parts.append(f"L{l}={bits}")
    return ";".join(parts)


def from_text(text: str) -> Portrait:
    """Parse the :func:`to_text` form; the round trip is bit-exact."""
    fields = text.strip().split(";")
    if not fields or not fields[0].startswith("k="):
        raise ValueError(f"bad portrait text: {text!r}")
    try:
        k = int(fields[0][2:])
    except ValueError:
        raise ValueError(f"bad depth in {text!r}") from None
    if len(fields) != k + 1:
        raise ValueError(f"expected {k} level fields, got {len(fields) - 1}")
    masks = []
    for l, field in enumerate(fields[1:]):
        prefix = f"L{l}="
        if not field.startswith(prefix):
            raise ValueError(f"expected {prefix}... at level {l}, got {field!r}")
        bits = field[len(prefix):]
        if len(bits) != 1 << l or set(bits) - {"0", "1"}:
            raise ValueError(f"level {l} needs {1 << l} bits, got {bits!r}")
        masks.append(sum(1 << p for p, ch in enumerate(bits) if ch == "1"))
    return Portrait(k, tuple(masks))


def from_permutation(p: Permutation) -> Portrait:
    """Recover the portrait of a leaf permutation that is a tree
    automorphism; raises ValueError otherwise.

    Works top-down: the state at a vertex v with known image w is read off
    from whether the leftmost leaf under v's left child lands under w's left
    or right child. The result is checked against p before returning.
    """
    n = p.degree
    k = n.bit_length() - 1
    if n != 1 << k or k < 1:
        raise ValueError(f"degree {n} is not a power of two >= 2")
    imgs = p.images
    masks = []
    img = [0]
    for l in range(k):
        shift = k - l - 1
        mask = 0
        nxt = [0] * (2 << l)
        for v in range(1 << l):
            w = img[v]
            y_child = imgs[v << (shift + 1)] >> shift
            if y_child == 2 * w:
                s = 0
            elif y_child == 2 * w + 1:
                s = 1
            else:
                raise ValueError("not a tree automorphism")
            mask |= s << v
            nxt[2 * v] = 2 * w + s
            nxt[2 * v + 1] = 2 * w + 1 - s
        masks.append(mask)
        img = nxt
    portrait = Portrait(k, tuple(masks))
    if tuple(img) != imgs:
        raise ValueError("not a tree automorphism")
    return portrait


def iter_portraits(k: int) -> Iterator[Portrait]:
    """All 2^(2^k - 1) portraits of depth k, in a fixed order."""
    ranges = [range(1 << (1 << l)) for l in range(k)]
    for combo in itertools.product(*ranges):
        yield Portrait(k, combo)
