"""Rooted Cayley-tree combinatorics and the group-word view of vertices.

A tree of branching order k has a root with k+1 neighbours while every other
vertex has k direct successors, so the n-th sphere holds (k+1)*k**(n-1)
vertices.  Vertices are addressed by their root path (a tuple of child
indices); nothing is materialised beyond the addresses a query touches, which
keeps every operation O(size of the answer).

Each vertex also corresponds to a reduced word over k+1 involutive
generators: stepping to child i appends the i-th generator distinct from the
word's last letter (all k+1 generators are available at the root).  Word
length equals level, so the even-length subgroup splits the tree into the two
parity classes used by bipartite couplings and period-two fields.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class TreeShape:
    """Branching order and working depth of a finite tree slice."""

    branching: int
    depth: int = 12

    def __post_init__(self):
        if not isinstance(self.branching, int) or self.branching < 1:
            raise ValueError(f"branching order must be an integer >= 1, got {self.branching!r}")
        if not isinstance(self.depth, int) or self.depth < 0:
            raise ValueError(f"depth must be a nonnegative integer, got {self.depth!r}")

    def _check_level(self, n: int) -> None:
        if not 0 <= n <= self.depth:
            raise ValueError(f"level {n} outside 0..{self.depth}")

    def sphere_size(self, n: int) -> int:
        self._check_level(n)
        if n == 0:
            return 1
        return (self.branching + 1) * self.branching ** (n - 1)

    def ball_size(self, n: int) -> int:
        self._check_level(n)
        return 1 + sum(self.sphere_size(m) for m in range(1, n + 1))


@dataclass(frozen=True, slots=True)
class TreeVertex:
    """A vertex addressed by its path of child indices from the root.

    The root is the empty address.  Children of the root are indexed
    0..k (it has k+1 of them); children of any other vertex 0..k-1.
    Rendered as dot-joined indices ("0.1.0"), the root as "".
    """

    address: tuple[int, ...] = ()

    def __post_init__(self):
        if not all(isinstance(i, int) and i >= 0 for i in self.address):
            raise ValueError(f"address must be nonnegative ints, got {self.address!r}")

    @classmethod
    def root(cls) -> "TreeVertex":
        return cls(())

    @classmethod
    def from_string(cls, text: str) -> "TreeVertex":
        if text == "":
            return cls(())
        return cls(tuple(int(part) for part in text.split(".")))

    @property
    def level(self) -> int:
        return len(self.address)

    @property
    def is_root(self) -> bool:
        return not self.address

    def child(self, index: int) -> "TreeVertex":
        return TreeVertex(self.address + (index,))

    def parent(self) -> "TreeVertex":
        if self.is_root:
            raise ValueError("the root has no parent")
        return TreeVertex(self.address[:-1])

    def __str__(self) -> str:
        return ".".join(str(i) for i in self.address)

    def __repr__(self) -> str:
        return f"TreeVertex({str(self)!r})"


@dataclass(frozen=True, slots=True)
class GroupWord:
    """A reduced word over the involutive generators 1..branching+1.

    Reduced means no two adjacent letters agree; since every generator
    squares to the identity, adjacent repeats would cancel.
    """

    letters: tuple[int, ...]
    branching: int

    def __post_init__(self):
        top = self.branching + 1
        for letter in self.letters:
            if not 1 <= letter <= top:
                raise ValueError(f"letter {letter} outside generator range 1..{top}")
        for a, b in zip(self.letters, self.letters[1:]):
            if a == b:
                raise ValueError(f"word {self.letters} is not reduced (repeat {a})")

    @property
    def length(self) -> int:
        return len(self.letters)

    def parity(self) -> str:
        """Coset of the even-length subgroup: "even" or "odd"."""
        return "even" if len(self.letters) % 2 == 0 else "odd"

    def __str__(self) -> str:
        return "e" if not self.letters else ".".join(f"a{i}" for i in self.letters)


def vertex_parity(x: TreeVertex) -> str:
    # Word length equals level, so parity never needs the word itself.
    return "even" if x.level % 2 == 0 else "odd"


def direct_successors(shape: TreeShape, x: TreeVertex) -> list[TreeVertex]:
    """The children of ``x``: k+1 of them at the root, k elsewhere."""
    count = shape.branching + 1 if x.is_root else shape.branching
    return [x.child(i) for i in range(count)]


def sphere(shape: TreeShape, n: int) -> list[TreeVertex]:
    """All vertices at distance n from the root, in address order."""
    shape._check_level(n)
    level = [TreeVertex.root()]
    for _ in range(n):
        level = [y for x in level for y in direct_successors(shape, x)]
    return level


def ball(shape: TreeShape, n: int) -> list[TreeVertex]:
    """All vertices within distance n of the root, level by level."""
    shape._check_level(n)
    out: list[TreeVertex] = []
    for m in range(n + 1):
        out.extend(sphere(shape, m))
    return out


def edges(shape: TreeShape, n: int) -> list[tuple[TreeVertex, TreeVertex]]:
    """All (parent, child) nearest-neighbour pairs inside the n-ball."""
    shape._check_level(n)
    out: list[tuple[TreeVertex, TreeVertex]] = []
    for m in range(n):
        for x in sphere(shape, m):
            for y in direct_successors(shape, x):
                out.append((x, y))
    return out


def word_of_vertex(shape: TreeShape, x: TreeVertex) -> GroupWord:
    """The reduced word reached by the root path of ``x``.

    The first step maps root-child i to generator i+1.  A later step from a
    word ending in letter L maps child i to the i-th generator distinct
    from L, so the result is reduced by construction and the map is a
    bijection onto reduced words.
    """
    letters: list[int] = []
    for depth, index in enumerate(x.address):
        if depth == 0:
            if index > shape.branching:
                raise ValueError(f"root child index {index} outside 0..{shape.branching}")
            letters.append(index + 1)
        else:
            if index >= shape.branching:
                raise ValueError(f"child index {index} outside 0..{shape.branching - 1}")
            last = letters[-1]
            choices = [g for g in range(1, shape.branching + 2) if g != last]
            letters.append(choices[index])
    return GroupWord(tuple(letters), shape.branching)
