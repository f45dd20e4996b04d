"""Hypercubic lattices as cell complexes.

Every n-cube is identified by the coordinates of its geometric center.  The
coordinates are stored doubled, so a half-integer center coordinate becomes
an odd integer and the dimension of a cube is the number of odd entries.

Along a periodic direction with ``L`` cells the doubled coordinate lives in
``0 .. 2L-1`` (taken mod ``2L``).  Along an open direction it lives in
``0 .. 2L``: vertices sit at ``0 .. L`` and cells at ``1/2 .. L-1/2``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InvalidDimension, InvalidLattice, InvalidLeafDim, NodeNotInLeaf

PERIODIC = "periodic"
OPEN = "open"
STAR = "*"


class Cube(tuple):
    """An n-cube given by its doubled center coordinates."""

    __slots__ = ()

    def __new__(cls, coords: Iterable[int]) -> "Cube":
        return super().__new__(cls, (int(c) for c in coords))

    @property
    def dim(self) -> int:
        return sum(c & 1 for c in self)

    @property
    def half_axes(self) -> tuple[int, ...]:
        """Directions along which the cube extends (odd doubled coordinate)."""
        return tuple(i for i, c in enumerate(self) if c & 1)

    def __repr__(self) -> str:
        parts = []
        for c in self:
            parts.append(str(c // 2) if c % 2 == 0 else f"{c}/2")
        return "Cube[" + ", ".join(parts) + "]"


@dataclass(frozen=True)
class LatticeSpec:
    D: int
    L: tuple[int, ...]
    boundary: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "L", tuple(int(x) for x in self.L))
        if not self.boundary:
            object.__setattr__(self, "boundary", (PERIODIC,) * len(self.L))
        else:
            object.__setattr__(self, "boundary", tuple(self.boundary))


@dataclass(frozen=True)
class Leaf:
    """Axis-aligned subcomplex spanned by ``axes`` through a vertex.

    The anchor is normalized so that its coordinates along ``axes`` are zero;
    two leaves compare equal iff they share axes and the fixed coordinates.
    """

    axes: frozenset[int]
    anchor: Cube = field(compare=True)

    def __post_init__(self) -> None:
        axes = frozenset(int(a) for a in self.axes)
        anchor = Cube(0 if i in axes else c for i, c in enumerate(self.anchor))
        if any(c & 1 for c in anchor):
            raise InvalidLeafDim("leaf anchor must be a vertex outside the leaf axes")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "anchor", anchor)

    def contains(self, cube: Sequence[int]) -> bool:
        return all(i in self.axes or cube[i] == a for i, a in enumerate(self.anchor))

    def sort_key(self) -> tuple:
        return (tuple(sorted(self.axes)), tuple(self.anchor))


class Lattice:
    """Immutable D-dimensional hypercubic lattice with per-direction boundaries."""

    def __init__(self, spec: LatticeSpec):
        if spec.D < 1 or len(spec.L) == 0:
            raise InvalidLattice("lattice dimension must be at least 1")
        if len(spec.L) != spec.D or len(spec.boundary) != spec.D:
            raise InvalidLattice(f"expected {spec.D} sizes and boundary flags")
        for i, (n, b) in enumerate(zip(spec.L, spec.boundary)):
            if b not in (PERIODIC, OPEN):
                raise InvalidLattice(f"unknown boundary flag {b!r} in direction {i}")
            if b == PERIODIC and n < 2:
                raise InvalidLattice(f"periodic direction {i} needs L >= 2, got {n}")
            if b == OPEN and n < 1:
                raise InvalidLattice(f"open direction {i} needs L >= 1, got {n}")
        self.spec = spec
        self.D = spec.D
        self.L = spec.L
        self.boundary = spec.boundary
        self.periodic = tuple(b == PERIODIC for b in spec.boundary)
        self._cubes: dict[int, list[Cube]] = {}
        self._index: dict[int, dict[Cube, int]] = {}

    @classmethod
    def periodic_box(cls, *L: int) -> "Lattice":
        return cls(LatticeSpec(len(L), tuple(L)))

    def __repr__(self) -> str:
        flags = "".join("p" if p else "o" for p in self.periodic)
        return f"Lattice(L={self.L}, boundary={flags})"

    @cached_property
    def fully_periodic(self) -> bool:
        return all(self.periodic)

    @cached_property
    def open_dirs(self) -> frozenset[int]:
        return frozenset(i for i, p in enumerate(self.periodic) if not p)

    def axis_values(self, i: int) -> range:
        """All legal doubled coordinates along direction ``i``."""
        return range(2 * self.L[i]) if self.periodic[i] else range(2 * self.L[i] + 1)

    def minus_half(self, i: int) -> int:
        """Doubled coordinate of the cell at -1/2 along a periodic direction."""
        return 2 * self.L[i] - 1

    def normalize(self, coords: Sequence[int]) -> Cube | None:
        """Canonical representative, or ``None`` if it falls off an open edge."""
        out = []
        for i, c in enumerate(coords):
            if self.periodic[i]:
                out.append(c % (2 * self.L[i]))
            elif 0 <= c <= 2 * self.L[i]:
                out.append(c)
            else:
                return None
        return Cube(out)

    def cube(self, *xs: float | Fraction | int) -> Cube:
        """Build a cube from ordinary center coordinates, e.g. ``cube(-1, -0.5)``."""
        if len(xs) != self.D:
            raise InvalidDimension(f"expected {self.D} coordinates")
        doubled = []
        for x in xs:
            twice = Fraction(x) * 2
            if twice.denominator != 1:
                raise ValueError(f"coordinate {x} is not a multiple of 1/2")
            doubled.append(int(twice))
        cube = self.normalize(doubled)
        if cube is None:
            raise ValueError(f"coordinates {xs} lie outside the lattice")
        return cube

    def _check_dim(self, n: int) -> None:
        if not 0 <= n <= self.D:
            raise InvalidDimension(f"cube dimension {n} outside 0..{self.D}")

    def cubes(self, n: int) -> list[Cube]:
        """All n-cubes in lexicographic order of doubled coordinates."""
        self._check_dim(n)
        if n not in self._cubes:
            ranges = [self.axis_values(i) for i in range(self.D)]
            found = [Cube(c) for c in itertools.product(*ranges) if sum(x & 1 for x in c) == n]
            self._cubes[n] = found
            self._index[n] = {c: k for k, c in enumerate(found)}
        return self._cubes[n]

    def count(self, n: int) -> int:
        return len(self.cubes(n))

    def index_of(self, cube: Sequence[int]) -> int:
        c = Cube(cube)
        self.cubes(c.dim)
        try:
            return self._index[c.dim][c]
        except KeyError:
            raise ValueError(f"{c!r} is not a cube of {self!r}") from None

    def cube_at(self, n: int, i: int) -> Cube:
        return self.cubes(n)[i]

    def contains(self, cube: Sequence[int]) -> bool:
        return self.normalize(cube) == tuple(cube)

    def faces(self, gamma: Sequence[int], d: int) -> list[Cube]:
        """All d-cubes inside the closed cube ``gamma``, in canonical order."""
        self._check_dim(d)
        gamma = Cube(gamma)
        half = gamma.half_axes
        if d > len(half):
            return []
        out = set()
        for keep in itertools.combinations(half, d):
            moved = [i for i in half if i not in keep]
            for signs in itertools.product((-1, 1), repeat=len(moved)):
                coords = list(gamma)
                for i, s in zip(moved, signs):
                    coords[i] += s
                face = self.normalize(coords)
                if face is not None:
                    out.add(face)
        return sorted(out)

    def leaves_through(self, node: Sequence[int], d_l: int) -> list[Leaf]:
        """The d_l-dimensional axis-aligned leaves containing ``node``."""
        node = Cube(node)
        self._check_dim(d_l)
        spanned = node.half_axes
        if d_l < len(spanned):
            raise InvalidLeafDim(f"leaf dimension {d_l} below node dimension {len(spanned)}")
        others = [i for i in range(self.D) if i not in spanned]
        # The anchor vertex only matters outside the leaf axes, where the node is integral.
        anchor = Cube(c - (c & 1) for c in node)
        leaves = [
            Leaf(frozenset(spanned) | frozenset(extra), anchor)
            for extra in itertools.combinations(others, d_l - len(spanned))
        ]
        return sorted(leaves, key=Leaf.sort_key)

    def cofaces_in_leaf(self, node: Sequence[int], d_s: int, leaf: Leaf) -> list[Cube]:
        """All d_s-cubes that contain ``node`` and lie inside ``leaf``."""
        node = Cube(node)
        if not leaf.contains(node) or not set(node.half_axes) <= leaf.axes:
            raise NodeNotInLeaf(f"{node!r} is not inside the leaf")
        d_n = node.dim
        if not d_n <= d_s <= len(leaf.axes):
            raise InvalidDimension(f"need {d_n} <= d_s <= {len(leaf.axes)}, got {d_s}")
        free = sorted(leaf.axes - set(node.half_axes))
        out = set()
        for grow in itertools.combinations(free, d_s - d_n):
            for signs in itertools.product((-1, 1), repeat=len(grow)):
                coords = list(node)
                for i, s in zip(grow, signs):
                    coords[i] += s
                cube = self.normalize(coords)
                if cube is not None:
                    out.add(cube)
        return sorted(out)

    def star_expand(self, pattern: Sequence[int | str], dim: int | None = None) -> list[Cube]:
        """Expand a pattern of fixed doubled coordinates and ``STAR`` wildcards."""
        if len(pattern) != self.D:
            raise InvalidDimension(f"pattern needs {self.D} entries")
        choices = []
        for i, entry in enumerate(pattern):
            if entry == STAR:
                choices.append(self.axis_values(i))
            else:
                value = int(entry)
                if self.periodic[i]:
                    value %= 2 * self.L[i]
                elif not 0 <= value <= 2 * self.L[i]:
                    raise ValueError(f"fixed entry {entry} outside direction {i}")
                choices.append((value,))
        cubes = (Cube(c) for c in itertools.product(*choices))
        if dim is not None:
            self._check_dim(dim)
            return [c for c in cubes if c.dim == dim]
        return list(cubes)


def make_lattice(spec: LatticeSpec) -> Lattice:
    return Lattice(spec)


def enumerate_cubes(lat: Lattice, n: int) -> list[Cube]:
    return lat.cubes(n)


def faces(lat: Lattice, gamma: Sequence[int], d: int) -> list[Cube]:
    return lat.faces(gamma, d)


def leaves_through(lat: Lattice, node: Sequence[int], d_l: int) -> list[Leaf]:
    return lat.leaves_through(node, d_l)


def cofaces_in_leaf(lat: Lattice, node: Sequence[int], d_s: int, leaf: Leaf) -> list[Cube]:
    return lat.cofaces_in_leaf(node, d_s, leaf)


def star_expand(lat: Lattice, pattern: Sequence[int | str], dim: int | None = None) -> list[Cube]:
    return lat.star_expand(pattern, dim)


def expected_cube_count(lat: Lattice, n: int) -> int:
    """Closed-form n-cube count of a fully periodic lattice."""
    return math.comb(lat.D, n) * math.prod(lat.L)
