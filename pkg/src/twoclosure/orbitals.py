# orbitals.py

"""
2-orbits (orbitals) of a permutation group as an n x n colour table.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegreeMismatchError, TooLargeError
from .perm import Permutation, PermutationGroup
from .settings import Settings, get_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OrbitalStructure:
    """
    Colour partition of all ordered pairs.

    ``table[i, j]`` is the colour of the pair (i, j). For a transitive source group the diagonal
    is colour 0 and the other colours are numbered by the smallest point of the matching
    suborbit of point 0.
    """

    degree: int
    table: np.ndarray
    diagonal_colors: tuple[int, ...]
    transitive: bool

    @property
    def rank(self) -> int:
        return int(self.table.max()) + 1 if self.degree else 0

    @property
    def sizes(self) -> list[int]:
        return np.bincount(self.table.ravel(), minlength=self.rank).tolist()

    @property
    def nondiagonal_colors(self) -> list[int]:
        return [c for c in range(self.rank) if c not in self.diagonal_colors]

    @property
    def subdegrees(self) -> list[int]:
        sizes = self.sizes
        return sorted(sizes[c] // self.degree for c in self.nondiagonal_colors)

    def subdegree(self, color: int) -> int:
        return int(np.count_nonzero(self.table[0] == color)) if self.transitive else self.sizes[color] // self.degree

    def color(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def paired(self, color: int) -> int:
        i, j = np.argwhere(self.table == color)[0]
        return int(self.table[j, i])

    def is_symmetric(self, color: int) -> bool:
        return self.paired(color) == color

    def neighbours(self, color: int, point: int) -> np.ndarray:
        return np.flatnonzero(self.table[point] == color)

    def is_rank3(self) -> tuple[bool, Optional[tuple[int, int]]]:
        """
        Rank test.

        Returns:
            tuple[bool, Optional[tuple[int, int]]]: Whether the structure has rank 3 and, if so,
            the (smaller, larger) subdegrees
        """
        if not self.transitive or self.rank != 3:
            return False, None
        small, large = self.subdegrees
        return True, (small, large)

    def smallest_color(self) -> int:
        """Nondiagonal colour of the smallest subdegree; ties go to the lower colour id."""
        return min(self.nondiagonal_colors, key=lambda c: (self.subdegree(c), c))

    def preserves(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            raise DegreeMismatchError(f"permutation of degree {g.degree} against {self.degree} points")
        idx = np.asarray(g.images)
        return bool(np.array_equal(self.table[np.ix_(idx, idx)], self.table))


def two_orbits(group: PermutationGroup, settings: Optional[Settings] = None) -> OrbitalStructure:
    """
    Compute the orbits of the group on ordered pairs.

    Args:
        group (PermutationGroup): Any permutation group
        settings (Optional[Settings]): Caps; ``orbital_cap`` bounds the degree

    Returns:
        OrbitalStructure: The colour table

    Raises:
        TooLargeError: If the degree exceeds ``orbital_cap``
    """
    settings = settings or get_settings()
    n = group.degree
    if n > settings.orbital_cap:
        raise TooLargeError("orbital table", n, settings.orbital_cap)
    if n == 0:
        return OrbitalStructure(0, np.zeros((0, 0), dtype=np.int32), (), True)
    if group.is_transitive():
        table = _transitive_table(group)
        return OrbitalStructure(n, table, (0,), True)
    table, diagonal = _flood_table(group)
    return OrbitalStructure(n, table, diagonal, False)


def _transitive_table(group: PermutationGroup) -> np.ndarray:
    n = group.degree
    stabilizer = group.point_stabilizer(0)
    suborbits = sorted(stabilizer.orbits(), key=min)
    sub = np.empty(n, dtype=np.int32)
    for k, orbit in enumerate(suborbits):
        sub[orbit] = k
    table = np.empty((n, n), dtype=np.int32)
    transversal = group._chain_from(0).levels[0].transversal if n > 1 else {0: (0,)}
    for i in range(n):
        table[i, np.asarray(transversal[i])] = sub
    logger.debug(f"Orbital table for degree {n}: rank {len(suborbits)}")
    return table


def _flood_table(group: PermutationGroup) -> tuple[np.ndarray, tuple[int, ...]]:
    n = group.degree
    table = np.full((n, n), -1, dtype=np.int32)
    gens = [g.images for g in group.generators]
    color = 0
    diagonal = []
    for i in range(n):
        for j in range(n):
            if table[i, j] >= 0:
                continue
            if i == j:
                diagonal.append(color)
            table[i, j] = color
            stack = [(i, j)]
            while stack:
                a, b = stack.pop()
                for g in gens:
                    x, y = g[a], g[b]
                    if table[x, y] < 0:
                        table[x, y] = color
                        stack.append((x, y))
            color += 1
    return table, tuple(diagonal)


def is_rank3(structure: OrbitalStructure) -> tuple[bool, Optional[tuple[int, int]]]:
    return structure.is_rank3()


def preserves_orbitals(structure: OrbitalStructure, g: Permutation) -> bool:
    return structure.preserves(g)
