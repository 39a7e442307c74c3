# aut.py

"""
Colour refinement and automorphism search on colour tables of ordered pairs.

The automorphism group of the 2-orbit table of a group is its 2-closure, so this module is
both the brute-force closure and the acceptance oracle of the branch algorithms.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import OracleUnavailableError
from .orbitals import OrbitalStructure, two_orbits
from .perm import Permutation, PermutationGroup
from .settings import Settings, get_settings

logger = logging.getLogger(__name__)

ColoredConfiguration = OrbitalStructure


@dataclass(frozen=True, eq=False)
class OrderedPartition:
    """Cell index of every point; cells are ordered by index."""

    cells: np.ndarray

    @classmethod
    def from_cells(cls, n: int, cells: Sequence[Sequence[int]]) -> "OrderedPartition":
        index = np.full(n, -1, dtype=np.int64)
        for k, cell in enumerate(cells):
            index[list(cell)] = k
        if (index < 0).any():
            raise ValueError("cells do not cover the domain")
        return cls(index)

    @classmethod
    def unit(cls, n: int) -> "OrderedPartition":
        return cls(np.zeros(n, dtype=np.int64))

    @property
    def count(self) -> int:
        return int(self.cells.max()) + 1 if len(self.cells) else 0

    def as_cells(self) -> list[list[int]]:
        return [np.flatnonzero(self.cells == k).tolist() for k in range(self.count)]

    def is_discrete(self) -> bool:
        return self.count == len(self.cells)


class _Refiner:
    def __init__(self, table: np.ndarray):
        self.table = table.astype(np.int64)
        self.table_t = np.ascontiguousarray(self.table.T)
        self.n = table.shape[0]
        self.rank = int(table.max()) + 1 if self.n else 0

    def counts(self, cells: np.ndarray, k: int) -> np.ndarray:
        n, width = self.n, self.rank * k
        rows = np.arange(n, dtype=np.int64)[:, None] * width
        size = n * width
        out = np.bincount((self.table * k + cells[None, :] + rows).ravel(), minlength=size)
        into = np.bincount((self.table_t * k + cells[None, :] + rows).ravel(), minlength=size)
        return np.hstack([out.reshape(n, width), into.reshape(n, width)])

    def refine(self, cells: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return the stable refinement and its quotient (signature rows of cell representatives)."""
        k = int(cells.max()) + 1
        while True:
            counts = self.counts(cells, k)
            _, inverse = np.unique(np.column_stack([cells, counts]), axis=0, return_inverse=True)
            inverse = inverse.reshape(-1)
            new_k = int(inverse.max()) + 1
            if new_k == k:
                _, reps = np.unique(cells, return_index=True)
                return cells, counts[reps]
            cells, k = inverse, new_k


def _individualize(cells: np.ndarray, v: int) -> np.ndarray:
    split = cells * 2 + 1
    split[v] -= 1
    _, inverse = np.unique(split, return_inverse=True)
    return inverse.reshape(-1)


def _target(cells: np.ndarray) -> Optional[int]:
    sizes = np.bincount(cells)
    open_cells = np.flatnonzero(sizes > 1)
    if not len(open_cells):
        return None
    return int(open_cells[np.argmin(sizes[open_cells])])


def refine(config: OrbitalStructure, partition: OrderedPartition) -> OrderedPartition:
    """
    Coarsest stable refinement of a partition under the pair colours.

    Two points share a cell only if they have equal numbers of pairs of every colour, in both
    directions, into every cell. Cells split by sorted signature, so the output is canonical.

    Args:
        config (OrbitalStructure): Pair colour table
        partition (OrderedPartition): Starting partition

    Returns:
        OrderedPartition: The stable refinement
    """
    if config.degree == 0:
        return partition
    cells, _ = _Refiner(config.table).refine(np.asarray(partition.cells, dtype=np.int64))
    return OrderedPartition(cells)


class _AutomorphismSearch:
    def __init__(self, table: np.ndarray):
        self.table = table
        self.refiner = _Refiner(table)
        self.path: list[tuple[np.ndarray, np.ndarray]] = []
        self.first_leaf_inverse: Optional[np.ndarray] = None
        self.nodes = 0

    def node(self, cells: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        self.nodes += 1
        return self.refiner.refine(cells)

    def matches(self, depth: int, cells: np.ndarray, quotient: np.ndarray) -> bool:
        ref_cells, ref_quotient = self.path[depth]
        return (
            np.array_equal(np.bincount(cells), np.bincount(ref_cells))
            and np.array_equal(quotient, ref_quotient)
        )

    def is_automorphism(self, gamma: np.ndarray) -> bool:
        return bool(np.array_equal(self.table[np.ix_(gamma, gamma)], self.table))

    def leaf_map(self, cells: np.ndarray) -> np.ndarray:
        gamma = np.empty(len(cells), dtype=np.int64)
        gamma[self.first_leaf_inverse] = np.argsort(cells)
        return gamma

    def subtree(self, cells: np.ndarray, depth: int) -> Optional[np.ndarray]:
        t = _target(cells)
        if t is None:
            gamma = self.leaf_map(cells)
            return gamma if self.is_automorphism(gamma) else None
        for w in np.flatnonzero(cells == t):
            child, quotient = self.node(_individualize(cells, int(w)))
            if not self.matches(depth + 1, child, quotient):
                continue
            found = self.subtree(child, depth + 1)
            if found is not None:
                return found
        return None


class _Orbits:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def absorb(self, gamma: Sequence[int]) -> None:
        for x, y in enumerate(gamma):
            rx, ry = self.find(x), self.find(int(y))
            if rx != ry:
                self.parent[max(rx, ry)] = min(rx, ry)


def automorphism_group(config: OrbitalStructure, settings: Optional[Settings] = None) -> PermutationGroup:
    """
    Group of all permutations preserving every pair colour.

    Individualization-refinement along a first path, processed from the deepest level up; at
    each level only points outside the orbit found so far are searched.

    Args:
        config (OrbitalStructure): Pair colour table
        settings (Optional[Settings]): Caps; ``oracle_cap`` bounds the degree

    Returns:
        PermutationGroup: The automorphism group

    Raises:
        OracleUnavailableError: If the degree exceeds ``oracle_cap``
    """
    settings = settings or get_settings()
    n = config.degree
    if n > settings.oracle_cap:
        raise OracleUnavailableError(f"degree {n} exceeds the oracle cap {settings.oracle_cap}")
    if n <= 1:
        return PermutationGroup(n)

    search = _AutomorphismSearch(config.table)
    _, start = np.unique(np.diagonal(config.table), return_inverse=True)
    cells, quotient = search.node(start.reshape(-1).astype(np.int64))
    search.path.append((cells, quotient))
    targets: list[tuple[list[int], int]] = []
    while (t := _target(cells)) is not None:
        members = np.flatnonzero(cells == t).tolist()
        targets.append((members, members[0]))
        cells, quotient = search.node(_individualize(cells, members[0]))
        search.path.append((cells, quotient))
    search.first_leaf_inverse = np.argsort(cells)
    logger.debug(f"First path of depth {len(targets)} for degree {n}")

    gens: list[np.ndarray] = []
    orbits = _Orbits(n)
    for depth in reversed(range(len(targets))):
        members, v = targets[depth]
        parent_cells = search.path[depth][0]
        tested: list[int] = []
        for w in members[1:]:
            rw = orbits.find(w)
            if rw == orbits.find(v) or any(orbits.find(x) == rw for x in tested):
                continue
            tested.append(w)
            child, child_quotient = search.node(_individualize(parent_cells, w))
            gamma = None
            if search.matches(depth + 1, child, child_quotient):
                gamma = search.subtree(child, depth + 1)
            if gamma is not None:
                gens.append(gamma)
                orbits.absorb(gamma)

    group = PermutationGroup(n, [Permutation(g.tolist(), check=False) for g in gens])
    logger.info(f"Automorphism search on {n} points: order {group.order}, {search.nodes} nodes")
    return group


def oracle_two_closure(group: PermutationGroup, settings: Optional[Settings] = None) -> PermutationGroup:
    """
    2-closure by brute force: the automorphism group of the 2-orbit table.

    Raises:
        OracleUnavailableError: If the degree exceeds ``oracle_cap``
    """
    settings = settings or get_settings()
    if group.degree > settings.oracle_cap:
        raise OracleUnavailableError(f"degree {group.degree} exceeds the oracle cap {settings.oracle_cap}")
    return automorphism_group(two_orbits(group, settings), settings)
