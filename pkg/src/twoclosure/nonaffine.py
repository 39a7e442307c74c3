# nonaffine.py

"""
Nonaffine rank 3 groups: imprimitive groups, groups preserving a product decomposition of the
domain, and almost simple groups.
"""

import logging
from dataclasses import dataclass
from math import isqrt
from typing import Optional

import networkx as nx
import numpy as np

from .aut import oracle_two_closure
from .errors import ClosureError, ConsistencyError, OracleUnavailableError
from .formulas import hamming_subdegrees, product_order, wreath_order
from .orbitals import OrbitalStructure, two_orbits
from .outcome import BranchOutcome, candidate_is_sound
from .perm import BlockSystem, Permutation, PermutationGroup, is_simple_nonabelian, socle_primitive
from .settings import Settings, get_settings

logger = logging.getLogger(__name__)

BRANCH = "nonaffine"


@dataclass(frozen=True, eq=False)
class HammingLabelling:
    """Each point gets a (row, column) pair in {0, ..., q-1}^2."""

    q: int
    rows: np.ndarray
    cols: np.ndarray

    def grid(self) -> np.ndarray:
        """``grid[r, c]`` is the point labelled (r, c)."""
        out = np.empty((self.q, self.q), dtype=np.int64)
        out[self.rows, self.cols] = np.arange(self.q * self.q)
        return out


def imprimitive_closure(group: PermutationGroup, blocks: BlockSystem) -> PermutationGroup:
    """
    Sym(block) wr Sym(blocks) aligned to the given block system.

    Raises:
        ValueError: If the block system is trivial
    """
    n, k, s = group.degree, blocks.block_count, blocks.block_size
    if k in (1, n) or s in (1, n):
        raise ValueError("block system is trivial")
    cells = [sorted(b) for b in blocks.blocks]
    gens = [Permutation.from_cycles(n, [(cells[0][0], cells[0][1])])]
    if s > 2:
        gens.append(Permutation.from_cycles(n, [tuple(cells[0])]))
    swap = list(range(n))
    for x, y in zip(cells[0], cells[1]):
        swap[x], swap[y] = y, x
    gens.append(Permutation(swap, check=False))
    if k > 2:
        shift = list(range(n))
        for i in range(k):
            for x, y in zip(cells[i], cells[(i + 1) % k]):
                shift[x] = y
        gens.append(Permutation(shift, check=False))
    closure = PermutationGroup(n, gens)
    if closure.order != wreath_order(s, k):
        raise ConsistencyError(f"wreath product of order {closure.order}, expected {wreath_order(s, k)}")
    return closure


def orbital_graph(structure: OrbitalStructure, color: int) -> nx.Graph:
    """Undirected graph of a colour class together with its paired class."""
    graph = nx.Graph()
    graph.add_nodes_from(range(structure.degree))
    colors = {color, structure.paired(color)}
    mask = np.isin(structure.table, list(colors))
    graph.add_edges_from((int(i), int(j)) for i, j in np.argwhere(np.triu(mask, 1)))
    return graph


def recognize_h2(graph: nx.Graph) -> Optional[HammingLabelling]:
    """
    Recognise the q x q rook's graph and label its vertices by rows and columns.

    Lines are the closed common neighbourhoods of edges; each must be a q-clique and every
    vertex must lie on exactly two of them.

    Args:
        graph (nx.Graph): Graph on the vertices 0, ..., n-1

    Returns:
        Optional[HammingLabelling]: The labelling, or None if the graph is not H(2, q)
    """
    n = graph.number_of_nodes()
    q = isqrt(n)
    if q < 2 or q * q != n:
        return None
    if any(deg != 2 * (q - 1) for _, deg in graph.degree()):
        return None

    lines: dict[frozenset[int], None] = {}
    for u, v in graph.edges():
        line = frozenset({u, v, *nx.common_neighbors(graph, u, v)})
        if line in lines:
            continue
        if len(line) != q or graph.subgraph(line).number_of_edges() != q * (q - 1) // 2:
            return None
        lines[line] = None
    ordered = sorted(lines, key=lambda line: sorted(line))
    on_point: dict[int, list[int]] = {x: [] for x in range(n)}
    for k, line in enumerate(ordered):
        for x in line:
            on_point[x].append(k)
    if any(len(ks) != 2 for ks in on_point.values()):
        return None

    meet = nx.Graph()
    meet.add_nodes_from(range(len(ordered)))
    meet.add_edges_from(tuple(ks) for ks in on_point.values())
    if not nx.is_connected(meet) or not nx.is_bipartite(meet):
        return None
    side = nx.bipartite.color(meet)
    row_side = side[0]
    row_lines = [k for k in range(len(ordered)) if side[k] == row_side]
    col_lines = [k for k in range(len(ordered)) if side[k] != row_side]
    if len(row_lines) != q or len(col_lines) != q:
        return None
    row_of = {k: r for r, k in enumerate(row_lines)}
    col_of = {k: c for c, k in enumerate(col_lines)}
    rows = np.empty(n, dtype=np.int64)
    cols = np.empty(n, dtype=np.int64)
    for x, ks in on_point.items():
        r = next(k for k in ks if k in row_of)
        c = next(k for k in ks if k in col_of)
        rows[x], cols[x] = row_of[r], col_of[c]

    adjacency = nx.to_numpy_array(graph, nodelist=range(n), dtype=np.int64).astype(bool)
    predicted = (rows[:, None] == rows[None, :]) ^ (cols[:, None] == cols[None, :])
    if not np.array_equal(adjacency, predicted):
        return None
    return HammingLabelling(q, rows, cols)


def product_closure(labelling: HammingLabelling) -> PermutationGroup:
    """Sym(q) wr Sym(2) in product action on the labelled grid."""
    q, grid = labelling.q, labelling.grid()
    n = q * q

    def from_grid_map(fn) -> Permutation:
        images = [0] * n
        for r in range(q):
            for c in range(q):
                r2, c2 = fn(r, c)
                images[int(grid[r, c])] = int(grid[r2, c2])
        return Permutation(images, check=False)

    cycle = [(i + 1) % q for i in range(q)]
    swap01 = [1, 0] + list(range(2, q))
    gens = [
        from_grid_map(lambda r, c: (swap01[r], c)),
        from_grid_map(lambda r, c: (cycle[r], c)),
        from_grid_map(lambda r, c: (r, swap01[c])),
        from_grid_map(lambda r, c: (r, cycle[c])),
        from_grid_map(lambda r, c: (c, r)),
    ]
    closure = PermutationGroup(n, gens)
    if closure.order != product_order(q):
        raise ConsistencyError(f"product action group of order {closure.order}, expected {product_order(q)}")
    return closure


def almost_simple_closure(
    group: PermutationGroup, settings: Optional[Settings] = None, socle: Optional[PermutationGroup] = None
) -> Optional[PermutationGroup]:
    """
    Closure of a primitive group with nonabelian simple socle, read off the oracle.

    The socle is computed unless given.

    Returns:
        Optional[PermutationGroup]: The closure, or None if the socle is not simple

    Raises:
        OracleUnavailableError: If the degree is above the oracle cap
    """
    settings = settings or get_settings()
    socle = socle or socle_primitive(group, settings)
    if not is_simple_nonabelian(socle, settings):
        return None
    return oracle_two_closure(group, settings)


def _hamming_colors(structure: OrbitalStructure) -> tuple[list[int], Optional[str]]:
    n = structure.degree
    q = isqrt(n)
    if q * q != n or tuple(structure.subdegrees) != hamming_subdegrees(q):
        return [], "subdegrees are not those of H(2, q)"
    colors = [c for c in structure.nondiagonal_colors if structure.subdegree(c) == 2 * (q - 1)]
    symmetric = [c for c in colors if structure.is_symmetric(c)]
    if not symmetric:
        return [], "2-orbits are paired; no undirected orbital graph"
    return symmetric, None


def run_nonaffine(
    group: PermutationGroup,
    structure: Optional[OrbitalStructure] = None,
    settings: Optional[Settings] = None,
) -> BranchOutcome:
    """
    Imprimitive, then product decomposition, then almost simple; affine groups fail.

    Args:
        group (PermutationGroup): Transitive rank 3 group
        structure (Optional[OrbitalStructure]): Its 2-orbits, if already computed
        settings (Optional[Settings]): Caps

    Returns:
        BranchOutcome: The closure with the sub-case in its notes, or a failure
    """
    settings = settings or get_settings()
    structure = structure or two_orbits(group, settings)
    notes: list[str] = []
    try:
        blocks = group.minimal_blocks()
        if blocks is not None:
            closure = imprimitive_closure(group, blocks)
            notes.append(f"imprimitive: {blocks.block_count} blocks of size {blocks.block_size}")
            return _checked(group, closure, structure, notes, case="imprimitive")

        colors, reason = _hamming_colors(structure)
        if reason:
            notes.append(f"product step skipped: {reason}")
        for color in colors:
            labelling = recognize_h2(orbital_graph(structure, color))
            if labelling is not None:
                notes.append(f"product: Hamming labelling with q={labelling.q}")
                return _checked(group, product_closure(labelling), structure, notes, case="product")
        if colors:
            notes.append("product step: no Hamming labelling")

        socle = socle_primitive(group, settings)
        if socle.is_abelian():
            return BranchOutcome.failure(BRANCH, "affine group", notes)
        closure = almost_simple_closure(group, settings, socle)
        if closure is None:
            return BranchOutcome.failure(BRANCH, "socle is not simple", notes)
        notes.append(f"almost simple: socle of order {socle.order}")
        return _checked(group, closure, structure, notes, case="almost simple")
    except OracleUnavailableError as e:
        return BranchOutcome.failure(BRANCH, f"almost simple case needs the oracle: {e}", notes)
    except ClosureError as e:
        return BranchOutcome.failure(BRANCH, str(e), notes)


def _checked(
    group: PermutationGroup,
    closure: PermutationGroup,
    structure: OrbitalStructure,
    notes: list[str],
    case: str,
) -> BranchOutcome:
    if not candidate_is_sound(group, closure, structure):
        return BranchOutcome.failure(BRANCH, f"{case} candidate failed verification", notes)
    logger.info(f"Nonaffine branch ({case}): order {closure.order}")
    return BranchOutcome.success(BRANCH, closure, notes, case=case)
