# affine.py

"""
Affine structure G = V x| G0: identify the domain with GF(p)^d and read G0 as matrices.
"""

import logging
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from .errors import InconsistentFrameError
from .gf import FieldStructure, inv_mod_mat, mod_p, prime_power
from .perm import Permutation, PermutationGroup, minimal_normal_subgroups
from .settings import Settings, get_settings

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class AffineFrame:
    """
    Bijection between the domain and GF(p)^d with point 0 as the zero vector.

    ``point_at[i]`` is the point labelled by the vector whose base-p digits are the digits of
    ``i`` (least significant first); ``index_of`` is its inverse.
    """

    group: PermutationGroup
    p: int
    d: int
    translations: tuple[Permutation, ...]
    point_at: np.ndarray
    index_of: np.ndarray
    g0: PermutationGroup
    warnings: list[str] = field(default_factory=list)

    zero: int = 0

    @property
    def n(self) -> int:
        return self.p**self.d

    @cached_property
    def weights(self) -> np.ndarray:
        return self.p ** np.arange(self.d, dtype=np.int64)

    @cached_property
    def vectors(self) -> np.ndarray:
        """Row i is the vector with index i."""
        idx = np.arange(self.n, dtype=np.int64)
        return (idx[:, None] // self.weights[None, :]) % self.p

    def vector(self, point: int) -> np.ndarray:
        return self.vectors[self.index_of[point]]

    def point(self, vector: Sequence[int]) -> int:
        return int(self.point_at[int(mod_p(np.asarray(vector), self.p) @ self.weights)])

    def indices(self, vectors: np.ndarray) -> np.ndarray:
        return mod_p(vectors, self.p) @ self.weights

    @cached_property
    def g0_matrices(self) -> list[np.ndarray]:
        return [matrix_of(self, g) for g in self.g0.generators]

    def permutation_from_affine(self, matrix: np.ndarray, shift: Optional[Sequence[int]] = None) -> Permutation:
        """Permutation of v -> v M + shift."""
        images_vec = self.vectors @ matrix
        if shift is not None:
            images_vec = images_vec + np.asarray(shift, dtype=np.int64)[None, :]
        return self.permutation_from_index_map(self.indices(images_vec))

    def permutation_from_matrix(self, matrix: np.ndarray) -> Permutation:
        return self.permutation_from_affine(matrix)

    def permutation_from_index_map(self, index_map: np.ndarray) -> Permutation:
        """Permutation sending the point with index i to the point with index ``index_map[i]``."""
        images = np.empty(self.n, dtype=np.int64)
        images[self.point_at] = self.point_at[index_map]
        return Permutation(images.tolist(), check=False)

    def translation(self, vector: Sequence[int]) -> Permutation:
        return self.permutation_from_affine(np.eye(self.d, dtype=np.int64), vector)

    def index_map_of(self, g: Permutation) -> np.ndarray:
        """Index i -> index of g(point_at[i])."""
        return self.index_of[np.asarray(g.images)[self.point_at]]


def _elementary_abelian(group: PermutationGroup, p: int) -> bool:
    return group.is_abelian() and all(g.order() in (1, p) for g in group.generators)


def detect_affine(group: PermutationGroup, settings: Optional[Settings] = None) -> Optional[AffineFrame]:
    """
    Find a regular elementary abelian normal subgroup and build the labelling from it.

    Args:
        group (PermutationGroup): A transitive group
        settings (Optional[Settings]): Caps for the socle search

    Returns:
        Optional[AffineFrame]: The frame, or None if the group is not affine
    """
    settings = settings or get_settings()
    n = group.degree
    pp = prime_power(n)
    if pp is None or not group.is_transitive():
        return None
    p, d = pp
    minimal = minimal_normal_subgroups(group, settings)
    candidates = [m for m in minimal if m.order == n and _elementary_abelian(m, p) and m.is_transitive()]
    if not candidates:
        return None
    warnings = []
    if len(candidates) > 1:
        warnings.append("two regular elementary abelian normal subgroups; using the first")
        logger.warning(warnings[-1])
    v = candidates[0]

    basis: list[Permutation] = []
    point_at = [0]
    covered = {0}
    for x in range(1, n):
        if len(point_at) == n:
            break
        if x in covered:
            continue
        t = v.transporter(0, x)
        basis.append(t)
        block = list(point_at)
        layers = [block]
        for _ in range(p - 1):
            block = [t.images[y] for y in block]
            layers.append(block)
        point_at = [y for layer in layers for y in layer]
        covered = set(point_at)
    if len(basis) != d:
        raise InconsistentFrameError(f"translation basis of size {len(basis)} for degree {n}")
    point_at_arr = np.asarray(point_at, dtype=np.int64)
    index_of = np.empty(n, dtype=np.int64)
    index_of[point_at_arr] = np.arange(n)
    g0 = group.point_stabilizer(0)
    frame = AffineFrame(group, p, d, tuple(basis), point_at_arr, index_of, g0, warnings)
    logger.info(f"Affine frame: p={p}, d={d}, |G0|={g0.order}")
    return frame


def matrix_of(frame: AffineFrame, g: Permutation, checks: int = 8) -> np.ndarray:
    """
    Matrix of an element of G0 in the frame's basis.

    Rows are the labels of the images of the basis points; the result is checked on
    ``checks`` seeded random points.

    Raises:
        InconsistentFrameError: If g does not act linearly on the labels
    """
    if g.images[frame.zero] != frame.zero:
        raise InconsistentFrameError("element does not fix the zero point")
    rows = [frame.vector(g.images[int(frame.point_at[frame.p**k])]) for k in range(frame.d)]
    m = np.asarray(rows, dtype=np.int64).reshape(frame.d, frame.d)
    rng = random.Random(0)
    for _ in range(checks):
        x = rng.randrange(frame.n)
        expected = frame.vector(g.images[int(frame.point_at[x])])
        if not np.array_equal(mod_p(frame.vectors[x] @ m, frame.p), expected):
            raise InconsistentFrameError(f"element is not linear on the labels (index {x})")
    return m


@dataclass(eq=False)
class FieldFrame:
    """
    An affine frame together with a field GF(q) acting by scalars and a GF(q)-basis.

    Coordinates of every vector over GF(q) are precomputed as field codes.
    """

    frame: AffineFrame
    fs: FieldStructure
    basis: np.ndarray

    @classmethod
    def with_standard_basis(cls, frame: AffineFrame, fs: FieldStructure) -> "FieldFrame":
        """Greedy GF(q)-basis from the GF(p) unit vectors."""
        rows: list[np.ndarray] = []
        for k in range(frame.d):
            candidate = np.eye(frame.d, dtype=np.int64)[k]
            if fs.rank(np.asarray(rows + [candidate])) == len(rows) + 1:
                rows.append(candidate)
            if len(rows) == fs.a:
                break
        return cls(frame, fs, np.asarray(rows, dtype=np.int64))

    @property
    def q(self) -> int:
        return self.fs.q

    @property
    def dim(self) -> int:
        return self.fs.a

    @cached_property
    def _expanded(self) -> np.ndarray:
        """Rows b_j c^t (j outer, t inner) as a GF(p)-basis of V."""
        fs = self.fs
        return np.vstack([mod_p(b @ fs.powers[t % len(fs.powers)], fs.p) for b in self.basis for t in range(fs.e)])

    @cached_property
    def coords(self) -> np.ndarray:
        """GF(q)-coordinates (codes) of each vector index; shape (n, a)."""
        fs = self.fs
        inverse = inv_mod_mat(self._expanded, fs.p)
        x = mod_p(self.frame.vectors @ inverse, fs.p).reshape(-1, self.dim, fs.e)
        poly_index = x @ (fs.p ** np.arange(fs.e, dtype=np.int64))
        return fs.poly_codes[poly_index]

    @cached_property
    def coord_weights(self) -> np.ndarray:
        return self.q ** np.arange(self.dim, dtype=np.int64)

    @cached_property
    def index_of_coords(self) -> np.ndarray:
        """Vector index of each coordinate tuple, keyed by sum codes_j q^j."""
        out = np.empty(self.frame.n, dtype=np.int64)
        out[self.coords @ self.coord_weights] = np.arange(self.frame.n)
        return out

    def index_from_coords(self, coords: np.ndarray) -> np.ndarray:
        return self.index_of_coords[np.asarray(coords) @ self.coord_weights]

    @cached_property
    def scale_tables(self) -> np.ndarray:
        """``scale_tables[code][i]`` is the index of (vector i) * code."""
        fs = self.fs
        out = np.zeros((fs.q, self.frame.n), dtype=np.int64)
        for code in range(1, fs.q):
            out[code] = self.frame.indices(self.frame.vectors @ fs.matrix(code))
        return out

    def add_index(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        v = self.frame.vectors
        return self.frame.indices(v[i] + v[j])

    def span(self, indices: Sequence[int]) -> np.ndarray:
        """Vector indices of the GF(q)-span, with repeats when the vectors are dependent."""
        out = np.zeros(1, dtype=np.int64)
        for v in indices:
            new = self.add_index(out[:, None], self.scale_tables[1:, int(v)][None, :])
            out = np.concatenate([out, new.ravel()])
        return out

    def apply(self, matrix: np.ndarray, frob: int = 0, coords: Optional[np.ndarray] = None) -> np.ndarray:
        """
        Images of coordinate rows under x -> x^(p^frob) A, with A an a x a matrix of codes.

        Returns:
            np.ndarray: Image coordinates (codes)
        """
        fs = self.fs
        x = self.coords if coords is None else np.asarray(coords)
        if frob:
            x = frobenius_codes(fs, x, frob)
        mul, add = fs.mul_table, fs.add_table
        a = np.asarray(matrix, dtype=np.int64)
        out = np.zeros(x.shape, dtype=np.int64)
        for s in range(self.dim):
            acc = np.zeros(x.shape[0], dtype=np.int64)
            for j in range(self.dim):
                acc = add[acc, mul[x[:, j], a[j, s]]]
            out[:, s] = acc
        return out

    def semilinear_permutation(
        self, matrix: np.ndarray, frob: int = 0, shift: Optional[Sequence[int]] = None
    ) -> Permutation:
        """Permutation of x -> x^(p^frob) A + shift in GF(q)-coordinates."""
        images = self.apply(matrix, frob)
        if shift is not None:
            add = self.fs.add_table
            images = add[images, np.asarray(shift, dtype=np.int64)[None, :]]
        return self.frame.permutation_from_index_map(self.index_from_coords(images))

    def matrix_codes(self, g: np.ndarray, frob: int) -> np.ndarray:
        """
        GF(q)-matrix of a GF(p)-matrix that is semilinear with Frobenius exponent ``frob``.

        Row j holds the coordinates of b_j g, so that x^g = x^(p^frob) A.
        """
        images = mod_p(self.basis @ g, self.fs.p)
        return self.coords[self.frame.indices(images)]


def frobenius_codes(fs: FieldStructure, x: np.ndarray, i: int) -> np.ndarray:
    if fs.units <= 1:
        return x
    k = pow(fs.p, i % max(fs.e, 1), fs.units)
    return np.where(x == 0, 0, ((x - 1) * k) % fs.units + 1)
