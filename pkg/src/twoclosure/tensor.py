# tensor.py

"""
Affine groups preserving a tensor decomposition V = U (x) W with dim U = 2: recover a tensor
basis and emit the automorphism group of the bilinear forms graph.
"""

import logging
import random
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .affine import AffineFrame, FieldFrame, detect_affine, matrix_of
from .errors import ClosureError, ConsistencyError
from .formulas import order_sl, tensor_closure_order
from .gf import FieldStructure, enumerate_field_structures, matmul_mod, rank_mod
from .orbitals import OrbitalStructure, two_orbits
from .outcome import BranchOutcome, candidate_is_sound
from .perm import Permutation, PermutationGroup, derived_subgroup, normal_closure
from .settings import Settings, get_settings

logger = logging.getLogger(__name__)

BRANCH = "tensor"
SLW_SAMPLES = 32


@dataclass(frozen=True, eq=False)
class TensorBasis:
    """``vectors[i, j]`` is the vector index of u_i (x) w_j."""

    fs: FieldStructure
    m: int
    vectors: np.ndarray

    def field_frame(self, frame: AffineFrame) -> FieldFrame:
        return FieldFrame(frame, self.fs, frame.vectors[self.vectors.ravel()])


def _p_part(s: int, p: int) -> int:
    q = 1
    while s % p == 0:
        s //= p
        q *= p
    return q


def tensor_parameters(structure: OrbitalStructure, p: int) -> Optional[tuple[int, int]]:
    """
    (q, m) with n = q^(2m), q the largest power of p dividing a subdegree.

    The larger subdegree is tried first, then the smaller one.
    """
    ok, subdegrees = structure.is_rank3()
    if not ok:
        return None
    n = structure.degree
    for s in (subdegrees[1], subdegrees[0]):
        q = _p_part(s, p)
        if q == 1:
            continue
        m, size = 0, 1
        while size < n:
            size *= q * q
            m += 1
        if size == n:
            return q, m
    return None


def simple_tensor_indices(ff: FieldFrame, m: int) -> np.ndarray:
    """Indices of all formal products alpha (x) beta in the frame's GF(q)-basis."""
    fs = ff.fs
    q = fs.q
    alphas = np.indices((q, q)).reshape(2, -1).T
    betas = np.indices((q,) * m).reshape(m, -1).T
    coords = fs.mul_table[alphas[:, None, :, None], betas[None, :, None, :]]
    return np.unique(ff.index_from_coords(coords.reshape(-1, 2 * m)))


def check_tensor_basis(frame: AffineFrame, fs: FieldStructure, basis: TensorBasis) -> bool:
    """
    True iff every generator of G0 maps simple tensors of the basis to simple tensors.
    """
    try:
        ff = basis.field_frame(frame)
        simple = simple_tensor_indices(ff, basis.m)
    except ValueError:
        return False
    mask = np.zeros(frame.n, dtype=bool)
    mask[simple] = True
    for g in frame.g0.generators:
        if not mask[frame.index_map_of(g)[simple]].all():
            return False
    return True


class _Spans:
    def __init__(self, frame: AffineFrame, fs: FieldStructure):
        self.frame = frame
        self.ff = FieldFrame.with_standard_basis(frame, fs)
        self.multiples = self.ff.scale_tables[1:]

    def extend(self, span: np.ndarray, v: int) -> np.ndarray:
        new = self.ff.add_index(span[:, None], self.multiples[None, :, v])
        return np.concatenate([span, new.ravel()])

    def of(self, *vectors: int) -> np.ndarray:
        return self.ff.span(vectors)


def _simple_mask(frame: AffineFrame, structure: OrbitalStructure, q: int, m: int) -> Optional[np.ndarray]:
    colour = structure.table[frame.zero][frame.point_at]
    want = (q + 1) * (q**m - 1)
    matches = [c for c in structure.nondiagonal_colors if structure.subdegree(c) == want]
    if not matches:
        return None
    mask = colour == matches[0]
    mask[0] = True
    return mask


def _scan_basis(frame: AffineFrame, fs: FieldStructure, m: int, in_t: np.ndarray) -> Optional[TensorBasis]:
    spans = _Spans(frame, fs)
    orbit = np.flatnonzero(in_t)[1:]
    v00 = int(orbit[0])

    def rows(prefix: list[int], span: np.ndarray) -> Iterator[list[int]]:
        if len(prefix) == m:
            yield prefix
            return
        taken = set(span.tolist())
        for v in orbit:
            v = int(v)
            if v <= prefix[-1] or v in taken:
                continue
            new = spans.extend(span, v)
            if in_t[new].all():
                yield from rows(prefix + [v], new)

    row0 = next(rows([v00], spans.of(v00)), None)
    if row0 is None:
        return None
    row0_span = set(spans.of(*row0).tolist())
    for v10 in orbit:
        v10 = int(v10)
        if v10 in row0_span or not in_t[spans.of(v00, v10)].all():
            continue
        row1 = [v10]
        for v0j in row0[1:]:
            corner = spans.ff.add_index(spans.ff.add_index(np.array(v00), np.array(v0j)), np.array(v10))
            pinned = None
            for w in orbit:
                w = int(w)
                if not in_t[int(spans.ff.add_index(corner, np.array(w)))]:
                    continue
                if in_t[spans.of(v0j, w)].all() and in_t[spans.of(v10, w)].all():
                    pinned = w
                    break
            if pinned is None:
                break
            row1.append(pinned)
        if len(row1) != m:
            continue
        basis = TensorBasis(fs, m, np.array([row0, row1], dtype=np.int64))
        if check_tensor_basis(frame, fs, basis):
            return basis
        logger.debug("Scanned tensor basis rejected by the generator check")
    return None


def _submodule_dimension(frame: AffineFrame, fs: FieldStructure, mats: list[np.ndarray], *vectors: int) -> int:
    """GF(q)-dimension of the smallest invariant subspace containing the given vectors."""
    rows = np.vstack([fs.span_rows(frame.vectors[v]) for v in vectors])
    rank = rank_mod(rows, fs.p)
    while True:
        grown = np.vstack([rows] + [matmul_mod(rows, g, fs.p) for g in mats])
        new_rank = rank_mod(grown, fs.p)
        if new_rank == rank:
            return rank // fs.e
        rows, rank = grown, new_rank


def extract_slw(
    frame: AffineFrame,
    fs: FieldStructure,
    m: int,
    in_t: Optional[np.ndarray] = None,
    settings: Optional[Settings] = None,
) -> PermutationGroup:
    """
    The normal subgroup SL(W) of G0.

    Normal closures of sampled elements of G0'' are classified by the GF(q)-dimension of the
    submodule they generate from a simple tensor; the join of those of dimension m, made
    perfect, must have order |SL_m(q)|.

    Raises:
        ClosureError: If SL(W) is not identified
    """
    settings = settings or get_settings()
    if m < 4:
        raise ClosureError("SL(W) extraction needs m >= 4")
    q = fs.q
    h = derived_subgroup(derived_subgroup(frame.g0))
    ff = FieldFrame.with_standard_basis(frame, fs)
    scalars = {
        frame.permutation_from_index_map(ff.scale_tables[code]).images for code in range(1, q)
    }
    start = int(np.flatnonzero(in_t)[1]) if in_t is not None else 1
    rng = random.Random(settings.seed)
    target = order_sl(m, q)
    found: list[Permutation] = []
    for _ in range(SLW_SAMPLES):
        x = h.random_element(rng)
        if x.images in scalars:
            continue
        closure = normal_closure(h, [x], check=False)
        mats = [matrix_of(frame, g) for g in closure.generators]
        if _submodule_dimension(frame, fs, mats, start) != m:
            continue
        found.extend(closure.generators)
        slw = derived_subgroup(PermutationGroup(frame.n, found))
        if slw.order == target:
            if derived_subgroup(slw).order != slw.order:
                raise ClosureError("candidate SL(W) is not perfect")
            logger.info(f"SL(W) found: order {slw.order}")
            return slw
    raise ClosureError(f"SL(W) of order {target} not identified")


def shift_independent(
    s: PermutationGroup, p_space: set[int], q_space: set[int], frame: AffineFrame
) -> Optional[Permutation]:
    """
    Find g in S with P^g meeting Q only in 0, by scanning the S-orbit of P.

    P and Q are subspaces given as sets of vector indices.
    """
    start = frozenset(p_space)
    gens = [(g, frame.index_map_of(g)) for g in s.generators]
    seen = {start: s.identity()}
    queue = [start]
    for subspace in queue:
        if len(subspace & q_space) == 1:
            return seen[subspace]
        element = seen[subspace]
        for g, index_map in gens:
            image = frozenset(int(index_map[x]) for x in subspace)
            if image not in seen:
                seen[image] = element * g
                queue.append(image)
    return None


def _constructive_basis(
    frame: AffineFrame, fs: FieldStructure, m: int, in_t: np.ndarray, settings: Settings
) -> Optional[TensorBasis]:
    slw = extract_slw(frame, fs, m, in_t, settings)
    spans = _Spans(frame, fs)
    mats = [matrix_of(frame, g) for g in slw.generators]
    orbit = np.flatnonzero(in_t)[1:]
    v1 = int(orbit[0])
    for v2 in orbit:
        v2 = int(v2)
        plane = spans.of(v1, v2)
        if len(set(plane.tolist())) != fs.q**2 or not in_t[plane].all():
            continue
        p_space = set(plane.tolist())
        # U-type planes generate all of V under SL(W); W-type ones only u (x) W.
        if _submodule_dimension(frame, fs, mats, v1, v2) != 2 * m:
            continue
        q_span = np.zeros(1, dtype=np.int64)
        row0: list[int] = []
        row1: list[int] = []
        for j in range(m):
            g = shift_independent(slw, p_space, set(q_span.tolist()), frame)
            if g is None:
                break
            index_map = frame.index_map_of(g)
            a, b = int(index_map[v1]), int(index_map[v2])
            row0.append(a)
            row1.append(b)
            q_span = spans.extend(spans.extend(q_span, a), b)
            if len(set(q_span.tolist())) != fs.q ** (2 * (j + 1)):
                raise ConsistencyError("accumulated sum of planes is not direct")
        if len(row0) != m:
            continue
        basis = TensorBasis(fs, m, np.array([row0, row1], dtype=np.int64))
        if check_tensor_basis(frame, fs, basis):
            return basis
    return None


def find_tensor_basis(
    frame: AffineFrame,
    fs: FieldStructure,
    m: int,
    structure: Optional[OrbitalStructure] = None,
    settings: Optional[Settings] = None,
    notes: Optional[list[str]] = None,
) -> Optional[TensorBasis]:
    """
    Find a tensor basis over the field ``fs``.

    For m <= 3 candidate vectors are scanned inside the orbit of simple tensors. For m >= 4 a
    plane U (x) w is moved around by SL(W) until the images span V; the scan is the fallback.

    Returns:
        Optional[TensorBasis]: A basis passing ``check_tensor_basis``, or None
    """
    settings = settings or get_settings()
    notes = notes if notes is not None else []
    structure = structure or two_orbits(frame.group, settings)
    in_t = _simple_mask(frame, structure, fs.q, m)
    if in_t is None:
        return None
    if m >= 4:
        try:
            basis = _constructive_basis(frame, fs, m, in_t, settings)
            if basis is not None:
                return basis
            notes.append("constructive tensor basis failed; scanning")
        except ClosureError as e:
            notes.append(f"SL(W) route unavailable ({e}); scanning")
    return _scan_basis(frame, fs, m, in_t)


def kron_codes(fs: FieldStructure, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return fs.mul_table[a[:, None, :, None], b[None, :, None, :]].reshape(a.shape[0] * b.shape[0], -1)


def gl_generators(fs: FieldStructure, n: int) -> list[np.ndarray]:
    """diag(c, 1, ...), I + E_01, the n-cycle and the transposition (0 1), as code matrices."""
    eye = np.eye(n, dtype=np.int64)
    gens = []
    if fs.q > 2:
        scalar = eye.copy()
        scalar[0, 0] = 2
        gens.append(scalar)
    if n == 1:
        return gens
    transvection = eye.copy()
    transvection[0, 1] = 1
    gens.append(transvection)
    gens.append(np.roll(eye, 1, axis=1))
    swap = eye.copy()
    swap[[0, 1]] = swap[[1, 0]]
    gens.append(swap)
    return gens


def emit_tensor_closure(frame: AffineFrame, basis: TensorBasis) -> PermutationGroup:
    """
    F^(2m) x| ((GL_2(q) o GL_m(q)) x| Aut(F)) in the tensor basis, with the factor swap when m = 2.

    Raises:
        ConsistencyError: If the emitted group does not have the expected order
    """
    fs, m = basis.fs, basis.m
    ff = basis.field_frame(frame)
    eye_u = np.eye(2, dtype=np.int64)
    eye_w = np.eye(m, dtype=np.int64)
    gens = list(frame.translations)
    for a in gl_generators(fs, 2):
        gens.append(ff.semilinear_permutation(kron_codes(fs, a, eye_w)))
    for b in gl_generators(fs, m):
        gens.append(ff.semilinear_permutation(kron_codes(fs, eye_u, b)))
    if fs.e > 1:
        gens.append(ff.semilinear_permutation(np.eye(2 * m, dtype=np.int64), frob=1))
    if m == 2:
        flip = np.zeros((4, 4), dtype=np.int64)
        for i in range(2):
            for j in range(2):
                flip[i * 2 + j, j * 2 + i] = 1
        gens.append(ff.semilinear_permutation(flip))
    closure = PermutationGroup(frame.n, gens)
    expected = tensor_closure_order(fs.q, m)
    if closure.order != expected:
        raise ConsistencyError(f"tensor closure of order {closure.order}, expected {expected}")
    return closure


def run_tensor(
    group: PermutationGroup,
    structure: Optional[OrbitalStructure] = None,
    settings: Optional[Settings] = None,
    frame: Optional[AffineFrame] = None,
) -> BranchOutcome:
    """
    Try every field GF(q) normalised by G0 for a tensor basis and emit the closure.

    Args:
        group (PermutationGroup): Transitive rank 3 group
        structure (Optional[OrbitalStructure]): Its 2-orbits, if already computed
        settings (Optional[Settings]): Caps
        frame (Optional[AffineFrame]): Affine frame, if already computed

    Returns:
        BranchOutcome: The first verified closure in field enumeration order, or a failure
    """
    settings = settings or get_settings()
    notes: list[str] = []
    try:
        structure = structure or two_orbits(group, settings)
        frame = frame or detect_affine(group, settings)
        if frame is None:
            return BranchOutcome.failure(BRANCH, "not affine", notes)
        params = tensor_parameters(structure, frame.p)
        if params is None:
            return BranchOutcome.failure(BRANCH, "n is not q^(2m)", notes)
        q, m = params
        derived = derived_subgroup(frame.g0)
        fields, complete = enumerate_field_structures(
            frame.g0_matrices, [matrix_of(frame, g) for g in derived.generators], frame.p, frame.d, settings
        )
        if not complete:
            notes.append("field enumeration incomplete")
        for _, fs in fields:
            if fs.q != q:
                continue
            basis = find_tensor_basis(frame, fs, m, structure, settings, notes)
            if basis is None:
                continue
            closure = emit_tensor_closure(frame, basis)
            if candidate_is_sound(group, closure, structure):
                logger.info(f"Tensor branch: q={q}, m={m}, order {closure.order}")
                return BranchOutcome.success(BRANCH, closure, notes, q=q, m=m)
            notes.append(f"q={q}, m={m}: candidate failed verification")
    except ClosureError as e:
        return BranchOutcome.failure(BRANCH, str(e), notes)
    return BranchOutcome.failure(BRANCH, "no embedding gives a tensor product basis", notes)
