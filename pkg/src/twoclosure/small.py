# small.py

"""
Affine rank 3 groups of small order: the closure is found inside enumerable semilinear
overgroups AGammaL_a(q) by backtracking.
"""

import logging
import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .affine import AffineFrame, FieldFrame, detect_affine, matrix_of
from .errors import ClosureError, TooLargeError
from .formulas import order_gl
from .gf import FieldStructure, enumerate_field_structures
from .orbitals import OrbitalStructure, two_orbits
from .outcome import BranchOutcome, candidate_is_sound, largest
from .perm import Permutation, PermutationGroup, StabilizerChain, derived_subgroup
from .settings import Settings, get_settings

logger = logging.getLogger(__name__)

BRANCH = "small"
MAX_A = 48
CLASS_S_A = 16


@dataclass(frozen=True, eq=False)
class EmbeddingCandidate:
    a: int
    fs: FieldStructure
    provenance: str

    def __repr__(self) -> str:
        return f"EmbeddingCandidate(a={self.a}, q={self.fs.q}, {self.provenance})"


def order_gate(group: PermutationGroup) -> bool:
    return group.order <= group.degree**18


def small_generating_tuple(
    g0: PermutationGroup, k: int = 4, settings: Optional[Settings] = None
) -> Optional[tuple[Permutation, ...]]:
    """
    Find k elements generating G0.

    Seeded random k-tuples first; then, if |G0|^k is within ``tuple_scan_cap``, an exhaustive
    layered search over subgroups generated by j elements.

    Raises:
        TooLargeError: If |G0| exceeds ``point_stabilizer_cap``
    """
    settings = settings or get_settings()
    order = g0.order
    if order > settings.point_stabilizer_cap:
        raise TooLargeError("zero stabilizer", order, settings.point_stabilizer_cap)
    identity = g0.identity()
    gens = [g for g in g0.generators if not g.is_identity()]
    if len(gens) <= k:
        return tuple(gens + [identity] * (k - len(gens)))

    elements = g0.enumerate_elements(cap=settings.point_stabilizer_cap)
    rng = random.Random(settings.seed)
    for _ in range(settings.tuple_tries):
        chosen = [elements[rng.randrange(order)] for _ in range(k)]
        if PermutationGroup(g0.degree, chosen).order == order:
            return tuple(chosen)

    if order**k > settings.tuple_scan_cap:
        logger.warning(f"No {k}-generating tuple found by sampling; |G0|^{k} is beyond the scan cap")
        return None
    layer: dict[frozenset, tuple[Permutation, ...]] = {frozenset([identity.images]): ()}
    for _ in range(k):
        nxt: dict[frozenset, tuple[Permutation, ...]] = {}
        for members, word in layer.items():
            for x in elements:
                if x.images in members:
                    continue
                sub = PermutationGroup(g0.degree, list(word) + [x])
                if sub.order == order:
                    found = list(word) + [x]
                    return tuple(found + [identity] * (k - len(found)))
                key = frozenset(g.images for g in sub.enumerate_elements(cap=order))
                nxt.setdefault(key, tuple(word) + (x,))
        layer = nxt
        if not layer:
            break
    return None


def embeddings_small(
    frame: AffineFrame, settings: Optional[Settings] = None
) -> tuple[list[EmbeddingCandidate], bool, bool]:
    """
    Semilinear overgroups GammaL_a(p^(d/a)) of G0 with a <= 48.

    Returns:
        tuple[list[EmbeddingCandidate], bool, bool]: The candidates sorted by a, whether some a
        is at most 16, and whether the field enumeration was complete
    """
    settings = settings or get_settings()
    g0_mats = frame.g0_matrices
    derived = derived_subgroup(frame.g0)
    derived_mats = [matrix_of(frame, g) for g in derived.generators]
    found, complete = enumerate_field_structures(g0_mats, derived_mats, frame.p, frame.d, settings)
    provenance = "centralizer of G0'" if complete else "centralizer of G0"
    candidates = [EmbeddingCandidate(a, fs, provenance) for a, fs in found if a <= MAX_A]
    class_s = any(c.a <= CLASS_S_A for c in candidates)
    return candidates, class_s, complete


def agl_order(a: int, fs: FieldStructure) -> int:
    return fs.q**a * order_gl(a, fs.q) * fs.e


def brute_closure_in_agl(
    group: PermutationGroup,
    frame: AffineFrame,
    candidate: EmbeddingCandidate,
    structure: Optional[OrbitalStructure] = None,
    settings: Optional[Settings] = None,
) -> PermutationGroup:
    """
    All affine semilinear maps over the candidate field that preserve the 2-orbits of G.

    The 2-orbit colour of (x, y) depends only on y - x, so a semilinear map preserves the
    2-orbits iff it preserves the colour of every vector. Images of a GF(q)-basis are chosen one
    at a time and each prefix is checked on the GF(q)-span it determines.

    Raises:
        TooLargeError: If |AGammaL_a(q)| exceeds ``agl_cap``
    """
    settings = settings or get_settings()
    fs = candidate.fs
    size = agl_order(candidate.a, fs)
    if size > settings.agl_cap:
        raise TooLargeError(f"AGammaL_{candidate.a}({fs.q})", size, settings.agl_cap)
    structure = structure or two_orbits(group, settings)
    ff = FieldFrame.with_standard_basis(frame, fs)
    colour = structure.table[frame.zero][frame.point_at]
    basis_idx = frame.indices(ff.basis)
    scale = ff.scale_tables
    chain = StabilizerChain(frame.n)
    for t in frame.translations:
        chain.add(t.images)
    gens: list[Permutation] = list(frame.translations)
    leaves = 0

    for frob in range(fs.e):
        frob_codes = [fs.frobenius(mu, frob) for mu in range(fs.q)]

        def extend(t: int, src: np.ndarray, img: np.ndarray) -> None:
            nonlocal leaves
            if t == ff.dim:
                leaves += 1
                index_map = np.empty(frame.n, dtype=np.int64)
                index_map[src] = img
                g = frame.permutation_from_index_map(index_map)
                if chain.add(g.images):
                    gens.append(g)
                return
            b = int(basis_idx[t])
            src_mu = scale[:, b]
            new_src = _add_indices(frame, src[:, None], src_mu[None, 1:]).ravel()
            want = colour[b]
            taken = set(img.tolist())
            for w in np.flatnonzero(colour == want):
                if int(w) in taken:
                    continue
                img_mu = scale[frob_codes, int(w)]
                new_img = _add_indices(frame, img[:, None], img_mu[None, 1:]).ravel()
                if not np.array_equal(colour[new_img], colour[new_src]):
                    continue
                extend(t + 1, np.concatenate([src, new_src]), np.concatenate([img, new_img]))

        zero = np.zeros(1, dtype=np.int64)
        extend(0, zero, zero)

    closure = PermutationGroup._from_chain(frame.n, chain, gens)
    logger.info(
        f"Brute force in AGammaL_{candidate.a}({fs.q}): {leaves} semilinear maps, order {closure.order}"
    )
    return closure


def _add_indices(frame: AffineFrame, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    v = frame.vectors
    return frame.indices(v[i] + v[j])


def run_small(
    group: PermutationGroup,
    structure: Optional[OrbitalStructure] = None,
    settings: Optional[Settings] = None,
    frame: Optional[AffineFrame] = None,
) -> BranchOutcome:
    """
    Largest verified intersection of the closure with an enumerable AGammaL_a(q) overgroup.

    Args:
        group (PermutationGroup): Transitive rank 3 group
        structure (Optional[OrbitalStructure]): Its 2-orbits, if already computed
        settings (Optional[Settings]): Caps
        frame (Optional[AffineFrame]): Affine frame, if already computed

    Returns:
        BranchOutcome: The largest candidate, with flags ``class_s`` and ``a_min``
    """
    settings = settings or get_settings()
    notes: list[str] = []
    if not order_gate(group):
        return BranchOutcome.failure(BRANCH, "|G| > n^18", notes)
    try:
        structure = structure or two_orbits(group, settings)
        frame = frame or detect_affine(group, settings)
        if frame is None:
            return BranchOutcome.failure(BRANCH, "not affine", notes)
        gens = small_generating_tuple(frame.g0, 4, settings)
        if gens is None:
            return BranchOutcome.failure(BRANCH, "G0 is not 4-generated", notes)
        candidates, class_s, complete = embeddings_small(frame, settings)
        if not complete:
            notes.append("field enumeration incomplete")
    except ClosureError as e:
        return BranchOutcome.failure(BRANCH, str(e), notes)
    if not candidates:
        return BranchOutcome.failure(BRANCH, "no semilinear embedding", notes)

    results: list[BranchOutcome] = []
    for candidate in candidates:
        try:
            closure = brute_closure_in_agl(group, frame, candidate, structure, settings)
        except TooLargeError as e:
            notes.append(f"a={candidate.a}, q={candidate.fs.q} skipped: {e}")
            continue
        if candidate_is_sound(group, closure, structure):
            results.append(BranchOutcome.success(BRANCH, closure))
        else:
            notes.append(f"a={candidate.a}, q={candidate.fs.q}: candidate failed verification")
    best = largest(results, notes)
    a_min = min(c.a for c in candidates)
    if best is None:
        return BranchOutcome.failure(BRANCH, "no enumerable overgroup", notes, class_s=class_s, a_min=a_min)
    return BranchOutcome.success(BRANCH, best.group, notes, class_s=class_s, a_min=a_min)


def embedding_candidates_for(
    frame: AffineFrame, max_a: int, settings: Optional[Settings] = None
) -> list[EmbeddingCandidate]:
    """Candidates with a <= max_a, used by other affine branches."""
    candidates, _, _ = embeddings_small(frame, settings)
    return [c for c in candidates if c.a <= max_a]

