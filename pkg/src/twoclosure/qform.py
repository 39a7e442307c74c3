# qform.py

"""
Affine groups preserving a nondegenerate quadratic form up to semisimilarity: rebuild the form
from the isotropic orbit, find its type and emit the affine polar closure.
"""

import logging
import random
from dataclasses import dataclass
from itertools import product
from typing import Iterator, Optional

import numpy as np

from .affine import AffineFrame, FieldFrame, detect_affine, frobenius_codes, matrix_of
from .errors import BudgetExceededError, ClosureError, ConsistencyError, TooLargeError
from .formulas import isotropic_count, order_orthogonal, qform_closure_order
from .gf import FieldStructure, enumerate_field_structures
from .orbitals import OrbitalStructure, two_orbits
from .outcome import BranchOutcome, candidate_is_sound, largest
from .perm import Permutation, PermutationGroup, StabilizerChain, derived_subgroup
from .settings import Settings, get_settings
from .small import brute_closure_in_agl, embedding_candidates_for

logger = logging.getLogger(__name__)

BRANCH = "qform"
MAX_GENERATORS = 6
BRUTE_A = 4

Witness = list[tuple[int, int]]


@dataclass(eq=False)
class QuadraticFormTable:
    """
    Values of a quadratic form on every vector index, as field codes.

    ``eps`` and ``gram`` are filled in once the form has been validated and its type found.
    """

    fs: FieldStructure
    values: np.ndarray
    eps: Optional[int] = None
    gram: Optional[np.ndarray] = None

    @property
    def total(self) -> bool:
        return bool((self.values >= 0).all())

    def scaled(self, code: int) -> "QuadraticFormTable":
        return QuadraticFormTable(self.fs, self.fs.mul_table[code, self.values])


def isotropic_orbit(structure: OrbitalStructure, q: int) -> Optional[int]:
    """The nondiagonal colour whose subdegree is not divisible by q, if exactly one is."""
    ok, _ = structure.is_rank3()
    if not ok:
        return None
    colors = [c for c in structure.nondiagonal_colors if structure.subdegree(c) % q]
    return colors[0] if len(colors) == 1 else None


def reduce_generators(
    g0: PermutationGroup, k: int = MAX_GENERATORS, settings: Optional[Settings] = None
) -> list[Permutation]:
    """
    At most k generators of G0, found as random subproducts of the given generators.

    Falls back to the original generators with a warning.
    """
    settings = settings or get_settings()
    gens = [g for g in g0.generators if not g.is_identity()]
    if len(gens) <= k:
        return gens
    order = g0.order
    rng = random.Random(settings.seed)
    identity = g0.identity()
    for _ in range(settings.reduce_tries):
        chosen = []
        for _ in range(k):
            x = identity
            for g in gens:
                if rng.random() < 0.5:
                    x = x * g
            chosen.append(x)
        if PermutationGroup(g0.degree, chosen).order == order:
            return [g for g in chosen if not g.is_identity()]
    logger.warning(f"No {k}-generating set found; searching witnesses for all {len(gens)} generators")
    return gens


def propagate_form(
    ff: FieldFrame,
    index_maps: list[np.ndarray],
    guesses: Witness,
    seed: int,
    gamma: int,
    isotropic: np.ndarray,
) -> Optional[QuadraticFormTable]:
    """
    Spread kappa(seed) = gamma along kappa(u^g_i) = lambda_i kappa(u)^(p^alpha_i).

    Isotropic vectors get 0 up front; unreached vectors keep -1. Only the first
    ``len(guesses)`` index maps are used.

    Returns:
        Optional[QuadraticFormTable]: The table, or None if some vector gets two values
    """
    fs = ff.fs
    values = np.full(ff.frame.n, -1, dtype=np.int64)
    values[isotropic] = 0
    values[0] = 0
    values[seed] = gamma
    frontier = np.array([seed], dtype=np.int64)
    while len(frontier):
        grown = []
        for index_map, (lam, alpha) in zip(index_maps, guesses):
            images = index_map[frontier]
            want = fs.mul_table[lam, frobenius_codes(fs, values[frontier], alpha)]
            have = values[images]
            known = have >= 0
            if (have[known] != want[known]).any():
                return None
            values[images[~known]] = want[~known]
            if (values[images] != want).any():
                return None
            grown.append(images[~known])
        frontier = np.unique(np.concatenate(grown)) if grown else np.zeros(0, dtype=np.int64)
    return QuadraticFormTable(fs, values)


class _Form:
    """Vector-index arithmetic against a form table."""

    def __init__(self, ff: FieldFrame, values: np.ndarray):
        self.ff = ff
        self.fs = ff.fs
        self.values = values
        self.neg = np.array([self.fs.neg(x) for x in range(self.fs.q)], dtype=np.int64)

    def add(self, i, j):
        return self.ff.add_index(np.asarray(i), np.asarray(j))

    def scale(self, code, i):
        return self.ff.scale_tables[code, i]

    def polar(self, i, j):
        """f(x, y) = kappa(x + y) - kappa(x) - kappa(y), vectorised."""
        add, v = self.fs.add_table, self.values
        return add[add[v[self.add(i, j)], self.neg[v[i]]], self.neg[v[j]]]

    def reflection(self, v: int) -> np.ndarray:
        """Index map of x -> x - f(x, v) kappa(v)^-1 v."""
        everything = np.arange(self.ff.frame.n)
        coeff = self.fs.mul_table[self.polar(everything, v), self.fs.inv(int(self.values[v]))]
        return self.add(everything, self.scale(self.neg[coeff], v))

    def semisimilarity(self, index_map: np.ndarray) -> Optional[tuple[int, int]]:
        """(lambda, alpha) with kappa(u^g) = lambda kappa(u)^(p^alpha) for all u, if any."""
        fs, v = self.fs, self.values
        u = int(np.flatnonzero(v > 0)[0])
        for alpha in range(fs.e):
            fv = frobenius_codes(fs, v, alpha)
            lam = fs.mul(int(v[index_map[u]]), fs.inv(int(fv[u])))
            if lam and np.array_equal(v[index_map], fs.mul_table[lam, fv]):
                return lam, alpha
        return None


def validate_form(
    ff: FieldFrame, index_maps: list[np.ndarray], table: QuadraticFormTable
) -> tuple[bool, Optional[Witness], np.ndarray]:
    """
    Check that the table is a nondegenerate quadratic form and find each generator's witness.

    Returns:
        tuple[bool, Optional[Witness], np.ndarray]: Nondegeneracy, the semisimilarity witness
        (None if some generator has none) and the Gram matrix in the frame's GF(q)-basis
    """
    fs, v = ff.fs, table.values
    a = ff.dim
    basis = ff.frame.indices(ff.basis)
    gram = np.zeros((a, a), dtype=np.int64)
    if not table.total:
        return False, None, gram
    form = _Form(ff, v)
    for i in range(a):
        gram[i] = form.polar(np.full(a, basis[i]), basis)

    for code in range(1, fs.q):
        if not np.array_equal(v[ff.scale_tables[code]], fs.mul_table[fs.square(code), v]):
            return False, None, gram

    # kappa(x) = sum kappa(b_i) x_i^2 + sum_{i<j} f(b_i, b_j) x_i x_j
    x = ff.coords
    mul, add = fs.mul_table, fs.add_table
    predicted = np.zeros(ff.frame.n, dtype=np.int64)
    for i in range(a):
        predicted = add[predicted, mul[v[basis[i]], mul[x[:, i], x[:, i]]]]
        for j in range(i + 1, a):
            predicted = add[predicted, mul[gram[i, j], mul[x[:, i], x[:, j]]]]
    if not np.array_equal(predicted, v):
        return False, None, gram

    if fs.rank_codes(gram.tolist()) != a:
        return False, None, gram
    nondegenerate = True
    witness: Witness = []
    for index_map in index_maps:
        found = form.semisimilarity(index_map)
        if found is None:
            return nondegenerate, None, gram
        witness.append(found)
    return nondegenerate, witness, gram


def standard_basis(ff: FieldFrame, table: QuadraticFormTable) -> tuple[list[int], int]:
    """
    Hyperbolic pairs e_1, f_1, ..., followed by a final plane.

    The final plane is a hyperbolic pair (type +) or an anisotropic pair x, y with kappa(x) = 1
    and f(x, y) = 1 (type -). The type is checked against the number of isotropic vectors.

    Returns:
        tuple[list[int], int]: Basis as vector indices, and the type as +1 or -1

    Raises:
        ConsistencyError: If the form turns out degenerate or the type disagrees with the count
    """
    fs = ff.fs
    form = _Form(ff, table.values)
    space = [int(i) for i in ff.frame.indices(ff.basis)]
    basis: list[int] = []
    while len(space) > 2:
        pair = _hyperbolic_pair(form, space)
        if pair is None:
            raise ConsistencyError(f"no isotropic vector in a subspace of dimension {len(space)}")
        e, f = pair
        basis += [e, f]
        space = _complement(form, space, e, f)
    pair = _hyperbolic_pair(form, space)
    if pair is not None:
        eps = 1
        basis += list(pair)
    else:
        eps = -1
        basis += _anisotropic_pair(form, space)

    m = ff.dim // 2
    count = int((table.values[1:] == 0).sum())
    if count != isotropic_count(eps, m, fs.q):
        raise ConsistencyError(f"{count} isotropic vectors, but the final plane says type {eps:+d}")
    if not np.array_equal(gram_in(form, basis), standard_gram(fs, m, eps, int(table.values[basis[-1]]))):
        raise ConsistencyError("Gram matrix in the standard basis is not standard")
    table.eps = eps
    return basis, eps


def gram_in(form: _Form, basis: list[int]) -> np.ndarray:
    rows = np.asarray(basis, dtype=np.int64)
    return np.stack([form.polar(np.full(len(rows), x), rows) for x in rows])


def standard_gram(fs: FieldStructure, m: int, eps: int, last_value: int = 0) -> np.ndarray:
    """Gram matrix of e_1, f_1, ... with the final plane hyperbolic or anisotropic."""
    hyperbolic = np.array([[0, 1], [1, 0]], dtype=np.int64)
    if eps == 1:
        last = hyperbolic
    else:
        two = fs.add(1, 1)
        last = np.array([[two, 1], [1, fs.mul(two, last_value)]], dtype=np.int64)
    return _block_matrix(2 * m, m if eps == 1 else m - 1, hyperbolic, last)


def _hyperbolic_pair(form: _Form, space: list[int]) -> Optional[tuple[int, int]]:
    fs = form.fs
    vectors = np.unique(form.ff.span(space))[1:]
    isotropic = vectors[form.values[vectors] == 0]
    if not len(isotropic):
        return None
    e = int(isotropic[0])
    pairing = form.polar(np.full(len(vectors), e), vectors)
    partners = vectors[pairing != 0]
    if not len(partners):
        raise ConsistencyError("isotropic vector in the radical")
    y = int(partners[0])
    y = int(form.scale(fs.inv(int(pairing[pairing != 0][0])), y))
    f = int(form.add(y, form.scale(fs.neg(int(form.values[y])), e)))
    return e, f


def _complement(form: _Form, space: list[int], e: int, f: int) -> list[int]:
    fs = form.fs
    vectors = form.ff.frame.vectors
    out: list[int] = []
    for w in space:
        w1 = form.add(w, form.scale(fs.neg(int(form.polar(w, f))), e))
        w2 = int(form.add(w1, form.scale(fs.neg(int(form.polar(w, e))), f)))
        if w2 and fs.rank(vectors[out + [w2]]) == len(out) + 1:
            out.append(w2)
    if len(out) != len(space) - 2:
        raise ConsistencyError("orthogonal complement has the wrong dimension")
    return out


def _anisotropic_pair(form: _Form, space: list[int]) -> list[int]:
    fs = form.fs
    vectors = np.unique(form.ff.span(space))[1:]
    ones = vectors[form.values[vectors] == 1]
    if not len(ones):
        raise ConsistencyError("anisotropic plane does not represent 1")
    x = int(ones[0])
    frame_vectors = form.ff.frame.vectors
    for y in vectors:
        y = int(y)
        pairing = int(form.polar(x, y))
        if pairing and fs.rank(frame_vectors[[x, y]]) == 2:
            return [x, int(form.scale(fs.inv(pairing), y))]
    raise ConsistencyError("anisotropic plane is degenerate")


def _plane_block(sf: FieldFrame, values: np.ndarray, lam: int, frob: int) -> Optional[np.ndarray]:
    """2 x 2 block on the last plane with kappa(x^(p^frob) A) = lam kappa(x)^(p^frob)."""
    fs, a = sf.fs, sf.dim
    q = fs.q
    coords = np.zeros((q * q, a), dtype=np.int64)
    coords[:, a - 2 :] = np.indices((q, q)).reshape(2, -1).T
    kappa = values[sf.index_from_coords(coords)]
    want = fs.mul_table[lam, frobenius_codes(fs, kappa, frob)]
    x = frobenius_codes(fs, coords[:, a - 2 :], frob)
    mul, add = fs.mul_table, fs.add_table
    plane = np.zeros((q * q, a), dtype=np.int64)
    for a00, a01, a10, a11 in product(range(q), repeat=4):
        plane[:, a - 2] = add[mul[x[:, 0], a00], mul[x[:, 1], a10]]
        plane[:, a - 1] = add[mul[x[:, 0], a01], mul[x[:, 1], a11]]
        if np.array_equal(values[sf.index_from_coords(plane)], want):
            return np.array([[a00, a01], [a10, a11]], dtype=np.int64)
    return None


def _block_matrix(a: int, pairs: int, hyperbolic: np.ndarray, last: np.ndarray) -> np.ndarray:
    out = np.zeros((a, a), dtype=np.int64)
    for i in range(pairs):
        out[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = hyperbolic
    out[a - 2 :, a - 2 :] = last
    return out


def emit_qform_closure(
    frame: AffineFrame,
    fs: FieldStructure,
    table: QuadraticFormTable,
    basis: list[int],
    eps: int,
    settings: Optional[Settings] = None,
    notes: Optional[list[str]] = None,
) -> PermutationGroup:
    """
    F^(2m) x| GammaO^eps_2m(q) for the given form.

    Isometries are reflections (transvections in even characteristic) added one vector at a
    time until |GO| is reached, then pair swaps of the standard basis and isometries from G0
    if short. Scalars, the similarity e_i -> e_i, f_i -> mu f_i and the Frobenius complete it.

    Raises:
        ConsistencyError: If the isometries fall short of |GO| or the final order is wrong
    """
    settings = settings or get_settings()
    notes = notes if notes is not None else []
    sf = FieldFrame(frame, fs, frame.vectors[basis])
    form = _Form(sf, table.values)
    a, q = sf.dim, fs.q
    m = a // 2
    pairs = m if eps == 1 else m - 1
    target = order_orthogonal(eps, a, q)

    chain = StabilizerChain(frame.n)
    isometries: list[Permutation] = []
    dropped = 0

    def offer(index_map: np.ndarray) -> None:
        nonlocal dropped
        if form.semisimilarity(index_map) != (1, 0):
            dropped += 1
            return
        g = frame.permutation_from_index_map(index_map)
        if chain.add(g.images):
            isometries.append(g)

    for v in np.flatnonzero(table.values > 0):
        if chain.order() == target:
            break
        offer(form.reflection(int(v)))
    if chain.order() != target:
        notes.append(f"reflections give {chain.order()} of {target}; repairing")
        for index_map in _repair_pool(sf, frame, pairs, settings):
            if chain.order() == target:
                break
            offer(index_map)
    if dropped:
        notes.append(f"dropped {dropped} candidate isometries that do not preserve the form")
    if chain.order() != target:
        raise ConsistencyError(f"isometry group of order {chain.order()}, expected {target}")

    gens = list(frame.translations) + isometries
    eye2 = np.eye(2, dtype=np.int64)
    semilinear: list[tuple[np.ndarray, np.ndarray, int]] = []
    if q > 2:
        gens.append(frame.permutation_from_index_map(sf.scale_tables[2]))
        similarity = np.diag([1, 2]).astype(np.int64)
        last = similarity if eps == 1 else _plane_block(sf, table.values, 2, 0)
        semilinear.append((similarity, last, 0))
    if fs.e > 1:
        last = eye2 if eps == 1 else _plane_block(sf, table.values, 1, 1)
        semilinear.append((eye2, last, 1))
    for block, last, frob in semilinear:
        if last is None:
            raise ConsistencyError("no semisimilarity block found on the anisotropic plane")
        g = sf.semilinear_permutation(_block_matrix(a, pairs, block, last), frob)
        if form.semisimilarity(frame.index_map_of(g)) is None:
            raise ConsistencyError("emitted map is not a semisimilarity")
        gens.append(g)

    closure = PermutationGroup(frame.n, gens)
    expected = qform_closure_order(eps, m, q)
    if closure.order != expected:
        raise ConsistencyError(f"affine polar closure of order {closure.order}, expected {expected}")
    return closure


def _repair_pool(sf: FieldFrame, frame: AffineFrame, pairs: int, settings: Settings) -> Iterator[np.ndarray]:
    """Pair swaps and pair transpositions in the standard basis, then sampled elements of G0."""
    a = sf.dim
    eye = np.eye(a, dtype=np.int64)
    for i in range(pairs):
        swap = eye.copy()
        swap[[2 * i, 2 * i + 1]] = swap[[2 * i + 1, 2 * i]]
        yield frame.index_map_of(sf.semilinear_permutation(swap))
        if i + 1 < pairs:
            move = eye.copy()
            move[[2 * i, 2 * i + 1, 2 * i + 2, 2 * i + 3]] = move[[2 * i + 2, 2 * i + 3, 2 * i, 2 * i + 1]]
            yield frame.index_map_of(sf.semilinear_permutation(move))
    rng = random.Random(settings.seed)
    for _ in range(settings.reduce_tries):
        yield frame.index_map_of(frame.g0.random_element(rng))


def _square_classes(fs: FieldStructure) -> list[int]:
    return [1] if fs.p == 2 or fs.q == 2 else [1, 2]


def _tables(
    ff: FieldFrame,
    index_maps: list[np.ndarray],
    seed: int,
    gamma: int,
    isotropic: np.ndarray,
    budget: int,
) -> Iterator[QuadraticFormTable]:
    fs = ff.fs
    choices = [(lam, alpha) for lam in range(1, fs.q) for alpha in range(fs.e)]
    visited = 0

    def search(guesses: Witness) -> Iterator[QuadraticFormTable]:
        nonlocal visited
        visited += 1
        if visited > budget:
            raise BudgetExceededError(f"more than {budget} witness guesses")
        table = propagate_form(ff, index_maps, guesses, seed, gamma, isotropic)
        if table is None:
            return
        if len(guesses) == len(index_maps):
            yield table
            return
        for choice in choices:
            yield from search(guesses + [choice])

    yield from search([])


def form_closure(
    group: PermutationGroup,
    frame: AffineFrame,
    structure: OrbitalStructure,
    settings: Optional[Settings] = None,
    notes: Optional[list[str]] = None,
) -> Optional[PermutationGroup]:
    """
    Rebuild the invariant form over each field GF(q) with even a and emit the closure.

    Choices are tried in order: field, gamma per square class, then witness guesses in
    lexicographic order. The first choice whose emitted group passes verification wins.
    """
    settings = settings or get_settings()
    notes = notes if notes is not None else []
    derived = derived_subgroup(frame.g0)
    fields, complete = enumerate_field_structures(
        frame.g0_matrices, [matrix_of(frame, g) for g in derived.generators], frame.p, frame.d, settings
    )
    if not complete:
        notes.append("field enumeration incomplete")
    gens = reduce_generators(frame.g0, MAX_GENERATORS, settings)
    index_maps = [frame.index_map_of(g) for g in gens]
    colour = structure.table[frame.zero][frame.point_at]
    for a, fs in fields:
        if a % 2:
            continue
        iso = isotropic_orbit(structure, fs.q)
        if iso is None:
            continue
        ff = FieldFrame.with_standard_basis(frame, fs)
        isotropic = colour == iso
        seed = int(np.flatnonzero(~isotropic)[1])
        for gamma in _square_classes(fs):
            try:
                for table in _tables(ff, index_maps, seed, gamma, isotropic, settings.guess_budget):
                    nondegenerate, witness, gram = validate_form(ff, index_maps, table)
                    if not nondegenerate or witness is None:
                        continue
                    table.gram = gram
                    basis, eps = standard_basis(ff, table)
                    closure = emit_qform_closure(frame, fs, table, basis, eps, settings, notes)
                    if candidate_is_sound(group, closure, structure):
                        notes.append(f"form of type {eps:+d} over GF({fs.q}), witness {witness}")
                        return closure
                    notes.append(f"GF({fs.q}), gamma={gamma}: candidate failed verification")
            except BudgetExceededError as e:
                notes.append(f"GF({fs.q}), gamma={gamma}: {e}")
            except ConsistencyError as e:
                notes.append(f"GF({fs.q}), gamma={gamma}: {e}")
    return None


def run_qform(
    group: PermutationGroup,
    structure: Optional[OrbitalStructure] = None,
    settings: Optional[Settings] = None,
    frame: Optional[AffineFrame] = None,
) -> BranchOutcome:
    """
    Closures inside AGammaL_a(q) for a <= 4 by brute force, and through the invariant form.

    Both routes always run; the larger verified group wins and equal orders keep the brute one.

    Args:
        group (PermutationGroup): Transitive rank 3 group
        structure (Optional[OrbitalStructure]): Its 2-orbits, if already computed
        settings (Optional[Settings]): Caps
        frame (Optional[AffineFrame]): Affine frame, if already computed

    Returns:
        BranchOutcome: The closure with flag ``route`` ("brute" or "form"), or a failure
    """
    settings = settings or get_settings()
    notes: list[str] = []
    try:
        structure = structure or two_orbits(group, settings)
        frame = frame or detect_affine(group, settings)
        if frame is None:
            return BranchOutcome.failure(BRANCH, "not affine", notes)
        candidates = embedding_candidates_for(frame, BRUTE_A, settings)
    except ClosureError as e:
        return BranchOutcome.failure(BRANCH, str(e), notes)

    results: list[BranchOutcome] = []
    for candidate in candidates:
        try:
            closure = brute_closure_in_agl(group, frame, candidate, structure, settings)
        except TooLargeError as e:
            notes.append(f"a={candidate.a}, q={candidate.fs.q} skipped: {e}")
            continue
        if candidate_is_sound(group, closure, structure):
            results.append(BranchOutcome.success(BRANCH, closure, route="brute"))

    try:
        closure = form_closure(group, frame, structure, settings, notes)
    except ClosureError as e:
        notes.append(f"form route: {e}")
        closure = None
    if closure is not None:
        results.append(BranchOutcome.success(BRANCH, closure, route="form"))
    else:
        notes.append("form route: no choice defines a correct quadratic form")

    best = largest(results, notes)
    if best is None:
        return BranchOutcome.failure(BRANCH, "no embedding or choice defines a correct quadratic form", notes)
    logger.info(f"Quadratic form branch: {best.flags['route']} route, order {best.order}")
    return BranchOutcome.success(BRANCH, best.group, notes, route=best.flags["route"])
