# zoo.py

"""
Named rank 3 instances with known subdegrees and closure orders.
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb, factorial
from typing import Any, Callable, Iterator, Optional, Sequence

import numpy as np

from .errors import ConsistencyError
from .formulas import (
    affine_polar_subdegrees,
    bilinear_subdegrees,
    hamming_subdegrees,
    order_orthogonal,
    product_order,
    qform_closure_order,
    sign,
    tensor_closure_order,
    wreath_order,
)
from .gf import FieldStructure, prime_power, prime_power_field
from .orbitals import two_orbits
from .perm import Permutation, PermutationGroup, StabilizerChain
from .tensor import gl_generators, kron_codes

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class InstanceDescriptor:
    name: str
    params: dict[str, Any]
    group: PermutationGroup
    subdegrees: tuple[int, int]
    closure_order: Optional[int] = None
    rank: int = 3
    notes: list[str] = field(default_factory=list)

    @property
    def degree(self) -> int:
        return self.group.degree

    def header(self) -> list[str]:
        """Comment lines for the group file."""
        params = " ".join(f"{k}={v}" for k, v in self.params.items())
        lines = [f"{self.name} {params}".rstrip(), f"rank {self.rank}, subdegrees {list(self.subdegrees)}"]
        if self.closure_order is not None:
            lines.append(f"closure order {self.closure_order}")
        return lines

    def to_json(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "params": dict(self.params),
            "degree": self.degree,
            "rank": self.rank,
            "subdegrees": list(self.subdegrees),
            "closure_order": None if self.closure_order is None else str(self.closure_order),
        }


def _checked(
    descriptor: InstanceDescriptor, fallback: Optional[Callable[[], list[Permutation]]] = None, note: str = ""
) -> InstanceDescriptor:
    """
    Assert the declared 2-orbit structure.

    A descriptor built from a proper subgroup is rebuilt from the generators ``fallback``
    returns when the subgroup does not have it.
    """
    structure = two_orbits(descriptor.group)
    ok, subdegrees = structure.is_rank3()
    if fallback is not None and (not ok or tuple(subdegrees) != tuple(sorted(descriptor.subdegrees))):
        logger.warning(f"{descriptor.name} {descriptor.params}: {note}")
        descriptor.group = PermutationGroup(descriptor.degree, fallback())
        descriptor.notes.append(note)
        return _checked(descriptor)
    if not ok or tuple(subdegrees) != tuple(sorted(descriptor.subdegrees)):
        raise ConsistencyError(
            f"{descriptor.name}: rank {structure.rank}, subdegrees {structure.subdegrees}, "
            f"expected {list(descriptor.subdegrees)}"
        )
    logger.debug(f"Built {descriptor.name} {descriptor.params} on {descriptor.degree} points")
    return descriptor


def base_group(name: str) -> tuple[int, list[Permutation]]:
    """
    A 2-transitive group by name: ``F20`` (AGL(1, 5)) or ``S<m>``.

    Raises:
        ValueError: If the name is unknown
    """
    if name == "F20":
        return 5, [Permutation.from_cycles(5, [(0, 1, 2, 3, 4)]), Permutation([0, 2, 4, 1, 3])]
    if name.startswith("S") and name[1:].isdigit() and int(name[1:]) >= 2:
        m = int(name[1:])
        gens = [Permutation.from_cycles(m, [(0, 1)])]
        if m > 2:
            gens.append(Permutation.from_cycles(m, [tuple(range(m))]))
        return m, gens
    raise ValueError(f"unknown base group {name!r}; use F20 or S<m>")


def zoo_imprimitive(base: str, k: int) -> InstanceDescriptor:
    """base wr Sym(k) on k blocks of size b."""
    if k < 2:
        raise ValueError("need at least two blocks")
    b, base_gens = base_group(base)
    n = b * k
    gens = [Permutation(list(g.images) + list(range(b, n)), check=False) for g in base_gens]
    swap = list(range(n))
    for x in range(b):
        swap[x], swap[b + x] = b + x, x
    gens.append(Permutation(swap, check=False))
    if k > 2:
        gens.append(Permutation([(x + b) % n for x in range(n)], check=False))
    return _checked(
        InstanceDescriptor(
            "imprimitive",
            {"base": base, "k": k},
            PermutationGroup(n, gens),
            tuple(sorted((b - 1, b * (k - 1)))),
            wreath_order(b, k),
        )
    )


def zoo_product(base: str) -> InstanceDescriptor:
    """base wr Sym(2) in product action on q^2 points; (r, c) is point r q + c."""
    q, base_gens = base_group(base)
    n = q * q
    gens = [Permutation([g.images[r] * q + c for r in range(q) for c in range(q)], check=False) for g in base_gens]
    gens.append(Permutation([c * q + r for r in range(q) for c in range(q)], check=False))
    return _checked(
        InstanceDescriptor(
            "product", {"base": base}, PermutationGroup(n, gens), hamming_subdegrees(q), product_order(q)
        )
    )


def zoo_johnson_pairs(t: int) -> InstanceDescriptor:
    """Alt(t) on the unordered pairs of {0, ..., t-1}."""
    if t < 5:
        raise ValueError("need t >= 5")
    pairs = list(combinations(range(t), 2))
    index = {pair: i for i, pair in enumerate(pairs)}
    alt = [(0, 1, 2), tuple(range(t)) if t % 2 else tuple(range(1, t))]
    gens = []
    for cycle in alt:
        g = Permutation.from_cycles(t, [cycle])
        gens.append(Permutation([index[tuple(sorted((g(a), g(b))))] for a, b in pairs], check=False))
    return _checked(
        InstanceDescriptor(
            "johnson",
            {"t": t},
            PermutationGroup(len(pairs), gens),
            tuple(sorted((2 * (t - 2), comb(t - 2, 2)))),
            factorial(t),
        )
    )


class _CodeSpace:
    """GF(q)^dim; point i has coordinates read from the base-q digits of i."""

    def __init__(self, fs: FieldStructure, dim: int):
        self.fs = fs
        self.dim = dim
        q = fs.q
        self.n = q**dim
        self.weights = q ** np.arange(dim, dtype=np.int64)
        digits = (np.arange(self.n, dtype=np.int64)[:, None] // self.weights[None, :]) % q
        self.coords = fs.poly_codes[digits]
        self.digit_of = np.argsort(fs.poly_codes)
        self.neg = np.array([fs.neg(x) for x in range(q)], dtype=np.int64)

    def index(self, coords: np.ndarray) -> np.ndarray:
        return self.digit_of[coords] @ self.weights

    def apply(self, matrix: np.ndarray) -> np.ndarray:
        mul, add = self.fs.mul_table, self.fs.add_table
        out = np.zeros_like(self.coords)
        for s in range(self.dim):
            for j in range(self.dim):
                out[:, s] = add[out[:, s], mul[self.coords[:, j], matrix[j, s]]]
        return out

    def linear(self, matrix: np.ndarray) -> Permutation:
        return Permutation(self.index(self.apply(np.asarray(matrix))).tolist(), check=False)

    def shift(self, i: int) -> np.ndarray:
        return self.index(self.fs.add_table[self.coords, self.coords[i]])

    def translations(self) -> list[Permutation]:
        gens = []
        for j in range(self.dim):
            for t in range(self.fs.e):
                v = np.zeros(self.dim, dtype=np.int64)
                v[j] = t + 1
                gens.append(Permutation(self.index(self.fs.add_table[self.coords, v]).tolist(), check=False))
        return gens


def _field(q: int) -> FieldStructure:
    if prime_power(q) is None:
        raise ValueError(f"{q} is not a prime power")
    return prime_power_field(q)


def zoo_paley(q: int) -> InstanceDescriptor:
    """x -> c^2 x + b on GF(q), q = 1 mod 4."""
    if q % 4 != 1:
        raise ValueError("Paley instances need q = 1 mod 4")
    fs = _field(q)
    space = _CodeSpace(fs, 1)
    gens = space.translations() + [space.linear(np.array([[3]]))]
    e = fs.e
    return _checked(
        InstanceDescriptor(
            "paley", {"q": q}, PermutationGroup(q, gens), ((q - 1) // 2, (q - 1) // 2), q * (q - 1) // 2 * e
        )
    )


def zoo_clebsch() -> InstanceDescriptor:
    """The subgroup of order 320 in AGammaL_1(16): x -> c^3 x, x -> x^2 and translations."""
    fs = _field(16)
    space = _CodeSpace(fs, 1)
    frobenius = np.array([fs.power(int(x), 2) for x in space.coords[:, 0]], dtype=np.int64)
    gens = space.translations() + [
        space.linear(np.array([[4]])),
        Permutation(space.index(frobenius[:, None]).tolist(), check=False),
    ]
    return _checked(InstanceDescriptor("clebsch", {}, PermutationGroup(16, gens), (5, 10), 1920))


def singer_cycle(fs: FieldStructure, m: int) -> np.ndarray:
    """
    A companion matrix over GF(q) that permutes the nonzero vectors of GF(q)^m in one cycle.

    Raises:
        ConsistencyError: If no companion matrix does
    """
    space = _CodeSpace(fs, m)
    start = int(space.index(np.eye(m, dtype=np.int64)[0]))
    for tail in product(range(fs.q), repeat=m):
        if tail[0] == 0:
            continue
        matrix = np.zeros((m, m), dtype=np.int64)
        matrix[:-1, 1:] = np.eye(m - 1, dtype=np.int64)
        matrix[-1] = [fs.neg(c) for c in tail]
        images = space.linear(matrix).images
        x, length = images[start], 1
        while x != start:
            x, length = images[x], length + 1
        if length == space.n - 1:
            return matrix
    raise ConsistencyError(f"no Singer cycle in GL_{m}({fs.q})")


def singer_frobenius(fs: FieldStructure, m: int, singer: np.ndarray) -> np.ndarray:
    """x -> x^q on GF(q^m), in the basis 1, x, ..., x^(m - 1) the Singer cycle multiplies by x."""
    space = _CodeSpace(fs, m)
    images = space.linear(singer).images
    powers = [int(space.index(np.eye(m, dtype=np.int64)[0]))]
    for _ in range((m - 1) * fs.q):
        powers.append(images[powers[-1]])
    return space.coords[[powers[i * fs.q] for i in range(m)]]


def zoo_bilinear(q: int, m: int) -> InstanceDescriptor:
    """
    2 x m matrices over GF(q) under translations and X -> A^T X B.

    For m <= 3, B runs over the normaliser GammaL_1(q^m) of a Singer cycle only: the cycle is
    transitive on the points and on the lines of PG(m - 1, q), which keeps the rank at 3. Larger m
    uses all of GL_m(q).
    """
    if m < 2:
        raise ValueError("need m >= 2")
    fs = _field(q)
    space = _CodeSpace(fs, 2 * m)
    eye_u, eye_w = np.eye(2, dtype=np.int64), np.eye(m, dtype=np.int64)
    gens = space.translations()
    gens += [space.linear(kron_codes(fs, a, eye_w)) for a in gl_generators(fs, 2)]

    def full() -> list[Permutation]:
        return gens + [space.linear(kron_codes(fs, eye_u, b)) for b in gl_generators(fs, m)]

    fallback: Optional[Callable[[], list[Permutation]]] = None
    if m > 3:
        chosen = full()
    else:
        singer = singer_cycle(fs, m)
        # GammaL_1(4) is all of GL_2(2)
        normaliser = [singer] if (q, m) == (2, 2) else [singer, singer_frobenius(fs, m, singer)]
        chosen = gens + [space.linear(kron_codes(fs, eye_u, b)) for b in normaliser]
        fallback = full
    descriptor = InstanceDescriptor(
        "bilinear",
        {"q": q, "m": m},
        PermutationGroup(space.n, chosen),
        bilinear_subdegrees(q, m),
        tensor_closure_order(q, m),
    )
    return _checked(descriptor, fallback, "Singer subgroup is not rank 3; using GL_2(q) o GL_m(q)")


def _anisotropic_coefficients(fs: FieldStructure) -> tuple[int, int]:
    """Smallest (b, c) with t^2 + b t + c irreducible over GF(q)."""
    for b, c in product(range(fs.q), range(1, fs.q)):
        if all(fs.add(fs.add(fs.square(t), fs.mul(b, t)), c) for t in range(fs.q)):
            return b, c
    raise ConsistencyError(f"no irreducible quadratic over GF({fs.q})")


def standard_form_values(space: _CodeSpace, eps: int) -> np.ndarray:
    """kappa on every point: x1 x2 + ... with the last plane replaced by a norm form when eps = -1."""
    fs, x = space.fs, space.coords
    mul, add = fs.mul_table, fs.add_table
    values = np.zeros(space.n, dtype=np.int64)
    pairs = space.dim // 2 if eps == 1 else space.dim // 2 - 1
    for i in range(pairs):
        values = add[values, mul[x[:, 2 * i], x[:, 2 * i + 1]]]
    if eps == -1:
        b, c = _anisotropic_coefficients(fs)
        s, t = x[:, -2], x[:, -1]
        values = add[values, add[add[mul[s, s], mul[b, mul[s, t]]], mul[c, mul[t, t]]]]
    return values


def _reflection(space: _CodeSpace, values: np.ndarray, v: int) -> Permutation:
    """x -> x - f(x, v) kappa(v)^-1 v, a transvection in even characteristic."""
    fs = space.fs
    mul, add, neg = fs.mul_table, fs.add_table, space.neg
    polar = add[add[values[space.shift(v)], neg[values]], neg[values[v]]]
    coeff = neg[mul[polar, fs.inv(int(values[v]))]]
    images = space.index(add[space.coords, mul[coeff[:, None], space.coords[v][None, :]]])
    return Permutation(images.tolist(), check=False)


def _similarity(space: _CodeSpace, values: np.ndarray, eps: int) -> Optional[Permutation]:
    """
    A similarity with multiplier c: diag(c, 1) on each hyperbolic pair, and multiplication by an
    element of norm c on the anisotropic plane. None over GF(2).

    Raises:
        ConsistencyError: If the map does not scale the form by c
    """
    fs = space.fs
    if fs.q == 2:
        return None
    omega = 2
    dim = space.dim
    pairs = dim // 2 if eps == 1 else dim // 2 - 1
    matrix = np.zeros((dim, dim), dtype=np.int64)
    for i in range(pairs):
        matrix[2 * i, 2 * i] = omega
        matrix[2 * i + 1, 2 * i + 1] = 1
    if eps == -1:
        b, c = _anisotropic_coefficients(fs)
        norms = {
            fs.add(fs.add(fs.square(x), fs.mul(b, fs.mul(x, y))), fs.mul(c, fs.square(y))): (x, y)
            for x, y in product(range(fs.q), repeat=2)
        }
        x, y = norms[omega]
        matrix[dim - 2 :, dim - 2 :] = [[x, y], [fs.neg(fs.mul(c, y)), fs.add(x, fs.mul(b, y))]]
    g = space.linear(matrix)
    if not np.array_equal(values[np.asarray(g.images)], fs.mul_table[omega, values]):
        raise ConsistencyError("similarity does not scale the standard form")
    return g


def _isometries(
    space: _CodeSpace, values: np.ndarray, target: int, even: bool, extra: Sequence[Permutation] = ()
) -> list[Permutation]:
    """
    Generators added one at a time until the group has order ``target``.

    With ``even``, products r_u r_v of two reflections with u fixed; otherwise ``extra`` and then
    single reflections.
    """
    nonsingular = [int(v) for v in np.flatnonzero(values)]

    def pool() -> Iterator[Permutation]:
        if even:
            first = _reflection(space, values, nonsingular[0])
            for v in nonsingular[1:]:
                yield first * _reflection(space, values, v)
            return
        yield from extra
        for v in nonsingular:
            yield _reflection(space, values, v)

    chain = StabilizerChain(space.n)
    gens: list[Permutation] = []
    for g in pool():
        if chain.add(g.images):
            gens.append(g)
        if chain.order() == target:
            break
    return gens


def _monomial_isometries(space: _CodeSpace, pairs: int) -> list[Permutation]:
    """Swap inside the first hyperbolic pair, and (x0, x1, x2, x3) -> (x3, x2, x1, x0)."""
    eye = np.eye(space.dim, dtype=np.int64)
    swap = eye.copy()
    swap[[0, 1]] = swap[[1, 0]]
    out = [space.linear(swap)]
    if pairs >= 2:
        cross = eye.copy()
        cross[[0, 1, 2, 3]] = cross[[3, 2, 1, 0]]
        out.append(space.linear(cross))
    return out


def zoo_affine_polar(eps: Any, m: int, q: int) -> InstanceDescriptor:
    """
    Translations, products of two reflections (transvections for even q) of the standard form and
    one similarity whose multiplier generates GF(q)^x.

    The even isometries are transitive on the singular vectors and on each level set of the form
    when the reflections generate GO; the similarity fuses the level sets. Where the result is
    not rank 3 the full similarity group is used instead.
    """
    e = sign(eps)
    if m < 2:
        raise ValueError("need m >= 2")
    fs = _field(q)
    space = _CodeSpace(fs, 2 * m)
    values = standard_form_values(space, e)
    target = order_orthogonal(e, 2 * m, q)
    similarity = [g for g in [_similarity(space, values, e)] if g is not None]
    translations = space.translations()
    pairs = m if e == 1 else m - 1

    even = _isometries(space, values, target // 2, even=True)

    def full() -> list[Permutation]:
        extra = _monomial_isometries(space, pairs)
        return translations + _isometries(space, values, target, even=False, extra=extra) + similarity

    descriptor = InstanceDescriptor(
        "affine_polar",
        {"eps": "+" if e == 1 else "-", "m": m, "q": q},
        PermutationGroup(space.n, translations + even + similarity),
        affine_polar_subdegrees(e, m, q),
        qform_closure_order(e, m, q),
    )
    return _checked(descriptor, full, "even isometries are not rank 3; using all similarities")


ZOO: dict[str, tuple[Callable[..., InstanceDescriptor], tuple[type, ...]]] = {
    "imprimitive": (zoo_imprimitive, (str, int)),
    "product": (zoo_product, (str,)),
    "johnson": (zoo_johnson_pairs, (int,)),
    "paley": (zoo_paley, (int,)),
    "clebsch": (zoo_clebsch, ()),
    "bilinear": (zoo_bilinear, (int, int)),
    "affine_polar": (zoo_affine_polar, (str, int, int)),
}


def build_instance(name: str, params: Sequence[str] = ()) -> InstanceDescriptor:
    """
    Build a zoo instance from string parameters, as given on the command line.

    Raises:
        ValueError: If the name is unknown or the parameters do not fit
    """
    if name not in ZOO:
        raise ValueError(f"unknown zoo instance {name!r}; choose from {sorted(ZOO)}")
    constructor, types = ZOO[name]
    if len(params) != len(types):
        raise ValueError(f"{name} takes {len(types)} parameters, got {len(params)}")
    try:
        args = [kind(raw) for kind, raw in zip(types, params)]
    except ValueError as e:
        raise ValueError(f"bad parameters for {name}: {list(params)}") from e
    return constructor(*args)
