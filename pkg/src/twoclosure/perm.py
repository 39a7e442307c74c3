# perm.py

"""
Permutations and permutation groups backed by a deterministic stabilizer chain.

Points are 0-based. Permutations act on the right: ``g(i)`` is the image of ``i`` and
``g * h`` applies ``g`` first.
"""

import logging
import random
from dataclasses import dataclass, field, replace
from itertools import product
from math import lcm, prod
from typing import Iterable, Iterator, Optional, Sequence

from .errors import (
    BudgetExceededError,
    DegreeMismatchError,
    IntransitiveGroupError,
    MalformedPermutationError,
    NotInGroupError,
    TooLargeError,
)
from .settings import Settings, get_settings

logger = logging.getLogger(__name__)

Images = tuple[int, ...]


def compose(a: Images, b: Images) -> Images:
    """Images of ``a`` followed by ``b``."""
    return tuple(map(b.__getitem__, a))


def invert(a: Images) -> Images:
    inv = [0] * len(a)
    for i, j in enumerate(a):
        inv[j] = i
    return tuple(inv)


class Permutation:
    """A bijection of {0, ..., n-1} stored as its image tuple."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int], *, check: bool = True):
        images = tuple(int(x) for x in images) if check else tuple(images)
        if check:
            n = len(images)
            if set(images) != set(range(n)) or len(set(images)) != n:
                raise MalformedPermutationError(f"not a permutation of 0..{n - 1}: {list(images)}")
        self.images = images

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree), check=False)

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        """
        Build a permutation from cycles, composed left to right.

        Args:
            degree (int): Size of the domain
            cycles (Iterable[Sequence[int]]): Cycles such as ``[(0, 1, 2), (3, 4)]``

        Returns:
            Permutation: The product of the cycles
        """
        images = list(range(degree))
        for cycle in cycles:
            cycle = list(cycle)
            if len(set(cycle)) != len(cycle):
                raise MalformedPermutationError(f"repeated point in cycle {cycle}")
            if any(x < 0 or x >= degree for x in cycle):
                raise MalformedPermutationError(f"cycle {cycle} leaves the domain of size {degree}")
            step = list(range(degree))
            for k, x in enumerate(cycle):
                step[x] = cycle[(k + 1) % len(cycle)]
            images = [step[x] for x in images]
        return cls(images, check=False)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(other.images) != len(self.images):
            raise DegreeMismatchError(f"degrees {self.degree} and {other.degree} differ")
        return Permutation(compose(self.images, other.images), check=False)

    def __invert__(self) -> "Permutation":
        return Permutation(invert(self.images), check=False)

    def inverse(self) -> "Permutation":
        return ~self

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else ~self
        k = abs(k)
        result = tuple(range(self.degree))
        images = base.images
        while k:
            if k & 1:
                result = compose(result, images)
            images = compose(images, images)
            k >>= 1
        return Permutation(result, check=False)

    def conjugate(self, g: "Permutation") -> "Permutation":
        """Return g^-1 * self * g."""
        return Permutation(compose(compose(invert(g.images), self.images), g.images), check=False)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cycle = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                seen.add(j)
                cycle.append(j)
                j = self.images[j]
            out.append(tuple(cycle))
        return out

    def order(self) -> int:
        return lcm(1, *(len(c) for c in self.cycles()))

    def support(self) -> list[int]:
        return [i for i, x in enumerate(self.images) if i != x]

    def cycle_string(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_string()}, degree={self.degree})"


@dataclass
class _Level:
    base: int
    gens: list[Images] = field(default_factory=list)
    orbit: list[int] = field(default_factory=list)
    transversal: dict[int, Images] = field(default_factory=dict)
    inverses: dict[int, Images] = field(default_factory=dict)
    checked: set[tuple[int, int]] = field(default_factory=set)

    def copy(self) -> "_Level":
        return _Level(
            self.base,
            list(self.gens),
            list(self.orbit),
            dict(self.transversal),
            dict(self.inverses),
            set(self.checked),
        )


class StabilizerChain:
    """
    Incremental Schreier-Sims chain with explicit transversals.

    New base points are the smallest point moved by the element that forces the new level;
    an optional base prefix is placed first.
    """

    def __init__(self, degree: int, base_prefix: Sequence[int] = ()):
        self.degree = degree
        self.identity: Images = tuple(range(degree))
        self.levels: list[_Level] = []
        for b in base_prefix:
            self._new_level(b)

    def _new_level(self, base: int) -> _Level:
        level = _Level(base, orbit=[base])
        level.transversal[base] = self.identity
        level.inverses[base] = self.identity
        self.levels.append(level)
        return level

    @property
    def base(self) -> list[int]:
        return [lv.base for lv in self.levels]

    def order(self) -> int:
        return prod(len(lv.orbit) for lv in self.levels)

    def sift(self, g: Images, start: int = 0) -> tuple[Images, int]:
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            inv = lv.inverses.get(g[lv.base])
            if inv is None:
                return g, i
            g = compose(g, inv)
        return g, len(self.levels)

    def contains(self, g: Images) -> bool:
        h, _ = self.sift(g)
        return h == self.identity

    def add(self, g: Images) -> bool:
        """Extend the chain by ``g``; return whether the group grew."""
        h, j = self.sift(g)
        if h == self.identity:
            return False
        self._insert(h, 0, j)
        self._complete(j)
        return True

    def _extend_orbit(self, lv: _Level) -> None:
        k = 0
        while k < len(lv.orbit):
            pt = lv.orbit[k]
            u = lv.transversal[pt]
            for g in lv.gens:
                img = g[pt]
                if img not in lv.transversal:
                    w = compose(u, g)
                    lv.transversal[img] = w
                    lv.inverses[img] = invert(w)
                    lv.orbit.append(img)
            k += 1

    def _insert(self, h: Images, lo: int, j: int) -> None:
        if j == len(self.levels):
            moved = next(i for i, x in enumerate(h) if i != x)
            self._new_level(moved)
        for index in range(lo, j + 1):
            lv = self.levels[index]
            lv.gens.append(h)
            self._extend_orbit(lv)

    def _complete(self, i: int) -> None:
        while i >= 0:
            lv = self.levels[i]
            restart = None
            for beta in list(lv.orbit):
                u = lv.transversal[beta]
                for gi, x in enumerate(lv.gens):
                    if (beta, gi) in lv.checked:
                        continue
                    lv.checked.add((beta, gi))
                    gamma = x[beta]
                    ux = compose(u, x)
                    if ux == lv.transversal[gamma]:
                        continue
                    h, j = self.sift(compose(ux, lv.inverses[gamma]), i + 1)
                    if h != self.identity:
                        self._insert(h, i + 1, j)
                        restart = j
                        break
                if restart is not None:
                    break
            i = restart if restart is not None else i - 1

    def random_element(self, rng: random.Random) -> Images:
        g = self.identity
        for lv in reversed(self.levels):
            g = compose(g, lv.transversal[lv.orbit[rng.randrange(len(lv.orbit))]])
        return g

    def elements(self) -> Iterator[Images]:
        transversals = [[lv.transversal[pt] for pt in lv.orbit] for lv in reversed(self.levels)]
        for choice in product(*transversals):
            g = self.identity
            for u in choice:
                g = compose(g, u)
            yield g

    def tail(self, start: int) -> "StabilizerChain":
        """Chain of the pointwise stabilizer of the first ``start`` base points."""
        chain = StabilizerChain(self.degree)
        chain.levels = [lv.copy() for lv in self.levels[start:]]
        return chain


@dataclass(frozen=True)
class BlockSystem:
    blocks: tuple[tuple[int, ...], ...]

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    @property
    def block_size(self) -> int:
        return len(self.blocks[0])

    def block_of(self) -> list[int]:
        index = [0] * sum(len(b) for b in self.blocks)
        for k, block in enumerate(self.blocks):
            for x in block:
                index[x] = k
        return index


class PermutationGroup:
    """
    A group given by generators, with a lazily built stabilizer chain.

    Args:
        degree (int): Size of the domain
        generators (Iterable[Permutation]): Generators; each must have the given degree
        base (Sequence[int]): Optional base prefix for the chain
    """

    def __init__(
        self,
        degree: int,
        generators: Iterable[Permutation] = (),
        *,
        base: Sequence[int] = (),
    ):
        gens = []
        for g in generators:
            if not isinstance(g, Permutation):
                g = Permutation(g)
            if g.degree != degree:
                raise DegreeMismatchError(f"generator of degree {g.degree} in a group of degree {degree}")
            gens.append(g)
        self.degree = degree
        self.generators: tuple[Permutation, ...] = tuple(gens)
        self._base_prefix = tuple(base)
        self._chain: Optional[StabilizerChain] = None
        self._prefixed: dict[int, StabilizerChain] = {}

    @classmethod
    def _from_chain(
        cls, degree: int, chain: StabilizerChain, generators: Iterable[Permutation]
    ) -> "PermutationGroup":
        group = cls(degree, generators)
        group._chain = chain
        return group

    @property
    def chain(self) -> StabilizerChain:
        if self._chain is None:
            chain = StabilizerChain(self.degree, self._base_prefix)
            for g in self.generators:
                chain.add(g.images)
            self._chain = chain
            logger.debug(f"Chain built for degree {self.degree}: base {chain.base}, order {chain.order()}")
        return self._chain

    def _chain_from(self, alpha: int) -> StabilizerChain:
        chain = self.chain
        if chain.levels and chain.levels[0].base == alpha:
            return chain
        if alpha not in self._prefixed:
            prefixed = StabilizerChain(self.degree, (alpha,))
            for g in self.generators:
                prefixed.add(g.images)
            self._prefixed[alpha] = prefixed
        return self._prefixed[alpha]

    @property
    def order(self) -> int:
        return self.chain.order()

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def _check_degree(self, g: Permutation) -> None:
        if g.degree != self.degree:
            raise DegreeMismatchError(f"permutation of degree {g.degree} tested against degree {self.degree}")

    def contains(self, g: Permutation) -> bool:
        self._check_degree(g)
        return self.chain.contains(g.images)

    def __contains__(self, g: Permutation) -> bool:
        return self.contains(g)

    def is_subgroup_of(self, other: "PermutationGroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    def is_trivial(self) -> bool:
        return all(g.is_identity() for g in self.generators)

    def is_abelian(self) -> bool:
        gens = [g.images for g in self.generators]
        return all(compose(a, b) == compose(b, a) for k, a in enumerate(gens) for b in gens[k + 1:])

    def orbit_of(self, alpha: int) -> list[int]:
        seen = {alpha}
        orbit = [alpha]
        for pt in orbit:
            for g in self.generators:
                img = g.images[pt]
                if img not in seen:
                    seen.add(img)
                    orbit.append(img)
        return orbit

    def orbits(self) -> list[list[int]]:
        seen: set[int] = set()
        out = []
        for alpha in range(self.degree):
            if alpha not in seen:
                orbit = sorted(self.orbit_of(alpha))
                seen.update(orbit)
                out.append(orbit)
        return out

    def is_transitive(self) -> bool:
        return self.degree <= 1 or len(self.orbit_of(0)) == self.degree

    def transporter(self, alpha: int, beta: int) -> Optional[Permutation]:
        """
        Find an element mapping ``alpha`` to ``beta``.

        Returns:
            Optional[Permutation]: An element of the group, or None if beta is not in the orbit
        """
        u = self._chain_from(alpha).levels
        if not u:
            return self.identity() if alpha == beta else None
        images = u[0].transversal.get(beta)
        return None if images is None else Permutation(images, check=False)

    def point_stabilizer(self, alpha: int) -> "PermutationGroup":
        chain = self._chain_from(alpha)
        if not chain.levels:
            return PermutationGroup(self.degree)
        tail = chain.tail(1)
        strong = tail.levels[0].gens if tail.levels else []
        return PermutationGroup._from_chain(
            self.degree, tail, [Permutation(g, check=False) for g in strong]
        )

    def random_element(self, rng: random.Random) -> Permutation:
        return Permutation(self.chain.random_element(rng), check=False)

    def enumerate_elements(self, cap: Optional[int] = None, settings: Optional[Settings] = None) -> list[Permutation]:
        """
        List every element of the group.

        Raises:
            TooLargeError: If the order exceeds the cap
        """
        settings = settings or get_settings()
        cap = settings.enumeration_cap if cap is None else cap
        if self.order > cap:
            raise TooLargeError("group enumeration", self.order, cap)
        return [Permutation(g, check=False) for g in self.chain.elements()]

    def minimal_blocks(self) -> Optional[BlockSystem]:
        """
        Find a nontrivial block system of smallest block size.

        Returns:
            Optional[BlockSystem]: The block system, or None if the group is primitive

        Raises:
            IntransitiveGroupError: If the group is not transitive
        """
        if not self.is_transitive():
            raise IntransitiveGroupError("minimal_blocks needs a transitive group")
        n = self.degree
        gens = [g.images for g in self.generators]
        best: Optional[list[int]] = None
        best_size = n
        for beta in range(1, n):
            classes = _minimal_block_classes(gens, n, 0, beta)
            size = sum(1 for x in classes if x == classes[0])
            if size < best_size:
                best, best_size = classes, size
                if size == 2:
                    break
        if best is None or best_size in (1, n):
            return None
        cells: dict[int, list[int]] = {}
        for x, root in enumerate(best):
            cells.setdefault(root, []).append(x)
        blocks = tuple(sorted(tuple(c) for c in cells.values()))
        return BlockSystem(blocks)

    def __repr__(self) -> str:
        return f"PermutationGroup(degree={self.degree}, generators={len(self.generators)})"


def _minimal_block_classes(gens: list[Images], n: int, a: int, b: int) -> list[int]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> bool:
        rx, ry = find(x), find(y)
        if rx == ry:
            return False
        if rx < ry:
            rx, ry = ry, rx
        parent[rx] = ry
        return True

    union(a, b)
    pairs = [(a, b)]
    while pairs:
        x, y = pairs.pop()
        for g in gens:
            gx, gy = g[x], g[y]
            if union(gx, gy):
                pairs.append((gx, gy))
    return [find(x) for x in range(n)]


def build_group(degree: int, gens: Iterable[Permutation]) -> PermutationGroup:
    """
    Build a group and its chain.

    Args:
        degree (int): Size of the domain
        gens (Iterable[Permutation]): Generators

    Returns:
        PermutationGroup: The group with its order computed
    """
    group = PermutationGroup(degree, gens)
    _ = group.order
    return group


def symmetric_group(degree: int) -> PermutationGroup:
    if degree <= 1:
        return PermutationGroup(degree)
    gens = [Permutation.from_cycles(degree, [(0, 1)])]
    if degree > 2:
        gens.append(Permutation.from_cycles(degree, [tuple(range(degree))]))
    return PermutationGroup(degree, gens)


def _prime_factors(k: int) -> list[int]:
    primes = []
    d = 2
    while d * d <= k:
        if k % d == 0:
            primes.append(d)
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        primes.append(k)
    return primes


def _conjugate(x: Images, g: Images, g_inv: Images) -> Images:
    return compose(compose(g_inv, x), g)


def normal_closure(
    group: PermutationGroup,
    seeds: Iterable[Permutation],
    *,
    check: bool = True,
    limit: Optional[int] = None,
) -> PermutationGroup:
    """
    Smallest normal subgroup of ``group`` containing the seeds.

    Args:
        group (PermutationGroup): Ambient group
        seeds (Iterable[Permutation]): Elements of the ambient group
        check (bool): Test seed membership first
        limit (Optional[int]): Stop growing once the order reaches this value

    Returns:
        PermutationGroup: The normal closure (or a subgroup of order >= limit if stopped early)

    Raises:
        NotInGroupError: If a seed is not an element of the group
    """
    seeds = list(seeds)
    if check:
        for s in seeds:
            if not group.contains(s):
                raise NotInGroupError(f"seed {s.cycle_string()} is not in the group")
    n = group.degree
    chain = StabilizerChain(n)
    gens: list[Images] = []
    for s in seeds:
        if chain.add(s.images):
            gens.append(s.images)
    conjugators = [(g.images, invert(g.images)) for g in group.generators]
    i = 0
    while i < len(gens):
        if limit is not None and chain.order() >= limit:
            break
        x = gens[i]
        for g, g_inv in conjugators:
            c = _conjugate(x, g, g_inv)
            if chain.add(c):
                gens.append(c)
        i += 1
    return PermutationGroup._from_chain(n, chain, [Permutation(g, check=False) for g in gens])


def commutator(a: Permutation, b: Permutation) -> Permutation:
    """Return a^-1 b^-1 a b."""
    return ~a * ~b * a * b


def derived_subgroup(group: PermutationGroup) -> PermutationGroup:
    gens = group.generators
    seeds = [commutator(a, b) for k, a in enumerate(gens) for b in gens[k + 1:]]
    seeds = [s for s in seeds if not s.is_identity()]
    return normal_closure(group, seeds, check=False)


def _candidates(
    group: PermutationGroup, rng: random.Random, settings: Settings
) -> Iterator[Images]:
    """Prime-order powers of elements of ``group``, fixed-point-free ones first."""
    if group.order <= settings.enumeration_cap:
        pool = [g.images for g in group.generators] + list(group.chain.elements())
    else:
        pool = [g.images for g in group.generators]
        pool += [group.chain.random_element(rng) for _ in range(settings.socle_samples)]
    seen: set[Images] = set()
    ordered = sorted(pool, key=lambda g: any(i == x for i, x in enumerate(g)))
    for y in ordered:
        perm = Permutation(y, check=False)
        o = perm.order()
        if o == 1:
            continue
        for ell in _prime_factors(o):
            x = (perm ** (o // ell)).images
            if x not in seen:
                seen.add(x)
                yield x


class _SocleSearch:
    def __init__(self, group: PermutationGroup, settings: Settings):
        self.group = group
        self.settings = settings
        self.rng = random.Random(settings.seed)
        self.budget = settings.socle_samples * 16

    def closure(self, x: Images, limit: int) -> PermutationGroup:
        self.budget -= 1
        if self.budget < 0:
            raise BudgetExceededError("socle search ran out of normal closure computations")
        return normal_closure(self.group, [Permutation(x, check=False)], check=False, limit=limit)

    def minimize(self, start: PermutationGroup, avoid: Optional[PermutationGroup] = None) -> PermutationGroup:
        current = start
        while True:
            smaller = None
            for x in _candidates(current, self.rng, self.settings):
                if avoid is not None and avoid.chain.contains(x):
                    continue
                k = self.closure(x, current.order)
                if k.order < current.order:
                    smaller = k
                    break
            if smaller is None:
                return current
            logger.debug(f"Normal subgroup shrunk from {current.order} to {smaller.order}")
            current = smaller


def minimal_normal_subgroups(group: PermutationGroup, settings: Optional[Settings] = None) -> list[PermutationGroup]:
    """
    Minimal normal subgroups of a primitive group.

    A primitive group has at most two; the second one is only searched for when the first is
    regular and nonabelian.

    Raises:
        BudgetExceededError: If the search runs out of closure computations
    """
    settings = settings or get_settings()
    if group.is_trivial():
        return []
    search = _SocleSearch(group, settings)
    first = search.minimize(group)
    found = [first]
    if first.order == group.degree and not first.is_abelian():
        for x in _candidates(group, search.rng, settings):
            if first.chain.contains(x):
                continue
            ncl = search.closure(x, group.order)
            second = search.minimize(ncl, avoid=first)
            if not any(first.contains(g) for g in second.generators if not g.is_identity()):
                found.append(second)
                break
    return found


def socle_primitive(group: PermutationGroup, settings: Optional[Settings] = None) -> PermutationGroup:
    """
    Product of the minimal normal subgroups found by element-closure minimization.

    Args:
        group (PermutationGroup): A transitive group, intended to be primitive
        settings (Optional[Settings]): Caps; defaults to the process settings

    Returns:
        PermutationGroup: The socle for primitive input
    """
    parts = minimal_normal_subgroups(group, settings)
    if not parts:
        return PermutationGroup(group.degree)
    if len(parts) == 1:
        return parts[0]
    return PermutationGroup(group.degree, [g for m in parts for g in m.generators])


def is_simple_nonabelian(group: PermutationGroup, settings: Optional[Settings] = None) -> bool:
    """
    Test whether the group is nonabelian and simple.

    Every nontrivial normal subgroup contains an element of prime order, so the group is simple
    iff the normal closure of each prime-order element is the whole group. Up to
    ``simple_scan_cap`` every conjugacy class is tested; above it, sampled elements are.
    """
    settings = settings or get_settings()
    if group.is_trivial() or group.is_abelian():
        return False
    order = group.order
    if derived_subgroup(group).order != order:
        return False
    rng = random.Random(settings.seed)
    conjugators = [(g.images, invert(g.images)) for g in group.generators]
    covered: set[Images] = set()
    exact = order <= settings.simple_scan_cap
    for x in _candidates(group, rng, _scan(settings, exact)):
        if x in covered:
            continue
        if normal_closure(group, [Permutation(x, check=False)], check=False, limit=order).order < order:
            return False
        if exact:
            cls = [x]
            covered.add(x)
            for y in cls:
                for g, g_inv in conjugators:
                    c = _conjugate(y, g, g_inv)
                    if c not in covered:
                        covered.add(c)
                        cls.append(c)
    if not exact:
        logger.debug(f"Simplicity of a group of order {order} decided by sampling")
    return True


def _scan(settings: Settings, exact: bool) -> Settings:
    """Enumerate every element exactly when the scan is exact."""
    return replace(settings, enumeration_cap=settings.simple_scan_cap if exact else 0)
