#!/usr/bin/env python3
"""
Shintani - Cones

Simplicial cones with their upper closures, fundamental parallelotopes,
the real-quadratic single-cone decomposition, the locate map and the
multiplication-by-p permutation of the parallelotope points.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import floor, gcd, isqrt, log
from typing import Optional, Sequence

import numpy as np
from sympy import factorint

from shintani.config import Config
from shintani.errors import (
    AmbiguousLocation,
    FieldDataInvalid,
    LatticeNotContained,
    NarrowClassNumberNotOne,
    NotCoprimeToModulus,
    NotInAnyCone,
    PDividesIndex,
    UndecidedAtPrecision,
    UnitNotFound,
)
from shintani.field.model import (
    CNResidueMap,
    Coords,
    FieldData,
    FieldElement,
    Interval,
    determinant,
    interval_determinant,
    invert_matrix,
    row_times_matrix,
)


# =============================================================================
# LATTICES AND CONES
# =============================================================================

@dataclass(frozen=True, eq=False)
class IdealLattice:
    """Z-basis of a fractional ideal (the lattice of a^-1 in the formulas)."""

    label: str
    basis: tuple[FieldElement, ...]

    @cached_property
    def inverse_basis(self) -> tuple[Coords, ...]:
        return invert_matrix([b.coords for b in self.basis])

    def coordinates(self, y: FieldElement) -> Coords:
        return row_times_matrix(y.coords, self.inverse_basis)

    def contains(self, y: FieldElement) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(y))


def e1_coordinate_signs(field: FieldData, generators: Sequence[FieldElement]) -> tuple[int, ...]:
    """Signs of s_i where e_1 = sum s_i sigma(v_i) in R^k.

    Raises:
        UndecidedAtPrecision: a coordinate is zero or not separated from zero
    """
    k = field.degree
    for level in range(Config.MAX_REFINEMENTS):
        columns = [field.embedding_intervals(g, level) for g in generators]
        rows = [[columns[i][j] for i in range(k)] for j in range(k)]
        det = interval_determinant(rows)
        det_sign = det.sign()
        if det_sign is None:
            continue
        signs = []
        for i in range(k):
            if k == 1:
                cofactor = Interval.point(Fraction(1))
            else:
                minor = [row[:i] + row[i + 1:] for row in rows[1:]]
                cofactor = interval_determinant(minor)
                if i % 2:
                    cofactor = -cofactor
            s = cofactor.sign()
            if s is None:
                break
            signs.append(s * det_sign)
        else:
            return tuple(signs)
    raise UndecidedAtPrecision("e_1 coordinates not separated from zero")


@dataclass(frozen=True, eq=False)
class ConeContext:
    """A simplicial cone C(V) with its upper-closure rule.

    included[i] is True when the face t_i = 0 belongs to the upper closure
    (the e_1-coordinate s_i is positive).
    """

    field: FieldData
    generators: tuple[FieldElement, ...]
    included: tuple[bool, ...]
    label: str = "V"

    @classmethod
    def build(cls, field: FieldData, generators: Sequence[FieldElement], label: str = "V") -> "ConeContext":
        """Validate generators and derive closure signs from e_1.

        Raises:
            FieldDataInvalid: generators are not a Q-basis or not totally positive
        """
        gens = tuple(generators)
        if len(gens) != field.degree:
            raise FieldDataInvalid(f"cone {label} needs {field.degree} generators")
        if determinant([g.coords for g in gens]) == 0:
            raise FieldDataInvalid(f"cone {label} generators are not a Q-basis")
        for i, g in enumerate(gens):
            if not field.is_totally_positive(g):
                raise FieldDataInvalid(f"cone {label} generator is not totally positive", (i,))
        signs = e1_coordinate_signs(field, gens)
        return cls(field, gens, tuple(s > 0 for s in signs), label)

    @property
    def k(self) -> int:
        return self.field.degree

    @cached_property
    def inverse_matrix(self) -> tuple[Coords, ...]:
        return invert_matrix([g.coords for g in self.generators])

    def coordinates(self, y: FieldElement) -> Coords:
        """t with y = sum t_i v_i."""
        return row_times_matrix(y.coords, self.inverse_matrix)

    def from_coordinates(self, t: Sequence) -> FieldElement:
        k = self.k
        out = [Fraction(0)] * k
        for ti, g in zip(t, self.generators):
            if ti:
                for m in range(k):
                    out[m] += Fraction(ti) * g.coords[m]
        return FieldElement(self.field, tuple(out))

    def point(self, x: FieldElement, l: Sequence[int]) -> FieldElement:
        """x + sum l_i v_i."""
        return x + self.from_coordinates(l)

    def lattice_index(self, lattice: IdealLattice) -> int:
        """[lattice : L_V], the number of parallelotope points."""
        return len(_coset_group(self, lattice))

    def is_p_regular(self, p: int, lattice: IdealLattice) -> bool:
        return self.lattice_index(lattice) % p != 0

    def residues(self, cn: CNResidueMap) -> tuple[int, ...]:
        """rho(v_i), each required to be a unit modulo N."""
        out = tuple(cn.apply(g) for g in self.generators)
        for r in out:
            if gcd(r, cn.modulus) != 1:
                raise NotCoprimeToModulus(r, cn.modulus)
        return out

    def normalize(self, t: Sequence[Fraction]) -> tuple[Coords, tuple[int, ...]]:
        """Split t = f + l with f in the parallelotope range and l integral."""
        fracs, ints = [], []
        for ti, inc in zip(t, self.included):
            ti = Fraction(ti)
            base = floor(ti) if inc else -floor(-ti) - 1
            fracs.append(ti - base)
            ints.append(int(base))
        return tuple(fracs), tuple(ints)


def upper_closure_contains(cone: ConeContext, y: FieldElement) -> bool:
    """y lies in the upper closure: t_i >= 0, and t_i = 0 only on included faces."""
    for ti, inc in zip(cone.coordinates(y), cone.included):
        if ti < 0 or (ti == 0 and not inc):
            return False
    return True


# =============================================================================
# FUNDAMENTAL PARALLELOTOPE
# =============================================================================

def _coset_group(cone: ConeContext, lattice: IdealLattice) -> list[Coords]:
    """Fractional cone coordinates of all cosets of L_V in the lattice."""
    gens_in_lattice = [lattice.coordinates(g) for g in cone.generators]
    if any(c.denominator != 1 for row in gens_in_lattice for c in row):
        raise LatticeNotContained(f"L_{cone.label} is not contained in lattice {lattice.label}")
    steps = []
    for b in lattice.basis:
        t = cone.coordinates(b)
        steps.append(tuple(c - floor(c) for c in t))
    zero = tuple(Fraction(0) for _ in range(cone.k))
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for f in frontier:
            for s in steps:
                g = tuple((a + b) - floor(a + b) for a, b in zip(f, s))
                if g not in seen:
                    seen.add(g)
                    nxt.append(g)
        frontier = nxt
    return sorted(seen)


def _normalized_fraction(cone: ConeContext, f: Coords) -> Coords:
    return tuple(Fraction(1) if (c == 0 and not inc) else c for c, inc in zip(f, cone.included))


def parallelotope_points(cone: ConeContext, lattice: IdealLattice) -> list[FieldElement]:
    """P(V) intersected with the lattice, in canonical order.

    Raises:
        LatticeNotContained: L_V is not a sublattice
    """
    fracs = sorted(_normalized_fraction(cone, f) for f in _coset_group(cone, lattice))
    return [cone.from_coordinates(f) for f in fracs]


def _multiply_point(cone: ConeContext, x: FieldElement, factor: int) -> FieldElement:
    t = cone.coordinates(x)
    f = tuple((factor * c) - floor(factor * c) for c in t)
    return cone.from_coordinates(_normalized_fraction(cone, f))


def tau_p(cone: ConeContext, lattice: IdealLattice, x: FieldElement, p: int) -> FieldElement:
    """The point of P(V) congruent to p*x modulo L_V.

    Raises:
        PDividesIndex: p divides [lattice : L_V]
    """
    index = cone.lattice_index(lattice)
    if index % p == 0:
        raise PDividesIndex(p, index)
    return _multiply_point(cone, x, p)


def tau_p_inv(cone: ConeContext, lattice: IdealLattice, x: FieldElement, p: int) -> FieldElement:
    """The point of P(V) congruent to p^-1 * x modulo L_V."""
    index = cone.lattice_index(lattice)
    if index % p == 0:
        raise PDividesIndex(p, index)
    if index == 1:
        return x
    return _multiply_point(cone, x, pow(p, -1, index))


# =============================================================================
# DECOMPOSITIONS
# =============================================================================

@dataclass(frozen=True, eq=False)
class Decomposition:
    """Cones whose unit translates tile the totally positive orthant.

    units generate the totally positive units (empty for F = Q); ring is the
    Z-basis of O; ideals are the lattices a_i^-1 of the class representatives.
    """

    field: FieldData
    cones: tuple[ConeContext, ...]
    units: tuple[FieldElement, ...]
    ring: IdealLattice
    ideals: tuple[IdealLattice, ...]

    def cone(self, label: str) -> ConeContext:
        for c in self.cones:
            if c.label == label:
                return c
        raise KeyError(label)


@dataclass(frozen=True)
class Location:
    """y = unit^exponent * (x + sum l_i v_i) with x in P(V)."""

    exponent: tuple[int, ...]
    cone: str
    x: FieldElement
    l: tuple[int, ...]


def _unit_seed(dec: Decomposition, y: FieldElement) -> np.ndarray:
    """Real exponents placing y near the cone centres in log space."""
    if not dec.units:
        return np.zeros(0)
    field = dec.field
    logs = np.array([[log(v) for v in field.embedding_floats(u)] for u in dec.units])
    target = np.array([log(v) for v in field.embedding_floats(y)])
    centre = np.zeros(field.degree)
    for cone in dec.cones:
        centre += np.array([log(v) for v in field.embedding_floats(sum(cone.generators, field.zero()))])
    centre /= len(dec.cones)
    rhs = (target - target.mean()) - (centre - centre.mean())
    solution, *_ = np.linalg.lstsq(logs.T, rhs, rcond=None)
    return solution


def locate(dec: Decomposition, y: FieldElement, shuffle: Optional[np.random.Generator] = None) -> Location:
    """The unique (unit power, cone, parallelotope point, offset) for y.

    shuffle permutes the search over unit exponents and cones; a valid
    decomposition returns the same location for every order.

    Raises:
        NotInAnyCone: no translate contains y
        AmbiguousLocation: several translates contain y
    """
    field = dec.field
    if not field.is_totally_positive(y):
        raise ValueError(f"{y} is not totally positive")
    seed = _unit_seed(dec, y)
    radius = Config.LOCATE_RADIUS
    centres = [int(round(float(c))) for c in seed]
    ranges = [range(c - radius, c + radius + 1) for c in centres]
    candidates = [(exps, cone) for exps in itertools.product(*ranges) for cone in dec.cones]
    if shuffle is not None:
        candidates = [candidates[i] for i in shuffle.permutation(len(candidates))]
    translated: dict[tuple[int, ...], FieldElement] = {}
    found: list[Location] = []
    for exps, cone in candidates:
        if exps not in translated:
            z = y
            for u, e in zip(dec.units, exps):
                z = z * field.power(u, -e)
            translated[exps] = z
        z = translated[exps]
        if upper_closure_contains(cone, z):
            fracs, ints = cone.normalize(cone.coordinates(z))
            found.append(Location(tuple(exps), cone.label, cone.from_coordinates(fracs), ints))
    if not found:
        raise NotInAnyCone(f"{y} lies in no cone translate")
    if len(found) > 1:
        raise AmbiguousLocation(f"{y} lies in {len(found)} cone translates")
    return found[0]


def random_totally_positive(field: FieldData, rng: np.random.Generator, count: int, height: int = 20) -> list[FieldElement]:
    """Squares of random nonzero elements with small rational coordinates."""
    out = []
    while len(out) < count:
        coords = [Fraction(int(rng.integers(-height, height + 1)), int(rng.integers(1, 7))) for _ in range(field.degree)]
        if any(coords):
            a = field.element(coords)
            out.append(a * a)
    return out


def validate_decomposition(
    dec: Decomposition,
    extra: Sequence[FieldElement] = (),
    samples: int = 0,
    seed: int = 0,
) -> int:
    """Round-trip locate on points built from the cones and units.

    samples random totally positive points are added, and each of those is
    located a second time with a shuffled search order. Returns the number
    of points checked.

    Raises:
        NotInAnyCone: a point lies in no translate
        AmbiguousLocation: a point lies in several translates
    """
    field = dec.field
    rng = np.random.default_rng(seed)
    points = list(extra)
    for cone in dec.cones:
        total = sum(cone.generators, field.zero())
        points.extend(cone.generators)
        points.append(total)
        points.append(total + cone.generators[0])
    for u in dec.units:
        points.extend([p * u for p in points] + [p / u for p in points])
    randomized = random_totally_positive(field, rng, samples)
    for y in points + randomized:
        loc = locate(dec, y)
        rebuilt = dec.cone(loc.cone).point(loc.x, loc.l)
        for u, e in zip(dec.units, loc.exponent):
            rebuilt = rebuilt * field.power(u, e)
        if rebuilt != y:
            raise NotInAnyCone(f"locate({y}) does not reconstruct the point")
    for y in randomized:
        first, again = locate(dec, y), locate(dec, y, shuffle=rng)
        if (first.exponent, first.cone, first.x.coords, first.l) != (again.exponent, again.cone, again.x.coords, again.l):
            raise AmbiguousLocation(f"locate({y}) depends on the search order")
    return len(points) + len(randomized)


# =============================================================================
# REAL QUADRATIC FIELDS
# =============================================================================

def _is_squarefree(D: int) -> bool:
    return D > 1 and all(e == 1 for e in factorint(D).values())


def quadratic_field(D: int) -> tuple[FieldData, IdealLattice]:
    """Q(sqrt D) with reference basis {1, omega}, omega the ring generator."""
    if not _is_squarefree(D):
        raise FieldDataInvalid(f"D = {D} is not a squarefree integer > 1")
    if D % 4 == 1:
        basis = [[1, 0], [Fraction(1, 2), Fraction(1, 2)]]
        labels = ["1", "(1+sqrt%d)/2" % D]
    else:
        basis = [[1, 0], [0, 1]]
        labels = ["1", "sqrt%d" % D]
    field = FieldData.from_polynomial(f"Q(sqrt{D})", [-D, 0, 1], basis, labels=labels, discriminant=D)
    ring = IdealLattice("O", (field.basis_element(0), field.basis_element(1)))
    return field, ring


def _continued_fraction(P: int, Q: int, D: int):
    """Partial quotients of (P + sqrt D)/Q, with Q | D - P^2 and Q > 0."""
    root = isqrt(D)
    while True:
        a = (P + root) // Q
        yield a
        P = a * Q - P
        Q = (D - P * P) // Q


def fundamental_unit(D: int, max_terms: int = 10_000) -> tuple[int, int]:
    """(x, y) with x + y*omega the fundamental unit > 1 of Q(sqrt D).

    Raises:
        UnitNotFound: no unit among the first max_terms convergents
    """
    if D % 4 == 1:
        P, Q, trace_shift = 1, 2, True
    else:
        P, Q, trace_shift = 0, 1, False
    c = (D - 1) // 4
    h_prev, h = 1, 0
    k_prev, k = 0, 1
    for count, a in enumerate(_continued_fraction(P, Q, D)):
        h_prev, h = a * h_prev + h, h_prev
        k_prev, k = a * k_prev + k, k_prev
        num, den = h_prev, k_prev
        if den == 0:
            continue
        if trace_shift:
            x, y = num - den, den
            norm = x * x + x * y - c * y * y
        else:
            x, y = num, den
            norm = x * x - D * y * y
        if abs(norm) == 1 and y > 0:
            return x, y
        if count > max_terms:
            break
    raise UnitNotFound(f"no unit found for D = {D}")


def _below_sqrt(x: int, n: int) -> bool:
    """x < sqrt(n) for a nonsquare n."""
    return x < 0 or x * x < n


def narrow_class_number(D: int) -> int:
    """Number of cycles of reduced primitive forms of the field discriminant."""
    disc = D if D % 4 == 1 else 4 * D
    s = isqrt(disc)
    reduced = set()
    for b in range(1, s + 1):
        if (b - disc) % 2:
            continue
        num = b * b - disc
        for a_abs in range(1, s + 1):
            two_a = 2 * a_abs
            # sqrt(disc) - b < 2|a| < sqrt(disc) + b
            if _below_sqrt(b + two_a, disc) or not _below_sqrt(two_a - b, disc):
                continue
            for a in (a_abs, -a_abs):
                if num % (4 * a):
                    continue
                c = num // (4 * a)
                if gcd(gcd(a, b), c) == 1:
                    reduced.add((a, b, c))

    def rho(form):
        a, b, c = form
        two_c = 2 * abs(c)
        b_next = s - ((s + b) % two_c)
        return (c, b_next, (b_next * b_next - disc) // (4 * c))

    cycles = 0
    remaining = set(reduced)
    while remaining:
        start = remaining.pop()
        cycles += 1
        form = rho(start)
        while form != start:
            remaining.discard(form)
            form = rho(form)
    return cycles


def build_quadratic_decomposition(D: int) -> Decomposition:
    """The single-cone decomposition {1, eps+} of Q(sqrt D).

    Raises:
        NarrowClassNumberNotOne: the narrow class group is nontrivial
        UnitNotFound: the unit search failed
    """
    field, ring = quadratic_field(D)
    h_plus = narrow_class_number(D)
    if h_plus != 1:
        raise NarrowClassNumberNotOne(D if D % 4 == 1 else 4 * D, h_plus)
    x, y = fundamental_unit(D)
    eps = field.element([x, y])
    if eps.norm() == -1:
        eps = eps * eps
    if not field.is_totally_positive(eps):
        eps = -eps
    cone = ConeContext.build(field, [field.unit_element(), eps])
    dec = Decomposition(field, (cone,), (eps,), ring, (ring,))
    validate_decomposition(dec)
    return dec


def rational_decomposition(field: Optional[FieldData] = None) -> Decomposition:
    """F = Q with the cone {1}."""
    if field is None:
        field = FieldData.from_polynomial("Q", [0, 1], [[1]], labels=["1"])
    ring = IdealLattice("Z", (field.unit_element(),))
    cone = ConeContext.build(field, [field.unit_element()])
    return Decomposition(field, (cone,), (), ring, (ring,))
