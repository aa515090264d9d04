#!/usr/bin/env python3
"""
Shintani - Field Model

A totally real field F as exact data: elements as rational coordinate vectors
in a reference basis, multiplication through a table, norms and traces,
certified signs of the real embeddings, Cassou-Nogues residue maps and the
flat/sharp residue notation.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, lcm
from typing import Optional, Sequence, Union

from sympy import Matrix, Poly, Rational, Symbol, symbols

from shintani.config import Config
from shintani.errors import (
    CNMapInvalid,
    FieldDataInvalid,
    NotIntegralAtModulus,
    UndecidedAtPrecision,
)

_X = Symbol("x")

Coords = tuple[Fraction, ...]


def to_fraction(value) -> Fraction:
    """Fraction from int, str, Fraction or a sympy Rational."""
    if isinstance(value, (int, Fraction, str)):
        return Fraction(value)
    return Fraction(int(value.p), int(value.q))


def _rational_matrix(rows: Sequence[Sequence[Fraction]]) -> Matrix:
    return Matrix([[Rational(c.numerator, c.denominator) for c in row] for row in rows])


def invert_matrix(rows: Sequence[Sequence[Fraction]]) -> tuple[Coords, ...]:
    """Exact inverse of a square rational matrix."""
    inv = _rational_matrix(rows).inv()
    return tuple(tuple(to_fraction(inv[i, j]) for j in range(inv.cols)) for i in range(inv.rows))


def determinant(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    return to_fraction(_rational_matrix(rows).det())


def row_times_matrix(row: Sequence[Fraction], matrix: Sequence[Sequence[Fraction]]) -> Coords:
    return tuple(
        sum((row[i] * matrix[i][j] for i in range(len(row))), Fraction(0))
        for j in range(len(matrix[0]))
    )


# =============================================================================
# FLAT / SHARP RESIDUES
# =============================================================================

def _residue(a: Union[int, Fraction, "FieldElement"], h: int, cn: Optional["CNResidueMap"]) -> int:
    if isinstance(a, FieldElement):
        if cn is None:
            raise ValueError("a CN residue map is required for field elements")
        if cn.modulus % h:
            raise ValueError(f"modulus {h} does not divide N = {cn.modulus}")
        return cn.apply(a) % h
    a = Fraction(a)
    if gcd(a.denominator, h) != 1:
        raise NotIntegralAtModulus(a, h)
    return a.numerator * pow(a.denominator, -1, h) % h


def flat(a: Union[int, Fraction, "FieldElement"], h: int, cn: Optional["CNResidueMap"] = None) -> int:
    """The representative of a modulo h in [0, h)."""
    return _residue(a, h, cn)


def sharp(a: Union[int, Fraction, "FieldElement"], h: int, cn: Optional["CNResidueMap"] = None) -> int:
    """The representative of a modulo h in (0, h]."""
    return _residue(a, h, cn) or h


# =============================================================================
# CERTIFIED INTERVALS
# =============================================================================

@dataclass(frozen=True)
class Interval:
    """Closed rational interval [lo, hi]."""

    lo: Fraction
    hi: Fraction

    @classmethod
    def point(cls, c: Fraction) -> "Interval":
        return cls(c, c)

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: "Interval") -> "Interval":
        return self + (-other)

    def __mul__(self, other: "Interval") -> "Interval":
        ends = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(ends), max(ends))

    def sign(self) -> Optional[int]:
        """+1 or -1 when the interval excludes zero, else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return None

    @property
    def midpoint(self) -> float:
        return float((self.lo + self.hi) / 2)


def interval_determinant(rows: list[list[Interval]]) -> Interval:
    """Cofactor expansion; the matrices here are at most 3x3."""
    k = len(rows)
    if k == 1:
        return rows[0][0]
    total = Interval.point(Fraction(0))
    for j in range(k):
        minor = [row[:j] + row[j + 1:] for row in rows[1:]]
        term = rows[0][j] * interval_determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


class RootEnclosures:
    """Isolating intervals of the real roots of the certificate polynomial, in place order."""

    def __init__(self, coefficients: Sequence[Fraction], place_order: Sequence[int]):
        self._poly = Poly([Rational(c.numerator, c.denominator) for c in reversed(coefficients)], _X, domain="QQ")
        raw = self._poly.intervals()
        degree = self._poly.degree()
        if len(raw) != degree or any(mult != 1 for _, mult in raw):
            raise FieldDataInvalid("certificate polynomial is not squarefree with all roots real")
        ascending = [(to_fraction(a), to_fraction(b)) for (a, b), _ in raw]
        self._base = [ascending[i] for i in place_order]
        self._levels: dict[int, list[Interval]] = {}

    def at_level(self, level: int) -> list[Interval]:
        """Root intervals of width at most INITIAL_ROOT_WIDTH * 2^-level."""
        if level not in self._levels:
            eps = Fraction(Config.INITIAL_ROOT_WIDTH) / 2 ** level
            out = []
            for a, b in self._base:
                if a != b and b - a > eps:
                    s, t = self._poly.refine_root(Rational(a.numerator, a.denominator),
                                                  Rational(b.numerator, b.denominator),
                                                  eps=Rational(eps.numerator, eps.denominator))
                    a, b = to_fraction(s), to_fraction(t)
                out.append(Interval(a, b))
            self._levels[level] = out
        return self._levels[level]


def _horner(coeffs: Sequence[Fraction], x: Interval) -> Interval:
    acc = Interval.point(Fraction(0))
    for c in reversed(coeffs):
        acc = acc * x + Interval.point(c)
    return acc


# =============================================================================
# FIELD DATA AND ELEMENTS
# =============================================================================

@dataclass(frozen=True, eq=False)
class FieldData:
    """F with a reference basis v_1..v_k, its multiplication table and a positivity certificate.

    The certificate is a defining polynomial of a primitive element theta
    (lowest degree first) with the theta-power coordinates of each v_i.
    """

    name: str
    degree: int
    labels: tuple[str, ...]
    table: tuple[tuple[Coords, ...], ...]
    one: Coords
    polynomial: Coords
    theta_basis: tuple[Coords, ...]
    place_order: tuple[int, ...]
    discriminant: Optional[int] = None

    def __post_init__(self):
        self._validate()

    # -------------------------------------------------------------------------
    # Construction
    # -------------------------------------------------------------------------

    @classmethod
    def from_polynomial(
        cls,
        name: str,
        polynomial: Sequence,
        theta_basis: Sequence[Sequence],
        labels: Optional[Sequence[str]] = None,
        place_order: Optional[Sequence[int]] = None,
        discriminant: Optional[int] = None,
    ) -> "FieldData":
        """Derive the multiplication table from the certificate."""
        poly = tuple(to_fraction(c) for c in polynomial)
        basis = tuple(tuple(to_fraction(c) for c in row) for row in theta_basis)
        k = len(poly) - 1
        if len(basis) != k:
            raise FieldDataInvalid(f"need {k} basis elements, got {len(basis)}")
        inv = invert_matrix(basis)
        table = tuple(
            tuple(row_times_matrix(_theta_product(basis[i], basis[j], poly), inv) for j in range(k))
            for i in range(k)
        )
        one = row_times_matrix(tuple([Fraction(1)] + [Fraction(0)] * (k - 1)), inv)
        return cls(
            name=name,
            degree=k,
            labels=tuple(labels) if labels else tuple(f"v{i + 1}" for i in range(k)),
            table=table,
            one=one,
            polynomial=poly,
            theta_basis=basis,
            place_order=tuple(place_order) if place_order is not None else tuple(range(k - 1, -1, -1)),
            discriminant=discriminant,
        )

    def _validate(self) -> None:
        k = self.degree
        if len(self.table) != k or any(len(row) != k for row in self.table):
            raise FieldDataInvalid(f"multiplication table must be {k}x{k}")
        if sorted(self.place_order) != list(range(k)):
            raise FieldDataInvalid(f"place order {self.place_order} is not a permutation")
        for i in range(k):
            for j in range(k):
                if self.table[i][j] != self.table[j][i]:
                    raise FieldDataInvalid("multiplication table is not commutative", (i, j))
        for i in range(k):
            if self.mul(self.element(self.one), self.basis_element(i)).coords != self.basis_element(i).coords:
                raise FieldDataInvalid("declared unit is not a multiplicative identity", (i,))
        for i in range(k):
            for j in range(k):
                for m in range(k):
                    a, b, c = self.basis_element(i), self.basis_element(j), self.basis_element(m)
                    if (a * b * c).coords != (a * (b * c)).coords:
                        raise FieldDataInvalid("multiplication table is not associative", (i, j, m))
        if determinant(self.theta_basis) == 0:
            raise FieldDataInvalid("certificate basis is singular")
        for i in range(k):
            for j in range(k):
                expected = _theta_product(self.theta_basis[i], self.theta_basis[j], self.polynomial)
                got = self.to_theta(self.element(self.table[i][j]))
                if expected != got:
                    raise FieldDataInvalid("multiplication table disagrees with the certificate", (i, j))

    @cached_property
    def roots(self) -> RootEnclosures:
        return RootEnclosures(self.polynomial, self.place_order)

    # -------------------------------------------------------------------------
    # Elements
    # -------------------------------------------------------------------------

    def element(self, coords: Sequence) -> "FieldElement":
        if len(coords) != self.degree:
            raise ValueError(f"expected {self.degree} coordinates, got {len(coords)}")
        return FieldElement(self, tuple(to_fraction(c) for c in coords))

    def basis_element(self, i: int) -> "FieldElement":
        return self.element([1 if j == i else 0 for j in range(self.degree)])

    def from_rational(self, value) -> "FieldElement":
        return FieldElement(self, tuple(to_fraction(value) * c for c in self.one))

    def zero(self) -> "FieldElement":
        return self.element([0] * self.degree)

    def unit_element(self) -> "FieldElement":
        return self.element(self.one)

    def mul(self, a: "FieldElement", b: "FieldElement") -> "FieldElement":
        k = self.degree
        out = [Fraction(0)] * k
        for i, x in enumerate(a.coords):
            if not x:
                continue
            for j, y in enumerate(b.coords):
                if not y:
                    continue
                xy = x * y
                for m, c in enumerate(self.table[i][j]):
                    if c:
                        out[m] += xy * c
        return FieldElement(self, tuple(out))

    def mult_matrix(self, a: "FieldElement") -> tuple[Coords, ...]:
        """Row i holds the coordinates of a * v_i."""
        return tuple(self.mul(a, self.basis_element(i)).coords for i in range(self.degree))

    def norm(self, a: "FieldElement") -> Fraction:
        return determinant(self.mult_matrix(a))

    def trace(self, a: "FieldElement") -> Fraction:
        matrix = self.mult_matrix(a)
        return sum((matrix[i][i] for i in range(self.degree)), Fraction(0))

    def inverse(self, a: "FieldElement") -> "FieldElement":
        if not any(a.coords):
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(self, row_times_matrix(self.one, invert_matrix(self.mult_matrix(a))))

    def power(self, a: "FieldElement", exponent: int) -> "FieldElement":
        if exponent < 0:
            return self.power(self.inverse(a), -exponent)
        result = self.unit_element()
        base = a
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    @cached_property
    def norm_form(self) -> "NormForm":
        """Nm(sum t_i v_i) as a homogeneous polynomial in t."""
        ts = symbols(f"t0:{self.degree}")
        matrix = sum(
            (t * _rational_matrix(self.mult_matrix(self.basis_element(i))) for i, t in enumerate(ts)),
            Matrix.zeros(self.degree, self.degree),
        )
        poly = Poly(matrix.det(), *ts)
        return NormForm(tuple((tuple(int(e) for e in exps), to_fraction(c)) for exps, c in poly.terms()))

    def to_theta(self, a: "FieldElement") -> Coords:
        return row_times_matrix(a.coords, self.theta_basis)

    def from_theta(self, theta_coords: Sequence) -> "FieldElement":
        padded = list(theta_coords) + [0] * (self.degree - len(theta_coords))
        return FieldElement(self, row_times_matrix([to_fraction(c) for c in padded], invert_matrix(self.theta_basis)))

    # -------------------------------------------------------------------------
    # Real embeddings
    # -------------------------------------------------------------------------

    def embedding_intervals(self, a: "FieldElement", level: int) -> list[Interval]:
        theta = self.to_theta(a)
        return [_horner(theta, root) for root in self.roots.at_level(level)]

    def sign_vector(self, a: "FieldElement") -> tuple[int, ...]:
        """Signs of sigma_1(a)..sigma_k(a).

        Exact for k <= 2; from degree 3 on the signs come from interval refinement.

        Raises:
            UndecidedAtPrecision: a sign is not decided within MAX_REFINEMENTS
        """
        if not any(a.coords):
            return (0,) * self.degree
        if self.degree == 1:
            return (_sign(self.to_theta(a)[0]),)
        if self.degree == 2:
            return self._quadratic_signs(a)
        return self._interval_signs(a)

    def _quadratic_signs(self, a: "FieldElement") -> tuple[int, ...]:
        """sigma(a) = A + e B sqrt(disc) at the root (-a1 + e sqrt(disc)) / 2a2."""
        c0, c1 = self.to_theta(a)
        a0, a1, a2 = self.polynomial
        disc = a1 * a1 - 4 * a0 * a2
        A = c0 - c1 * a1 / (2 * a2)
        B = c1 / (2 * a2)
        # ascending root order: index 1 is the larger root
        larger = _sign(a2)
        return tuple(_surd_sign(A, (larger if index == 1 else -larger) * B, disc) for index in self.place_order)

    def _interval_signs(self, a: "FieldElement") -> tuple[int, ...]:
        for level in range(Config.MAX_REFINEMENTS):
            signs = [iv.sign() for iv in self.embedding_intervals(a, level)]
            if all(s is not None for s in signs):
                return tuple(signs)  # type: ignore[arg-type]
        raise UndecidedAtPrecision(f"sign of {a} undecided after {Config.MAX_REFINEMENTS} refinements")

    def is_totally_positive(self, a: "FieldElement") -> bool:
        return all(s > 0 for s in self.sign_vector(a))

    def embedding_floats(self, a: "FieldElement") -> list[float]:
        """Float approximations; used only to seed searches."""
        return [iv.midpoint for iv in self.embedding_intervals(a, 4)]


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


def _surd_sign(A: Fraction, B: Fraction, D: Fraction) -> int:
    """Sign of A + B sqrt(D) for D > 0, without leaving Q."""
    sa, sb = _sign(A), _sign(B)
    if sb == 0 or sa == sb:
        return sa
    if sa == 0:
        return sb
    diff = A * A - B * B * D
    return sa if diff > 0 else sb if diff < 0 else 0


def _theta_product(a: Coords, b: Coords, poly: Coords) -> Coords:
    """Product of two theta-polynomials reduced modulo the certificate."""
    f = Poly([Rational(c.numerator, c.denominator) for c in reversed(poly)], _X, domain="QQ")
    pa = Poly([Rational(c.numerator, c.denominator) for c in reversed(a)], _X, domain="QQ")
    pb = Poly([Rational(c.numerator, c.denominator) for c in reversed(b)], _X, domain="QQ")
    rem = (pa * pb).rem(f)
    coeffs = [to_fraction(c) for c in reversed(rem.all_coeffs())]
    k = len(poly) - 1
    return tuple(coeffs + [Fraction(0)] * (k - len(coeffs)))


@dataclass(frozen=True, eq=False)
class FieldElement:
    """Exact rational coordinates in the reference basis of a field."""

    field: FieldData
    coords: Coords

    def _lift(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")

    def __add__(self, other):
        other = self._lift(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a * other for a in self.coords))
        return self.field.mul(self, self._lift(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a / other for a in self.coords))
        return self * self.field.inverse(self._lift(other))

    def __pow__(self, exponent: int):
        return self.field.power(self, exponent)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field is other.field and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __bool__(self) -> bool:
        return any(self.coords)

    def norm(self) -> Fraction:
        return self.field.norm(self)

    def trace(self) -> Fraction:
        return self.field.trace(self)

    def denominator(self) -> int:
        return reduce(lcm, (c.denominator for c in self.coords), 1)

    def is_integral_at(self, modulus: int) -> bool:
        """Coordinates have denominators coprime to modulus."""
        return gcd(self.denominator(), modulus) == 1

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]

    def __repr__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def is_coprime_to_p(a: FieldElement, p: int) -> bool:
    """True iff a is a unit at every prime above p (v_p(Nm a) = 0)."""
    n = a.norm()
    return n != 0 and n.numerator % p != 0 and n.denominator % p != 0


def is_inert(field: FieldData, p: int) -> bool:
    """True when the certificate polynomial stays irreducible modulo p.

    Irreducibility mod p forces p to be prime to the index of Z[theta], so
    the test is exact; a False answer for p dividing that index is
    conservative.
    """
    coeffs = field.polynomial
    scale = reduce(lcm, (c.denominator for c in coeffs), 1)
    ints = [int(c * scale) for c in coeffs]
    if scale % p == 0 or ints[-1] % p == 0:
        return False
    return Poly(list(reversed(ints)), _X, modulus=p).is_irreducible


@dataclass(frozen=True)
class NormForm:
    """Nm(sum t_i v_i) = sum c * prod t_i^e_i, for evaluation in hot loops."""

    terms: tuple[tuple[tuple[int, ...], Fraction], ...]

    def evaluate(self, t: Sequence) -> Fraction:
        total = Fraction(0)
        for exps, c in self.terms:
            term = c
            for x, e in zip(t, exps):
                if e:
                    term *= Fraction(x) ** e
            total += term
        return total

    def modular(self, modulus: int) -> "ModularNormForm":
        """Integer coefficients modulo modulus (denominators must be coprime to it)."""
        terms = []
        for exps, c in self.terms:
            if gcd(c.denominator, modulus) != 1:
                raise NotIntegralAtModulus(c, modulus)
            terms.append((exps, c.numerator * pow(c.denominator, -1, modulus) % modulus))
        return ModularNormForm(modulus, tuple(terms))


@dataclass(frozen=True)
class ModularNormForm:
    modulus: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    def __call__(self, t: Sequence[int]) -> int:
        m = self.modulus
        total = 0
        for exps, c in self.terms:
            term = c
            for x, e in zip(t, exps):
                if e:
                    term = term * pow(x, e, m)
            total += term
        return total % m


# =============================================================================
# CASSOU-NOGUES RESIDUE MAPS
# =============================================================================

@dataclass(frozen=True)
class CNResidueMap:
    """A ring map rho: O -> Z/N given by the images of the reference basis."""

    modulus: int
    images: tuple[int, ...]
    name: str = ""

    def apply(self, a: FieldElement) -> int:
        """rho(a) in [0, N).

        Raises:
            NotIntegralAtModulus: a coordinate denominator shares a factor with N
        """
        n = self.modulus
        total = 0
        for c, r in zip(a.coords, self.images):
            if c:
                if gcd(c.denominator, n) != 1:
                    raise NotIntegralAtModulus(a, n)
                total += c.numerator * pow(c.denominator, -1, n) * r
        return total % n

    def apply_coords(self, coords: Sequence[int]) -> int:
        return sum(c * r for c, r in zip(coords, self.images)) % self.modulus


def validate_cn_map(field: FieldData, cn: CNResidueMap) -> None:
    """Check that rho is a ring homomorphism on the reference basis.

    Raises:
        CNMapInvalid: rho(1) != 1 or rho(v_i) rho(v_j) != rho(v_i v_j) for some pair
    """
    n = cn.modulus
    if n < 2:
        raise CNMapInvalid(f"modulus must exceed 1, got {n}")
    if len(cn.images) != field.degree:
        raise CNMapInvalid(f"expected {field.degree} images, got {len(cn.images)}")
    if cn.apply(field.unit_element()) != 1 % n:
        raise CNMapInvalid(f"rho(1) != 1 modulo {n}")
    for i in range(field.degree):
        for j in range(i, field.degree):
            product = field.basis_element(i) * field.basis_element(j)
            if cn.images[i] * cn.images[j] % n != cn.apply(product):
                raise CNMapInvalid(f"rho is not multiplicative modulo {n}", (i, j))


if __name__ == "__main__":
    from termcolor import cprint

    F = FieldData.from_polynomial("Q(sqrt5)", [-5, 0, 1], [[1, 0], [Fraction(3, 2), Fraction(1, 2)]],
                                  labels=["1", "eps"], discriminant=5)
    eps = F.basis_element(1)
    cprint(f"Nm(eps) = {eps.norm()}, Tr(eps) = {eps.trace()}", "green")
    cprint(f"signs of sqrt5 = 2*eps - 3: {F.sign_vector(eps * 2 - 3)}", "green")
