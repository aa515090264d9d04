#!/usr/bin/env python3
"""
Shintani - Identities

Combinatorial facts behind the sum expressions and the derivative formula:
the Ferrero-Greenberg index map and its product form, the reindexing of the
truncated Dirichlet sum, the curious identity for roots of X^2 - 3X + 1, and
the zero-sum identity for the zeta coefficients.
"""

import itertools
from collections import defaultdict
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import ceil, gcd, lcm
from typing import Iterable, Optional, Sequence

from sympy import primerange
from sympy.ntheory import n_order
from termcolor import cprint

from shintani.arith.cyclotomic import ZERO, CycloValue
from shintani.errors import NoRootMod, ParameterViolation
from shintani.field.cones import ConeContext, Decomposition, parallelotope_points
from shintani.field.model import CNResidueMap, FieldElement, flat, sharp
from shintani.lseries.gamma import cone_norm_form
from shintani.lseries.sums import LSeriesConfig
from shintani.measures.periods import H_V


# =============================================================================
# FERRERO-GREENBERG MAP
# =============================================================================

def fg_map(m: int, N: int, qn: int) -> int:
    """iota(m) = (k + 1) + (N - m#)(q^n - 1)/N for m = m# + kN, m# in (0, N]."""
    if (qn - 1) % N:
        raise ParameterViolation(f"q^n = {qn} is not 1 mod N = {N}")
    m_sharp = sharp(m, N)
    return (m - m_sharp) // N + 1 + (N - m_sharp) * (qn - 1) // N


def _check_fg_parameters(N: int, qn: int, h: int, s: int, t: int) -> None:
    if not 1 <= t <= N:
        raise ParameterViolation(f"t = {t} outside [1, {N}]")
    if not 0 <= s <= h:
        raise ParameterViolation(f"s = {s} outside [0, {h}]")
    if (qn - 1) % (N * h):
        raise ParameterViolation(f"q^n = {qn} is not 1 mod N h = {N * h}")


def fg_sets(N: int, qn: int, h: int, s: int, t: int) -> tuple[list[int], list[int]]:
    """The domain Phi and the target Psi of the map for parameters (h, s, t)."""
    _check_fg_parameters(N, qn, h, s, t)
    phi_start = Fraction(h - s + qn * s, h)
    phi = [m for m in range(ceil(phi_start), ceil(phi_start + qn)) if sharp(m, N) > t]
    psi_start = 1 + Fraction(s * (qn - 1), N * h)
    psi = list(range(ceil(psi_start), ceil(psi_start + Fraction((N - t) * (qn - 1), N))))
    return phi, psi


def fg_check(N: int, q: int, n: int, h: int, s: int, t: int, p: int) -> bool:
    """The map is a bijection Phi -> Psi preserving p-divisibility with N iota(m) = m mod q^n."""
    qn = q ** n
    phi, psi = fg_sets(N, qn, h, s, t)
    images = [fg_map(m, N, qn) for m in phi]
    if sorted(images) != psi:
        return False
    for m, image in zip(phi, images):
        if (m % p == 0) != (image % p == 0):
            return False
        if (N * image - m) % qn:
            return False
    return True


@dataclass
class FGRecord:
    p: int
    qn: int
    N: int
    h: int
    s: int
    t: int
    size: int
    passed: bool


def fg_grid(
    max_q: int,
    moduli: Sequence[int] = (3, 5, 7),
    denominators: Sequence[int] = (1, 2, 3),
    primes: Optional[Iterable[int]] = None,
) -> list[dict]:
    """fg_check over every admissible (p, q^n <= max_q, N, h, s, t)."""
    records = []
    for p in primes if primes is not None else primerange(2, max_q + 1):
        for N in moduli:
            for h in denominators:
                if gcd(p, N * h) != 1:
                    continue
                step = p ** n_order(p, N * h)
                qn = step
                while qn <= max_q:
                    for s in range(h + 1):
                        for t in range(1, N + 1):
                            phi, _ = fg_sets(N, qn, h, s, t)
                            passed = fg_check(N, qn, 1, h, s, t, p) and len(phi) == (N - t) * (qn - 1) // N
                            records.append(asdict(FGRecord(p, qn, N, h, s, t, len(phi), passed)))
                    qn *= step
    return records


def fg_product_check(cone: ConeContext, c: Sequence[int], h: int, N: int, qn: int, p: int) -> bool:
    """Coordinate-wise iota maps each box prod Phi(h - c_i, d_i) onto prod Psi(h - c_i, d_i).

    The boxes are indexed by d in [1, N]^k, and Nm(l.v) stays prime to p
    exactly when Nm(iota(l).v) does.
    """
    form = cone_norm_form(cone).modular(p)
    for d in itertools.product(range(1, N + 1), repeat=cone.k):
        sets = [fg_sets(N, qn, h, h - ci, di) for ci, di in zip(c, d)]
        images = set()
        for l in itertools.product(*(phi for phi, _ in sets)):
            image = tuple(fg_map(li, N, qn) for li in l)
            if image in images:
                return False
            images.add(image)
            if (form(l) % p == 0) != (form(image) % p == 0):
                return False
        if images != set(itertools.product(*(psi for _, psi in sets))):
            return False
    return True


# =============================================================================
# REINDEXED DIRICHLET SUM
# =============================================================================

@dataclass
class ReindexedSums:
    direct: CycloValue
    reindexed: CycloValue
    denominator: int
    shift: tuple[int, ...]

    @property
    def agree(self) -> bool:
        return self.direct == self.reindexed


def lemma52_sums(cfg: LSeriesConfig, cone: ConeContext, x: FieldElement, n: int) -> ReindexedSums:
    """Both enumerations of the truncated Dirichlet sum at s = 0 for x = (c/h).v.

    direct:    sum over 0 <= l < q^n with x + l.v prime to p of sum over d < l mod N of chi(x + d.v)
    reindexed: sum over d in [1, N]^k of chi(x + (d - 1).v) times the number of
               l' in [l0, q^n + l0) with l'.v prime to p and l'_i mod N in (d_i, N]
    """
    if cfg.chi is None:
        raise ParameterViolation("the reindexed sum needs a character")
    chi, N, k, p = cfg.chi, cfg.N, cone.k, cfg.p
    coords = cone.coordinates(x)
    h = lcm(1, *(t.denominator for t in coords))
    c = [int(t * h) for t in coords]
    Q = cfg.q ** n
    if (Q - 1) % (N * h):
        raise ParameterViolation(f"q^n = {Q} is not 1 mod N h = {N * h}; set the configuration denominator to {h}")
    l0 = tuple((ci + Q * (h - ci)) // h for ci in c)

    norm = cone_norm_form(cone)
    residues = cone.residues(cfg.cn)
    rho_x = cfg.cn.apply(x)

    direct = ZERO
    counts: dict[tuple[int, ...], int] = defaultdict(int)
    for l in itertools.product(range(Q), repeat=k):
        nm = norm.evaluate([t + li for t, li in zip(coords, l)])
        if nm.numerator % p == 0:
            continue
        counts[tuple(flat(li, N) for li in l)] += 1
    for key, count in sorted(counts.items()):
        value = ZERO
        for d in itertools.product(*(range(r) for r in key)):
            value = value + chi.at_residue((rho_x + sum(a * b for a, b in zip(d, residues))) % N)
        direct = direct + value * count

    form = norm.modular(p)
    sharps: dict[tuple[int, ...], int] = defaultdict(int)
    for l in itertools.product(*(range(a, a + Q) for a in l0)):
        if form(l) % p:
            sharps[tuple(sharp(li, N) for li in l)] += 1
    reindexed = ZERO
    for d in itertools.product(range(1, N + 1), repeat=k):
        count = sum(v for key, v in sharps.items() if all(a > b for a, b in zip(key, d)))
        if count:
            value = chi.at_residue((rho_x + sum((di - 1) * r for di, r in zip(d, residues))) % N)
            reindexed = reindexed + value * count
    return ReindexedSums(direct, reindexed, h, l0)


def lemma52_check(cfg: LSeriesConfig, cone: ConeContext, x: FieldElement, n: int = 1) -> bool:
    return lemma52_sums(cfg, cone, x, n).agree


# =============================================================================
# CURIOUS IDENTITY
# =============================================================================

def golden_roots(N: int) -> list[int]:
    """Roots of X^2 - 3X + 1 modulo N.

    Raises:
        NoRootMod: there is none
    """
    roots = [e for e in range(N) if (e * e - 3 * e + 1) % N == 0]
    if not roots:
        raise NoRootMod(N)
    return roots


def curious_sum(N: int, eps: int) -> Fraction:
    """(1/N) sum over 1 <= d < N of d ((-1 - d eps) mod N)."""
    return Fraction(sum(d * flat(-1 - d * eps, N) for d in range(1, N)), N)


def curious_identity(N: int) -> bool:
    """curious_sum(N, eps) = (N - 1)^2 / 4 for every root eps."""
    target = Fraction((N - 1) ** 2, 4)
    return all(curious_sum(N, eps) == target for eps in golden_roots(N))


def curious_grid(max_N: int) -> list[dict]:
    """curious_identity for every 2 <= N <= max_N with a root."""
    records = []
    for N in range(2, max_N + 1):
        try:
            roots = golden_roots(N)
        except NoRootMod:
            continue
        values = sorted({curious_sum(N, eps) for eps in roots})
        records.append({
            "N": N,
            "roots": roots,
            "values": [str(v) for v in values],
            "passed": values == [Fraction((N - 1) ** 2, 4)],
        })
    return records


# =============================================================================
# ZERO-SUM IDENTITY
# =============================================================================

def zero_sum_identity(dec: Decomposition, cn: CNResidueMap) -> Fraction:
    """sum over ideals, cones and base points of H_V(x)/N^(k-1) - ((N-1)/2)^k; zero for k > 1."""
    k, N = dec.field.degree, cn.modulus
    if k == 1:
        raise ParameterViolation("the zero-sum identity needs a field other than Q")
    constant = Fraction(N - 1, 2) ** k
    total = Fraction(0)
    for lattice in dec.ideals:
        for cone in dec.cones:
            for x in parallelotope_points(cone, lattice):
                total += Fraction(H_V(cone, cn, x), N ** (k - 1)) - constant
    return total


if __name__ == "__main__":
    cprint("=" * 60, "cyan")
    cprint("IDENTITIES", "cyan", attrs=["bold"])
    cprint("=" * 60, "cyan")
    phi, psi = fg_sets(5, 16, 1, 1, 3)
    cprint(f"  Phi = {phi}", "green")
    cprint(f"  Psi = {psi}", "green")
    cprint(f"  iota: {[fg_map(m, 5, 16) for m in phi]}", "green")
    for N in (5, 11, 19):
        cprint(f"  N = {N}: roots {golden_roots(N)}, sum {curious_sum(N, golden_roots(N)[0])}", "green")
    cprint("\n✅ Identities complete!", "green", attrs=["bold"])
