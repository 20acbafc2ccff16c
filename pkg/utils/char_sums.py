"""Additive and quadratic characters, Gauss sums and Weil sums over F_q.

Every sum is available twice: as an exact brute-force evaluation in Z[zeta_p]
and as the published closed form. Nothing here asserts that the two agree;
callers compare them.
"""
import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import List, Optional, Tuple, Union

import galois
import numpy as np
from sympy import legendre_symbol

from utils.cyclotomic import CycInt, zeta_pow
from utils.finite_field import FieldCtx, FieldElement, frobenius_iter, trace
from utils.logger import get_logger

logger = get_logger(__name__)

PRIME_FIELD = "prime"
EXTENSION_FIELD = "extension"


def eta(p: int, v: int) -> int:
    """Quadratic character of F_p on an integer, with eta(0) = 0."""
    v %= p
    if v == 0:
        return 0
    return int(legendre_symbol(v, p))


def eta_table(ctx: FieldCtx) -> np.ndarray:
    """eta'(x) for every element index of F_q, from x^{(q-1)/2}."""
    half = ctx.pow_table((ctx.q - 1) // 2)
    table = np.where(half == 1, 1, -1).astype(np.int64)
    table[0] = 0
    return table


def quadratic_char(domain: str, v: Union[int, FieldElement], p: Optional[int] = None) -> int:
    """+1 on nonzero squares, -1 on non-squares, 0 at zero."""
    if domain == PRIME_FIELD:
        if isinstance(v, FieldElement):
            if not v.ctx.in_prime_field(v):
                raise ValueError(f"{v!r} is not in the prime field")
            return eta(v.ctx.p, v.index)
        if p is None:
            raise ValueError("p is required for an integer argument")
        return eta(p, v)
    if domain == EXTENSION_FIELD:
        if not isinstance(v, FieldElement):
            raise ValueError("extension-field quadratic character needs a FieldElement")
        return int(eta_table(v.ctx)[v.index])
    raise ValueError(f"unknown domain {domain!r}")


def additive_char(ctx: FieldCtx, u: FieldElement, v: FieldElement) -> CycInt:
    """chi_u(v) = zeta_p^{Tr(uv)}."""
    return zeta_pow(ctx.p, trace(ctx, u * v))


@dataclass(frozen=True)
class SumComparison:
    """A character sum evaluated by brute force and by its closed form."""
    brute: Union[CycInt, int]
    closed: Union[CycInt, int]

    @property
    def matches(self) -> bool:
        return self.brute == self.closed


@dataclass(frozen=True)
class GaussSum:
    domain: str
    value: CycInt
    closed_form: Optional[int]
    expected_square: int

    @property
    def square(self) -> CycInt:
        return self.value * self.value

    @property
    def matches(self) -> bool:
        if self.closed_form is not None and self.value != self.closed_form:
            return False
        return self.square == self.expected_square


def gauss_sum(domain: str, ctx: FieldCtx) -> GaussSum:
    """Quadratic Gauss sum over F_p (G) or over F_q (G').

    G = sqrt(p*) is irrational, so over F_p only the identity G^2 = p* is
    checkable. Over F_q with e even, G' = (-1)^{e-1} (p*)^{e/2} is an integer.
    """
    p = ctx.p
    p_star = eta(p, -1) * p
    if domain == PRIME_FIELD:
        residues = np.arange(p)
        weights = np.array([eta(p, v) for v in range(p)], dtype=np.int64)
        value = CycInt.from_exponents(p, residues, weights)
        return GaussSum(domain, value, None, p_star)
    if domain == EXTENSION_FIELD:
        value = CycInt.from_exponents(p, ctx.traces, eta_table(ctx))
        closed = (-1) ** (ctx.e - 1) * p_star ** (ctx.e // 2) if ctx.e % 2 == 0 else None
        return GaussSum(domain, value, closed, p_star ** ctx.e)
    raise ValueError(f"unknown domain {domain!r}")


def _quadratic_values(ctx: FieldCtx, a2: FieldElement, a1: FieldElement, a0: FieldElement) -> np.ndarray:
    """Index of a2 x^2 + a1 x + a0 for every x."""
    xs = np.arange(ctx.q)
    t2 = ctx.mul_vec(a2.index, ctx.pow_table(2))
    t1 = ctx.mul_vec(a1.index, xs)
    coords = (ctx.coords[t2] + ctx.coords[t1] + ctx.coords[a0.index]) % ctx.p
    return coords @ ctx.weights


def quad_poly_char_sum(ctx: FieldCtx, a2: FieldElement, a1: FieldElement, a0: FieldElement) -> SumComparison:
    """sum_x zeta^{Tr(a2 x^2 + a1 x + a0)} against zeta^{Tr(a0 - a1^2/(4 a2))} eta'(a2) G'."""
    if a2.is_zero():
        raise ValueError("a2 must be nonzero for a quadratic polynomial")
    values = _quadratic_values(ctx, a2, a1, a0)
    brute = CycInt.from_exponents(ctx.p, ctx.traces[values])

    shift = a0 - (a1 * a1) / (a2 * 4)
    gs = gauss_sum(EXTENSION_FIELD, ctx)
    g_prime = CycInt.integer(ctx.p, gs.closed_form) if gs.closed_form is not None else gs.value
    closed = zeta_pow(ctx.p, trace(ctx, shift)) * g_prime * int(eta_table(ctx)[a2.index])
    return SumComparison(brute, closed)


def quad_poly_eta_sum(ctx: FieldCtx, a2: FieldElement, a1: FieldElement, a0: FieldElement) -> SumComparison:
    """sum_x eta'(a2 x^2 + a1 x + a0) against -eta'(a2) or (q-1) eta'(a2)."""
    if a2.is_zero():
        raise ValueError("a2 must be nonzero for a quadratic polynomial")
    table = eta_table(ctx)
    brute = int(table[_quadratic_values(ctx, a2, a1, a0)].sum())

    discriminant = a1 * a1 - a0 * a2 * 4
    lead = int(table[a2.index])
    closed = (ctx.q - 1) * lead if discriminant.is_zero() else -lead
    return SumComparison(brute, closed)


def _weil_exponents(ctx: FieldCtx, l: int, alpha: FieldElement) -> np.ndarray:
    """Tr(alpha x^{p^l + 1}) for every x."""
    powers = ctx.pow_table(ctx.p ** l + 1)
    return ctx.traces[ctx.mul_vec(alpha.index, powers)]


def weil_sum(ctx: FieldCtx, l: int, alpha: FieldElement, beta: FieldElement) -> CycInt:
    """S(alpha, beta) = sum_x zeta^{Tr(alpha x^{p^l+1} + beta x)}, by direct summation."""
    linear = ctx.traces[ctx.mul_vec(beta.index, np.arange(ctx.q))]
    return CycInt.from_exponents(ctx.p, _weil_exponents(ctx, l, alpha) + linear)


def weil_sum_table(ctx: FieldCtx, l: int, alpha: FieldElement) -> List[CycInt]:
    """S(alpha, beta) for every beta, in enumeration order."""
    exponents = (_weil_exponents(ctx, l, alpha)[None, :] + ctx.trace_form) % ctx.p
    counts = np.stack([(exponents == c).sum(axis=1) for c in range(ctx.p)], axis=1)
    return [CycInt.from_exponent_counts(ctx.p, row) for row in counts]


class ArtinMap:
    """X -> alpha^{p^l} X^{p^{2l}} + alpha X as an e x e matrix over GF(p).

    Column j holds the coordinates of the image of X^j. The matrix is row
    reduced once, together with the transform that produced the echelon form,
    so each right-hand side costs one matrix-vector product.
    """

    def __init__(self, ctx: FieldCtx, l: int, alpha: FieldElement):
        if alpha.is_zero():
            raise ValueError("alpha must be nonzero")
        if l < 0:
            raise ValueError(f"l must be non-negative, got {l}")
        self.ctx = ctx
        self.l = l
        self.alpha = alpha
        # e x e matrices: plain Python kernels, no JIT compile
        self.GF = galois.GF(ctx.p, compile="python-calculate")

        e = ctx.e
        lead = frobenius_iter(ctx, alpha, l)
        columns = []
        for j in range(e):
            basis = ctx.from_index(ctx.p ** j)
            image = lead * frobenius_iter(ctx, basis, 2 * l) + alpha * basis
            columns.append(image.coeffs)
        self.matrix = np.array(columns, dtype=np.int64).T

        augmented = self.GF(np.hstack([self.matrix, np.eye(e, dtype=np.int64)]))
        reduced = augmented.row_reduce(ncols=e).view(np.ndarray).astype(np.int64)
        self._echelon = reduced[:, :e]
        self._transform = reduced[:, e:]
        self.rank = int(np.count_nonzero(self._echelon.any(axis=1)))
        self._pivots = [int(np.flatnonzero(self._echelon[i])[0]) for i in range(self.rank)]

        kernel = self.GF(self.matrix).null_space()
        self.kernel = kernel.view(np.ndarray).astype(np.int64).reshape(-1, e)
        if len(self.kernel) != e - self.rank:
            raise RuntimeError("kernel basis does not match the rank")

    @property
    def kernel_dimension(self) -> int:
        return self.ctx.e - self.rank

    @property
    def is_bijective(self) -> bool:
        return self.rank == self.ctx.e

    def apply(self, x: FieldElement) -> FieldElement:
        image = (self.matrix @ self.ctx.coords[x.index]) % self.ctx.p
        return FieldElement(self.ctx, int(image @ self.ctx.weights))

    def _reduce(self, rhs: FieldElement) -> np.ndarray:
        return (self._transform @ self.ctx.coords[rhs.index]) % self.ctx.p

    def is_solvable(self, rhs: FieldElement) -> bool:
        return not self._reduce(rhs)[self.rank:].any()

    def solve(self, rhs: FieldElement) -> List[FieldElement]:
        """Every X with map(X) = rhs, in enumeration order."""
        z = self._reduce(rhs)
        if z[self.rank:].any():
            return []
        particular = np.zeros(self.ctx.e, dtype=np.int64)
        particular[self._pivots] = z[: self.rank]
        if not len(self.kernel):
            return [FieldElement(self.ctx, int(particular @ self.ctx.weights))]
        combos = np.array(list(product(range(self.ctx.p), repeat=len(self.kernel))), dtype=np.int64)
        solutions = (particular + combos @ self.kernel) % self.ctx.p
        indices = sorted(int(i) for i in solutions @ self.ctx.weights)
        return [FieldElement(self.ctx, i) for i in indices]


@lru_cache(maxsize=4096)
def _cached_artin_map(ctx: FieldCtx, l_mod: int, alpha_index: int) -> ArtinMap:
    return ArtinMap(ctx, l_mod, ctx.from_index(alpha_index))


def artin_map(ctx: FieldCtx, l: int, alpha: FieldElement) -> ArtinMap:
    """Shared ArtinMap; the map only depends on l mod e."""
    if alpha.is_zero():
        raise ValueError("alpha must be nonzero")
    return _cached_artin_map(ctx, l % ctx.e, alpha.index)


def _check_positive_l(l: int) -> None:
    if l < 1:
        raise ValueError(f"l must be a positive integer, got l={l}")


def _even_ratio(ctx: FieldCtx, l: int) -> Tuple[int, int]:
    """(m, s) after checking that e/s is even."""
    _check_positive_l(l)
    s = math.gcd(l, ctx.e)
    if (ctx.e // s) % 2:
        raise ValueError(f"e/s must be even, got e/s={ctx.e // s}")
    return ctx.e // 2, s


def _hits_exceptional_class(ctx: FieldCtx, alpha: FieldElement, m: int, s: int) -> bool:
    """alpha^{(q-1)/(p^s+1)} == (-1)^{m/s}."""
    target = ctx.one if (m // s) % 2 == 0 else -ctx.one
    return alpha ** ((ctx.q - 1) // (ctx.p ** s + 1)) == target


def solve_artin(ctx: FieldCtx, l: int, alpha: FieldElement, beta: FieldElement) -> List[FieldElement]:
    """All X in F_q with alpha^{p^l} X^{p^{2l}} + alpha X = -beta^{p^l}."""
    _check_positive_l(l)
    if alpha.is_zero():
        raise ValueError("alpha must be nonzero")
    return artin_map(ctx, l, alpha).solve(-frobenius_iter(ctx, beta, l))


def weil_sum_closed(ctx: FieldCtx, l: int, alpha: FieldElement, beta: FieldElement) -> CycInt:
    """S(alpha, beta) from the linearized equation and its solution x_0."""
    if alpha.is_zero():
        raise ValueError("the closed form needs alpha != 0")
    m, s = _even_ratio(ctx, l)
    solutions = solve_artin(ctx, l, alpha, beta)
    if not solutions:
        return CycInt.zero(ctx.p)
    x0 = solutions[0]
    if _hits_exceptional_class(ctx, alpha, m, s):
        amplitude = (-1) ** (m // s + 1) * ctx.p ** (m + s)
    else:
        amplitude = (-1) ** (m // s) * ctx.p ** m
    phase = trace(ctx, -(alpha * x0 ** (ctx.p ** l + 1)))
    return zeta_pow(ctx.p, phase).scale(amplitude)


def solvable_beta_count(ctx: FieldCtx, l: int) -> int:
    """|{beta : X^{p^{2l}} + X = -beta^{p^l} is solvable}|, by exhaustion."""
    m, s = _even_ratio(ctx, l)
    if (m // s) % 2:
        raise ValueError(f"m/s must be even, got m/s={m // s}; the map is then a bijection")
    amap = artin_map(ctx, l, ctx.one)
    return sum(amap.is_solvable(-frobenius_iter(ctx, beta, l)) for beta in ctx.elements())


def is_permutation_map(ctx: FieldCtx, l: int, alpha: FieldElement) -> Tuple[bool, bool]:
    """(bijective by rank, bijective by the exponent criterion)."""
    _check_positive_l(l)
    bijective = artin_map(ctx, l, alpha).is_bijective
    s = math.gcd(l, ctx.e)
    if (ctx.e // s) % 2:
        return bijective, True
    return bijective, not _hits_exceptional_class(ctx, alpha, ctx.e // 2, s)


def homogeneous_kernel_size(ctx: FieldCtx, l: int, alpha: FieldElement) -> int:
    """Number of X with alpha^{p^l} X^{p^{2l}} + alpha X = 0."""
    _check_positive_l(l)
    return ctx.p ** artin_map(ctx, l, alpha).kernel_dimension
