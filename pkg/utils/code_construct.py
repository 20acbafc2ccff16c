"""Brute-force construction of the defining-set code

    C_D = { (Tr(a x1 + b x2))_{(x1, x2) in D} : a, b in F_q },
    D   = { (x1, x2) : Tr(x1^{p^l + 1}) = 1, Tr(x2) = 1 }.

D is a product set, so the symbol counts of a codeword are the Z_p-convolution
of two per-factor trace profiles. That keeps the full (a, b) sweep at
O(q^2 p^2) instead of O(q^2 n).
"""
import concurrent.futures
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterator, List, NamedTuple, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel

from utils.finite_field import CodeSpec, FieldCtx, FieldElement
from utils.logger import get_logger

logger = get_logger(__name__)

Composition = Tuple[int, ...]


class InjectivityError(RuntimeError):
    """The map (a, b) -> c(a, b) has a nontrivial kernel."""


@dataclass(frozen=True, eq=False)
class DefiningSet:
    """Both factors of D, as element indices in enumeration order."""
    ctx: FieldCtx
    l: int
    d1: np.ndarray
    d2: np.ndarray

    @property
    def n(self) -> int:
        return len(self.d1) * len(self.d2)


@dataclass(frozen=True)
class SymbolCountVector:
    """counts[rho] = N_rho(a, b)."""
    counts: Tuple[int, ...]

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def weight(self) -> int:
        return self.n - self.counts[0]


@dataclass
class CompleteWeightEnumerator:
    p: int
    n: int
    terms: Dict[Composition, int]

    @property
    def total(self) -> int:
        return sum(self.terms.values())

    def sorted_terms(self) -> List[Tuple[Composition, int]]:
        return sorted(self.terms.items())


@dataclass
class WeightDistribution:
    n: int
    counts: Dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def nonzero_weights(self) -> List[int]:
        return sorted(w for w, a in self.counts.items() if w > 0 and a)

    def sorted_items(self) -> List[Tuple[int, int]]:
        return sorted(self.counts.items())


class CodeParameters(NamedTuple):
    n: int
    k: int
    d: int


class MomentCheck(BaseModel):
    order: int
    lhs: int
    rhs: int
    passed: bool


class PlessReport(BaseModel):
    """The first three Pless power moments of a weight distribution."""
    checks: List[MomentCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


class GriesmerResult(BaseModel):
    n: int
    k: int
    d: int
    p: int
    bound: int
    classification: str


def _as_indices(elements: Union[np.ndarray, Sequence]) -> np.ndarray:
    if len(elements) and isinstance(elements[0], FieldElement):
        return np.array([x.index for x in elements], dtype=np.int64)
    return np.asarray(elements, dtype=np.int64)


def build_defining_set(ctx: FieldCtx, l: int) -> DefiningSet:
    """Exhaustive scan for D = d1 x d2."""
    if l < 1:
        raise ValueError(f"l must be a positive integer, got l={l}")
    powers = ctx.pow_table(ctx.p ** l + 1)
    d1 = np.flatnonzero(ctx.traces[powers] == 1)
    d2 = np.flatnonzero(ctx.traces == 1)
    logger.debug(f"Defining set for l={l} over F_{ctx.q}: |d1|={len(d1)}, |d2|={len(d2)}")
    return DefiningSet(ctx, l, d1, d2)


def trace_value_counts(ctx: FieldCtx, l: int) -> Dict[int, int]:
    """c -> |{x : Tr(x^{p^l+1}) = c}|."""
    values = ctx.traces[ctx.pow_table(ctx.p ** l + 1)]
    counts = np.bincount(values, minlength=ctx.p)
    return {c: int(counts[c]) for c in range(ctx.p)}


def trace_profile(ctx: FieldCtx, a: FieldElement, elements) -> np.ndarray:
    """Entry c counts the x in elements with Tr(a x) = c."""
    idx = _as_indices(elements)
    values = ctx.traces[ctx.mul_vec(a.index, idx)]
    return np.bincount(values, minlength=ctx.p).astype(np.int64)


def profile_table(ctx: FieldCtx, elements) -> np.ndarray:
    """trace_profile for every a at once, shape (q, p)."""
    values = ctx.trace_form[:, _as_indices(elements)]
    return np.stack([(values == c).sum(axis=1) for c in range(ctx.p)], axis=1).astype(np.int64)


def _convolve(left: np.ndarray, right: np.ndarray, p: int) -> np.ndarray:
    shifts = (np.arange(p)[None, :] - np.arange(p)[:, None]) % p
    return left @ right[shifts]


def n_rho(ds: DefiningSet, a: FieldElement, b: FieldElement) -> SymbolCountVector:
    """N_rho(a, b) for every rho, as a convolution of the two trace profiles."""
    p = ds.ctx.p
    counts = _convolve(trace_profile(ds.ctx, a, ds.d1), trace_profile(ds.ctx, b, ds.d2), p)
    return SymbolCountVector(tuple(int(c) for c in counts))


def n_rho_direct(ds: DefiningSet, a: FieldElement, b: FieldElement) -> SymbolCountVector:
    """Reference count over all pairs (x1, x2) in D."""
    ctx = ds.ctx
    t1 = ctx.traces[ctx.mul_vec(a.index, ds.d1)]
    t2 = ctx.traces[ctx.mul_vec(b.index, ds.d2)]
    symbols = (t1[:, None] + t2[None, :]) % ctx.p
    counts = np.bincount(symbols.ravel(), minlength=ctx.p)
    return SymbolCountVector(tuple(int(c) for c in counts))


def codeword_weight(nr: SymbolCountVector) -> int:
    return nr.weight


def symbol_count_table(ds: DefiningSet, a_indices: Sequence[int] = None) -> np.ndarray:
    """N[a, b, rho] for the requested a (all a by default) and every b."""
    ctx = ds.ctx
    p = ctx.p
    left = profile_table(ctx, ds.d1)
    right = profile_table(ctx, ds.d2)
    if a_indices is not None:
        left = left[np.asarray(a_indices, dtype=np.int64)]
    shifts = (np.arange(p)[None, :] - np.arange(p)[:, None]) % p
    circulant = right[:, shifts]
    return np.einsum("ai,bir->abr", left, circulant)


def _compositions(table: np.ndarray, p: int) -> Counter:
    rows, counts = np.unique(table.reshape(-1, p), axis=0, return_counts=True)
    return Counter({tuple(int(v) for v in row): int(c) for row, c in zip(rows, counts)})


def iter_symbol_counts(ds: DefiningSet, jobs: int = 1) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Yield (a_indices, N[a, b, rho]) blocks covering every a, in completion order."""
    chunks = [c for c in np.array_split(np.arange(ds.ctx.q), max(1, jobs)) if len(c)]
    if len(chunks) == 1:
        yield chunks[0], symbol_count_table(ds, chunks[0])
        return

    with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as executor:
        future_to_chunk = {
            executor.submit(symbol_count_table, ds, chunk): chunk
            for chunk in chunks
        }
        for future in concurrent.futures.as_completed(future_to_chunk):
            yield future_to_chunk[future], future.result()


def cwe_bruteforce(ctx: FieldCtx, l: int, jobs: int = 1) -> CompleteWeightEnumerator:
    """Aggregate the symbol compositions of all p^{2e} codewords."""
    ds = build_defining_set(ctx, l)
    terms = Counter()
    for _, table in iter_symbol_counts(ds, jobs):
        terms.update(_compositions(table, ctx.p))

    cwe = CompleteWeightEnumerator(ctx.p, ds.n, dict(sorted(terms.items())))
    logger.debug(f"Brute-force CWE for l={l} over F_{ctx.q}: {len(cwe.terms)} distinct compositions")
    return cwe


def weight_distribution(cwe: CompleteWeightEnumerator, n: int) -> WeightDistribution:
    counts = Counter()
    for composition, multiplicity in cwe.terms.items():
        counts[n - composition[0]] += multiplicity
    return WeightDistribution(n, dict(sorted(counts.items())))


def code_params(wd: WeightDistribution, n: int, p: int, e: int) -> CodeParameters:
    """[n, k, d] with k = 2e, after checking that the code map is injective.

    The map (a, b) -> c(a, b) is F_p-linear, so a single zero codeword among
    p^{2e} words certifies a trivial kernel.
    """
    if wd.counts.get(0, 0) != 1 or wd.total != p ** (2 * e):
        raise InjectivityError(
            f"code map is not injective: A_0={wd.counts.get(0, 0)}, "
            f"{wd.total} words for p^(2e)={p ** (2 * e)}"
        )
    weights = wd.nonzero_weights
    if not weights:
        raise InjectivityError("code has no nonzero codeword")
    return CodeParameters(n, 2 * e, weights[0])


def pless_checks(wd: WeightDistribution, spec: CodeSpec) -> PlessReport:
    p, e, n = spec.p, spec.e, wd.n
    nonzero = [(w, a) for w, a in wd.counts.items() if w > 0]
    moments = [
        (0, sum(a for _, a in nonzero), p ** (2 * e) - 1),
        (1, sum(w * a for w, a in nonzero), p ** (2 * e - 1) * (p - 1) * n),
        (2, sum(w * w * a for w, a in nonzero), p ** (2 * e - 2) * (p - 1) * n * ((p - 1) * n + 1)),
    ]
    report = PlessReport(
        checks=[MomentCheck(order=k, lhs=lhs, rhs=rhs, passed=lhs == rhs) for k, lhs, rhs in moments]
    )
    for check in report.checks:
        if not check.passed:
            logger.warning(f"Pless moment {check.order} fails for {spec}: {check.lhs} != {check.rhs}")
    return report


def griesmer_bound(k: int, d: int, p: int) -> int:
    """sum_{i<k} ceil(d / p^i)."""
    return sum(-(-d // p ** i) for i in range(k))


def griesmer_classify(n: int, k: int, d: int, p: int) -> GriesmerResult:
    """optimal when d+1 breaks the bound at length n, almost-optimal when d+2 does."""
    if k <= 0 or d <= 0:
        raise ValueError(f"k and d must be positive, got k={k}, d={d}")
    bound = griesmer_bound(k, d, p)
    if bound > n:
        logger.warning(f"[{n}, {k}, {d}] over F_{p} violates the Griesmer bound {bound}")
    if griesmer_bound(k, d + 1, p) > n:
        classification = "optimal"
    elif griesmer_bound(k, d + 2, p) > n:
        classification = "almost-optimal"
    else:
        classification = "neither"
    return GriesmerResult(n=n, k=k, d=d, p=p, bound=bound, classification=classification)


def weight_count(wd: WeightDistribution) -> int:
    return len(wd.nonzero_weights)
