import time
from itertools import product
from typing import List, Optional, Sequence

import concurrent.futures
from pydantic import BaseModel, ValidationError

from utils.char_sums import artin_map, solve_artin, weil_sum, weil_sum_closed
from utils.code_construct import (
    CompleteWeightEnumerator,
    GriesmerResult,
    WeightDistribution,
    code_params,
    cwe_bruteforce,
    griesmer_classify,
    weight_count,
    weight_distribution,
)
from utils.cyclotomic import as_rational_integer
from utils.finite_field import CodeSpec, make_field
from utils.logger import get_logger
from utils.theorem_eval import VerificationReport, run_verification

logger = get_logger(__name__)


class WeightRow(BaseModel):
    weight: int
    multiplicity: int


class CweTerm(BaseModel):
    composition: List[int]
    multiplicity: int


class CodeResult(BaseModel):
    """Model for one construct or verify run."""
    p: int
    e: int
    l: int
    modulus: List[int] = []
    n: Optional[int] = None
    k: Optional[int] = None
    d: Optional[int] = None
    weights: List[WeightRow] = []
    cwe: List[CweTerm] = []
    weight_count: Optional[int] = None
    griesmer: Optional[GriesmerResult] = None
    verification: Optional[VerificationReport] = None
    elapsed: float = 0.0
    success: bool = False
    skipped: bool = False
    error: Optional[str] = None

    @property
    def verified(self) -> bool:
        return self.success and self.verification is not None and self.verification.passed


class WeilSumResult(BaseModel):
    p: int
    e: int
    l: int
    alpha_index: int
    alpha_coeffs: List[int]
    beta_index: int
    beta_coeffs: List[int]
    brute: List[int]
    brute_integer: Optional[int] = None
    closed: Optional[List[int]] = None
    closed_integer: Optional[int] = None
    match: Optional[bool] = None
    diagnosis: str
    elapsed: float = 0.0


class SweepResult(BaseModel):
    cells: List[CodeResult]

    @property
    def passed(self) -> List[CodeResult]:
        return [c for c in self.cells if c.verified]

    @property
    def failed(self) -> List[CodeResult]:
        return [c for c in self.cells if not c.skipped and not c.verified]

    @property
    def skipped(self) -> List[CodeResult]:
        return [c for c in self.cells if c.skipped]


def validation_message(exc: ValidationError) -> str:
    """The hypothesis messages of a failed CodeSpec, without pydantic's prefix."""
    return "; ".join(err["msg"].removeprefix("Value error, ") for err in exc.errors())


def _weight_rows(wd: WeightDistribution) -> List[WeightRow]:
    return [WeightRow(weight=w, multiplicity=a) for w, a in wd.sorted_items()]


def _cwe_terms(cwe: CompleteWeightEnumerator) -> List[CweTerm]:
    return [CweTerm(composition=list(k), multiplicity=v) for k, v in cwe.sorted_terms()]


class CodeProcessor:
    """Runs construct / verify / weilsum / sweep requests and wraps them in result records."""

    def __init__(self, jobs: int = 1, modulus: Optional[Sequence[int]] = None):
        self.jobs = max(1, jobs)
        self.modulus = tuple(modulus) if modulus else None

    def _fill(self, result: CodeResult, spec: CodeSpec, cwe: CompleteWeightEnumerator) -> CodeResult:
        ctx = make_field(spec, self.modulus)
        wd = weight_distribution(cwe, cwe.n)
        params = code_params(wd, cwe.n, spec.p, spec.e)
        result.modulus = list(ctx.modulus)
        result.n, result.k, result.d = params
        result.weights = _weight_rows(wd)
        result.cwe = _cwe_terms(cwe)
        result.weight_count = weight_count(wd)
        result.griesmer = griesmer_classify(params.n, params.k, params.d, spec.p)
        return result

    def construct(self, spec: CodeSpec) -> CodeResult:
        """Brute-force [n, k, d], weights, CWE and Griesmer class of one code."""
        logger.info(f"Constructing C_D for (p, e, l)=({spec.p}, {spec.e}, {spec.l})")
        start = time.perf_counter()
        result = CodeResult(p=spec.p, e=spec.e, l=spec.l)
        ctx = make_field(spec, self.modulus)
        cwe = cwe_bruteforce(ctx, spec.l, self.jobs)
        self._fill(result, spec, cwe)
        result.success = True
        result.elapsed = time.perf_counter() - start
        logger.info(f"Constructed [{result.n}, {result.k}, {result.d}] in {result.elapsed:.3f}s")
        return result

    def verify(self, spec: CodeSpec) -> CodeResult:
        """construct plus the exact comparison against every closed-form prediction."""
        logger.info(f"Verifying C_D for (p, e, l)=({spec.p}, {spec.e}, {spec.l})")
        start = time.perf_counter()
        result = CodeResult(p=spec.p, e=spec.e, l=spec.l)
        report, cwe = run_verification(spec, self.modulus, self.jobs)
        self._fill(result, spec, cwe)
        result.verification = report
        result.success = True
        result.elapsed = time.perf_counter() - start
        status = "verified" if report.passed else "MISMATCH"
        logger.info(f"(p, e, l)=({spec.p}, {spec.e}, {spec.l}): {status} in {result.elapsed:.3f}s")
        return result

    def weil_sum(
        self,
        p: int,
        e: int,
        l: int,
        alpha_index: int,
        beta_index: int,
        require_closed_form: bool = False,
    ) -> WeilSumResult:
        """Brute-force and closed-form S(alpha, beta) with the solvability diagnosis."""
        spec = CodeSpec(p=p, e=e, l=l)
        start = time.perf_counter()
        ctx = make_field(spec, self.modulus)
        alpha = ctx.from_index(alpha_index)
        beta = ctx.from_index(beta_index)
        if alpha.is_zero() and require_closed_form:
            raise ValueError("the closed form needs alpha != 0")

        brute = weil_sum(ctx, l, alpha, beta)
        closed = None
        if alpha.is_zero():
            diagnosis = "alpha = 0: closed form not applicable"
        else:
            closed = weil_sum_closed(ctx, l, alpha, beta)
            amap = artin_map(ctx, l, alpha)
            solutions = solve_artin(ctx, l, alpha, beta)
            if amap.is_bijective:
                diagnosis = "unique solution (permutation case)"
            elif solutions:
                diagnosis = f"{len(solutions)} solutions (kernel of size {p ** amap.kernel_dimension})"
            else:
                diagnosis = "no solution (sum vanishes)"

        return WeilSumResult(
            p=p,
            e=e,
            l=l,
            alpha_index=alpha.index,
            alpha_coeffs=list(alpha.coeffs),
            beta_index=beta.index,
            beta_coeffs=list(beta.coeffs),
            brute=list(brute.coeffs),
            brute_integer=as_rational_integer(brute),
            closed=list(closed.coeffs) if closed is not None else None,
            closed_integer=as_rational_integer(closed) if closed is not None else None,
            match=(closed == brute) if closed is not None else None,
            diagnosis=diagnosis,
            elapsed=time.perf_counter() - start,
        )

    def _verify_cell(self, p: int, e: int, l: int) -> CodeResult:
        try:
            spec = CodeSpec(p=p, e=e, l=l)
        except ValidationError as exc:
            reason = validation_message(exc)
            logger.info(f"Skipping (p, e, l)=({p}, {e}, {l}): {reason}")
            return CodeResult(p=p, e=e, l=l, skipped=True, error=reason)
        return self.verify(spec)

    def sweep(self, ps: Sequence[int], es: Sequence[int], ls: Sequence[int]) -> SweepResult:
        """verify over the cartesian range; out-of-hypothesis cells are skipped."""
        cells = sorted(set(product(ps, es, ls)))
        logger.info(f"Starting sweep over {len(cells)} parameter cells with {self.jobs} workers")

        # cells run one per worker; each cell enumerates single-threaded
        cell_processor = CodeProcessor(jobs=1, modulus=None)
        results = {}
        with concurrent.futures.ThreadPoolExecutor(max_workers=self.jobs) as executor:
            future_to_cell = {
                executor.submit(cell_processor._verify_cell, *cell): cell
                for cell in cells
            }
            for future in concurrent.futures.as_completed(future_to_cell):
                cell = future_to_cell[future]
                try:
                    results[cell] = future.result()
                except Exception as e:
                    logger.error(f"Error in sweep cell (p, e, l)={cell}: {str(e)}")
                    results[cell] = CodeResult(p=cell[0], e=cell[1], l=cell[2], success=False, error=str(e))

        sweep = SweepResult(cells=[results[cell] for cell in cells])
        logger.info(
            f"Sweep complete: {len(sweep.passed)} passed, {len(sweep.failed)} failed, "
            f"{len(sweep.skipped)} skipped"
        )
        return sweep

