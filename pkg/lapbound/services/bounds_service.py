"""
lapbound - Bounds Service

Evaluates the eigenvalue lower bounds for L_k as per-index certificates
with slack, the cohomology-dimension bound, the subcomplex bound, the
algebraic-connectivity vanishing criterion and the comparison between the
weighted correction Delta(k) and its coarser flag-complex variant.
"""

from typing import List, Tuple

import numpy as np

from lapbound.core.config import get_settings
from lapbound.core.exceptions import (
    IdentityViolationError,
    NotASubcomplexError,
    VacuousError,
    ValidationError,
)
from lapbound.core.logging import get_logger
from lapbound.models.complex import SimplicialComplex
from lapbound.models.matrix import Spectrum, SymmetricMatrix
from lapbound.schemas.bounds import (
    BoundKind,
    BoundReport,
    CohomologyBound,
    IndexBound,
    RemarkComparison,
    SYVerdict,
    VanishingVerdict,
)
from lapbound.services.complex_service import (
    dk_parameter,
    flag_degree_gaps,
    is_subcomplex,
    max_weighted_sigma_defect,
    sigma_partition,
    skeleton_matches_flag,
    subcomplex_defect,
    underlying_graph,
)
from lapbound.services.laplacian_service import (
    betti_numbers,
    graph_laplacian,
    graph_laplacian_plus_J,
    laplacian_from_boundaries,
)
from lapbound.services.linalg_service import (
    count_subset_sums_with_ties,
    smallest_subset_sums,
    sym_eigenvalues,
)

logger = get_logger(__name__)


class BoundsService:
    """
    Computable certificates for the Laplacian eigenvalue bounds.

    Every bound is reported index by index next to the eigenvalue it
    bounds, so tight cases show up as zero slack rather than a bare pass.
    """

    def _tolerance(self, *matrices: SymmetricMatrix) -> float:
        """SLACK_TOL * max(1, ||L||_F) over the Laplacians involved."""
        scale = max([1.0] + [m.frobenius_norm for m in matrices])
        return get_settings().SLACK_TOL * scale

    def _graph_spectrum(self, X: SimplicialComplex) -> Spectrum:
        return sym_eigenvalues(graph_laplacian_plus_J(underlying_graph(X)))

    def _laplacian_spectrum(
        self, X: SimplicialComplex, k: int
    ) -> Tuple[SymmetricMatrix, Spectrum]:
        L = laplacian_from_boundaries(X, k)
        return L, sym_eigenvalues(L)

    def _flag_terms(self, X: SimplicialComplex, k: int) -> np.ndarray:
        """S_{k+1,i}(L(G_X)+J) - kn for i = 1..f_k(X)."""
        sums = smallest_subset_sums(self._graph_spectrum(X).eigenvalues, k + 1, X.f(k))
        return sums - k * X.n

    def main1_bounds(self, X: SimplicialComplex, k: int) -> BoundReport:
        """
        Lower bounds lambda_i(L_k(X)) >= S_{k+1,i}(L(G_X)+J) - kn - Delta(k).

        Args:
            X: Simplicial complex
            k: Dimension

        Returns:
            BoundReport with one row per eigenvalue of L_k(X), or a vacuous
            report when X has no k-faces
        """
        if k < 0:
            raise ValidationError(f"dimension must be >= 0, got {k}", field="k")
        if X.f(k) == 0:
            return BoundReport(kind=BoundKind.MAIN, k=k, n=X.n, vacuous=True)

        delta = max_weighted_sigma_defect(X, k)
        flag = self._flag_terms(X, k)
        bounds = flag - delta
        L, actual = self._laplacian_spectrum(X, k)
        rows = [
            IndexBound(i=i + 1, lower_bound=float(b), actual=actual[i], slack=actual[i] - float(b))
            for i, b in enumerate(bounds)
        ]
        report = BoundReport(
            kind=BoundKind.MAIN,
            k=k,
            n=X.n,
            per_index=rows,
            correction=float(k * X.n + delta),
            delta=delta,
            tolerance=self._tolerance(L),
            flag_bound=[float(b) for b in flag],
        )
        logger.info(
            "bounds computed",
            kind=report.kind.value,
            k=k,
            faces=X.f(k),
            delta=delta,
            min_slack=report.min_slack,
        )
        return report

    def cohomology_dim_bound(self, X: SimplicialComplex, k: int) -> CohomologyBound:
        """
        Number of (k+1)-subsets A with sum_{i in A} lambda_i(L(G_X)+J) <= kn + Delta(k).

        The count is an upper bound on dim H^k(X; R), which is computed
        exactly alongside it.
        """
        if k < 0 or X.f(k) == 0:
            raise VacuousError(k)
        delta = max_weighted_sigma_defect(X, k)
        threshold = float(k * X.n + delta)
        bound, near = count_subset_sums_with_ties(
            self._graph_spectrum(X).eigenvalues, k + 1, threshold
        )
        betti = betti_numbers(X, k)[k]
        if near:
            logger.info("threshold ties within numeric cushion", k=k, near_ties=near)
        return CohomologyBound(k=k, threshold=threshold, bound=bound, betti=betti, near_ties=near)

    def main2_bounds(
        self, X: SimplicialComplex, Xsub: SimplicialComplex, k: int
    ) -> BoundReport:
        """
        Lower bounds lambda_i(L_k(Xsub)) >= lambda_i(L_k(X)) - (k+2) * max defect.

        The subcomplex hypothesis is checked face by face.

        Raises:
            NotASubcomplexError: Some face of ``Xsub`` is missing from ``X``
        """
        if k < 0:
            raise ValidationError(f"dimension must be >= 0, got {k}", field="k")
        missing = is_subcomplex(X, Xsub)
        if missing is not None:
            raise NotASubcomplexError(missing)
        if Xsub.f(k) == 0:
            return BoundReport(kind=BoundKind.SUBCOMPLEX, k=k, n=X.n, vacuous=True)

        defect = subcomplex_defect(X, Xsub, k)
        L_ambient, ambient = self._laplacian_spectrum(X, k)
        L_sub, actual = self._laplacian_spectrum(Xsub, k)
        correction = (k + 2) * defect
        rows = []
        for i in range(Xsub.f(k)):
            bound = ambient[i] - correction
            rows.append(IndexBound(i=i + 1, lower_bound=bound, actual=actual[i], slack=actual[i] - bound))
        report = BoundReport(
            kind=BoundKind.SUBCOMPLEX,
            k=k,
            n=X.n,
            per_index=rows,
            correction=float(correction),
            delta=defect,
            tolerance=self._tolerance(L_ambient, L_sub),
        )
        logger.info(
            "bounds computed",
            kind=report.kind.value,
            k=k,
            faces=Xsub.f(k),
            defect=defect,
            min_slack=report.min_slack,
        )
        return report

    def sy_vanishing_check(self, X: SimplicialComplex, k: int) -> SYVerdict:
        """
        H^k(X; R) = 0 whenever lambda_2(L(G_X)) > kn/(k+1) + (k+2)/(k+1) D_k(X, k+1).

        Applies only when the k-skeleton of X is that of the flag complex of
        G_X. When the criterion fires the exact Betti number is computed and
        must vanish.
        """
        if k < 1:
            raise ValidationError(f"the vanishing criterion needs k >= 1, got {k}", field="k")
        if X.n < 2:
            return SYVerdict(
                k=k, verdict=VanishingVerdict.INAPPLICABLE, reason="fewer than two vertices"
            )
        if not skeleton_matches_flag(X, k):
            return SYVerdict(
                k=k,
                verdict=VanishingVerdict.INAPPLICABLE,
                reason="k-skeleton differs from the flag complex of its graph",
            )

        L = graph_laplacian(underlying_graph(X))
        lambda_2 = sym_eigenvalues(L)[1]
        d_k = dk_parameter(X, k, k + 1)
        threshold = k * X.n / (k + 1) + (k + 2) / (k + 1) * d_k
        if lambda_2 <= threshold + self._tolerance(L):
            return SYVerdict(
                k=k,
                verdict=VanishingVerdict.INCONCLUSIVE,
                lambda_2=lambda_2,
                threshold=threshold,
                d_k=d_k,
            )

        betti = betti_numbers(X, k)[k]
        if betti != 0:
            raise IdentityViolationError(
                "criterion implies vanishing cohomology",
                {"k": k, "lambda_2": lambda_2, "threshold": threshold, "betti": betti},
            )
        return SYVerdict(
            k=k,
            verdict=VanishingVerdict.VANISHES,
            lambda_2=lambda_2,
            threshold=threshold,
            d_k=d_k,
            betti=betti,
        )

    def remark_comparison(self, X: SimplicialComplex, k: int) -> RemarkComparison:
        """
        Delta(k) against (k+2) * max_sigma sum_j |sigma[j]|.

        The coarse correction is what the subcomplex bound yields when X is
        compared with the flag complex Y of G_X, since deg_Y(sigma) -
        deg_X(sigma) = sum_j |sigma[j]|. The identity is asserted face by
        face over X(k), then the inequality on the maxima.
        """
        if k < 0 or X.f(k) == 0:
            raise VacuousError(k)
        delta = max_weighted_sigma_defect(X, k)
        gaps = flag_degree_gaps(X, k)
        total = 0
        for sigma, gap in gaps.items():
            sigma_total = sigma_partition(X, sigma).total
            if gap != sigma_total:
                raise IdentityViolationError(
                    "deg_Y(sigma) - deg_X(sigma) = sum_j |sigma[j]|",
                    {"k": k, "sigma": list(sigma), "degree_gap": gap, "sigma_total": sigma_total},
                )
            total = max(total, sigma_total)
        alternative = (k + 2) * total
        if delta > alternative:
            raise IdentityViolationError(
                "Delta(k) <= (k+2) max sum_j |sigma[j]|",
                {"k": k, "delta": delta, "alternative": alternative},
            )
        flag = self._flag_terms(X, k)
        return RemarkComparison(
            k=k,
            delta=delta,
            max_sigma_total=total,
            faces_checked=len(gaps),
            alternative=alternative,
            chained_bounds=[float(b) for b in flag - alternative],
            main_bounds=[float(b) for b in flag - delta],
        )

    def flag_bound(self, X: SimplicialComplex, k: int) -> List[float]:
        """S_{k+1,i}(L(G_X)+J) - kn, the bound for flag complexes."""
        if k < 0 or X.f(k) == 0:
            raise VacuousError(k)
        return [float(b) for b in self._flag_terms(X, k)]


# Global service instance
bounds_service = BoundsService()
