"""
lapbound - Verification Service

Randomized property suites over seeded random complexes and matrices.
Every exact identity is compared exactly; every inequality that only holds
up to eigensolver error carries the slack tolerance. A failing case keeps
its input in the complex file format so it can be replayed through the
command line.
"""

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, repeat
from math import comb
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from lapbound.core.config import get_settings, worker_count
from lapbound.core.exceptions import IdentityViolationError, ValidationError
from lapbound.core.logging import get_logger
from lapbound.models.complex import Graph, SimplicialComplex
from lapbound.models.matrix import SymmetricMatrix
from lapbound.schemas.verification import SuiteFailure, SuiteName, SuiteReport
from lapbound.services.bounds_service import bounds_service
from lapbound.services.complex_service import (
    close_downward,
    flag_complex,
    flag_degree_gaps,
    neighborhood_complex,
    sigma_partition,
    underlying_graph,
)
from lapbound.services.experiment_service import mix_seed, order_inequality_check
from lapbound.services.io_service import dump_complex
from lapbound.services.laplacian_service import (
    betti_numbers,
    boundary_matrix,
    compound_rows,
    graph_laplacian_plus_J,
    integer_laplacian,
    laplacian_explicit,
    laplacian_from_boundaries,
    pq_decomposition,
    sim1_counts,
)
from lapbound.services.linalg_service import (
    additive_compound,
    enumerate_subset_sums,
    gershgorin_upper,
    integer_rank,
    s_stat,
    smallest_subset_sums,
    sym_eigenvalues,
)

logger = get_logger(__name__)

DELETE_PROBABILITY = 1.0 / 3.0
MAX_MATRIX_ORDER = 6
SPECTRAL_NULLITY_ORDER = 30


@dataclass
class CaseLog:
    """Checks and failures of one random case."""

    checks: int = 0
    failures: List[Tuple[Optional[int], str]] = field(default_factory=list)
    subject: Optional[str] = None
    subcomplex: Optional[str] = None

    def expect(self, condition: bool, message: str, k: Optional[int] = None) -> None:
        self.checks += 1
        if not condition:
            self.failures.append((k, message))


def case_generator(seed: int, trial: int) -> np.random.Generator:
    """Independent Philox stream for one case."""
    return np.random.Generator(np.random.Philox(key=mix_seed(seed, trial)))


def random_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    rows, cols = np.triu_indices(n, k=1)
    chosen = rng.random(rows.size) < p
    return Graph(vertices=tuple(range(n)), edges=frozenset(zip(rows[chosen].tolist(), cols[chosen].tolist())))


def _without_supersets(
    X: SimplicialComplex, removed: List[Tuple[int, ...]]
) -> SimplicialComplex:
    dropped = [frozenset(r) for r in removed]
    kept = [
        sigma
        for sigma in X.all_faces()
        if sigma and not any(r.issubset(sigma) for r in dropped)
    ]
    return close_downward(X.vertices, kept)


def random_complex(rng: np.random.Generator, max_vertices: int) -> SimplicialComplex:
    """
    Flag complex of G(n, 1/2), n uniform in [2, max_vertices], with every
    face of dimension >= 2 deleted (with its superfaces) with probability 1/3.
    """
    if max_vertices < 2:
        raise ValidationError("max vertices must be >= 2", field="max_vertices")
    n = int(rng.integers(2, max_vertices + 1))
    Y = flag_complex(random_graph(rng, n, 0.5))
    removed = [
        sigma
        for d in range(2, Y.dimension + 1)
        for sigma in Y.faces(d)
        if rng.random() < DELETE_PROBABILITY
    ]
    return _without_supersets(Y, removed)


def random_subcomplex(rng: np.random.Generator, X: SimplicialComplex) -> SimplicialComplex:
    """Delete each face of dimension >= 1 with probability 1/3, together with its superfaces."""
    removed = [
        sigma
        for d in range(1, X.dimension + 1)
        for sigma in X.faces(d)
        if rng.random() < DELETE_PROBABILITY
    ]
    return _without_supersets(X, removed)


def random_symmetric(rng: np.random.Generator, max_order: int) -> SymmetricMatrix:
    n = int(rng.integers(1, max(1, min(MAX_MATRIX_ORDER, max_order)) + 1))
    A = rng.standard_normal((n, n))
    return SymmetricMatrix((A + A.T) / 2.0)


def _scale(M: SymmetricMatrix) -> float:
    return max(1.0, M.frobenius_norm)


def check_hodge(rng: np.random.Generator, max_vertices: int, case: CaseLog) -> None:
    """Boundary ranks, exact Laplacian nullity and spectral nullity agree."""
    X = random_complex(rng, max_vertices)
    case.subject = dump_complex(X)
    settings = get_settings()
    betti = betti_numbers(X, X.dimension, cross_check=False)
    for k in range(X.dimension + 1):
        lower = boundary_matrix(X, k).matrix.entries
        upper = boundary_matrix(X, k + 1).matrix.entries
        case.expect(not np.any(lower @ upper), "d_k d_{k+1} is not zero", k)
        L = integer_laplacian(X, k)
        nullity = X.f(k) - integer_rank(L)
        case.expect(nullity == betti[k], f"nullity(L_k) = {nullity} but b_k = {betti[k]}", k)
        if X.f(k) <= SPECTRAL_NULLITY_ORDER:
            L_sym = L.to_symmetric()
            spectrum = sym_eigenvalues(L_sym)
            spectral = spectrum.nullity(L_sym.frobenius_norm, settings.NULLITY_TOL)
            case.expect(spectral == nullity, f"spectral nullity {spectral} != exact {nullity}", k)
            case.expect(
                spectrum[0] >= -settings.EIGEN_TOL * _scale(L_sym),
                f"L_k has eigenvalue {spectrum[0]} < 0",
                k,
            )


def check_lemma21(rng: np.random.Generator, max_vertices: int, case: CaseLog) -> None:
    """The explicit entry formula reproduces the boundary Laplacian."""
    X = random_complex(rng, max_vertices)
    case.subject = dump_complex(X)
    for k in range(X.dimension + 1):
        case.expect(
            laplacian_explicit(X, k).equals(laplacian_from_boundaries(X, k)),
            "explicit L_k differs from d_{k+1} d_{k+1}^T + d_k^T d_k",
            k,
        )
    case.expect(
        laplacian_from_boundaries(X, 0).equals(graph_laplacian_plus_J(underlying_graph(X))),
        "L_0 differs from L(G_X) + J",
        0,
    )


def check_pq(rng: np.random.Generator, max_vertices: int, case: CaseLog) -> None:
    """Q - P = L_k, Q sits inside the compound of L(G_X)+J, and lambda_i(Q) >= S_{k+1,i}."""
    X = random_complex(rng, max_vertices)
    case.subject = dump_complex(X)
    M = graph_laplacian_plus_J(underlying_graph(X))
    eigs = sym_eigenvalues(M).eigenvalues
    for k in range(X.dimension + 1):
        try:
            bundle = pq_decomposition(X, k)
        except IdentityViolationError as e:
            case.expect(False, e.message, k)
            continue
        case.expect(True, "Q - P = L_k", k)
        C = additive_compound(M, k + 1)
        rows = np.asarray(compound_rows(X, k))
        case.expect(
            C.principal_submatrix(rows).equals(bundle.Q),
            "Q is not the principal submatrix of the compound on X(k)",
            k,
        )
        q_eigs = sym_eigenvalues(bundle.Q).eigenvalues
        sums = smallest_subset_sums(eigs, k + 1, X.f(k))
        tol = get_settings().SLACK_TOL * _scale(C)
        case.expect(
            bool(np.all(q_eigs >= sums - tol)),
            "lambda_i(Q) < S_{k+1,i}(L(G_X)+J)",
            k,
        )


def check_compound(rng: np.random.Generator, max_vertices: int, case: CaseLog) -> None:
    """Compound spectra are the subset sums; heap and enumeration agree; Gershgorin bounds."""
    M = random_symmetric(rng, max_vertices)
    case.subject = json.dumps(M.entries.tolist())
    spectrum = sym_eigenvalues(M)
    eigs = spectrum.eigenvalues
    tol = get_settings().SLACK_TOL * _scale(M)
    n = M.order
    for k in range(1, n + 1):
        got = sym_eigenvalues(additive_compound(M, k)).eigenvalues
        want = enumerate_subset_sums(eigs, k)
        case.expect(
            float(np.max(np.abs(got - want))) <= tol,
            "compound spectrum differs from the k-subset eigenvalue sums",
            k,
        )
        heap = smallest_subset_sums(eigs, k, comb(n, k), method="heap")
        case.expect(np.array_equal(heap, want), "heap and enumeration subset sums differ", k)
        diagonal = sym_eigenvalues(additive_compound(SymmetricMatrix(np.diag(eigs)), k)).eigenvalues
        stats = np.array([s_stat(eigs, k, i) for i in range(1, comb(n, k) + 1)])
        case.expect(
            float(np.max(np.abs(diagonal - stats))) <= tol,
            "S_{k,i} differs from the compound of diag(eigs)",
            k,
        )
    case.expect(gershgorin_upper(M) >= spectrum[n - 1] - tol, "Gershgorin bound below lambda_max")


def check_main1(rng: np.random.Generator, max_vertices: int, case: CaseLog) -> None:
    """Eigenvalue lower bounds, the dimension bound and the correction comparison."""
    X = random_complex(rng, max_vertices)
    case.subject = dump_complex(X)
    for k in range(X.dimension + 1):
        report = bounds_service.main1_bounds(X, k)
        case.expect(report.holds, f"eigenvalue bound violated, min slack {report.min_slack}", k)
        bounds = [row.lower_bound for row in report.per_index]
        case.expect(all(b >= bounds[0] for b in bounds), "i = 1 bound is not the smallest", k)
        if report.delta == 0:
            case.expect(bounds == report.flag_bound, "zero correction but bound differs from flag bound", k)
        cohomology = bounds_service.cohomology_dim_bound(X, k)
        case.expect(
            cohomology.holds, f"dimension bound {cohomology.bound} < b_k = {cohomology.betti}", k
        )
        try:
            remark = bounds_service.remark_comparison(X, k)
        except IdentityViolationError as e:
            case.expect(False, e.message, k)
            continue
        case.expect(remark.chained_dominated, "chained bound exceeds the main bound", k)


def check_main2(rng: np.random.Generator, max_vertices: int, case: CaseLog) -> None:
    """Subcomplex bounds and the degree-defect counting identity."""
    X = random_complex(rng, max_vertices)
    Xsub = random_subcomplex(rng, X)
    case.subject = dump_complex(X)
    case.subcomplex = dump_complex(Xsub)
    for k in range(Xsub.dimension + 1):
        report = bounds_service.main2_bounds(X, Xsub, k)
        case.expect(report.holds, f"subcomplex bound violated, min slack {report.min_slack}", k)
        for sigma in Xsub.faces(k):
            members = set(sigma)
            lost = 0
            for tau in X.faces(k):
                if len(members.intersection(tau)) != k:
                    continue
                union = tuple(sorted(members.union(tau)))
                if union in X and union not in Xsub:
                    lost += 1
            expected = (k + 1) * (X.degree(sigma) - Xsub.degree(sigma))
            case.expect(lost == expected, f"lost coface count {lost} != {expected} at {list(sigma)}", k)


def check_eq3(rng: np.random.Generator, max_vertices: int, case: CaseLog) -> None:
    """Per-face partition identities and the spectral bound on P."""
    X = random_complex(rng, max_vertices)
    case.subject = dump_complex(X)
    G = underlying_graph(X)
    n = X.n
    tol_base = get_settings().SLACK_TOL
    for k in range(X.dimension + 1):
        sim1 = sim1_counts(X, k)
        gaps = flag_degree_gaps(X, k)
        delta = 0
        for sigma in X.faces(k):
            part = sigma_partition(X, sigma)
            delta = max(delta, part.weighted)
            members = set(sigma)
            union = set().union(*part.witnesses)
            case.expect(len(union) == part.total, f"sigma[j] sets overlap at {list(sigma)}", k)
            brute = {
                u
                for u in X.vertices
                if u not in members
                and tuple(sorted(sigma + (u,))) not in X
                and all(G.has_edge(u, v) for v in sigma)
            }
            case.expect(union == brute, f"sigma[j] union is wrong at {list(sigma)}", k)
            for j in range(2, k + 2):
                loose = sum(
                    1
                    for u in X.vertices
                    if u not in members
                    and tuple(sorted(sigma + (u,))) not in X
                    and sum(1 for w in sigma if tuple(sorted(tuple(v for v in sigma if v != w) + (u,))) in X) == j
                )
                case.expect(loose == part.counts[j], f"edge clause not redundant for j = {j}", k)
            case.expect(gaps[sigma] == part.total, f"flag degree gap != sum |sigma[j]| at {list(sigma)}", k)
            vertex_degrees = sum(G.degree(v) for v in sigma)
            case.expect(
                vertex_degrees <= k * n + X.degree(sigma) + part.total,
                f"degree inequality fails at {list(sigma)}",
                k,
            )
            case.expect(
                sim1[sigma] == part.facet_weighted,
                f"sim1 count {sim1[sigma]} != sum j |sigma[j]| = {part.facet_weighted}",
                k,
            )
        P = pq_decomposition(X, k).P
        cap = k * n + delta
        case.expect(gershgorin_upper(P) <= cap, f"Gershgorin bound on P exceeds kn + Delta = {cap}", k)
        top = sym_eigenvalues(P)[P.order - 1]
        case.expect(top <= cap + tol_base * _scale(P), f"lambda_max(P) = {top} > kn + Delta = {cap}", k)


def check_order(rng: np.random.Generator, max_vertices: int, case: CaseLog) -> None:
    """Counting inequality and the common-neighbour characterization of N[G]."""
    if max_vertices < 2:
        raise ValidationError("max vertices must be >= 2", field="max_vertices")
    n = int(rng.integers(2, max_vertices + 1))
    p = float(rng.uniform(0.05, 0.95))
    G = random_graph(rng, n, p)
    X = neighborhood_complex(G, face_budget=get_settings().FACE_BUDGET)
    case.subject = dump_complex(X)
    for k in range(0, n - 1):
        verdict = order_inequality_check(X, n, k)
        case.expect(verdict.ok, f"{verdict.lhs} > {verdict.rhs}", k)
    if n <= 8:
        for size in range(1, n + 1):
            for subset in combinations(range(n), size):
                shared = any(all(G.has_edge(v, u) for u in subset) for v in G.vertices)
                case.expect(
                    (subset in X) == shared,
                    f"{list(subset)} face membership disagrees with common neighbours",
                )


SUITES: Dict[SuiteName, Callable[[np.random.Generator, int, CaseLog], None]] = {
    SuiteName.HODGE: check_hodge,
    SuiteName.LEMMA21: check_lemma21,
    SuiteName.PQ: check_pq,
    SuiteName.COMPOUND: check_compound,
    SuiteName.MAIN1: check_main1,
    SuiteName.MAIN2: check_main2,
    SuiteName.EQ3: check_eq3,
    SuiteName.ORDER: check_order,
}


def run_case(
    suite: SuiteName, seed: int, trial: int, max_vertices: int
) -> Tuple[int, List[SuiteFailure]]:
    """Run one case; identity violations raised inside a check become failures."""
    case = CaseLog()
    try:
        SUITES[suite](case_generator(seed, trial), max_vertices, case)
    except IdentityViolationError as e:
        case.expect(False, e.message, e.details.get("k"))
    failures = [
        SuiteFailure(
            trial=trial,
            seed=seed,
            message=message,
            k=k,
            counterexample=case.subject,
            subcomplex=case.subcomplex,
        )
        for k, message in case.failures
    ]
    return case.checks, failures


def resolve_suite(name: Union[str, SuiteName]) -> SuiteName:
    try:
        return SuiteName(name)
    except ValueError as e:
        known = ", ".join(s.value for s in SuiteName)
        raise ValidationError(f"unknown suite {name!r}; expected one of {known}", field="suite") from e


def run_suite(
    name: Union[str, SuiteName],
    trials: int,
    seed: int = 0,
    max_vertices: int = 8,
    workers: Optional[int] = None,
) -> SuiteReport:
    """
    Run a property suite over ``trials`` seeded random cases.

    Args:
        name: Suite name
        trials: Number of random cases
        seed: Master seed; case i uses mix_seed(seed, i)
        max_vertices: Largest vertex count of a random complex
        workers: Process count (default from LAPBOUND_THREADS; 1 runs inline)

    Raises:
        ValidationError: Unknown suite or bad parameters
    """
    suite = resolve_suite(name)
    if trials < 1:
        raise ValidationError("trials must be >= 1", field="trials")
    if max_vertices < 2:
        raise ValidationError("max vertices must be >= 2", field="max_vertices")
    started = time.perf_counter()
    workers = worker_count() if workers is None else workers
    if workers <= 1 or trials == 1:
        outcomes = [run_case(suite, seed, i, max_vertices) for i in range(trials)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            outcomes = list(
                executor.map(
                    run_case,
                    repeat(suite),
                    repeat(seed),
                    range(trials),
                    repeat(max_vertices),
                    chunksize=max(1, trials // (workers * 4)),
                )
            )
    report = SuiteReport(
        suite=suite,
        trials=trials,
        seed=seed,
        max_vertices=max_vertices,
        checks=sum(checks for checks, _ in outcomes),
        failures=[failure for _, failures in outcomes for failure in failures],
        wall_clock_seconds=time.perf_counter() - started,
    )
    logger.info(
        "suite finished",
        suite=suite.value,
        trials=trials,
        checks=report.checks,
        failures=len(report.failures),
    )
    return report
