"""Priority weight vectors derived from a comparison matrix.

Two derivations are provided: the principal-eigenvector weights computed by
power iteration, and the row-geometric-mean weights computed in closed form.
The latter is also the minimizer of the squared log-residual objective, which
is exposed separately as a test oracle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DataError
from .goals import GoalsMatrix
from .pcm import ComparisonMatrix, build_pcm

WEIGHT_SUM_ATOL = 1e-12
EM_TAG = "em"
RGM_TAG = "rgm"


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Positive weights summing to one, with the method that produced them.

    ``lambda_max`` is the dominant-eigenvalue estimate and is present only
    for eigenvector-method results.
    """

    teams: tuple[str, ...]
    w: np.ndarray
    method: str
    lambda_max: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "teams", tuple(self.teams))
        w = np.array(self.w, dtype=np.float64)
        object.__setattr__(self, "w", w)
        n = len(self.teams)
        if w.shape != (n,):
            raise DataError(f"weight vector has shape {w.shape}, expected "
                            f"({n},)")
        if self.method not in (EM_TAG, RGM_TAG):
            raise DataError(f"unknown weighting method {self.method!r}")
        if not np.all(np.isfinite(w)) or w.min() <= 0:
            raise DataError("weights must be positive and finite")
        if abs(float(w.sum()) - 1.0) > WEIGHT_SUM_ATOL:
            raise DataError(f"weights sum to {float(w.sum())!r}, not 1")
        if self.lambda_max is not None and self.lambda_max < n - 1e-9:
            raise DataError(
                f"lambda_max {self.lambda_max} below the dimension {n}; not "
                "a dominant eigenvalue of a positive reciprocal matrix")

    @property
    def n(self) -> int:
        return len(self.teams)

    def share_of(self, team_id: str) -> float:
        try:
            return float(self.w[self.teams.index(team_id)])
        except ValueError:
            raise DataError(f"unknown team {team_id!r}") from None


def eigenvector_weights(matrix: ComparisonMatrix, tol: float = 1e-12,
                        max_iter: int = 10_000) -> WeightVector:
    """Dominant-eigenvector weights by power iteration.

    Iterates ``w <- A w`` (sum-normalized) from the uniform vector until the
    largest relative component change drops below ``tol``; the eigenvalue is
    the component-wise ratio ``(A w) / w`` averaged at convergence.
    """
    if tol <= 0 or max_iter <= 0:
        raise DataError("solver settings must be strictly positive")
    a = matrix.a
    n = matrix.n
    w = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        v = a @ w
        v /= v.sum()
        change = float(np.max(np.abs(v - w) / w))
        w = v
        if change < tol:
            lam = float(np.mean((a @ w) / w))
            return WeightVector(matrix.teams, w, EM_TAG, lambda_max=lam)
    raise ConvergenceError(
        f"power iteration did not converge in {max_iter} iterations "
        f"(last relative change {change:.3e})",
        iterations=max_iter, residual=change)


def row_geometric_mean_weights(matrix: ComparisonMatrix) -> WeightVector:
    """Row-geometric-mean weights, computed in the log domain.

    The max of the mean row logs is subtracted before exponentiation so that
    extreme entries cannot overflow.
    """
    logs = np.log(matrix.a)
    r = logs.mean(axis=1)
    r -= r.max()
    w = np.exp(r)
    w /= w.sum()
    return WeightVector(matrix.teams, w, RGM_TAG)


def llsm_objective(matrix: ComparisonMatrix, weights: WeightVector) -> float:
    """Sum of squared log residuals between matrix entries and weight ratios.

    The row-geometric-mean weights minimize this; it exists as an independent
    check of that optimality, not as a solver.
    """
    w = weights.w
    log_ratio = np.log(w)[:, None] - np.log(w)[None, :]
    residual = np.log(matrix.a) - log_ratio
    return float(np.sum(residual * residual))


@dataclass(frozen=True)
class WeightingMethod:
    """A named weight derivation plus its solver settings."""

    tag: str
    tol: float = 1e-12
    max_iter: int = 10_000

    def __post_init__(self):
        if self.tag not in (EM_TAG, RGM_TAG):
            raise DataError(f"unknown weighting method {self.tag!r}")
        if self.tol <= 0 or self.max_iter <= 0:
            raise DataError("solver settings must be strictly positive")

    def solve(self, matrix: ComparisonMatrix) -> WeightVector:
        if self.tag == EM_TAG:
            return eigenvector_weights(matrix, self.tol, self.max_iter)
        return row_geometric_mean_weights(matrix)


EM = WeightingMethod(EM_TAG)
RGM = WeightingMethod(RGM_TAG)


def method_from_tag(tag: str) -> WeightingMethod:
    if tag == EM_TAG:
        return EM
    if tag == RGM_TAG:
        return RGM
    raise DataError(f"unknown weighting method {tag!r}")


def weights_for_alpha(matrix: GoalsMatrix, method: WeightingMethod,
                      alpha: float, epsilon: float = 0.0) -> WeightVector:
    """Weights for one inequality exponent.

    alpha = 0 yields exactly uniform shares without building the comparison
    matrix, so goals with zero entries are still sweepable from zero.
    """
    if alpha == 0:
        n = matrix.n
        w = np.full(n, 1.0 / n)
        lam = float(n) if method.tag == EM_TAG else None
        return WeightVector(matrix.teams, w, method.tag, lambda_max=lam)
    return method.solve(build_pcm(matrix, alpha, epsilon))


def weight_vector_to_json(weights: WeightVector, alpha: float | None = None,
                          epsilon: float | None = None) -> str:
    doc: dict = {"method": weights.method}
    if alpha is not None:
        doc["alpha"] = alpha
    if epsilon is not None:
        doc["epsilon"] = epsilon
    doc["teams"] = list(weights.teams)
    doc["weights"] = [float(x) for x in weights.w]
    if weights.lambda_max is not None:
        doc["lambda_max"] = weights.lambda_max
    return json.dumps(doc, indent=2) + "\n"
