"""Full-covariance Gaussian mixture models fitted by expectation-maximization."""

import math
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
import scipy.linalg
from scipy.special import logsumexp

from aiseta import _json
from aiseta._logger import logger
from aiseta.errors import DegenerateDataError, SingularComponentError, VersionMismatchError

FloatArray = npt.NDArray[np.float64]

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class GmmModel:
    """A fitted mixture model. Immutable once fitted."""

    weights: FloatArray
    """Component weights, shape (K,), summing to 1."""

    means: FloatArray
    """Component means, shape (K, D)."""

    covariances: FloatArray
    """Component covariances, shape (K, D, D)."""

    log_likelihood_trace: tuple[float, ...] = ()
    """Total log-likelihood evaluated at each iteration."""

    iterations: int = 0
    converged: bool = False
    seed: int = 0

    @property
    def components(self) -> int:
        """The number of mixture components."""
        return len(self.weights)

    def log_prob(self, x: FloatArray) -> FloatArray:
        """Return the joint log-density log(w_k) + log N(x | k), shape (n, K)."""
        return _estimate_log_prob(np.atleast_2d(x), self.weights, self.means, self.covariances)

    def responsibilities(self, x: FloatArray) -> FloatArray:
        """Return the posterior component probabilities of each row, shape (n, K)."""
        log_prob = self.log_prob(x)
        return np.exp(log_prob - logsumexp(log_prob, axis=1, keepdims=True))

    def log_likelihood(self, x: FloatArray) -> float:
        """Return the total log-likelihood of the data under the model."""
        return float(logsumexp(self.log_prob(x), axis=1).sum())


def _log_gaussian(x: FloatArray, mean: FloatArray, cov: FloatArray) -> FloatArray:
    try:
        chol = scipy.linalg.cholesky(cov, lower=True)
    except np.linalg.LinAlgError as exc:
        raise SingularComponentError("Component covariance is not positive definite") from exc

    # (x - mu)^T sigma^-1 (x - mu) == |L^-1 (x - mu)|^2
    solved = scipy.linalg.solve_triangular(chol, (x - mean).T, lower=True)
    log_det = 2.0 * np.sum(np.log(np.diag(chol)))
    dims = x.shape[1]

    return -0.5 * (dims * math.log(2 * math.pi) + log_det + np.sum(solved**2, axis=0))


def _estimate_log_prob(
    x: FloatArray, weights: FloatArray, means: FloatArray, covariances: FloatArray
) -> FloatArray:
    columns = [
        math.log(weights[k]) + _log_gaussian(x, means[k], covariances[k])
        for k in range(len(weights))
    ]
    return np.stack(columns, axis=1)


def _m_step(
    x: FloatArray, resp: FloatArray, covariance_floor: float
) -> tuple[FloatArray, FloatArray, FloatArray]:
    n, dims = x.shape
    nk = resp.sum(axis=0) + 10 * np.finfo(np.float64).eps

    weights = nk / n
    weights /= weights.sum()
    means = (resp.T @ x) / nk[:, None]

    covariances = np.empty((len(nk), dims, dims))
    for k in range(len(nk)):
        diff = x - means[k]
        cov = (resp[:, k, None] * diff).T @ diff / nk[k]
        covariances[k] = 0.5 * (cov + cov.T) + covariance_floor * np.eye(dims)

    return weights, means, covariances


def _kmeans_plus_plus(x: FloatArray, components: int, rng: np.random.Generator) -> FloatArray:
    """Seed hard assignments from k-means++ centers, returned as one-hot responsibilities."""
    n = len(x)
    centers = [x[rng.integers(n)]]

    for _ in range(1, components):
        d2 = np.min([np.sum((x - c) ** 2, axis=1) for c in centers], axis=0)
        total = d2.sum()
        if total <= 0:
            raise DegenerateDataError("All points coincide with the chosen centers")
        centers.append(x[rng.choice(n, p=d2 / total)])

    distances = np.stack([np.sum((x - c) ** 2, axis=1) for c in centers], axis=1)
    labels = np.argmin(distances, axis=1)

    resp = np.zeros((n, components))
    resp[np.arange(n), labels] = 1.0
    return resp


def fit_gmm(
    features: npt.ArrayLike,
    *,
    components: int = 2,
    seed: int = 0,
    max_iter: int = 200,
    tol: float = 1e-6,
    covariance_floor: float = 1e-6,
) -> GmmModel:
    """Fit a full-covariance Gaussian mixture model with EM.

    Initialization is k-means++ seeded from `seed`. Each iteration evaluates the
    log-likelihood of the current parameters (E-step) and then re-estimates them
    (M-step); fitting stops once an iteration improves the log-likelihood by less
    than `tol`.

    Args:
        features: An (n, D) array of observations.
        components: The number of mixture components, K.
        seed: The random seed for initialization.
        max_iter: The maximum number of EM iterations.
        tol: The convergence threshold on log-likelihood improvement.
        covariance_floor: Added to every covariance diagonal.

    Returns:
        The fitted model.

    Raises:
        DegenerateDataError: If there are fewer than 2K points or fewer than K
            distinct points.
    """
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2 or not np.all(np.isfinite(x)):
        raise DegenerateDataError("Features must be a finite (n, D) array")

    distinct = len(np.unique(x, axis=0))
    if len(x) < 2 * components or distinct < components:
        raise DegenerateDataError(
            f"Need at least {2 * components} points and {components} distinct "
            f"points, got {len(x)} points ({distinct} distinct)"
        )

    rng = np.random.default_rng(seed)
    weights, means, covariances = _m_step(
        x, _kmeans_plus_plus(x, components, rng), covariance_floor
    )

    trace: list[float] = []
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        # E-step: responsibilities via log-sum-exp
        log_prob = _estimate_log_prob(x, weights, means, covariances)
        log_norm = logsumexp(log_prob, axis=1)
        log_likelihood = float(log_norm.sum())
        resp = np.exp(log_prob - log_norm[:, None])

        if trace and log_likelihood - trace[-1] < tol:
            trace.append(log_likelihood)
            converged = True
            break
        trace.append(log_likelihood)

        # M-step: weighted means and covariances
        weights, means, covariances = _m_step(x, resp, covariance_floor)

    logger.info(
        "Fitted %d-component mixture on %d points in %d iterations (converged=%s)",
        components,
        len(x),
        iterations,
        converged,
    )

    return GmmModel(
        weights=weights,
        means=means,
        covariances=covariances,
        log_likelihood_trace=tuple(trace),
        iterations=iterations,
        converged=converged,
        seed=seed,
    )


@dataclass(kw_only=True)
class GmmModelRecord:
    """Persisted form of a fitted mixture model."""

    version: int = MODEL_FORMAT_VERSION
    components: int
    dimensions: int
    seed: int
    iterations: int
    converged: bool
    weights: list[float] = field(default_factory=list)
    means: list[float] = field(default_factory=list)
    """Row-major (K, D) means."""

    covariances: list[float] = field(default_factory=list)
    """Row-major (K, D, D) covariances."""

    log_likelihood: list[float] = field(default_factory=list)


def model_to_json(model: GmmModel) -> str:
    """Render a model as a versioned JSON record."""
    return _json.render(
        GmmModelRecord(
            components=model.components,
            dimensions=model.means.shape[1],
            seed=model.seed,
            iterations=model.iterations,
            converged=model.converged,
            weights=[float(v) for v in model.weights],
            means=[float(v) for v in model.means.ravel()],
            covariances=[float(v) for v in model.covariances.ravel()],
            log_likelihood=list(model.log_likelihood_trace),
        )
    )


def model_from_json(text: str) -> GmmModel:
    """Parse a model from its JSON record.

    Raises:
        VersionMismatchError: If the record was written by a newer format version.
    """
    record = _json.parse(text, GmmModelRecord)
    if record.version != MODEL_FORMAT_VERSION:
        raise VersionMismatchError(
            f"Model format version {record.version} is not supported "
            f"(expected {MODEL_FORMAT_VERSION})"
        )

    k, d = record.components, record.dimensions
    return GmmModel(
        weights=np.array(record.weights),
        means=np.array(record.means).reshape(k, d),
        covariances=np.array(record.covariances).reshape(k, d, d),
        log_likelihood_trace=tuple(record.log_likelihood),
        iterations=record.iterations,
        converged=record.converged,
        seed=record.seed,
    )
