r"""
Weighted nonlinear least squares shared by every fit.

`scipy.optimize.least_squares` runs Levenberg-Marquardt when no bound is given and a trust-region reflective
method otherwise. Parameter uncertainties come from the Jacobian at the optimum, scaled by the reduced chi-square.
"""
import logging
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import least_squares

from photonlab.core.types import FitResult, ParamEstimate

logger = logging.getLogger(__name__)

XTOL = 1e-8
MAX_NFEV = 200


def poisson_sigma(counts) -> np.ndarray:
    r""" Standard deviation of Poisson counts, with `max(count, 1)` as variance so that empty bins keep a weight. """
    return np.sqrt(np.maximum(np.asarray(counts, dtype=np.float64), 1.0))


def failed_fit(names: Sequence[str], n_points: int, message: str, flags: Tuple[str, ...] = ()) -> FitResult:
    nan = float("nan")
    return FitResult(
        params={name: ParamEstimate(nan, nan) for name in names},
        chi2_reduced=nan,
        converged=False,
        n_points=n_points,
        message=message,
        flags=flags,
    )


def least_squares_fit(
    model: Callable,
    x: np.ndarray,
    y: np.ndarray,
    p0: Dict[str, float],
    sigma: Optional[np.ndarray] = None,
    jac: Optional[Callable] = None,
    bounds: Optional[Dict[str, Tuple[float, float]]] = None,
    fixed: Optional[Dict[str, float]] = None,
    xtol: float = XTOL,
    max_nfev: int = MAX_NFEV,
) -> FitResult:
    r"""
    Fit `model(x, **params)` to `y`.

    Args:
        model: vectorized model, called with keyword parameters
        x, y: data
        p0: initial value of every free parameter, in the order used by `jac`
        sigma: standard deviation of each point, Poisson weights are a common choice (see `poisson_sigma`)
        jac: optional analytic Jacobian `jac(x, **params) -> (len(x), len(p0))` array
        bounds: optional `(low, high)` per parameter; any bound switches to the trust-region method
        fixed: parameters passed to the model but not fitted

    Non-convergence never raises: the result comes back with `converged=False` and a message.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    sigma = np.ones_like(y) if sigma is None else np.asarray(sigma, dtype=np.float64)
    fixed = fixed or {}
    names = list(p0)
    n_points, n_free = len(y), len(names)

    if n_points < n_free:
        return failed_fit(names, n_points, f"{n_points} points cannot constrain {n_free} parameters")

    def unpack(p):
        return {**fixed, **dict(zip(names, p))}

    def residuals(p):
        return (model(x, **unpack(p)) - y) / sigma

    residual_jac = "3-point" if jac is None else (lambda p: jac(x, **unpack(p)) / sigma[:, None])

    if bounds:
        low = [bounds.get(name, (-np.inf, np.inf))[0] for name in names]
        high = [bounds.get(name, (-np.inf, np.inf))[1] for name in names]
        start = np.clip([p0[name] for name in names], low, high)
        kwargs = dict(method="trf", bounds=(low, high))
    else:
        start = np.array([p0[name] for name in names], dtype=np.float64)
        kwargs = dict(method="lm")

    try:
        # the cap counts iterations, a numerical Jacobian costs one evaluation per parameter
        nfev = max_nfev if jac is not None else max_nfev * (n_free + 1)
        solution = least_squares(residuals, start, jac=residual_jac, xtol=xtol, max_nfev=nfev, **kwargs)
    except (ValueError, np.linalg.LinAlgError) as ex:
        logger.warning("Fit failed: %s", ex)
        return failed_fit(names, n_points, str(ex))

    dof = n_points - n_free
    chi2 = float(np.sum(solution.fun ** 2))
    chi2_reduced = chi2 / dof if dof > 0 else float("nan")
    jacobian = np.atleast_2d(solution.jac)
    covariance = np.linalg.pinv(jacobian.T @ jacobian)
    if dof > 0:
        covariance = covariance * chi2_reduced
    errors = np.sqrt(np.clip(np.diag(covariance), 0.0, None))

    converged = bool(solution.success) and bool(np.all(np.isfinite(solution.x)))
    if not converged:
        logger.warning("Fit did not converge: %s", solution.message)
    return FitResult(
        params={name: ParamEstimate(float(v), float(e)) for name, v, e in zip(names, solution.x, errors)},
        chi2_reduced=chi2_reduced,
        converged=converged,
        n_points=n_points,
        message=str(solution.message),
        covariance=covariance,
    )


def propagate(gradient: np.ndarray, covariance: Optional[np.ndarray]) -> float:
    r""" First-order standard deviation of a derived quantity with the given gradient. """
    if covariance is None:
        return float("nan")
    gradient = np.asarray(gradient, dtype=np.float64)
    return float(np.sqrt(max(gradient @ covariance @ gradient, 0.0)))
