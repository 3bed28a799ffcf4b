"""
Ground-truth Bayes error and mutual information of synthetic datasets.

All classes are equally likely. Template traces are evaluated exactly by
enumerating every observable direction pattern when trace_len is at most
ENUMERATION_MAX_LEN, and by Monte-Carlo otherwise.
"""

import logging
import math
from typing import Tuple

import numpy as np
from scipy import integrate
from scipy.special import logsumexp, xlogy
from scipy.stats import norm

from src.synth.generator import make_templates
from src.synth.models import Gaussian1DSpec, OracleValue, SeparatedClustersSpec, TemplateTracesSpec
from src.utils.hashing import derive_seed, make_rng

logger = logging.getLogger(__name__)

ENUMERATION_MAX_LEN = 12
MONTE_CARLO_DRAWS = 1_000_000
_MONTE_CARLO_CHUNK = 10_000
QUADRATURE_WIDTH_SIGMAS = 10.0
QUADRATURE_TOLERANCE_NATS = 1e-6

_LN2 = math.log(2.0)


# ============================================================================
# Template traces
# ============================================================================


def _log_likelihoods(distances: np.ndarray, length: int, flip_prob: float) -> np.ndarray:
    """log P(pattern | class) from Hamming distances to the templates."""
    return xlogy(distances, flip_prob) + xlogy(length - distances, 1.0 - flip_prob)


def _template_bits(spec: TemplateTracesSpec) -> np.ndarray:
    return (make_templates(spec)[:, 1:] < 0).astype(np.int8)


def _enumerate_template_oracle(spec: TemplateTracesSpec) -> Tuple[float, float]:
    """Exact (BER, MI bits) by summing over all 2^(len-1) patterns."""
    length = spec.trace_len - 1
    templates = _template_bits(spec)
    patterns = ((np.arange(2 ** length)[:, None] >> np.arange(length)) & 1).astype(np.int8)

    distances = (patterns[:, None, :] != templates[None, :, :]).sum(axis=2)
    log_lik = _log_likelihoods(distances, length, spec.flip_prob)
    likelihood = np.exp(log_lik)
    num_classes = spec.num_classes

    ber = 1.0 - float(likelihood.max(axis=1).sum()) / num_classes

    log_marginal = logsumexp(log_lik, axis=1, keepdims=True) - math.log(num_classes)
    with np.errstate(invalid="ignore"):
        contributions = np.where(likelihood > 0, likelihood * (log_lik - log_marginal), 0.0)
    mi = float(contributions.sum()) / num_classes / _LN2
    return max(ber, 0.0), max(mi, 0.0)


def _monte_carlo_template_oracle(spec: TemplateTracesSpec) -> Tuple[OracleValue, OracleValue]:
    length = spec.trace_len - 1
    templates = _template_bits(spec)
    rng = make_rng(derive_seed(spec.seed, "oracle"))

    errors = []
    information = []
    remaining = MONTE_CARLO_DRAWS
    while remaining > 0:
        size = min(_MONTE_CARLO_CHUNK, remaining)
        labels = rng.integers(0, spec.num_classes, size=size)
        flips = (rng.random((size, length)) < spec.flip_prob).astype(np.int8)
        patterns = templates[labels] ^ flips

        distances = (patterns[:, None, :] != templates[None, :, :]).sum(axis=2)
        log_lik = _log_likelihoods(distances, length, spec.flip_prob)
        log_evidence = logsumexp(log_lik, axis=1)

        posterior_max = np.exp(log_lik.max(axis=1) - log_evidence)
        errors.append(1.0 - posterior_max)
        own = log_lik[np.arange(size), labels]
        information.append((own - (log_evidence - math.log(spec.num_classes))) / _LN2)
        remaining -= size

    errors = np.concatenate(errors)
    information = np.concatenate(information)
    scale = math.sqrt(MONTE_CARLO_DRAWS)
    return (
        OracleValue(float(errors.mean()), False, "monte_carlo", float(errors.std() / scale)),
        OracleValue(max(float(information.mean()), 0.0), False, "monte_carlo", float(information.std() / scale)),
    )


# ============================================================================
# Gaussian mixtures
# ============================================================================


def _gaussian_log_densities(x: np.ndarray, spec: Gaussian1DSpec) -> np.ndarray:
    return norm.logpdf(np.asarray(x)[..., None], loc=np.asarray(spec.means), scale=spec.sigma)


def _monte_carlo_gaussian_ber(spec: Gaussian1DSpec) -> OracleValue:
    rng = make_rng(derive_seed(spec.seed, "oracle"))
    labels = rng.integers(0, spec.num_classes, size=MONTE_CARLO_DRAWS)
    x = np.asarray(spec.means)[labels] + spec.sigma * rng.standard_normal(MONTE_CARLO_DRAWS)

    errors = np.empty(MONTE_CARLO_DRAWS)
    for start in range(0, MONTE_CARLO_DRAWS, _MONTE_CARLO_CHUNK):
        log_dens = _gaussian_log_densities(x[start:start + _MONTE_CARLO_CHUNK], spec)
        errors[start:start + _MONTE_CARLO_CHUNK] = 1.0 - np.exp(log_dens.max(axis=1) - logsumexp(log_dens, axis=1))
    return OracleValue(float(errors.mean()), False, "monte_carlo", float(errors.std() / math.sqrt(MONTE_CARLO_DRAWS)))


def gaussian_mixture_mi(spec: Gaussian1DSpec) -> float:
    """I(label; x) in bits by adaptive quadrature over +-10 sigma per class."""
    num_classes = spec.num_classes
    total = 0.0
    for mean in spec.means:
        def integrand(x: float, mean=mean) -> float:
            log_dens = _gaussian_log_densities(np.array([x]), spec)[0]
            own = norm.logpdf(x, loc=mean, scale=spec.sigma)
            marginal = logsumexp(log_dens) - math.log(num_classes)
            return math.exp(own) * (own - marginal)

        lower = mean - QUADRATURE_WIDTH_SIGMAS * spec.sigma
        upper = mean + QUADRATURE_WIDTH_SIGMAS * spec.sigma
        value, _ = integrate.quad(integrand, lower, upper, epsabs=QUADRATURE_TOLERANCE_NATS, limit=200)
        total += value
    return max(total / num_classes / _LN2, 0.0)


# ============================================================================
# Public oracles
# ============================================================================


def oracle_ber(spec) -> OracleValue:
    """
    Bayes error of a synthetic spec under equal priors.

    Example:
        >>> round(oracle_ber(Gaussian1DSpec()).value, 5)
        0.15866
    """
    if isinstance(spec, Gaussian1DSpec):
        if spec.num_classes == 2:
            separation = abs(spec.means[0] - spec.means[1]) / (2.0 * spec.sigma)
            return OracleValue(float(norm.cdf(-separation)), True, "closed_form")
        logger.info("No closed form for this Gaussian mixture; using Monte-Carlo")
        return _monte_carlo_gaussian_ber(spec)

    if isinstance(spec, SeparatedClustersSpec):
        return OracleValue(0.0, True, "closed_form")

    if isinstance(spec, TemplateTracesSpec):
        if spec.trace_len <= ENUMERATION_MAX_LEN:
            ber, _ = _enumerate_template_oracle(spec)
            return OracleValue(ber, True, "enumeration")
        return _monte_carlo_template_oracle(spec)[0]

    raise TypeError(f"Unsupported synthetic spec {type(spec).__name__}")


def oracle_mi(spec) -> OracleValue:
    """
    Mutual information (bits) between label and sample of a synthetic spec.

    Example:
        >>> oracle_mi(SeparatedClustersSpec(num_classes=4)).value
        2.0
    """
    if isinstance(spec, Gaussian1DSpec):
        return OracleValue(gaussian_mixture_mi(spec), True, "quadrature")

    if isinstance(spec, SeparatedClustersSpec):
        return OracleValue(math.log2(spec.num_classes), True, "closed_form")

    if isinstance(spec, TemplateTracesSpec):
        if spec.trace_len <= ENUMERATION_MAX_LEN:
            _, mi = _enumerate_template_oracle(spec)
            return OracleValue(mi, True, "enumeration")
        return _monte_carlo_template_oracle(spec)[1]

    raise TypeError(f"Unsupported synthetic spec {type(spec).__name__}")
