"""Coherent rotation-error model and its Pauli counterpart.

Coherent gate errors are small random rotations of the Bloch sphere: the
rotation axis tilts by a misalignment angle drawn from a von Mises-Fisher
(vMF) law with concentration ``kappa``, which in the narrow-angle limit
becomes an isotropic bivariate Gaussian over the polar/azimuthal deviations
(theta, phi) with per-component variance ``sigma**2 = 1/kappa``.  The
discrete reference channel is a symmetric Pauli channel with total rate
``p`` (X, Y, Z each with ``p/3``).

Both channels reduce to a binary symmetric channel at Z-basis readout, and
are calibrated against each other at equal binary entropy:

    pauli:  p_bf = 2p/3
    vmf:    p_bf = (1 - L(kappa)) / 2,  L(kappa) = coth(kappa) - 1/kappa

``match_kappa`` inverts the vMF crossover probability so that both channels
carry the same readout uncertainty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Matching tolerance for the entropy calibration (relative, on p_bf).
MATCH_RTOL = 1e-12

# Bisection bracket for kappa, in log space.
_KAPPA_LO = 1e-8
_KAPPA_HI = 1e16
_MAX_BISECT = 200

PAULI_AXES = ("X", "Y", "Z")


class NoiseDomainError(ValueError):
    """Raised when a noise parameter is outside its valid range."""


class MatchConvergenceError(RuntimeError):
    """Raised when the entropy-matching bisection fails to converge."""


@dataclass(frozen=True)
class AngleSample:
    """One (theta, phi) draw of polar/azimuthal rotation deviations, in radians."""

    theta: float
    phi: float


@dataclass(frozen=True)
class NoiseSpec:
    """Noise family and strength: ``pauli`` (p), ``gaussian`` (sigma) or ``vmf`` (kappa)."""

    model: str
    p: float = 0.0
    sigma: float = 0.0
    kappa: float = 0.0

    def __post_init__(self):
        if self.model == "pauli":
            if not (0.0 <= self.p <= 1.0) or not math.isfinite(self.p):
                raise NoiseDomainError(f"pauli rate p={self.p} outside [0, 1]")
        elif self.model == "gaussian":
            if self.sigma < 0.0 or not math.isfinite(self.sigma):
                raise NoiseDomainError(f"gaussian sigma={self.sigma} must be >= 0")
        elif self.model == "vmf":
            if self.kappa <= 0.0 or not math.isfinite(self.kappa):
                raise NoiseDomainError(f"vmf kappa={self.kappa} must be > 0")
        else:
            raise NoiseDomainError(f"unknown noise model {self.model!r}")

    @staticmethod
    def pauli(p: float) -> "NoiseSpec":
        return NoiseSpec(model="pauli", p=p)

    @staticmethod
    def gaussian(sigma: float) -> "NoiseSpec":
        return NoiseSpec(model="gaussian", sigma=sigma)

    @staticmethod
    def vmf(kappa: float) -> "NoiseSpec":
        return NoiseSpec(model="vmf", kappa=kappa)


@dataclass(frozen=True)
class ChannelMatch:
    """A Pauli rate and the vMF/Gaussian parameters matched to it at equal entropy."""

    p: float
    p_bf: float
    kappa: float
    sigma: float
    entropy: float


def error_unitary(theta: float, alpha: float, beta: float) -> np.ndarray:
    """2x2 coherent error rotation.

    ``U = [[e^{i a} cos t, i e^{i b} sin t], [i e^{-i b} sin t, e^{-i a} cos t]]``.
    Unitary for every finite angle triple; callers model reduced-form noise by
    passing ``alpha == beta``.
    """
    for name, val in (("theta", theta), ("alpha", alpha), ("beta", beta)):
        if not math.isfinite(val):
            raise NoiseDomainError(f"{name}={val} is not finite")
    ct, st = math.cos(theta), math.sin(theta)
    ea, eb = np.exp(1j * alpha), np.exp(1j * beta)
    return np.array(
        [[ea * ct, 1j * eb * st], [1j * st / eb, ct / ea]], dtype=complex
    )


def sample_gaussian_angles(sigma: float, rng: np.random.Generator) -> AngleSample:
    """Draw independent theta, phi ~ N(0, sigma^2)."""
    if sigma < 0.0 or not math.isfinite(sigma):
        raise NoiseDomainError(f"sigma={sigma} must be >= 0")
    if sigma == 0.0:
        return AngleSample(0.0, 0.0)
    theta, phi = rng.normal(0.0, sigma, size=2)
    return AngleSample(float(theta), float(phi))


def sample_vmf_cos_misalignment(kappa: float, rng: np.random.Generator) -> float:
    """Draw cos(lambda) with density proportional to exp(kappa * cos(lambda)) on [-1, 1].

    Closed-form inverse CDF; exact and rejection-free.  For large kappa the
    exp(-2 kappa) term underflows harmlessly to zero.
    """
    if kappa <= 0.0 or not math.isfinite(kappa):
        raise NoiseDomainError(f"kappa={kappa} must be > 0")
    u = rng.random()
    # Guard u == 0, where the log argument could vanish at large kappa.
    u = max(u, 1e-300)
    c = 1.0 + math.log(u + (1.0 - u) * math.exp(-2.0 * kappa)) / kappa
    return min(1.0, max(-1.0, c))


def sample_vmf_angles(kappa: float, rng: np.random.Generator) -> AngleSample:
    """Draw (theta, phi) from the exact vMF axis-tilt law.

    The misalignment magnitude lambda comes from the vMF radial law and the
    tilt direction is uniform in the tangent plane, so theta = lambda cos(b),
    phi = lambda sin(b).  Reduces to `sample_gaussian_angles` for kappa >> 1.
    """
    cos_lam = sample_vmf_cos_misalignment(kappa, rng)
    lam = math.acos(cos_lam)
    b = rng.uniform(0.0, 2.0 * math.pi)
    return AngleSample(lam * math.cos(b), lam * math.sin(b))


def langevin(kappa: float) -> float:
    """Langevin function L(kappa) = coth(kappa) - 1/kappa.

    Mean of cos(lambda) under the vMF law.  Evaluated via a series for
    kappa < 1e-4 (direct evaluation cancels catastrophically) and via
    expm1 otherwise; for very large kappa the exponential term underflows
    and L = 1 - 1/kappa.
    """
    if kappa <= 0.0 or not math.isfinite(kappa):
        raise NoiseDomainError(f"kappa={kappa} must be > 0")
    if kappa < 1e-4:
        return kappa / 3.0 - kappa**3 / 45.0
    if kappa > 350.0:
        return 1.0 - 1.0 / kappa
    # coth(k) = 1 + 2/(e^{2k} - 1)
    return 1.0 + 2.0 / math.expm1(2.0 * kappa) - 1.0 / kappa


def pbf_pauli(p: float) -> float:
    """Z-basis bit-flip rate of the symmetric Pauli channel: 2p/3 (X and Y flip)."""
    if not (0.0 <= p <= 1.0) or not math.isfinite(p):
        raise NoiseDomainError(f"p={p} outside [0, 1]")
    return 2.0 * p / 3.0


def pbf_vmf(kappa: float) -> float:
    """Z-basis crossover probability of the vMF channel: (1 - L(kappa)) / 2."""
    if kappa <= 0.0 or not math.isfinite(kappa):
        raise NoiseDomainError(f"kappa={kappa} must be > 0")
    if kappa > 350.0:
        # 1 - L = 1/kappa exactly at this scale; halving keeps full precision.
        return 0.5 / kappa
    return 0.5 * (1.0 - langevin(kappa))


def binary_entropy(x: float) -> float:
    """h2(x) = -x log2 x - (1-x) log2(1-x), with 0 log 0 = 0."""
    if not (0.0 <= x <= 1.0) or not math.isfinite(x):
        raise NoiseDomainError(f"x={x} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def match_kappa(p: float) -> float:
    """Concentration kappa whose vMF channel has the same binary entropy as Pauli rate p.

    Both bit-flip rates lie in [0, 1/2], where h2 is injective, so entropy
    matching reduces to solving pbf_vmf(kappa) = 2p/3.  pbf_vmf is strictly
    decreasing, so bisection on log(kappa) over [1e-8, 1e16] converges; a
    relative tolerance of 1e-12 on p_bf is enforced.
    """
    if not (0.0 < p < 0.75) or not math.isfinite(p):
        raise NoiseDomainError(f"p={p} outside (0, 3/4)")
    target = pbf_pauli(p)
    lo, hi = math.log(_KAPPA_LO), math.log(_KAPPA_HI)
    if pbf_vmf(_KAPPA_LO) < target or pbf_vmf(_KAPPA_HI) > target:
        raise MatchConvergenceError(
            f"target p_bf={target} not bracketed by kappa in [{_KAPPA_LO}, {_KAPPA_HI}]"
        )
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        val = pbf_vmf(math.exp(mid))
        if abs(val - target) <= MATCH_RTOL * target:
            return math.exp(mid)
        if val > target:
            lo = mid
        else:
            hi = mid
    raise MatchConvergenceError(
        f"no convergence for p={p} after {_MAX_BISECT} bisections"
    )


def sigma_from_kappa(kappa: float) -> float:
    """Per-component Gaussian width of the narrow-angle limit: kappa**(-1/2)."""
    if kappa <= 0.0 or not math.isfinite(kappa):
        raise NoiseDomainError(f"kappa={kappa} must be > 0")
    return kappa**-0.5


def match_channels(p: float) -> ChannelMatch:
    """Full entropy-matched triple (p, p_bf, kappa, sigma, entropy) for Pauli rate p."""
    kappa = match_kappa(p)
    p_bf = pbf_pauli(p)
    return ChannelMatch(
        p=p,
        p_bf=p_bf,
        kappa=kappa,
        sigma=sigma_from_kappa(kappa),
        entropy=binary_entropy(p_bf),
    )


def sample_pauli(p: float, rng: np.random.Generator) -> str:
    """Draw 'I' with probability 1-p, otherwise X, Y or Z uniformly."""
    if not (0.0 <= p <= 1.0) or not math.isfinite(p):
        raise NoiseDomainError(f"p={p} outside [0, 1]")
    if rng.random() >= p:
        return "I"
    return PAULI_AXES[rng.integers(3)]
