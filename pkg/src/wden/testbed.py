"""Test densities, their weighted versions and samplers.

The normal mixtures are Marron and Wand's benchmark densities, mapped
affinely so that ``min(mu - 3 sigma) = -3`` and ``max(mu + 3 sigma) = 3``
and estimated on ``[-4, 4]``.  ``uniform`` is the flat density on
``[-1, 1]``, estimated on its own support.

Each model carries the half-width ``b`` of the interval ``[-b, b]`` it is
estimated on; samplers used for estimation redraw the rare points outside.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import ndtr

from .errors import ConfigurationError
from .weights import WeightSpec, weight_eval

__all__ = [
    "MixtureModel",
    "make_model",
    "MODEL_NAMES",
    "model_pdf",
    "model_cdf",
    "sample_model",
    "true_g",
    "NSpec",
    "sample_counts",
    "sample_max_of_N",
    "replication_stream",
]

log = logging.getLogger(__name__)

ENVELOPE = 3.0


@dataclass(frozen=True)
class MixtureModel:
    """Finite normal mixture, or the uniform density when `uniform` is set.

    ``components`` is a tuple of ``(weight, mu, sigma)`` triples;
    ``half_support`` is the default estimation half-width ``b``.
    """

    components: tuple
    label: str
    uniform: Optional[tuple] = None
    half_support: float = 4.0

    def __post_init__(self):
        if self.uniform is not None:
            lo, hi = self.uniform
            if not lo < hi:
                raise ConfigurationError("uniform support must have lo < hi")
            return
        if not self.components:
            raise ConfigurationError("mixture needs at least one component")
        w = np.array([c[0] for c in self.components], dtype=float)
        s = np.array([c[2] for c in self.components], dtype=float)
        if np.any(w <= 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ConfigurationError("mixture weights must be positive and sum to 1")
        if np.any(s <= 0):
            raise ConfigurationError("mixture sigmas must be positive")

    @property
    def weights(self):
        return np.array([c[0] for c in self.components], dtype=float)

    @property
    def mus(self):
        return np.array([c[1] for c in self.components], dtype=float)

    @property
    def sigmas(self):
        return np.array([c[2] for c in self.components], dtype=float)

    def mean(self):
        if self.uniform is not None:
            return 0.5 * sum(self.uniform)
        return float(np.dot(self.weights, self.mus))

    def variance(self):
        if self.uniform is not None:
            lo, hi = self.uniform
            return (hi - lo) ** 2 / 12.0
        m = self.mean()
        return float(np.dot(self.weights, self.sigmas**2 + (self.mus - m) ** 2))

    def pdf(self, x):
        return model_pdf(self, x)

    def cdf(self, x):
        return model_cdf(self, x)


def rescale(components, lo=-ENVELOPE, hi=ENVELOPE):
    """Affine map of mixture components so the 3-sigma envelope is exactly ``[lo, hi]``."""
    w, mu, s = (np.array(c, dtype=float) for c in zip(*components))
    left = np.min(mu - 3 * s)
    right = np.max(mu + 3 * s)
    a = (hi - lo) / (right - left)
    c = lo - a * left
    return tuple((float(wi), float(a * mi + c), float(a * si)) for wi, mi, si in zip(w, mu, s))


def _marron_wand(name):
    if name == "separatedbimodal":
        return ((0.5, -1.5, 0.5), (0.5, 1.5, 0.5))
    if name == "kurtotic":
        return ((2.0 / 3.0, 0.0, 1.0), (1.0 / 3.0, 0.0, 0.1))
    if name == "stronglyskewed":
        return tuple(
            (1.0 / 8.0, 3.0 * ((2.0 / 3.0) ** l - 1.0), (2.0 / 3.0) ** l) for l in range(8)
        )
    raise KeyError(name)


MODEL_NAMES = ("uniform", "separatedbimodal", "kurtotic", "stronglyskewed")

_LABELS = {
    "uniform": "Uniform",
    "separatedbimodal": "SeparatedBimodal",
    "kurtotic": "Kurtotic",
    "stronglyskewed": "StronglySkewed",
}


def make_model(name: str) -> MixtureModel:
    """Return one of ``Uniform``, ``SeparatedBimodal``, ``Kurtotic``, ``StronglySkewed``.

    Names are case-insensitive; ``-`` and ``_`` are ignored.
    """
    key = str(name).lower().replace("_", "").replace("-", "")
    if key not in MODEL_NAMES:
        raise ConfigurationError(f"unknown model {name!r}; expected one of {', '.join(_LABELS.values())}")
    if key == "uniform":
        return MixtureModel((), _LABELS[key], uniform=(-1.0, 1.0), half_support=1.0)
    return MixtureModel(rescale(_marron_wand(key)), _LABELS[key])


def model_pdf(model: MixtureModel, x):
    x = np.asarray(x, dtype=float)
    if model.uniform is not None:
        lo, hi = model.uniform
        return np.where((x >= lo) & (x <= hi), 1.0 / (hi - lo), 0.0)
    z = (x[..., None] - model.mus) / model.sigmas
    dens = np.exp(-0.5 * z**2) / (math.sqrt(2.0 * math.pi) * model.sigmas)
    return dens @ model.weights


def model_cdf(model: MixtureModel, x):
    x = np.asarray(x, dtype=float)
    if model.uniform is not None:
        lo, hi = model.uniform
        return np.clip((x - lo) / (hi - lo), 0.0, 1.0)
    z = (x[..., None] - model.mus) / model.sigmas
    return np.clip(ndtr(z) @ model.weights, 0.0, 1.0)


def _draw(model, n, rng):
    if model.uniform is not None:
        lo, hi = model.uniform
        return rng.uniform(lo, hi, size=n)
    comp = rng.choice(len(model.components), size=n, p=model.weights)
    return model.mus[comp] + model.sigmas[comp] * rng.standard_normal(n)


def sample_model(model: MixtureModel, n: int, rng, bound: Optional[float] = None) -> np.ndarray:
    """Draw `n` i.i.d. points; with `bound` set, points outside ``[-bound, bound]`` are redrawn."""
    if n < 1:
        raise ConfigurationError(f"n must be >= 1, got {n}")
    x = _draw(model, n, rng)
    if bound is None:
        return x
    while True:
        bad = np.flatnonzero(np.abs(x) > bound)
        if bad.size == 0:
            return x
        log.info("redrawing %d point(s) outside [-%g, %g] for %s", bad.size, bound, bound, model.label)
        x[bad] = _draw(model, bad.size, rng)


def true_g(model: MixtureModel, spec: WeightSpec, x):
    """Weighted density ``w(F(x)) f(x)`` with the exact model CDF."""
    return weight_eval(spec, model_cdf(model, x)) * model_pdf(model, x)


@dataclass(frozen=True)
class NSpec:
    """Law of the random count ``N`` in ``max(X_1, ..., X_N)``."""

    kind: str
    param: float

    def __post_init__(self):
        if self.kind not in ("degenerate", "geometric", "poisson+1"):
            raise ConfigurationError(f"unknown count law {self.kind!r}")
        self.weight()

    @classmethod
    def from_weight(cls, spec: WeightSpec) -> "NSpec":
        if spec.kind == "degenerate":
            return cls("degenerate", spec.m)
        if spec.kind == "geometric":
            return cls("geometric", spec.eta)
        if spec.kind == "poisson+1":
            return cls("poisson+1", spec.lam)
        raise ConfigurationError(f"weight {spec.label} is not the law of a maximum of N draws")

    def weight(self) -> WeightSpec:
        if self.kind == "degenerate":
            return WeightSpec.degenerate(int(self.param))
        if self.kind == "geometric":
            return WeightSpec.geometric(self.param)
        return WeightSpec.poisson_plus_one(self.param)


def _poisson_by_inversion(lam, u):
    if lam == 0.0:
        return np.zeros(u.shape, dtype=np.int64)
    kmax = int(lam + 12.0 * math.sqrt(lam) + 30.0)
    k = np.arange(kmax + 1)
    logp = -lam + k * math.log(lam) - np.array([math.lgamma(i + 1.0) for i in k])
    cdf = np.cumsum(np.exp(logp))
    return np.minimum(np.searchsorted(cdf, u, side="right"), kmax)


def sample_counts(nspec: NSpec, size: int, rng) -> np.ndarray:
    """Draw `size` values of ``N`` by inversion of its distribution function."""
    if nspec.kind == "degenerate":
        return np.full(size, int(nspec.param), dtype=np.int64)
    u = 1.0 - rng.random(size)  # in (0, 1]
    if nspec.kind == "geometric":
        eta = float(nspec.param)
        if eta == 1.0:
            return np.ones(size, dtype=np.int64)
        counts = np.ceil(np.log(u) / math.log1p(-eta)).astype(np.int64)
        return np.maximum(counts, 1)
    return 1 + _poisson_by_inversion(float(nspec.param), u)


def sample_max_of_N(model: MixtureModel, nspec: NSpec, draws: int, rng) -> np.ndarray:
    """Draws of ``max(X_1, ..., X_N)`` with ``N`` independent of the ``X_i``."""
    if draws < 1:
        raise ConfigurationError(f"draws must be >= 1, got {draws}")
    counts = sample_counts(nspec, draws, rng)
    x = _draw(model, int(counts.sum()), rng)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    return np.maximum.reduceat(x, starts)


def replication_stream(master_seed: int, replication: int) -> np.random.Generator:
    """Independent generator keyed by ``(master_seed, replication)``.

    The stream depends only on the key, never on execution order, so
    replications may be run in any order or in parallel.
    """
    seq = np.random.SeedSequence(int(master_seed), spawn_key=(int(replication),))
    return np.random.Generator(np.random.PCG64(seq))
