"""Empirical CDF, weight families w(u) and the plug-in weighted estimator.

A weighted density has the form ``g(x) = w(F(x)) f(x)`` where ``F`` is the
distribution function of ``f`` and ``w`` a known non-negative weight on
``[0, 1]`` with unit integral.  The plug-in estimator replaces ``F`` by the
empirical CDF and ``f`` by any density estimate on a grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np
from scipy.special import gammaln

from .errors import ConfigurationError, SingularWeightError

__all__ = [
    "EmpiricalCdf",
    "ecdf_eval",
    "Pgf",
    "WeightSpec",
    "weight_eval",
    "pileup_weight",
    "weight_integral",
    "plug_in",
    "parse_weight",
]


class EmpiricalCdf:
    """Right-continuous empirical distribution function of a sample."""

    def __init__(self, sample):
        x = np.asarray(sample, dtype=float).ravel()
        if x.size == 0:
            raise ConfigurationError("empirical CDF of an empty sample")
        self.sorted_sample = np.sort(x)

    @property
    def n(self):
        return self.sorted_sample.size

    def __call__(self, x):
        # count of X_i <= x
        counts = np.searchsorted(self.sorted_sample, x, side="right")
        return counts / self.n


def ecdf_eval(cdf: EmpiricalCdf, x):
    """Evaluate ``F_hat(x) = #{i : X_i <= x} / n``."""
    return cdf(x)


class Pgf:
    """Probability generating function ``M(u) = E[u^N]`` of a count ``N >= 1``.

    Build with one of the constructors; ``masses`` holds ``P(N = k)`` for
    ``k = 1, 2, ...`` when the law has finite support.
    """

    def __init__(self, M: Callable, dM: Callable, label: str, masses=None):
        self._M = M
        self._dM = dM
        self.label = label
        self.masses = None if masses is None else np.asarray(masses, dtype=float)

    def __repr__(self):
        return f"Pgf({self.label})"

    def M(self, u):
        return self._M(np.asarray(u, dtype=float))

    def dM(self, u):
        return self._dM(np.asarray(u, dtype=float))

    @classmethod
    def from_masses(cls, masses, label=None):
        """Finite law with ``masses[k-1] = P(N = k)``."""
        p = np.asarray(masses, dtype=float)
        if p.ndim != 1 or p.size == 0 or np.any(p < 0):
            raise ConfigurationError("masses must be a non-empty vector of non-negative numbers")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ConfigurationError(f"masses must sum to 1, got {p.sum()!r}")
        k = np.arange(1, p.size + 1)

        def M(u):
            return np.sum(p * np.power.outer(u, k), axis=-1)

        def dM(u):
            return np.sum(k * p * np.power.outer(u, k - 1), axis=-1)

        return cls(M, dM, label or f"table{p.size}", masses=p)

    @classmethod
    def degenerate(cls, m: int):
        m = _check_int(m, "m", 1)
        masses = np.zeros(m)
        masses[-1] = 1.0
        return cls(
            lambda u: u**m,
            lambda u: m * u ** (m - 1),
            f"degenerate:{m}",
            masses=masses,
        )

    @classmethod
    def geometric(cls, eta: float):
        eta = _check_eta(eta)
        q = 1.0 - eta
        return cls(
            lambda u: eta * u / (1.0 - q * u),
            lambda u: eta / (1.0 - q * u) ** 2,
            f"geometric:{eta:g}",
        )

    @classmethod
    def poisson_plus_one(cls, lam: float):
        lam = _check_lambda(lam)
        return cls(
            lambda u: u * np.exp(lam * (u - 1.0)),
            lambda u: np.exp(lam * (u - 1.0)) * (1.0 + lam * u),
            f"poisson+1:{lam:g}",
        )


def _check_int(value, name, lo):
    if int(value) != value or value < lo:
        raise ConfigurationError(f"{name} must be an integer >= {lo}, got {value!r}")
    return int(value)


def _check_eta(eta):
    eta = float(eta)
    if not 0.0 < eta <= 1.0:
        raise ConfigurationError(f"eta must lie in (0, 1], got {eta!r}")
    return eta


def _check_lambda(lam):
    lam = float(lam)
    if not lam >= 0.0 or not math.isfinite(lam):
        raise ConfigurationError(f"lambda must be finite and >= 0, got {lam!r}")
    return lam


KINDS = ("degenerate", "order", "geometric", "poisson+1", "pileup")


@dataclass(frozen=True)
class WeightSpec:
    """One member of the supported weight families.

    ``kind`` selects the family:

    ``degenerate``  maximum of ``m`` draws, ``w(u) = m u^(m-1)``
    ``order``       ``j``-th order statistic out of ``m``
    ``geometric``   maximum of ``N ~ Geometric(eta)`` draws
    ``poisson+1``   maximum of ``N = 1 + Poisson(lam)`` draws
    ``pileup``      density of one draw recovered from minima, via ``pgf``
    """

    kind: str
    m: int = 1
    j: int = 1
    eta: float = 1.0
    lam: float = 0.0
    pgf: Optional[Pgf] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown weight kind {self.kind!r}; expected one of {KINDS}")
        if self.kind in ("degenerate", "order"):
            _check_int(self.m, "m", 1)
        if self.kind == "order" and not 1 <= self.j <= self.m:
            raise ConfigurationError(f"order statistic index j must lie in 1..{self.m}, got {self.j}")
        if self.kind == "geometric":
            _check_eta(self.eta)
        if self.kind == "poisson+1":
            _check_lambda(self.lam)
        if self.kind == "pileup" and not isinstance(self.pgf, Pgf):
            raise ConfigurationError("pile-up weight needs a Pgf")

    @classmethod
    def degenerate(cls, m):
        return cls("degenerate", m=m)

    @classmethod
    def order_statistic(cls, m, j):
        return cls("order", m=m, j=j)

    @classmethod
    def geometric(cls, eta):
        return cls("geometric", eta=float(eta))

    @classmethod
    def poisson_plus_one(cls, lam):
        return cls("poisson+1", lam=float(lam))

    @classmethod
    def pileup(cls, pgf):
        return cls("pileup", pgf=pgf)

    @property
    def label(self):
        if self.kind == "degenerate":
            return f"degenerate:{self.m}"
        if self.kind == "order":
            return f"order:{self.m}:{self.j}"
        if self.kind == "geometric":
            return f"geometric:{self.eta:g}"
        if self.kind == "poisson+1":
            return f"poisson+1:{self.lam:g}"
        return f"pileup:{self.pgf.label}"

    @property
    def param(self):
        """Main numeric parameter, as reported in result tables."""
        return {
            "degenerate": self.m,
            "order": self.j,
            "geometric": self.eta,
            "poisson+1": self.lam,
            "pileup": float("nan"),
        }[self.kind]

    def __call__(self, u):
        return weight_eval(self, u)


def weight_eval(spec: WeightSpec, u):
    """Evaluate ``w(u)`` for ``u`` in ``[0, 1]`` (scalar or array)."""
    u_arr = np.asarray(u, dtype=float)
    if np.any((u_arr < 0.0) | (u_arr > 1.0)) or np.any(np.isnan(u_arr)):
        raise ConfigurationError("weights are defined on [0, 1] only")
    kind = spec.kind
    if kind == "degenerate":
        out = spec.m * u_arr ** (spec.m - 1)
    elif kind == "order":
        m, j = spec.m, spec.j
        log_c = gammaln(m + 1) - gammaln(j) - gammaln(m - j + 1)
        out = math.exp(log_c) * u_arr ** (j - 1) * (1.0 - u_arr) ** (m - j)
    elif kind == "geometric":
        eta = spec.eta
        out = eta / (1.0 - u_arr * (1.0 - eta)) ** 2
    elif kind == "poisson+1":
        lam = spec.lam
        out = math.exp(-lam) * np.exp(lam * u_arr) * (1.0 + lam * u_arr)
    else:
        out = pileup_weight(spec.pgf, u_arr)
    if np.ndim(u) == 0:
        return float(out)
    return out


def _invert_pgf(pgf: Pgf, target, tol=1e-12, max_iter=60):
    """Solve ``M(v) = target`` for ``v`` in ``[0, 1]`` by vectorised bisection."""
    target = np.asarray(target, dtype=float)
    lo = np.zeros_like(target)
    hi = np.ones_like(target)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        below = pgf.M(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.max(hi - lo, initial=0.0) <= tol:
            break
    v = 0.5 * (lo + hi)
    # M(0) = 0 and M(1) = 1 exactly
    v = np.where(target <= 0.0, 0.0, v)
    return np.where(target >= 1.0, 1.0, v)


def pileup_weight(pgf: Pgf, u, tol: float = 1e-12):
    """Pile-up weight ``w(u) = 1 / M'(M^{-1}(1 - u))``.

    ``M`` is inverted by bisection, which only needs ``M`` to be increasing.
    Raises :class:`SingularWeightError` where ``M'`` vanishes at the preimage
    (e.g. at ``u = 1`` when ``P(N = 1) = 0``).
    """
    if tol <= 0:
        raise ConfigurationError("tol must be positive")
    u_arr = np.asarray(u, dtype=float)
    v = _invert_pgf(pgf, 1.0 - u_arr, tol=tol)
    slope = pgf.dM(v)
    if np.any(slope <= 0.0):
        raise SingularWeightError("M'(M^{-1}(1-u)) vanishes; pile-up weight is infinite there")
    out = 1.0 / slope
    if np.ndim(u) == 0:
        return float(out)
    return out


def _simpson(fn, a, b, panels):
    if panels % 2:
        panels += 1
    x = np.linspace(a, b, panels + 1)
    y = fn(x)
    hstep = (b - a) / panels
    return float(hstep / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()))


def weight_integral(spec: WeightSpec, panels: int = 10_000) -> float:
    """Numerical value of ``int_0^1 w(u) du`` (should be 1 for every family).

    Composite Simpson on ``[0, 1]`` for the closed-form families.  Pile-up
    weights may blow up like ``(1 - u)^(-1/2)`` at ``u = 1``, so they are
    integrated after the substitution ``u = 1 - s^2`` with Gauss-Legendre
    nodes, which never touch the endpoint.
    """
    if spec.kind != "pileup":
        return _simpson(lambda u: weight_eval(spec, u), 0.0, 1.0, panels)
    nodes, wts = np.polynomial.legendre.leggauss(200)
    # split [0, 1] in s to keep the rule accurate near the kink of M^{-1}
    edges = np.linspace(0.0, 1.0, 11)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        s = 0.5 * (b - a) * nodes + 0.5 * (a + b)
        vals = weight_eval(spec, 1.0 - s**2) * 2.0 * s
        total += 0.5 * (b - a) * float(np.dot(wts, vals))
    return total


def plug_in(f_hat, cdf: EmpiricalCdf, spec: WeightSpec):
    """Plug-in estimate ``g_hat(x) = w(F_hat(x)) f_hat(x)`` on the grid of `f_hat`.

    `f_hat` is a :class:`~wden.estimator.DensityEstimate` (or any object with
    ``grid`` and ``values``); the result is a copy with the values replaced.
    """
    w = weight_eval(spec, cdf(f_hat.grid))
    return replace(f_hat, values=w * f_hat.values)


def parse_weight(text: str) -> WeightSpec:
    """Parse ``kind:param[:param]`` strings such as ``geometric:0.9`` or ``order:3:2``."""
    parts = str(text).strip().lower().split(":")
    kind, args = parts[0], parts[1:]
    try:
        if kind in ("degenerate", "fixed") and len(args) == 1:
            return WeightSpec.degenerate(int(args[0]))
        if kind in ("order", "orderstatistic") and len(args) == 2:
            return WeightSpec.order_statistic(int(args[0]), int(args[1]))
        if kind in ("geometric", "geo") and len(args) == 1:
            return WeightSpec.geometric(float(args[0]))
        if kind in ("poisson+1", "poisson", "poissonplusone") and len(args) == 1:
            return WeightSpec.poisson_plus_one(float(args[0]))
        if kind == "pileup" and len(args) >= 1:
            inner = args[0]
            if inner in ("geometric", "geo") and len(args) == 2:
                return WeightSpec.pileup(Pgf.geometric(float(args[1])))
            if inner in ("degenerate", "fixed") and len(args) == 2:
                return WeightSpec.pileup(Pgf.degenerate(int(args[1])))
            if inner in ("poisson+1", "poisson") and len(args) == 2:
                return WeightSpec.pileup(Pgf.poisson_plus_one(float(args[1])))
    except ValueError as exc:
        raise ConfigurationError(f"bad weight specification {text!r}: {exc}") from None
    raise ConfigurationError(
        f"bad weight specification {text!r}; expected e.g. degenerate:2, order:3:2, "
        "geometric:0.5, poisson+1:1 or pileup:geometric:0.5"
    )
