"""Orthonormal wavelet filters and the periodized pyramid transform."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._filters import LOWPASS, VANISHING_MOMENTS
from .errors import ConfigurationError, ShapeError

__all__ = [
    "WaveletFilter",
    "CoefficientPyramid",
    "make_filter",
    "available_filters",
    "dwt_periodized",
    "idwt_periodized",
]


@dataclass(frozen=True)
class WaveletFilter:
    """Quadrature-mirror filter pair of a compactly supported orthonormal wavelet.

    Attributes
    ----------
    lowpass : ndarray
        Scaling filter taps ``h_0 .. h_{2R-1}``, normalised so that
        ``sum(h) == sqrt(2)``.
    vanishing_moments : int
        Number of vanishing moments of the associated wavelet.
    name : str
        Table label such as ``"sym6"``.
    """

    lowpass: np.ndarray
    vanishing_moments: int
    name: str

    @property
    def highpass(self) -> np.ndarray:
        # g_k = (-1)^k h_{2R-1-k}
        h = self.lowpass
        signs = (-1.0) ** np.arange(h.size)
        return signs * h[::-1]

    def __len__(self):
        return self.lowpass.size


def available_filters():
    return tuple(LOWPASS)


def make_filter(name: str) -> WaveletFilter:
    """Return the filter called `name` (``haar``, ``db2``..``db10``, ``sym4``..``sym10``)."""
    key = str(name).lower()
    if key == "db1":
        key = "haar"
    if key not in LOWPASS:
        raise ConfigurationError(
            f"unknown wavelet {name!r}; expected one of {', '.join(LOWPASS)}"
        )
    taps = np.array(LOWPASS[key], dtype=float)
    taps.setflags(write=False)
    return WaveletFilter(taps, VANISHING_MOMENTS[key], key)


def _as_filter(wavelet) -> WaveletFilter:
    if isinstance(wavelet, WaveletFilter):
        return wavelet
    return make_filter(wavelet)


@dataclass
class CoefficientPyramid:
    """Scaling coefficients at `coarse_level` plus detail coefficients up to `fine_level` - 1.

    ``beta[i]`` holds the ``2**(coarse_level + i)`` detail coefficients of
    level ``coarse_level + i``; use :meth:`detail` to index by level.
    """

    coarse_level: int
    fine_level: int
    alpha: np.ndarray
    beta: list = field(default_factory=list)

    def __post_init__(self):
        if not 0 <= self.coarse_level <= self.fine_level:
            raise ShapeError(
                f"need 0 <= coarse_level <= fine_level, got "
                f"{self.coarse_level}, {self.fine_level}"
            )
        self.alpha = np.asarray(self.alpha, dtype=float)
        self.beta = [np.asarray(b, dtype=float) for b in self.beta]
        if self.alpha.shape != (2**self.coarse_level,):
            raise ShapeError(
                f"alpha must have length 2**{self.coarse_level}, got {self.alpha.shape}"
            )
        if len(self.beta) != self.fine_level - self.coarse_level:
            raise ShapeError(
                f"expected {self.fine_level - self.coarse_level} detail levels, "
                f"got {len(self.beta)}"
            )
        for j, b in zip(self.levels, self.beta):
            if b.shape != (2**j,):
                raise ShapeError(f"level {j} must have length 2**{j}, got {b.shape}")

    @property
    def levels(self):
        return range(self.coarse_level, self.fine_level)

    def detail(self, j: int) -> np.ndarray:
        if j not in self.levels:
            raise ShapeError(f"level {j} outside {self.coarse_level}..{self.fine_level - 1}")
        return self.beta[j - self.coarse_level]

    def copy(self) -> "CoefficientPyramid":
        return CoefficientPyramid(
            self.coarse_level,
            self.fine_level,
            self.alpha.copy(),
            [b.copy() for b in self.beta],
        )

    def energy(self) -> float:
        return float(np.sum(self.alpha**2) + sum(np.sum(b**2) for b in self.beta))

    def flat(self) -> np.ndarray:
        """All coefficients concatenated, coarse to fine."""
        return np.concatenate([self.alpha, *self.beta])


def _dyadic_level(n: int) -> int:
    if n < 1 or n & (n - 1):
        raise ShapeError(f"signal length must be a power of two, got {n}")
    return n.bit_length() - 1


def _periodic_index(n_out: int, n_in: int, taps: int) -> np.ndarray:
    # idx[k, m] = (2k + m) mod n_in
    return (2 * np.arange(n_out)[:, None] + np.arange(taps)[None, :]) % n_in


def _analysis_step(x, h, g):
    n = x.size
    idx = _periodic_index(n // 2, n, h.size)
    windows = x[idx]
    return windows @ h, windows @ g


def _synthesis_step(approx, detail, h, g):
    n = 2 * approx.size
    idx = _periodic_index(approx.size, n, h.size)
    contrib = approx[:, None] * h[None, :] + detail[:, None] * g[None, :]
    return np.bincount(idx.ravel(), weights=contrib.ravel(), minlength=n)


def dwt_periodized(signal, wavelet, coarse_level: int) -> CoefficientPyramid:
    """Periodized forward pyramid transform down to `coarse_level`.

    Parameters
    ----------
    signal : array_like
        Length ``2**J`` sequence interpreted as scaling coefficients at level J.
    wavelet : WaveletFilter or str
    coarse_level : int
        Level of the retained scaling coefficients, ``0 <= coarse_level < J``.

    Returns
    -------
    CoefficientPyramid
    """
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1:
        raise ShapeError(f"signal must be one-dimensional, got shape {x.shape}")
    fine = _dyadic_level(x.size)
    coarse_level = int(coarse_level)
    if coarse_level < 0 or coarse_level >= fine:
        raise ShapeError(f"coarse_level must lie in 0..{fine - 1}, got {coarse_level}")
    filt = _as_filter(wavelet)
    h, g = filt.lowpass, filt.highpass
    details = []
    approx = x
    for _ in range(fine - coarse_level):
        approx, d = _analysis_step(approx, h, g)
        details.append(d)
    return CoefficientPyramid(coarse_level, fine, approx, details[::-1])


def idwt_periodized(pyramid: CoefficientPyramid, wavelet) -> np.ndarray:
    """Inverse of :func:`dwt_periodized`; returns the length ``2**fine_level`` signal."""
    filt = _as_filter(wavelet)
    h, g = filt.lowpass, filt.highpass
    approx = np.asarray(pyramid.alpha, dtype=float)
    for j, d in zip(pyramid.levels, pyramid.beta):
        if approx.size != 2**j or d.size != 2**j:
            raise ShapeError(f"level {j}: length mismatch ({approx.size}, {d.size})")
        approx = _synthesis_step(approx, d, h, g)
    return approx


def filter_identities(wavelet) -> dict:
    """Residuals of the defining identities of an orthonormal filter.

    Useful as a self-check of tap tables: every entry should be ~0.
    """
    filt = _as_filter(wavelet)
    h = filt.lowpass
    k = np.arange(h.size)
    shifts = [float(np.dot(h[: h.size - 2 * m], h[2 * m:])) for m in range(1, h.size // 2)]
    signs = (-1.0) ** k
    moments = [float(np.sum(signs * k.astype(float) ** m * h)) for m in range(filt.vanishing_moments)]
    return {
        "sum": float(h.sum() - math.sqrt(2.0)),
        "energy": float(np.dot(h, h) - 1.0),
        "shift_orthogonality": shifts,
        "highpass_moments": moments,
    }
