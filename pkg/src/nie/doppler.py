"""Maxwell velocity averaging in reduced velocity ``z = v / vbar``.

The weight is ``exp(-z**2) / sqrt(pi)``.  Every wavevector in the package is
already multiplied by ``vbar``, so averages never need ``vbar`` itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import NonFinite

METHODS = ("gauss_hermite", "trapezoid")


@lru_cache(maxsize=32)
def _nodes(method, nodes, cutoff):
    if method == "gauss_hermite":
        z, w = np.polynomial.hermite.hermgauss(nodes)
        return z, w / np.sqrt(np.pi)
    z = np.linspace(-cutoff, cutoff, nodes)
    w = np.full(nodes, z[1] - z[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    w = w * np.exp(-z ** 2) / np.sqrt(np.pi)
    # renormalize so constants average exactly to themselves
    return z, w / w.sum()


@dataclass(frozen=True)
class VelocityGrid:
    """Quadrature rule over reduced velocity.

    ``gauss_hermite`` folds the Maxwell weight into the nodes; ``trapezoid``
    samples ``[-cutoff, cutoff]`` uniformly.  ``vbar`` is carried for
    bookkeeping only.
    """

    method: str = "gauss_hermite"
    nodes: int = 96
    cutoff: float = 5.0
    vbar: float = 1.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown quadrature {self.method!r}")
        if self.nodes < 8:
            raise ValueError("a velocity grid needs at least 8 nodes")
        if self.method == "trapezoid" and self.cutoff < 3:
            raise ValueError("trapezoid cutoff must be at least 3 thermal speeds")

    @classmethod
    def reference(cls):
        return cls("trapezoid", 4001, 5.0)

    @property
    def points(self):
        return _nodes(self.method, self.nodes, float(self.cutoff))

    def refined(self):
        return VelocityGrid(self.method, 2 * self.nodes, self.cutoff, self.vbar)


def maxwell_average(f, grid=None, vectorized=False):
    """Maxwell-weighted integral of ``f(z)`` over reduced velocity.

    ``f`` may return a scalar or an array; nodes are evaluated and summed
    in index order so the result does not depend on how ``f`` is scheduled.
    With ``vectorized`` the whole node array is passed in one call and ``f``
    must return values stacked along the first axis.
    """
    grid = grid or VelocityGrid()
    z, w = grid.points
    vals = np.asarray(f(z)) if vectorized else np.array([f(zi) for zi in z])
    if vals.shape[:1] != z.shape:
        vals = np.broadcast_to(vals, z.shape + vals.shape[1:]) if vals.ndim == 0 else vals
    if not np.all(np.isfinite(vals)):
        bad = int(np.argmax(~np.isfinite(vals).reshape(len(z), -1).all(axis=1)))
        raise NonFinite(f"integrand is not finite at z = {z[bad]:.6g}")
    return np.tensordot(w, vals, axes=(0, 0))


@dataclass(frozen=True)
class AveragedResponse:
    """Velocity averages of a per-velocity response at one scan point.

    ``values`` maps output names to averaged complex values (for example
    ``chi4``, ``chi4_t``); ``slices`` maps requested reduced velocities to
    the per-velocity populations.
    """

    values: dict
    slices: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]

    def abs2(self, key):
        return float(abs(self.values[key]) ** 2)


def averaged_spectrum(evaluator, grid, scan, slices=(), vectorized=False):
    """Average ``evaluator(x, z) -> dict`` over velocity for each scan value.

    Returns a list of :class:`AveragedResponse`.  ``slices`` lists reduced
    velocities at which ``evaluator(x, z)['populations']`` is also kept.
    Keys whose values are not numeric are skipped.  With ``vectorized`` the
    evaluator receives the full node array and returns arrays.
    """
    scan = list(scan)
    if not scan:
        raise ValueError("scan must not be empty")
    z, w = grid.points
    out = []
    for x in scan:
        if vectorized:
            full = evaluator(x, z)
            samples = None
            keys = [k for k, v in full.items() if isinstance(v, np.ndarray) and v.shape == z.shape]
        else:
            samples = [evaluator(x, zi) for zi in z]
            keys = [k for k, v in samples[0].items() if isinstance(v, (int, float, complex, np.number))]
        values = {}
        for k in keys:
            arr = full[k] if vectorized else np.array([s[k] for s in samples])
            if not np.all(np.isfinite(arr)):
                raise NonFinite(f"{k} is not finite at scan value {x!r}")
            values[k] = complex(np.dot(w, arr))
        kept = {float(zs): evaluator(x, zs).get("populations") for zs in slices}
        out.append(AveragedResponse(values=values, slices=kept))
    return out
