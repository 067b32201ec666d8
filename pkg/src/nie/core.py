"""Level schemes, driving fields and zero-field populations.

All rates and detunings are in s^-1.  Velocities are reduced, ``z = v / vbar``,
and every wavevector is stored as the product ``k * vbar`` (also s^-1), so the
Doppler-shifted detuning of field ``j`` is ``Omega_j - k_j * z``.

Level labels follow one fixed naming per scheme kind:

========== ============================ ==============================
kind       levels                       transitions (field: lower, upper)
========== ============================ ==============================
V          l (shared lower), m, g       4: (l, m), 1: (l, g)
Lambda     l, m (shared upper), n       4: (l, m), 3: (n, m)
H          l, m, f (ladder)             4: (l, m), 2: (m, f)
RamanFWM   l, g, n, m (double Lambda)   1: (l, g), 2: (n, g), 3: (n, m), 4: (l, m)
========== ============================ ==============================

Population differences are always ``lower - upper`` of the transition, so a
positive difference means absorption in the absence of coherence effects.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import ZeroDecayRate

KINDS = ("V", "Lambda", "H", "RamanFWM")
TOPOLOGIES = ("open", "closed")
ROLES = ("strong", "weak", "off")

LEVELS = {
    "V": ("l", "m", "g"),
    "Lambda": ("l", "m", "n"),
    "H": ("l", "m", "f"),
    "RamanFWM": ("l", "g", "n", "m"),
}

TRANSITIONS = {
    "V": {4: ("l", "m"), 1: ("l", "g")},
    "Lambda": {4: ("l", "m"), 3: ("n", "m")},
    "H": {4: ("l", "m"), 2: ("m", "f")},
    "RamanFWM": {1: ("l", "g"), 2: ("n", "g"), 3: ("n", "m"), 4: ("l", "m")},
}

GROUND = "l"


def _frozen(mapping):
    return MappingProxyType(dict(mapping))


def shifted_detuning(omega, k, z):
    """Doppler-shifted detuning ``omega - k * z`` seen by an atom at ``z``."""
    return omega - k * z


@dataclass(frozen=True)
class LevelScheme:
    """Relaxation and pumping data for one level configuration.

    Parameters
    ----------
    kind : {'V', 'Lambda', 'H', 'RamanFWM'}
    topology : {'open', 'closed'}
        Open schemes have constant incoherent sources ``pump[k] = q_k``.
        Closed schemes conserve population: ``pump[k] = w_k`` is a rate out
        of the ground level ``l`` and all decay not listed in ``gamma``
        returns to ``l``.
    Gamma : mapping level -> total decay rate of the level.
        In a closed scheme the ground entry only enters default coherence
        widths and may be zero.
    gamma : mapping (from, to) -> partial relaxation rate.
    pump : mapping level -> pump rate.
    coherence : mapping frozenset({a, b}) -> coherence half-width.
        Pairs not listed default to ``(Gamma[a] + Gamma[b]) / 2``.
    """

    kind: str
    topology: str
    Gamma: Mapping[str, float]
    gamma: Mapping[tuple, float] = field(default_factory=dict)
    pump: Mapping[str, float] = field(default_factory=dict)
    coherence: Mapping[frozenset, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scheme kind {self.kind!r}")
        if self.topology not in TOPOLOGIES:
            raise ValueError(f"unknown topology {self.topology!r}")
        coh = {frozenset(k): float(v) for k, v in dict(self.coherence).items()}
        object.__setattr__(self, "Gamma", _frozen({k: float(v) for k, v in dict(self.Gamma).items()}))
        object.__setattr__(self, "gamma", _frozen({tuple(k): float(v) for k, v in dict(self.gamma).items()}))
        object.__setattr__(self, "pump", _frozen({k: float(v) for k, v in dict(self.pump).items()}))
        object.__setattr__(self, "coherence", _frozen(coh))

    @property
    def levels(self):
        return LEVELS[self.kind]

    @property
    def transitions(self):
        return TRANSITIONS[self.kind]

    @property
    def closed(self):
        return self.topology == "closed"

    def G(self, level):
        return self.Gamma.get(level, 0.0)

    def g(self, src, dst):
        return self.gamma.get((src, dst), 0.0)

    def q(self, level):
        return self.pump.get(level, 0.0)

    def width(self, a, b):
        """Coherence half-width between levels ``a`` and ``b``."""
        key = frozenset((a, b))
        if key in self.coherence:
            return self.coherence[key]
        return 0.5 * (self.G(a) + self.G(b))

    def transition_width(self, j):
        return self.width(*self.transitions[j])

    def ground_return(self, level):
        """Closed schemes: decay rate from ``level`` back to the ground."""
        others = sum(v for (a, b), v in self.gamma.items() if a == level and b != GROUND)
        return self.G(level) - others

    def replace(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        return {
            "kind": self.kind,
            "topology": self.topology,
            "Gamma": dict(self.Gamma),
            "gamma": {f"{a},{b}": v for (a, b), v in self.gamma.items()},
            "pump": dict(self.pump),
            "coherence": {",".join(sorted(k)): v for k, v in self.coherence.items()},
        }


@dataclass(frozen=True)
class Field:
    """A single monochromatic field.

    ``rabi`` is the coupling G = -E d / 2 hbar (s^-1); only ``|rabi|**2``
    enters the closed-form results.  ``detuning`` is ``omega_j`` minus the
    transition frequency, ``k`` is the signed ``k_j * vbar``.
    """

    rabi: complex = 0.0
    detuning: float = 0.0
    k: float = 0.0
    role: str = "off"

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown field role {self.role!r}")
        object.__setattr__(self, "rabi", complex(self.rabi))
        object.__setattr__(self, "detuning", float(self.detuning))
        object.__setattr__(self, "k", float(self.k))

    @property
    def intensity(self):
        return abs(self.rabi) ** 2

    def shifted(self, z):
        return shifted_detuning(self.detuning, self.k, z)


OFF = Field()


class FieldSet(Mapping):
    """Immutable mapping ``field index -> Field``; missing indices are off."""

    def __init__(self, fields=None, **kw):
        data = {}
        for j, f in dict(fields or {}).items():
            data[int(j)] = f if isinstance(f, Field) else Field(**f)
        for key, f in kw.items():
            data[int(key.lstrip("E"))] = f if isinstance(f, Field) else Field(**f)
        self._data = MappingProxyType(data)

    def __getitem__(self, j):
        return self._data[j]

    def __iter__(self):
        return iter(sorted(self._data))

    def __len__(self):
        return len(self._data)

    def __repr__(self):
        return f"FieldSet({dict(self._data)!r})"

    def __eq__(self, other):
        return isinstance(other, FieldSet) and dict(self._data) == dict(other._data)

    def __hash__(self):
        return hash(tuple(sorted(self._data.items())))

    def get(self, j, default=OFF):
        return self._data.get(j, default)

    def rabi(self, j):
        return self.get(j).rabi

    def intensity(self, j):
        return self.get(j).intensity

    def shifted(self, j, z):
        return self.get(j).shifted(z)

    def with_field(self, j, **changes):
        data = dict(self._data)
        data[j] = replace(data.get(j, OFF), **changes)
        return FieldSet(data)

    def to_dict(self):
        return {
            j: {"rabi": f.rabi, "detuning": f.detuning, "k": f.k, "role": f.role}
            for j, f in self._data.items()
        }


@dataclass(frozen=True)
class PopulationSet:
    """Power-dependent occupancies ``r`` and zero-field occupancies ``n``."""

    r: Mapping[str, float]
    n: Mapping[str, float]

    def __post_init__(self):
        object.__setattr__(self, "r", _frozen(self.r))
        object.__setattr__(self, "n", _frozen(self.n))

    def dr(self, lower, upper):
        return self.r[lower] - self.r[upper]

    def dn(self, lower, upper):
        return self.n[lower] - self.n[upper]


def as_output(x):
    """Python scalar for 0-d input, ndarray otherwise (velocity-vectorized)."""
    if np.ndim(x) == 0:
        x = complex(x) if np.iscomplexobj(x) else float(x)
        return x
    return np.asarray(x)


def denominator(width, detuning):
    """Complex resonance denominator ``P = width + i * detuning``."""
    return width + 1j * detuning


def _check_rates(scheme):
    for level in scheme.levels:
        if scheme.closed and level == GROUND:
            continue
        if not scheme.G(level) > 0:
            raise ZeroDecayRate(level)


def solve_rate_equations(scheme, transfer=None):
    """Steady-state occupancies of the incoherent rate equations.

    ``transfer`` maps level -> additional net inflow rate (e.g. induced
    transitions); values may be arrays of a common shape, in which case each
    occupancy is returned with that shape.  Open schemes solve
    ``Gamma_k r_k - sum_j gamma_jk r_j = q_k + T_k``; closed schemes replace
    the ground balance by ``sum r = 1`` and pump with ``w_k r_l``.
    """
    _check_rates(scheme)
    transfer = transfer or {}
    levels = scheme.levels
    idx = {lv: i for i, lv in enumerate(levels)}
    n = len(levels)
    shape = np.broadcast_shapes(*(np.shape(v) for v in transfer.values())) if transfer else ()
    A = np.zeros((n, n))
    b = np.zeros((n,) + shape)
    for k in levels:
        i = idx[k]
        A[i, i] += scheme.G(k)
        for (src, dst), rate in scheme.gamma.items():
            if dst == k and src != k:
                A[i, idx[src]] -= rate
        b[i] = transfer.get(k, 0.0)
        if scheme.closed:
            if k != GROUND:
                A[i, idx[GROUND]] -= scheme.q(k)
        else:
            b[i] += scheme.q(k)
    if scheme.closed:
        g = idx[GROUND]
        A[g, :] = 1.0
        b[g] = 1.0
    sol = np.linalg.solve(A, b.reshape(n, -1)).reshape(b.shape)
    if not shape:
        return {lv: float(sol[idx[lv]]) for lv in levels}
    return {lv: sol[idx[lv]] for lv in levels}


def zero_field_populations(scheme):
    """Level occupancies in the absence of driving fields.

    Open schemes: ``n_i = q_i / Gamma_i + sum_k gamma_ki q_k / (Gamma_i Gamma_k)``
    for single-step cascades, generalized to arbitrary cascades by solving the
    rate equations exactly.  Closed schemes: ``n_j = w'_j n_l / Gamma_j`` with
    cascade-corrected pump rates and ``sum n = 1``.
    """
    n = solve_rate_equations(scheme)
    return PopulationSet(r=n, n=n)


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str = ""
    message: str = ""

    def __repr__(self):
        return f"{self.code}({self.subject})"


# fields every kind needs for its closed-form solver
REQUIRED_FIELDS = {"V": (4, 1), "Lambda": (4, 3), "H": (4, 2), "RamanFWM": (1, 2, 3, 4)}


def validate_scheme(scheme, fields=None):
    """Return a list of :class:`Violation`; empty means the inputs are usable."""
    out = []
    levels = set(scheme.levels)
    for level in scheme.Gamma:
        if level not in levels:
            out.append(Violation("UnknownLevel", level, "Gamma entry for a level outside the scheme"))
    for level in scheme.levels:
        rate = scheme.G(level)
        if scheme.closed and level == GROUND:
            if rate < 0:
                out.append(Violation("NegativeRate", level))
            continue
        if not rate > 0:
            out.append(Violation("ZeroDecayRate", level, "every excited level needs Gamma > 0"))
    for (src, dst), rate in scheme.gamma.items():
        if src not in levels or dst not in levels:
            out.append(Violation("UnknownLevel", f"{src},{dst}"))
        if rate < 0:
            out.append(Violation("NegativeRate", f"{src},{dst}"))
        if scheme.closed and src == GROUND:
            out.append(Violation("ClosedGroundDecay", f"{src},{dst}", "the ground level cannot decay"))
    for level in scheme.levels:
        total = sum(v for (a, _), v in scheme.gamma.items() if a == level)
        if total > scheme.G(level) * (1 + 1e-12) and not (scheme.closed and level == GROUND):
            out.append(Violation("DecayExceedsTotal", level, f"sum of partial rates {total} > Gamma"))
    for level, rate in scheme.pump.items():
        if level not in levels:
            out.append(Violation("UnknownLevel", level))
        if rate < 0:
            out.append(Violation("NegativeRate", level))
        if scheme.closed and level == GROUND and rate != 0:
            out.append(Violation("ClosedPumpSource", level, "closed pumps are rates out of the ground"))
    for key, width in scheme.coherence.items():
        if not set(key) <= levels or len(key) != 2:
            out.append(Violation("UnknownLevel", ",".join(sorted(key))))
        if not width > 0:
            out.append(Violation("ZeroCoherenceWidth", ",".join(sorted(key))))
    if fields is not None:
        allowed = set(scheme.transitions)
        for j in REQUIRED_FIELDS[scheme.kind]:
            if j not in fields:
                out.append(Violation("MissingField", f"E{j}"))
        for j, f in fields.items():
            if j not in allowed and f.role != "off":
                out.append(Violation("WrongFieldForScheme", f"E{j}", f"{scheme.kind} has no field {j}"))
            if f.role == "off" and f.rabi != 0:
                out.append(Violation("OffFieldNonzero", f"E{j}"))
            if not np.isfinite(f.detuning) or not np.isfinite(f.k) or not np.isfinite(f.rabi):
                out.append(Violation("NonFinite", f"E{j}"))
    return out
