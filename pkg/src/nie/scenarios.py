"""Named parameter sets and scan recipes.

Presets are INI files shipped in ``nie/presets``.  A preset stores level
widths, relaxation, coherence widths, zero-field population *ratios* and per
field ``k * vbar`` values; pump rates are derived so that the zero-field
occupancies reproduce the ratios with total population 1.  The schema:

``[preset]``
    ``description``, ``kind``, ``topology``, optional ``notes``.
``[Gamma]``
    ``level = rate``.
``[gamma]``
    ``src>dst = rate``.
``[coherence]``
    ``a-b = half-width``; unlisted pairs use ``(Gamma_a + Gamma_b) / 2``.
``[populations]``
    ``level = ratio``.
``[field.j]``
    ``k`` (``k_j * vbar``), ``role`` and ``saturation = a-b c-d``, meaning
    ``S_j = |G_j|**2 / (W_ab W_cd)`` with ``W`` the coherence half-widths.
``[scan]``
    Default scan: ``regime``, ``variable``, ``start``, ``stop``, ``points``,
    fixed values (``S1``, ``y1``, ``omega3``...) and ``locks``.
``[grid]``
    Default velocity grid (``method``, ``nodes``, ``cutoff``).
``[variant.NAME]``
    ``section.key = value`` overrides applied by :meth:`Preset.variant`.

Detunings appear either as ``omegaJ`` (s^-1) or scaled as ``yJ = omegaJ / W_J``
where ``W_J`` is the half-width of transition ``J``.
"""

from __future__ import annotations

import configparser
import io
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import fwm, two_field
from .core import GROUND, Field, FieldSet, LevelScheme, validate_scheme, zero_field_populations
from .doppler import VelocityGrid, maxwell_average
from .errors import IncompatibleRegime, NieError, ScanPointError, UnknownPreset

PRESETS = ("ne_v_open_fig2", "na_closed_fig3", "na_closed_fig4", "na2_down", "na2_up")
REGIMES = ("two_field", "fwm_cpt", "fwm_two_strong", "perturbative")
VARIABLES = tuple(f"omega{j}" for j in range(1, 5)) + tuple(f"S{j}" for j in range(1, 5)) + ("velocity_slice",)
_ALIASES = {f"y{j}": f"omega{j}" for j in range(1, 5)}
_ALIASES["z"] = "velocity_slice"

_ROLES = {
    "fwm_cpt": {1: "strong", 2: "strong", 3: "weak", 4: "weak"},
    "fwm_two_strong": {1: "strong", 2: "weak", 3: "strong", 4: "weak"},
    "perturbative": {1: "weak", 2: "weak", 3: "weak", 4: "weak"},
}
_FWM_REGIMES = ("fwm_cpt", "fwm_two_strong", "perturbative")


def _pair(text):
    a, b = text.strip().split("-")
    return frozenset((a, b)) if a != b else None


def _fmt(x):
    return repr(float(x))


# ---------------------------------------------------------------------------
# presets


def pump_rates(kind, topology, Gamma, gamma, populations):
    """Pump rates that make the zero-field occupancies equal ``populations``.

    Open: ``q_k = Gamma_k n_k - sum_j gamma_jk n_j``.  Closed: the same
    balance divided by the ground occupancy gives ``w_k``.
    """
    total = sum(populations.values())
    n = {k: v / total for k, v in populations.items()}
    probe = LevelScheme(kind, topology, Gamma, gamma)
    pump = {}
    for k in probe.levels:
        if topology == "closed" and k == GROUND:
            continue
        inflow = sum(rate * n.get(src, 0.0) for (src, dst), rate in probe.gamma.items() if dst == k)
        rate = probe.G(k) * n.get(k, 0.0) - inflow
        if topology == "closed":
            rate = rate / n[GROUND]
        if rate < -1e-9 * max(probe.G(k), 1.0):
            raise ValueError(f"populations need a negative pump into level {k!r}")
        if rate > 0:
            pump[k] = rate
    return pump


@dataclass(frozen=True)
class Preset:
    """A named parameter set.

    ``kv`` maps field index to ``k_j * vbar``; ``saturation`` maps field index
    to the two coherence pairs defining ``S_j``; ``scan`` holds default scan
    settings as strings exactly as stored; ``grid`` is the default velocity
    grid; ``variants`` maps a variant name to its overrides.
    """

    name: str
    description: str
    scheme: LevelScheme
    fields: FieldSet
    kv: dict
    populations: dict
    saturation: dict
    scan: dict = field(default_factory=dict)
    grid: VelocityGrid = field(default_factory=VelocityGrid)
    variants: dict = field(default_factory=dict)
    notes: str = ""

    def S_scale(self, j):
        """``|G_j|**2`` per unit of ``S_j``."""
        a, b = self.saturation[j]
        return self.scheme.width(*a) * self.scheme.width(*b)

    def rabi_for(self, j, S):
        return float(np.sqrt(S * self.S_scale(j)))

    def S_of(self, j, rabi):
        return abs(rabi) ** 2 / self.S_scale(j)

    def width(self, j):
        return self.scheme.transition_width(j)

    def variant(self, name):
        """Preset with the overrides of variant ``name`` applied."""
        if name not in self.variants:
            raise UnknownPreset(f"{self.name} has no variant {name!r} (known: {sorted(self.variants)})")
        cfg = _to_config(self)
        for key, value in self.variants[name].items():
            section, _, option = key.rpartition(".")
            if not cfg.has_section(section):
                cfg.add_section(section)
            cfg.set(section, option, value)
        for section in [s for s in cfg.sections() if s.startswith("variant.")]:
            cfg.remove_section(section)
        return _from_config(f"{self.name}:{name}", cfg)

    def to_ini(self):
        buf = io.StringIO()
        _to_config(self).write(buf)
        return buf.getvalue()

    def describe(self):
        lines = [f"{self.name}: {self.description}"]
        lines.append(f"  scheme {self.scheme.kind}, {self.scheme.topology}")
        pops = ", ".join(f"{k}={v:g}" for k, v in self.populations.items())
        lines.append(f"  zero-field populations (ratio) {pops}")
        for j in sorted(self.kv):
            a, b = (",".join(sorted(p)) for p in self.saturation[j])
            lines.append(f"  field {j}: k*vbar = {self.kv[j]:.4g} s^-1, S{j} = |G{j}|^2/(W[{a}] W[{b}])")
        if self.variants:
            lines.append("  variants: " + ", ".join(sorted(self.variants)))
        if self.notes:
            lines.append(f"  notes: {self.notes}")
        return "\n".join(lines)


def _new_config():
    cfg = configparser.ConfigParser(delimiters=("=",), comment_prefixes=("#", ";"), interpolation=None)
    cfg.optionxform = str
    return cfg


def _to_config(p):
    cfg = _new_config()
    s = p.scheme
    cfg["preset"] = {"description": p.description, "kind": s.kind, "topology": s.topology, "notes": p.notes}
    cfg["Gamma"] = {k: _fmt(v) for k, v in s.Gamma.items()}
    cfg["gamma"] = {f"{a}>{b}": _fmt(v) for (a, b), v in s.gamma.items()}
    cfg["coherence"] = {"-".join(sorted(k)): _fmt(v) for k, v in s.coherence.items()}
    cfg["populations"] = {k: _fmt(v) for k, v in p.populations.items()}
    for j in sorted(p.kv):
        a, b = ("-".join(sorted(x)) for x in p.saturation[j])
        cfg[f"field.{j}"] = {"k": _fmt(p.kv[j]), "role": p.fields[j].role, "saturation": f"{a} {b}"}
    cfg["scan"] = dict(p.scan)
    cfg["grid"] = {"method": p.grid.method, "nodes": str(p.grid.nodes), "cutoff": _fmt(p.grid.cutoff)}
    for name, overrides in p.variants.items():
        cfg[f"variant.{name}"] = dict(overrides)
    return cfg


def _from_config(name, cfg):
    head = cfg["preset"]
    kind, topology = head["kind"], head["topology"]
    Gamma = {k: float(v) for k, v in cfg["Gamma"].items()}
    gamma = {}
    if cfg.has_section("gamma"):
        for key, v in cfg["gamma"].items():
            src, dst = key.split(">")
            gamma[(src.strip(), dst.strip())] = float(v)
    coherence = {}
    if cfg.has_section("coherence"):
        coherence = {_pair(k): float(v) for k, v in cfg["coherence"].items()}
    populations = {k: float(v) for k, v in cfg["populations"].items()}
    pump = pump_rates(kind, topology, Gamma, gamma, populations)
    scheme = LevelScheme(kind, topology, Gamma, gamma, pump, coherence)
    kv, sat, flds = {}, {}, {}
    for section in cfg.sections():
        m = re.fullmatch(r"field\.(\d)", section)
        if not m:
            continue
        j = int(m.group(1))
        sec = cfg[section]
        kv[j] = float(sec["k"])
        a, b = sec["saturation"].split()
        sat[j] = (tuple(sorted(a.split("-"))), tuple(sorted(b.split("-"))))
        flds[j] = Field(0.0, 0.0, kv[j], sec.get("role", "weak"))
    variants = {
        s[len("variant."):]: dict(cfg[s]) for s in cfg.sections() if s.startswith("variant.")
    }
    grid = VelocityGrid()
    if cfg.has_section("grid"):
        g = cfg["grid"]
        grid = VelocityGrid(g.get("method", "gauss_hermite"), int(g.get("nodes", 96)), float(g.get("cutoff", 5.0)))
    preset = Preset(
        name=name,
        description=head.get("description", ""),
        scheme=scheme,
        fields=FieldSet(flds),
        kv=kv,
        populations=populations,
        saturation=sat,
        scan=dict(cfg["scan"]) if cfg.has_section("scan") else {},
        grid=grid,
        variants=variants,
        notes=head.get("notes", ""),
    )
    bad = validate_scheme(scheme)
    if bad:
        raise ValueError(f"preset {name}: invalid scheme {bad}")
    return preset


def parse_preset(text, name="custom"):
    """Build a :class:`Preset` from INI text."""
    cfg = _new_config()
    cfg.read_string(text)
    return _from_config(name, cfg)


def load_preset(name):
    """Load a shipped preset; ``'base:variant'`` applies a named variant."""
    base, _, variant = name.partition(":")
    if base not in PRESETS:
        raise UnknownPreset(f"unknown preset {base!r}; known presets: {', '.join(PRESETS)}")
    text = resources.files("nie").joinpath("presets", f"{base}.ini").read_text()
    preset = parse_preset(text, base)
    return preset.variant(variant) if variant else preset


# ---------------------------------------------------------------------------
# scans


@dataclass(frozen=True)
class Lock:
    """``target = factor * source`` with the default factor ``k_target / k_source``."""

    target: str
    source: str
    factor: float | None = None

    def value(self, preset, detunings):
        t, s = int(self.target[-1]), int(self.source[-1])
        f = self.factor if self.factor is not None else preset.kv[t] / preset.kv[s]
        return f * detunings[s]


def parse_locks(text):
    """``'omega2:omega1'`` or ``'omega2:omega1*0.9'``, comma separated."""
    out = []
    for item in filter(None, (x.strip() for x in (text or "").split(","))):
        target, source = item.split(":")
        factor = None
        if "*" in source:
            source, factor = source.split("*")
            factor = float(factor)
        out.append(Lock(_canonical(target.strip()), _canonical(source.strip()), factor))
    return tuple(out)


def _canonical(var):
    var = _ALIASES.get(var, var)
    if var not in VARIABLES:
        raise ValueError(f"unknown scan variable {var!r}")
    return var


@dataclass(frozen=True)
class ScanSpec:
    """One-dimensional sweep.

    ``variable`` is one of ``omega1..4`` (s^-1), ``y1..y4`` (scaled by the
    transition half-width), ``S1..S4`` or ``velocity_slice``/``z``.  ``fixed``
    holds values for other settings using the same names.  ``locks`` are
    applied after the fixed values; the generated-wave detuning of the FWM
    regimes is closed automatically (``omega4 = omega1 - omega2 + omega3``,
    solved for ``omega3`` when ``omega4`` is scanned).
    """

    variable: str
    start: float
    stop: float
    points: int
    fixed: dict = field(default_factory=dict)
    locks: tuple = ()

    def __post_init__(self):
        if int(self.points) < 2:
            raise ValueError("a scan needs at least 2 points")
        _canonical(self.variable)
        for key in self.fixed:
            _canonical(key)
        object.__setattr__(self, "points", int(self.points))
        object.__setattr__(self, "fixed", dict(self.fixed))
        object.__setattr__(self, "locks", tuple(self.locks))

    @property
    def scaled(self):
        return self.variable.startswith("y")

    @property
    def canonical(self):
        return _canonical(self.variable)

    @property
    def values(self):
        return np.linspace(self.start, self.stop, self.points)

    @classmethod
    def from_preset(cls, preset, **overrides):
        """Default scan of ``preset`` with keyword overrides."""
        sc = dict(preset.scan)
        meta = {"regime", "variable", "start", "stop", "points", "locks"}
        fixed = {k: float(v) for k, v in sc.items() if k not in meta}
        fixed.update(overrides.pop("fixed", {}))
        kw = dict(
            variable=sc.get("variable", "y4"),
            start=float(sc.get("start", -1.0)),
            stop=float(sc.get("stop", 1.0)),
            points=int(sc.get("points", 2)),
            locks=parse_locks(sc.get("locks", "")),
        )
        kw.update(overrides)
        return cls(fixed=fixed, **kw)


@dataclass(frozen=True)
class ScanTable:
    """Rectangular table: ``columns`` and a 2-D float array ``rows``."""

    columns: tuple
    rows: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2 or rows.shape[1] != len(self.columns):
            raise ValueError("scan table must be rectangular")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "columns", tuple(self.columns))

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        return self.rows[:, self.columns.index(name)]

    def to_text(self, sep=","):
        lines = [sep.join(self.columns)]
        for row in self.rows:
            lines.append(sep.join("%.12e" % x for x in row))
        return "\n".join(lines) + "\n"

    def write(self, path, fmt="csv"):
        sep = "," if fmt == "csv" else "\t"
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(self.to_text(sep))

    @classmethod
    def read(cls, path):
        with open(path, encoding="ascii") as fh:
            head = fh.readline().rstrip("\n")
            sep = "\t" if "\t" in head else ","
            rows = [[float(x) for x in line.split(sep)] for line in fh if line.strip()]
        return cls(tuple(head.split(sep)), np.array(rows))


def _applicable(preset, regime):
    kind = preset.scheme.kind
    if regime not in REGIMES:
        raise IncompatibleRegime(f"unknown regime {regime!r}")
    if regime == "two_field" and kind == "RamanFWM":
        raise IncompatibleRegime("two_field needs a V, Lambda or H scheme")
    if regime in _FWM_REGIMES and kind != "RamanFWM":
        raise IncompatibleRegime(f"{regime} needs a RamanFWM scheme, preset is {kind}")


def point_settings(preset, scan, x, regime):
    """Field set and velocity for scan value ``x`` (locks applied).

    Returns ``(fields, z_slice, detunings)``; ``z_slice`` is ``None`` unless
    the scan runs over velocity.
    """
    settings = {}
    for key, value in scan.fixed.items():
        settings[key] = float(value)
    settings[scan.variable] = float(x)
    omegas = {j: 0.0 for j in preset.kv}
    S = {j: 0.0 for j in preset.kv}
    z_slice = None
    for key, value in settings.items():
        canon = _canonical(key)
        if canon == "velocity_slice":
            z_slice = value
        elif canon.startswith("omega"):
            j = int(canon[-1])
            omegas[j] = value * preset.width(j) if key.startswith("y") else value
        else:
            S[int(canon[-1])] = value
    for lock in scan.locks:
        omegas[int(lock.target[-1])] = lock.value(preset, omegas)
    if regime in _FWM_REGIMES:
        if scan.canonical == "omega4":
            omegas[3] = omegas[4] - omegas[1] + omegas[2]
        else:
            omegas[4] = omegas[1] - omegas[2] + omegas[3]
    roles = _ROLES.get(regime, {j: preset.fields[j].role for j in preset.kv})
    data = {}
    for j in preset.kv:
        role = roles[j]
        if regime == "two_field":
            role = "strong" if S[j] > 0 else "weak"
        rabi = preset.rabi_for(j, S[j]) if role == "strong" else 0.0
        data[j] = Field(rabi, omegas[j], preset.kv[j], role)
    return FieldSet(data), z_slice, omegas


def _avg(values, w):
    return complex(np.dot(w, values))


def _linear_reference(preset, j, z, w):
    """Averaged zero-field absorption index of transition ``j`` at line center."""
    W = preset.width(j)
    return float(np.dot(w, (W / (W - 1j * preset.kv[j] * z)).real))


def columns_for(preset, regime, scan):
    fields_ = sorted(preset.kv)
    cols = [scan.variable, "re_chi4", "im_chi4", "abs2_chi4"]
    cols += [f"alpha{j}" for j in fields_]
    if regime == "two_field":
        i = two_field.aux_index(preset.scheme)
        cols += [f"re_chi{i}", f"im_chi{i}", f"abs2_chi{i}", "dr4", f"dr{i}"]
    else:
        other = 2 if regime == "fwm_two_strong" else 3
        cols += [f"re_chi{other}", f"im_chi{other}", f"abs2_chi{other}"]
        cols += [f"dr{j}" for j in (1, 2, 3, 4)]
    if scan.canonical == "velocity_slice":
        cols += [f"r_{lv}" for lv in preset.scheme.levels]
        cols += [f"maxwell_r_{lv}" for lv in preset.scheme.levels]
    cols += [f"y{j}" for j in fields_]
    cols += [f"S{j}" for j in fields_]
    # a scaled scan variable is already the first column
    return tuple(c for i, c in enumerate(cols) if c not in cols[:i])


def _evaluate(preset, regime, fields, z):
    """Per-velocity outputs for one field configuration (arrays over ``z``)."""
    s = preset.scheme
    out = {}
    if regime == "two_field":
        r = two_field.susceptibilities(s, fields, z)
        i = two_field.aux_index(s)
        out["chi4"] = r.chi4_norm
        out[f"chi{i}"] = r.chii_norm
        out["alpha4"] = np.real(r.chi4_norm)
        out[f"alpha{i}"] = np.real(r.chii_norm)
        out["dr4"], out[f"dr{i}"] = r.dr4, r.dri
        out["populations"] = r.populations.r
        return out
    if regime == "perturbative":
        out["chi4"] = fwm.perturbative_chi3(s, fields, z, process=4)
        out["chi3"] = fwm.perturbative_chi3(s, fields, z, process=3)
        n = zero_field_populations(s).n
        diffs = (n["l"] - n["g"], n["n"] - n["g"], n["n"] - n["m"], n["l"] - n["m"])
        for j in (1, 2, 3, 4):
            W = preset.width(j)
            out[f"alpha{j}"] = np.real(W / (W + 1j * fields.shifted(j, z)))
            out[f"dr{j}"] = np.full(np.shape(z), diffs[j - 1]) if np.ndim(z) else diffs[j - 1]
        out["populations"] = {lv: np.full(np.shape(z), n[lv]) if np.ndim(z) else n[lv] for lv in s.levels}
        return out
    fn = fwm.fwm_cpt if regime == "fwm_cpt" else fwm.fwm_two_strong
    r = fn(s, fields, z)
    for key, value in r.chi_t.items():
        out[f"chi{key}"] = value
    for j, value in r.chi_abs.items():
        out[f"alpha{j}"] = np.real(value)
    for j, value in enumerate(r.dr, start=1):
        out[f"dr{j}"] = value
    out["populations"] = r.populations.r
    return out


def _fwm_reference(preset, z, w):
    """Averaged weak-field chi4 at zero detunings (scale for |chi4|^2 columns)."""
    flds = FieldSet({j: Field(0.0, 0.0, preset.kv[j], "weak") for j in preset.kv})
    return _avg(fwm.perturbative_chi3(preset.scheme, flds, z, process=4), w)


def evaluate_point(preset, scan, x, grid, regime, cols, refs):
    fields, z_slice, omegas = point_settings(preset, scan, x, regime)
    row = dict.fromkeys(cols, 0.0)
    row[scan.variable] = float(x)
    if z_slice is not None:
        z = np.array([z_slice])
        w = np.array([1.0])
    else:
        z, w = grid.points
    vals = _evaluate(preset, regime, fields, z)

    def average(key):
        return complex(maxwell_average(lambda _: vals[key], _Fixed(z, w), vectorized=True))

    chi_ref = refs.get("chi4", 1.0)
    for name in cols:
        m = re.fullmatch(r"(re|im|abs2)_chi(\d)", name)
        if m:
            c = average(f"chi{m.group(2)}")
            row[name] = {"re": c.real, "im": c.imag, "abs2": abs(c / chi_ref) ** 2 if regime != "two_field" else abs(c) ** 2}[m.group(1)]
        elif re.fullmatch(r"alpha\d", name) and name in vals:
            a = average(name).real
            row[name] = a / refs[name] if z_slice is None else a
        elif re.fullmatch(r"dr\d", name) and name in vals:
            row[name] = average(name).real
        elif name.startswith("r_"):
            row[name] = float(np.real(vals["populations"][name[2:]][0]))
        elif name.startswith("maxwell_r_"):
            row[name] = float(np.real(vals["populations"][name[10:]][0])) * np.exp(-z_slice ** 2) / np.sqrt(np.pi)
        elif re.fullmatch(r"y\d", name):
            j = int(name[1])
            row[name] = omegas[j] / preset.width(j)
        elif re.fullmatch(r"S\d", name):
            j = int(name[1:])
            row[name] = preset.S_of(j, fields.rabi(j))
    return [row[c] for c in cols]


@dataclass(frozen=True)
class _Fixed:
    """Quadrature rule wrapper so :func:`maxwell_average` sees explicit nodes."""

    z: np.ndarray
    w: np.ndarray

    @property
    def points(self):
        return self.z, self.w


def run_scan(preset, scan=None, grid=None, regime=None, workers=1):
    """Evaluate ``regime`` over ``scan`` with Maxwell averaging on ``grid``.

    ``scan``, ``grid`` and ``regime`` default to the preset's stored values.
    Scan points are independent; with ``workers > 1`` they are evaluated on a
    thread pool and assembled in scan order.  Any numeric failure is re-raised
    as :class:`ScanPointError` naming the scan index and value.

    Columns: the scan variable, ``re/im/abs2_chi4`` (normalized chi4/chi4^0
    for ``two_field``; the averaged third-order chi4 for FWM regimes, with
    ``abs2`` scaled by the averaged weak-field value at zero detunings), the
    averaged absorption indices ``alphaJ`` relative to their zero-field line
    center values, a second susceptibility, averaged population differences,
    the scaled detunings ``yJ`` and intensities ``SJ``.
    """
    if isinstance(preset, str):
        preset = load_preset(preset)
    regime = regime or preset.scan.get("regime", "two_field")
    _applicable(preset, regime)
    scan = scan or ScanSpec.from_preset(preset)
    grid = grid or preset.grid
    for lock in scan.locks:
        for v in (lock.target, lock.source):
            if int(v[-1]) not in preset.kv:
                raise ValueError(f"lock {lock.target}:{lock.source} references an undefined field")
    cols = columns_for(preset, regime, scan)
    z, w = grid.points
    refs = {f"alpha{j}": _linear_reference(preset, j, z, w) for j in preset.kv}
    if regime in _FWM_REGIMES:
        refs["chi4"] = _fwm_reference(preset, z, w)

    def task(item):
        idx, x = item
        try:
            row = evaluate_point(preset, scan, x, grid, regime, cols, refs)
        except (NieError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
            raise ScanPointError(idx, float(x), exc) from exc
        if not np.all(np.isfinite(row)):
            raise ScanPointError(idx, float(x), "non-finite output")
        return row

    items = list(enumerate(scan.values))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(task, items))
    else:
        rows = [task(it) for it in items]
    meta = {"preset": preset.name, "regime": regime, "grid": f"{grid.method}:{grid.nodes}:{grid.cutoff:g}"}
    return ScanTable(cols, np.array(rows), meta)


def peak_position(table, column="abs2_chi4"):
    """Scan value of the maximum of ``column``, refined by a parabola."""
    x = table.rows[:, 0]
    y = table.column(column)
    i = int(np.argmax(y))
    if 0 < i < len(x) - 1:
        a, b, c = y[i - 1:i + 2]
        den = a - 2 * b + c
        if den != 0:
            return float(x[i] + 0.5 * (a - c) / den * (x[1] - x[0]))
    return float(x[i])
