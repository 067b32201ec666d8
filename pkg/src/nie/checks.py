"""Self-checks run by ``nie verify``.

Each check returns :class:`CheckResult` rows with the measured value, the
target and the tolerance used.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import fwm, oracle, two_field
from .core import Field, FieldSet, LevelScheme
from .doppler import VelocityGrid
from .core import zero_field_populations
from .scenarios import ScanSpec, _evaluate, load_preset, point_settings, run_scan

# |chi3 / chi4|^2 targets for the Na2 presets: (homogeneous, averaged)
RATIO_TARGETS = {
    "na2_down": (2.5, 2.31e2),
    "na2_down:inverse": (0.4, 0.13),
    "na2_up": (2.7, 1.45e3),
    "na2_up:inverse": (0.37, 0.24),
}


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    target: float
    tol: float
    passed: bool

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name}: measured {self.measured:.6g}, target {self.target:.6g} (tol {self.tol:g})"


def _rel(name, measured, target, tol):
    ok = bool(np.isfinite(measured) and abs(measured - target) <= tol * abs(target))
    return CheckResult(name, float(measured), float(target), tol, ok)


def weak_fields(preset, omegas=(0.0, 0.0, 0.0, 0.0)):
    return FieldSet({j: Field(0.0, omegas[j - 1], preset.kv[j], "weak") for j in preset.kv})


def homogeneous_ratio(preset, omegas=(0.0, 0.0, 0.0, 0.0)):
    f = weak_fields(preset, omegas)
    c3 = fwm.perturbative_chi3(preset.scheme, f, 0.0, process=3)
    c4 = fwm.perturbative_chi3(preset.scheme, f, 0.0, process=4)
    return abs(c3 / c4) ** 2


def averaged_ratio(preset, grid=None, omegas=(0.0, 0.0, 0.0, 0.0)):
    grid = grid or VelocityGrid.reference()
    z, w = grid.points
    f = weak_fields(preset, omegas)
    c3 = np.dot(w, fwm.perturbative_chi3(preset.scheme, f, z, process=3))
    c4 = np.dot(w, fwm.perturbative_chi3(preset.scheme, f, z, process=4))
    return abs(c3 / c4) ** 2


def ratio_suite(grid=None):
    out = []
    for name, (hom, avg) in RATIO_TARGETS.items():
        p = load_preset(name)
        out.append(_rel(f"{name} homogeneous |chi3/chi4|^2", homogeneous_ratio(p), hom, 0.02))
        out.append(_rel(f"{name} averaged |<chi3>/<chi4>|^2", averaged_ratio(p, grid), avg, 0.10))
    return out


def raman_triples(preset, count=20, seed=0, span=np.sqrt(np.log(2))):
    """Detuning sets on the Raman locks ``Omega_j = k_j Omega_2 / k_2``.

    ``Omega_2`` is drawn uniformly within ``span * k2 vbar`` (the Doppler
    half width by default); ``Omega_4`` closes the loop.
    """
    rng = np.random.default_rng(seed)
    k = preset.kv
    out = []
    for o2 in rng.uniform(-span * k[2], span * k[2], count):
        o1, o3 = k[1] * o2 / k[2], k[3] * o2 / k[2]
        out.append((o1, o2, o3, o1 - o2 + o3))
    return out


def direct_averaged_chi4(preset, omegas=(0.0, 0.0, 0.0, 0.0), grid=None, populations=None):
    grid = grid or VelocityGrid.reference()
    z, w = grid.points
    f = weak_fields(preset, omegas)
    return complex(np.dot(w, fwm.perturbative_chi3(preset.scheme, f, z, process=4, populations=populations)))


def analytic_error(preset, omegas=(0.0, 0.0, 0.0, 0.0), grid=None):
    """Relative difference between the contour form and the direct average."""
    n = zero_field_populations(preset.scheme).n
    a = fwm.analytic_averaged_chi3(preset.scheme, weak_fields(preset, omegas), n["g"], n["n"])
    d = direct_averaged_chi4(preset, omegas, grid)
    return abs(a - d) / abs(d)


def cancellation_factor(preset, omegas=(0.0, 0.0, 0.0, 0.0), grid=None):
    """``|<chi4>|`` at the preset populations over its value with ``N_n = N_g``.

    ``N_n`` is lowered to ``N_g`` with ``N_l`` and ``N_m`` unchanged, which
    removes the excited-state difference and leaves only the residual terms.
    """
    n = dict(zero_field_populations(preset.scheme).n)
    base = direct_averaged_chi4(preset, omegas, grid)
    n["n"] = n["g"]
    return abs(base) / abs(direct_averaged_chi4(preset, omegas, grid, populations=n))


def gain_minimum(preset, grid=None):
    """Minimum of the averaged ``alpha4 / alpha04`` over the preset scan.

    Returns ``(min, scan value, averaged dr4 there)``.
    """
    tab = run_scan(preset, grid=grid)
    a = tab.column("alpha4")
    i = int(np.argmin(a))
    return float(a[i]), float(tab.rows[i, 0]), float(tab.column("dr4")[i])


def peak_detuning(preset, y1, start=-150.0, stop=150.0, points=61, grid=None, column="chi4"):
    """Scaled ``y3`` maximizing the averaged ``|chi|**2`` at fixed ``y1``.

    The preset's scan regime and locks are used; the coarse scan maximum is
    refined with a bounded scalar search.
    """
    grid = grid or preset.grid
    regime = preset.scan["regime"]
    scan = ScanSpec.from_preset(preset, variable="y3", start=start, stop=stop, points=points, fixed={"y1": y1})
    z, w = grid.points

    def value(y):
        f, _, _ = point_settings(preset, scan, y, regime)
        return abs(np.dot(w, _evaluate(preset, regime, f, z)[column])) ** 2

    ys = scan.values
    i = int(np.argmax([value(y) for y in ys]))
    lo, hi = ys[max(i - 1, 0)], ys[min(i + 1, points - 1)]
    res = minimize_scalar(lambda y: -value(y), bounds=(lo, hi), method="bounded", options={"xatol": 1e-4})
    return float(res.x)


def tuning_slope(preset, y1a, y1b, grid=None, **kw):
    """Secant ``dOmega3/dOmega1`` of the tuning curve between two ``y1`` values."""
    p3, p1 = preset.width(3), preset.width(1)
    ya, yb = (peak_detuning(preset, y, grid=grid, **kw) for y in (y1a, y1b))
    return (yb - ya) * p3 / ((y1b - y1a) * p1)


def random_two_field(rng, kind, topology):
    """A random scheme and strong-field configuration for oracle comparison."""
    levels = {"V": ("l", "m", "g"), "Lambda": ("l", "m", "n"), "H": ("l", "m", "f")}[kind]
    G = {lv: rng.uniform(1.0, 5.0) for lv in levels}
    if kind == "V":
        gamma = {("m", "l"): rng.uniform() * G["m"], ("g", "l"): rng.uniform() * G["g"]}
    elif kind == "Lambda":
        a, b = rng.dirichlet([1, 1, 1])[:2]
        gamma = {("m", "l"): a * G["m"], ("m", "n"): b * G["m"]}
    else:
        gamma = {("f", "m"): rng.uniform() * G["f"], ("m", "l"): rng.uniform() * G["m"]}
    pairs = [frozenset(p) for p in ((levels[0], levels[1]), (levels[0], levels[2]), (levels[1], levels[2]))]
    coherence = {p: rng.uniform(0.5, 5.0) for p in pairs}
    if topology == "open":
        pump = {lv: rng.uniform(0.0, 3.0) for lv in levels}
    else:
        G["l"] = rng.uniform(0.0, 2.0)
        gamma = {k: v for k, v in gamma.items() if k[1] != "l"}
        pump = {lv: rng.uniform(0.0, 1.0) for lv in levels[1:]}
    scheme = LevelScheme(kind, topology, G, gamma, pump, coherence)
    aux = two_field.aux_index(scheme)

    def strong():
        rabi = rng.uniform(0.1, 4.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        return Field(rabi, rng.uniform(-5, 5), rng.uniform(-3, 3), "strong")

    fields = FieldSet({4: strong(), aux: strong()})
    return scheme, fields, float(rng.normal())


def two_field_mismatch(scheme, fields, z):
    """Largest relative closed-form vs oracle difference (chi and populations)."""
    r = two_field.susceptibilities(scheme, fields, z)
    o = oracle.relax_to_steady_state(scheme, fields, z)
    aux = two_field.aux_index(scheme)
    errs = [abs(r.chi4_norm - o.chi[4]) / abs(o.chi[4]), abs(r.chii_norm - o.chi[aux]) / abs(o.chi[aux])]
    scale = max(abs(v) for v in o.populations.values())
    errs += [abs(r.populations.r[lv] - o.populations[lv]) / scale for lv in scheme.levels]
    return max(errs)


def random_raman(rng, topology):
    """A random double-Lambda scheme within the relaxation channels FWM covers."""
    G = {lv: rng.uniform(1.0, 5.0) for lv in "lgnm"}
    gamma = {(a, b): 0.3 * G[a] * rng.uniform() for a, b in (("g", "l"), ("g", "n"), ("m", "n"), ("m", "l"))}
    coherence = {frozenset(p): rng.uniform(0.5, 5.0) for p in ("lg", "ng", "nm", "lm", "ln", "gm")}
    if topology == "open":
        pump = {lv: rng.uniform(0.0, 3.0) for lv in "lgnm"}
    else:
        G["l"] = rng.uniform(0.0, 2.0)
        gamma = {k: v for k, v in gamma.items() if k[1] != "l"}
        pump = {lv: rng.uniform(0.0, 1.0) for lv in "gnm"}
    return LevelScheme("RamanFWM", topology, G, gamma, pump, coherence)


def _fieldset(omegas, ks, rabi):
    return FieldSet({
        j: Field(rabi.get(j, 0.0), omegas[j - 1], ks[j - 1], "strong" if rabi.get(j) else "weak")
        for j in (1, 2, 3, 4)
    })


def fwm_mismatch(scheme, regime, Ga, Gb, O, k, z):
    """Largest relative closed-form vs oracle difference for one FWM draw.

    The library sees the free detunings ``O``; the oracle needs each process
    multiphoton consistent, so the generated wave is locked per process.
    """
    c = np.conj
    O1, O2, O3, O4 = O
    k1, k2, k3, k4 = k
    if regime == "fwm_cpt":
        rabi = {1: Ga, 2: Gb}
        lib = fwm.fwm_cpt(scheme, _fieldset(O, k, rabi), z)
        F4 = _fieldset((O1, O2, O3, O1 - O2 + O3), (k1, k2, k3, k1 - k2 + k3), rabi)
        F3 = _fieldset((O1, O2, O4 - O1 + O2, O4), (k1, k2, k4 - k1 + k2, k4), rabi)
        ref = {
            4: oracle.weak_response(scheme, F4, z, 3, 4, conj=True)[0] / (c(Ga) * Gb),
            3: oracle.weak_response(scheme, F3, z, 4, 3, conj=True)[0] / (Ga * c(Gb)),
        }
    else:
        rabi = {1: Ga, 3: Gb}
        lib = fwm.fwm_two_strong(scheme, _fieldset(O, k, rabi), z)
        F4 = _fieldset((O1, O2, O3, O1 - O2 + O3), (k1, k2, k3, k1 - k2 + k3), rabi)
        F2 = _fieldset((O1, O1 + O3 - O4, O3, O4), (k1, k1 + k3 - k4, k3, k4), rabi)
        ref = {
            4: oracle.weak_response(scheme, F4, z, 2, 4)[0] / (c(Ga) * c(Gb)),
            2: oracle.weak_response(scheme, F2, z, 4, 2)[0] / (c(Ga) * c(Gb)),
        }
    o = oracle.relax_to_steady_state(scheme, F4, z)
    errs = [abs(lib.chi_t[j] - ref[j]) / abs(ref[j]) for j in ref]
    scale = max(abs(v) for v in o.populations.values())
    errs += [abs(lib.populations.r[lv] - o.populations[lv]) / scale for lv in "lgnm"]
    return max(errs)


def random_fwm_draw(rng, topology):
    scheme = random_raman(rng, topology)
    Ga, Gb = (rng.uniform(0.2, 6.0) * np.exp(1j * rng.uniform(0, 2 * np.pi)) for _ in range(2))
    return scheme, Ga, Gb, tuple(rng.uniform(-8, 8, 4)), tuple(rng.uniform(-3, 3, 4)), float(rng.normal())


def oracle_suite(draws=20, seed=0, tol=1e-5):
    rng = np.random.default_rng(seed)
    out = []
    for kind in ("V", "Lambda", "H"):
        for topology in ("open", "closed"):
            worst = max(two_field_mismatch(*random_two_field(rng, kind, topology)) for _ in range(draws))
            out.append(CheckResult(f"two_field {kind} {topology} oracle ({draws} draws)", worst, 0.0, tol, worst < tol))
    for regime in ("fwm_cpt", "fwm_two_strong"):
        for topology in ("open", "closed"):
            worst = 0.0
            for _ in range(draws):
                scheme, Ga, Gb, O, k, z = random_fwm_draw(rng, topology)
                worst = max(worst, fwm_mismatch(scheme, regime, Ga, Gb, O, k, z))
            out.append(CheckResult(f"{regime} {topology} oracle ({draws} draws)", worst, 0.0, tol, worst < tol))
    return out


SUITES = {"ratios": ratio_suite, "oracle": oracle_suite}
