import numpy as np
import pytest

from nie import checks, oracle, two_field
from nie.core import Field, FieldSet, LevelScheme, zero_field_populations
from nie.errors import NoConvergence
from nie.scenarios import ScanSpec, load_preset, point_settings


def off_fields(kind):
    js = {"V": (1, 4), "Lambda": (3, 4), "H": (2, 4), "RamanFWM": (1, 2, 3, 4)}[kind]
    return FieldSet({j: Field(0.0, 0.0, 1.0, "weak") for j in js})


@pytest.mark.parametrize("kind", ["V", "Lambda", "H"])
@pytest.mark.parametrize("topology", ["open", "closed"])
def test_linear_and_time_routes_agree(kind, topology):
    rng = np.random.default_rng(5)
    for _ in range(3):
        s, f, z = checks.random_two_field(rng, kind, topology)
        a = oracle.relax_to_steady_state(s, f, z, method="linear")
        b = oracle.relax_to_steady_state(s, f, z, tol=1e-12, method="time")
        assert np.max(np.abs(a.rho - b.rho)) < 1e-8 * np.max(np.abs(a.rho))


def test_weak_response_richardson():
    rng = np.random.default_rng(8)
    s, f, z = checks.random_two_field(rng, "V", "open")
    f = f.with_field(4, rabi=0.0, role="weak")
    coef, rich = oracle.weak_response(s, f, z, 4, 4, conj=True)
    assert rich < 1e-4
    # the coherence responds to the conjugate amplitude only
    assert abs(oracle.weak_response(s, f, z, 4, 4)[0]) < 1e-12 * abs(coef)


@pytest.mark.parametrize("kind", ["V", "Lambda", "H", "RamanFWM"])
def test_fields_off_is_zero_field(kind):
    levels = {"V": "lmg", "Lambda": "lmn", "H": "lmf", "RamanFWM": "lgnm"}[kind]
    rng = np.random.default_rng(len(kind))
    s = LevelScheme(kind, "open", {lv: rng.uniform(1, 3) for lv in levels}, {},
                    {lv: rng.uniform(0, 2) for lv in levels})
    o = oracle.relax_to_steady_state(s, off_fields(kind), 0.3)
    n = zero_field_populations(s).n
    for lv in levels:
        assert o.populations[lv] == pytest.approx(n[lv], rel=1e-12)
    assert np.max(np.abs(o.rho - np.diag(np.diag(o.rho)))) == 0


@pytest.mark.parametrize("G2", [0.1, 0.75, 3.0])
def test_two_level_saturation(G2):
    # closed two-level limit: difference 1 / (1 + 4|G|^2 / (Gamma W))
    Gm, W = 2.0, 1.5
    s = LevelScheme("V", "closed", {"l": 0.0, "m": Gm, "g": 1.0}, {}, {}, {frozenset("lm"): W})
    f = FieldSet({4: Field(np.sqrt(G2), 0.0, 1.0, "strong"), 1: Field(0.0, 0.0, 1.0, "weak")})
    o = oracle.relax_to_steady_state(s, f, 0.0)
    assert o.r("l") - o.r("m") == pytest.approx(1 / (1 + 4 * G2 / (Gm * W)), rel=1e-12)


def test_two_level_halving():
    s = LevelScheme("V", "closed", {"l": 0.0, "m": 2.0, "g": 1.0}, {}, {}, {frozenset("lm"): 1.5})
    f = FieldSet({4: Field(np.sqrt(0.75), 0.0, 1.0, "strong"), 1: Field(0.0, 0.0, 1.0, "weak")})
    o = oracle.relax_to_steady_state(s, f, 0.0)
    assert o.r("l") - o.r("m") == pytest.approx(0.5, rel=1e-12)


@pytest.mark.parametrize("x", [-30.0, 0.0, 12.5])
@pytest.mark.parametrize("z", [-1.2, 0.0, 0.4])
def test_ne_preset_matches_closed_form(x, z):
    p = load_preset("ne_v_open_fig2")
    scan = ScanSpec.from_preset(p, fixed={"S1": 5.0, "S4": 0.3})
    fields, _, _ = point_settings(p, scan, x, "two_field")
    mismatch = checks.two_field_mismatch(p.scheme, fields, z)
    assert mismatch < 1e-6


def test_hermiticity_and_trace():
    rng = np.random.default_rng(13)
    for _ in range(10):
        s, f, z = checks.random_two_field(rng, "Lambda", "closed")
        o = oracle.relax_to_steady_state(s, f, z)
        assert o.hermiticity < 1e-12
        assert np.trace(o.rho).real == pytest.approx(1.0, abs=1e-12)


def test_time_route_reports_hermiticity():
    s, f, z = checks.random_two_field(np.random.default_rng(2), "H", "open")
    _, res, herm = oracle.steady_state_time(s, f, z, tol=1e-12)
    assert res < 1e-12 and herm < 1e-10


def test_inconsistent_loop_rejected():
    s = load_preset("na2_down").scheme
    f = FieldSet({j: Field(0.1, 0.0, 1.0, "strong") for j in (1, 2, 3)} | {4: Field(0.1, 5.0, 1.0, "strong")})
    with pytest.raises(ValueError, match="multiphoton"):
        oracle.relax_to_steady_state(s, f, 0.0)


def test_unknown_method():
    s, f, z = checks.random_two_field(np.random.default_rng(0), "V", "open")
    with pytest.raises(ValueError):
        oracle.relax_to_steady_state(s, f, z, method="euler")


def test_no_convergence_reported():
    s, f, z = checks.random_two_field(np.random.default_rng(0), "V", "open")
    with pytest.raises(NoConvergence):
        oracle.steady_state_time(s, f, z, max_doublings=1)


def test_oracle_does_not_use_closed_forms():
    # sanity: the two routes share only the scheme description
    import ast

    import nie.oracle as mod
    tree = ast.parse(open(mod.__file__).read())
    imported = {a.name for n in ast.walk(tree) if isinstance(n, ast.ImportFrom) for a in n.names}
    imported |= {n.module or "" for n in ast.walk(tree) if isinstance(n, ast.ImportFrom)}
    assert not imported & {"two_field", "fwm", "doppler", "scenarios"}
    assert two_field.aux_index(load_preset("ne_v_open_fig2").scheme) == 1
