import numpy as np
import pytest
from hypothesis import given, strategies as st

from nie import checks, load_preset, run_scan, two_field
from nie.core import Field, FieldSet, LevelScheme, zero_field_populations
from nie.errors import NoBracket, NormalizationUndefined, NotApplicable, UnsupportedScheme
from nie.scenarios import ScanSpec

KINDS = [(k, t) for k in ("V", "Lambda", "H") for t in ("open", "closed")]
seeds = st.integers(0, 2 ** 32 - 1)


def off_fields(scheme, omega4=0.7, k4=1.3):
    i = two_field.aux_index(scheme)
    return FieldSet({4: Field(0.0, omega4, k4, "weak"), i: Field(0.0, -0.4, 0.8, "weak")})


@pytest.mark.parametrize("kind, topology", KINDS)
def test_fields_off_is_lorentzian(kind, topology):
    scheme, _, _ = checks.random_two_field(np.random.default_rng(1), kind, topology)
    f = off_fields(scheme)
    z = np.linspace(-2, 2, 9)
    r = two_field.susceptibilities(scheme, f, z)
    W = scheme.transition_width(4)
    expected = W / (W + 1j * (0.7 - 1.3 * z))
    assert np.max(np.abs(r.chi4_norm - expected)) < 1e-12
    n = zero_field_populations(scheme).n
    a, b = scheme.transitions[4]
    assert np.allclose(r.dr4, n[a] - n[b], rtol=1e-12, atol=0)
    assert r.X[0] == pytest.approx(1.0) and r.X[2] == pytest.approx(0.0)


def test_coupling_factors_vanish():
    scheme, _, _ = checks.random_two_field(np.random.default_rng(2), "V", "open")
    f = two_field.coupling_factors(scheme, off_fields(scheme), 0.3)
    assert (f.g1, f.g2, f.u1, f.u2) == (0, 0, 0, 0)


def test_resonant_v_factor_real():
    scheme, _, _ = checks.random_two_field(np.random.default_rng(3), "V", "open")
    f = FieldSet({4: Field(0.0, 0.0, 1.0, "weak"), 1: Field(2.0, 0.0, 1.0, "strong")})
    c = two_field.coupling_factors(scheme, f, 0.0)
    expected = 4.0 / (scheme.transition_width(4) * scheme.width("m", "g"))
    assert c.g1.imag == 0 and c.g1.real == pytest.approx(expected, rel=1e-14)


def test_open_v_coefficients_explicit_form():
    s = LevelScheme("V", "open", {"l": 2.0, "m": 3.0, "g": 5.0}, {("m", "l"): 1.0, ("g", "l"): 4.0})
    f = FieldSet({4: Field(1.0, role="strong"), 1: Field(1.0, role="strong")})
    c = two_field.scheme_coefficients(s, f)
    assert c.a3i == pytest.approx((5.0 - 4.0) / (5.0 + 2.0 - 4.0))
    assert c.a44 == pytest.approx((3.0 - 1.0) / (2.0 + 3.0 - 1.0))
    assert c.kappa4 == pytest.approx(2 * (2 + 3 - 1) / (2 * 3 * s.transition_width(4)))


def test_closed_v_ground_only_coefficients():
    s = LevelScheme("V", "closed", {"l": 0.0, "m": 3.0, "g": 5.0})
    c = two_field.scheme_coefficients(s, FieldSet({4: Field(1.0, role="strong"), 1: Field(1.0, role="strong")}))
    assert (c.a3i, c.a44, c.a2i, c.a14) == (0.5, 0.5, 1.0, 1.0)


def test_raman_scheme_unsupported():
    with pytest.raises(UnsupportedScheme):
        two_field.aux_index(LevelScheme("RamanFWM", "open", {lv: 1.0 for lv in "lgnm"}))


@given(seed=seeds, kind=st.sampled_from(["V", "Lambda", "H"]), topology=st.sampled_from(["open", "closed"]))
def test_antisymmetry(seed, kind, topology):
    scheme, fields, _ = checks.random_two_field(np.random.default_rng(seed), kind, topology)
    t = two_field.scheme_coefficients(scheme, fields).table
    assert t["a14"] == -t["a34"] and t["a24"] == -t["a44"]
    assert t["a1i"] == -t["a3i"] and t["a2i"] == -t["a4i"]


@given(seed=seeds, kind=st.sampled_from(["V", "Lambda", "H"]))
def test_kappa_proportional_to_intensity(seed, kind):
    scheme, fields, _ = checks.random_two_field(np.random.default_rng(seed), kind, "open")
    i = two_field.aux_index(scheme)
    a = two_field.scheme_coefficients(scheme, fields)
    b = two_field.scheme_coefficients(scheme, fields.with_field(4, rabi=2 * fields.rabi(4)).with_field(i, rabi=3 * fields.rabi(i)))
    assert a.kappa4 >= 0 and a.kappa_i >= 0
    assert b.kappa4 == pytest.approx(4 * a.kappa4, rel=1e-12)
    assert b.kappa_i == pytest.approx(9 * a.kappa_i, rel=1e-12)


@given(seed=seeds, kind=st.sampled_from(["V", "Lambda", "H"]), topology=st.sampled_from(["open", "closed"]))
def test_two_photon_kill_switch(seed, kind, topology):
    scheme, fields, z = checks.random_two_field(np.random.default_rng(seed), kind, topology)
    pair = {"V": "mg", "Lambda": "ln", "H": "lf"}[kind]
    coh = dict(scheme.coherence)
    coh[frozenset(pair)] = scheme.width(*pair) * 1e6
    killed = scheme.replace(coherence=coh)
    f0 = two_field.coupling_factors(scheme, fields, z)
    f = two_field.coupling_factors(killed, fields, z)
    before = max(abs(f0.g1), abs(f0.g2), abs(f0.u1), abs(f0.u2))
    after = max(abs(f.g1), abs(f.g2), abs(f.u1), abs(f.u2))
    assert after == pytest.approx(before * abs(f0.P4i) / abs(f.P4i), rel=1e-9)
    # moderate couplings: |G|^2 / (|P| Gamma_4i) below 10 before the kill
    if before * abs(f0.P4i) < 10 * scheme.width(*pair):
        assert after < 1e-5
    r = two_field.susceptibilities(killed, fields, z)
    n = zero_field_populations(killed).n
    a, b = killed.transitions[4]
    pure = killed.transition_width(4) * r.dr4 / (f.P4 * (n[a] - n[b]))
    assert abs(r.chi4_norm - pure) <= 1e-4 * abs(pure)


def test_large_intermediate_detuning_limit():
    scheme, fields, _ = checks.random_two_field(np.random.default_rng(8), "V", "open")
    W = scheme.transition_width(1)
    f = fields.with_field(1, detuning=1e6 * W).with_field(4, detuning=0.3)
    r = two_field.susceptibilities(scheme, f, 0.0)
    n = zero_field_populations(scheme).n
    pure = scheme.transition_width(4) * r.dr4 / ((scheme.transition_width(4) + 0.3j) * (n["l"] - n["m"]))
    assert abs(r.chi4_norm - pure) < 1e-4 * abs(pure)


@given(seed=seeds, kind=st.sampled_from(["V", "Lambda", "H"]))
def test_closed_populations_sum_to_one(seed, kind):
    rng = np.random.default_rng(seed)
    scheme, fields, _ = checks.random_two_field(rng, kind, "closed")
    fields = fields.with_field(4, rabi=fields.rabi(4) * rng.uniform(0.1, 10))
    r = two_field.susceptibilities(scheme, fields, np.linspace(-3, 3, 31))
    total = sum(r.populations.r.values())
    assert np.max(np.abs(total - 1.0)) < 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_open_v_matches_oracle(seed):
    scheme, fields, z = checks.random_two_field(np.random.default_rng(100 + seed), "V", "open")
    assert checks.two_field_mismatch(scheme, fields, z) < 1e-8


@pytest.mark.parametrize("seed", range(5))
def test_closed_lambda_matches_oracle(seed):
    scheme, fields, z = checks.random_two_field(np.random.default_rng(200 + seed), "Lambda", "closed")
    assert checks.two_field_mismatch(scheme, fields, z) < 1e-8


def test_vectorized_matches_scalar():
    scheme, fields, _ = checks.random_two_field(np.random.default_rng(4), "H", "closed")
    z = np.array([-1.5, 0.0, 0.7])
    vec = two_field.susceptibilities(scheme, fields, z)
    for i, zi in enumerate(z):
        one = two_field.susceptibilities(scheme, fields, zi)
        assert one.chi4_norm == pytest.approx(vec.chi4_norm[i], rel=1e-13)
        assert one.dri == pytest.approx(vec.dri[i], rel=1e-13)


def test_normalization_undefined():
    s = LevelScheme("V", "open", {"l": 1.0, "m": 1.0, "g": 1.0}, {}, {"l": 1.0, "m": 1.0, "g": 0.5})
    f = FieldSet({4: Field(0.5, role="strong"), 1: Field(0.5, role="strong")})
    with pytest.raises(NormalizationUndefined):
        two_field.susceptibilities(s, f)
    raw = two_field.susceptibilities(s, f, normalized=False)
    assert np.isfinite(raw.chi4_norm)


# ---------------------------------------------------------------------------
# gain classification


def test_awi_without_auxiliary_field():
    s = load_preset("ne_v_open_fig2").scheme
    f = FieldSet({4: Field(1e7, 0.0, 0.0, "strong"), 1: Field(0.0, 0.0, 0.0, "weak")})
    r = two_field.susceptibilities(s, f)
    flags = two_field.awi_classify(r, two_field.coupling_factors(s, f), s)
    assert not flags["gain4"] and not flags["awi4"]
    # g2 = 0: the resonant condition reduces to plain inversion
    assert flags["condition4"] == (r.dr4 < 0)


def test_awi_h_not_applicable():
    scheme, fields, z = checks.random_two_field(np.random.default_rng(0), "H", "open")
    r = two_field.susceptibilities(scheme, fields, z)
    with pytest.raises(NotApplicable):
        two_field.awi_classify(r, two_field.coupling_factors(scheme, fields, z), scheme)


def test_na_fig3_gain_without_inversion():
    tab = run_scan(load_preset("na_closed_fig3"))
    a = tab.column("alpha4")
    i = int(np.argmin(a))
    assert a[i] < 0
    assert tab.column("dr4")[i] > 0


def test_resonant_condition_agrees_with_gain():
    p = load_preset("na_closed_fig3")
    f = FieldSet({1: Field(p.rabi_for(1, 10.0), 0.0, 0.0, "strong"), 4: Field(0.0, 0.0, 0.0, "weak")})
    r = two_field.susceptibilities(p.scheme, f)
    flags = two_field.awi_classify(r, two_field.coupling_factors(p.scheme, f), p.scheme)
    assert flags["gain4"] and flags["awi4"] and flags["condition4"]


# ---------------------------------------------------------------------------
# lasing threshold


def _fig4_gain(name):
    p = load_preset(name)

    def gain(S4):
        scan = ScanSpec.from_preset(p, start=S4, stop=S4, points=2)
        return -float(run_scan(p, scan).column("alpha4")[0])

    return p, gain


def test_lasing_point_decreases_with_loss():
    p, gain = _fig4_gain("na_closed_fig4")
    values = [two_field.lasing_operating_point(gain, T, (0.0, 40.0), points=16) for T in (0.05, 0.1, 0.2)]
    assert values[0] > values[1] > values[2] > 0
    # dense-scan crossing as the independent reference
    tab = run_scan(p, ScanSpec.from_preset(p, points=801))
    S, g = tab.rows[:, 0], -tab.column("alpha4")
    for T, s_star in zip((0.05, 0.1, 0.2), values):
        j = np.nonzero(g >= T)[0][-1]
        ref = S[j] + (g[j] - T) / (g[j] - g[j + 1]) * (S[j + 1] - S[j])
        assert s_star == pytest.approx(ref, rel=2e-3)


def test_lasing_no_bracket():
    _, gain = _fig4_gain("na_closed_fig4")
    with pytest.raises(NoBracket):
        two_field.lasing_operating_point(gain, 0.5, (0.0, 40.0), points=8)


def test_lasing_zero_loss_is_gain_boundary():
    def gain(S4):
        return 1.0 - S4 / 3.0

    assert two_field.lasing_operating_point(gain, 0.0, (0.0, 10.0)) == pytest.approx(3.0, rel=1e-6)
