import numpy as np
from hypothesis import given, settings, strategies as st

from nie import checks

seeds = st.integers(0, 2 ** 32 - 1)
TOL = 1e-5


@settings(max_examples=200)
@given(seed=seeds, kind=st.sampled_from(["V", "Lambda", "H"]), topology=st.sampled_from(["open", "closed"]))
def test_two_field_matches_density_matrix(seed, kind, topology):
    scheme, fields, z = checks.random_two_field(np.random.default_rng(seed), kind, topology)
    assert checks.two_field_mismatch(scheme, fields, z) < TOL


@settings(max_examples=100)
@given(seed=seeds, regime=st.sampled_from(["fwm_cpt", "fwm_two_strong"]),
       topology=st.sampled_from(["open", "closed"]))
def test_fwm_matches_density_matrix(seed, regime, topology):
    scheme, Ga, Gb, O, k, z = checks.random_fwm_draw(np.random.default_rng(seed), topology)
    assert checks.fwm_mismatch(scheme, regime, Ga, Gb, O, k, z) < TOL
