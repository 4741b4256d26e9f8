import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_mixture, random_state
from mcentropy.errors import InvalidInputError, InvalidStateError, NoTemperatureError
from mcentropy.thermo import (
    ConstantCv,
    LinearCv,
    MixtureSpec,
    SpeciesSpec,
    conservative_from_primitive,
    primitive_from_conservative,
    specific_entropy,
    thermo_eval,
)


def test_single_species_reference(mix1, Z1):
    th = thermo_eval(Z1, mix1)
    assert th.p == pytest.approx(1.0)
    assert th.s == pytest.approx(0.0, abs=1e-15)
    assert th.gamma == pytest.approx(1.4)
    assert th.sound_speed == pytest.approx(math.sqrt(1.4))


def test_two_species_reference(mix2, Z2):
    th = thermo_eval(Z2, mix2)
    assert th.p == pytest.approx(0.75)
    assert th.c_v == pytest.approx(2.25)
    np.testing.assert_allclose(th.s_k, [math.log(2), 0.5 * math.log(2)], rtol=1e-14)
    assert th.rho * th.s == pytest.approx(0.519860, abs=1e-6)
    # rho s = 0.5 ln 2 + 0.5 * 0.5 ln 2
    assert th.rho * th.s == pytest.approx(0.75 * math.log(2), rel=1e-14)


def test_thermo_independent_of_velocity(mix2, Z2):
    a = thermo_eval(Z2, mix2)
    b = thermo_eval(Z2 + np.array([0, 0, 3.7, 0]), mix2)
    for name in ("p", "rho", "e", "s", "c_v", "c_p", "gamma", "sound_speed"):
        assert getattr(a, name) == getattr(b, name)
    np.testing.assert_array_equal(a.g_k, b.g_k)


def test_conservative_reference(mix1, Z1, mix2, Z2):
    np.testing.assert_allclose(conservative_from_primitive(Z1, mix1), [1.0, 0.0, 2.5])
    np.testing.assert_allclose(conservative_from_primitive(Z2, mix2), [0.5, 0.5, 0.0, 2.25])


def test_primitive_reference(mix1):
    np.testing.assert_allclose(primitive_from_conservative(np.array([1.0, 0.0, 2.5]), mix1),
                               [1.0, 0.0, 1.0])


def test_linear_heat_capacity_temperature():
    mix = MixtureSpec((SpeciesSpec("L", r=1.0, cv_model=LinearCv(1.0, 0.5)),))
    Z = primitive_from_conservative(np.array([1.0, 0.0, 3.0]), mix)
    assert Z[-1] == pytest.approx(2.0, rel=1e-13)


def test_negative_internal_energy(mix1):
    with pytest.raises(NoTemperatureError):
        primitive_from_conservative(np.array([1.0, 0.0, -1.0]), mix1)


def test_nonpositive_density_rejected(mix2):
    with pytest.raises(InvalidStateError) as info:
        thermo_eval(np.array([0.5, 0.0, 0.0, 1.0]), mix2)
    assert info.value.field == "rho_k"


def test_duplicate_species_rejected():
    with pytest.raises(InvalidInputError):
        MixtureSpec((SpeciesSpec("A", 1.0, ConstantCv(2.5)), SpeciesSpec("A", 0.5, ConstantCv(2.0))))


def test_nonpositive_cv_rejected():
    with pytest.raises(InvalidInputError):
        ConstantCv(0.0)
    with pytest.raises(InvalidInputError):
        MixtureSpec((SpeciesSpec("L", 1.0, LinearCv(1.0, -1.0)),), T_max=10.0)


def test_round_trip_batch(rng):
    for n in (1, 2, 3):
        for linear in (False, True):
            mix = random_mixture(rng, n, linear=linear)
            Z = np.array([random_state(rng, n) for _ in range(1000)])
            back = primitive_from_conservative(conservative_from_primitive(Z, mix), mix)
            np.testing.assert_allclose(back, Z, rtol=1e-12, atol=1e-14)


@st.composite
def mixtures_and_states(draw):
    n = draw(st.integers(1, 3))
    pos = st.floats(0.1, 3.0)
    species = []
    for k in range(n):
        if draw(st.booleans()):
            cv = LinearCv(draw(pos), draw(st.floats(0.0, 0.5)))
        else:
            cv = ConstantCv(draw(pos))
        species.append(SpeciesSpec(f"S{k}", r=draw(pos), cv_model=cv,
                                   e0=draw(st.floats(-1.0, 1.0))))
    mix = MixtureSpec(tuple(species))
    Z = np.array([draw(st.floats(1e-3, 10.0)) for _ in range(n)]
                 + [draw(st.floats(-5.0, 5.0)), draw(st.floats(0.05, 20.0))])
    return mix, Z


@settings(max_examples=300, deadline=None)
@given(mixtures_and_states())
def test_round_trip_property(case):
    mix, Z = case
    back = primitive_from_conservative(conservative_from_primitive(Z, mix), mix)
    np.testing.assert_allclose(back, Z, rtol=1e-12, atol=1e-14)


@settings(max_examples=200, deadline=None)
@given(mixtures_and_states())
def test_cp_minus_cv(case):
    mix, Z = case
    th = thermo_eval(Z, mix)
    assert th.c_p - th.c_v == pytest.approx(float((th.Y_k * mix.r).sum()), rel=1e-14)


def _gibbs_residual(mix, Z, dZ, h):
    a = thermo_eval(Z, mix)
    b = thermo_eval(Z + h * dZ, mix)
    T = Z[-1]
    rhs = (b.e - a.e) - a.p / a.rho**2 * (b.rho - a.rho) - (a.g_k * (b.Y_k - a.Y_k)).sum()
    return T * (b.s - a.s) - rhs


def test_gibbs_relation_second_order(rng):
    for n in (1, 2, 3):
        mix = random_mixture(rng, n, linear=True)
        for _ in range(10):
            Z = random_state(rng, n)
            dZ = rng.normal(size=n + 2) * np.concatenate([Z[:n], [1.0, Z[-1]]])
            r1 = abs(_gibbs_residual(mix, Z, dZ, 1e-3))
            r2 = abs(_gibbs_residual(mix, Z, dZ, 5e-4))
            assert r1 < 1e-4
            # halving h must cut the residual by about 4
            assert 3.5 < r1 / r2 < 4.5


def test_permutation_invariance(rng):
    for _ in range(20):
        mix = random_mixture(rng, 3, linear=True)
        perm = rng.permutation(3)
        pmix = MixtureSpec(tuple(mix.species[i] for i in perm))
        Z = random_state(rng, 3)
        PZ = np.concatenate([Z[:3][perm], Z[3:]])
        a, b = thermo_eval(Z, mix), thermo_eval(PZ, pmix)
        for name in ("p", "s", "c_v", "gamma", "sound_speed"):
            assert getattr(a, name) == pytest.approx(getattr(b, name), rel=1e-13)
        np.testing.assert_allclose(a.s_k[perm], b.s_k, rtol=1e-14)
        U = conservative_from_primitive(Z, mix)
        PU = conservative_from_primitive(PZ, pmix)
        assert primitive_from_conservative(U, mix)[-1] == pytest.approx(
            primitive_from_conservative(PU, pmix)[-1], rel=1e-13)


def test_specific_entropy_matches_thermo(mix2, Z2):
    U = conservative_from_primitive(Z2, mix2)
    assert specific_entropy(U, mix2) == pytest.approx(thermo_eval(Z2, mix2).s, rel=1e-14)


def test_entropy_reference_anchor():
    sp = SpeciesSpec("A", r=1.0, cv_model=ConstantCv(2.5), s_ref=0.3, T_ref=2.0)
    mix = MixtureSpec((sp,))
    th = thermo_eval(np.array([1.0, 0.0, 2.0]), mix)
    assert th.s == pytest.approx(0.3, rel=1e-14)


def test_mixture_arrays_read_only(mix2):
    with pytest.raises(ValueError):
        mix2.r[0] = 3.0
