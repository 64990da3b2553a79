import dataclasses

import pytest
from hypothesis import given
from hypothesis import strategies as st

import casfluct as cf
from casfluct.units import convert, dimension_of, si_factor


def test_microdyne_definition():
    assert convert(1.0, "udyne", "N") == 1e-11


def test_micrometer_definition():
    assert convert(1.0, "um", "m") == 1e-6


def test_background_strength_unit():
    # 215 udyne*um in SI
    assert convert(215.0, "udyne*um", "N*m") == pytest.approx(2.15e-15, rel=1e-12)


def test_force_gradient_and_curvature_units():
    assert convert(1.0, "udyne/um", "N/m") == pytest.approx(1e-5, rel=1e-12)
    assert convert(1.0, "udyne/um^2", "N/m^2") == pytest.approx(10.0, rel=1e-12)


def test_dimension_mismatch_names_both_units():
    with pytest.raises(cf.UnitError) as err:
        convert(1.0, "um", "udyne")
    assert "um" in str(err.value) and "udyne" in str(err.value)


def test_unknown_unit_rejected():
    with pytest.raises(cf.UnitError):
        convert(1.0, "furlong", "m")


_LENGTHS = ["m", "cm", "um", "nm"]


@given(
    value=st.floats(min_value=1e-12, max_value=1e12, allow_nan=False),
    u1=st.sampled_from(_LENGTHS),
    u2=st.sampled_from(_LENGTHS),
    u3=st.sampled_from(_LENGTHS),
)
def test_roundtrip_within_one_ulp(value, u1, u2, u3):
    direct = convert(value, u1, u3)
    chained = convert(convert(value, u1, u2), u2, u3)
    assert chained == pytest.approx(direct, rel=4e-16)


def test_constants_codata_2018():
    c = cf.CONSTANTS
    assert c.hbar == 1.054571817e-34
    assert c.c == 299792458.0
    assert c.k_B == 1.380649e-23
    assert c.hbar_c == pytest.approx(1.054571817e-34 * 299792458.0, rel=0)


def test_constants_immutable():
    with pytest.raises(dataclasses.FrozenInstanceError):
        cf.CONSTANTS.hbar = 1.0


def test_geometry_defaults_and_validation():
    g = cf.ExperimentGeometry()
    assert g.sphere_radius == pytest.approx(0.124)
    assert g.temperature == 300.0
    with pytest.raises(ValueError):
        cf.ExperimentGeometry(sphere_radius=0.0)
    with pytest.raises(ValueError):
        cf.ExperimentGeometry(temperature=-1.0)


def test_si_factor_and_dimension():
    assert si_factor("udyne") == 1e-11
    assert dimension_of("eV") == "energy"
    assert convert(1.0, "eV", "J") == pytest.approx(1.602176634e-19, rel=0)
