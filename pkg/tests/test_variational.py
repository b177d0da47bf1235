"""Families, paths, spectra and affine time changes."""

import math

import pytest
from hypothesis import given, strategies as st

from wkbgalois.errors import DomainError, SingularCoefficient
from wkbgalois.variational import (
    Bessel,
    Constant,
    Hermite,
    Lame,
    Legendre,
    PathSpec,
    admissible_energies,
    coefficient,
    family_params,
    level_for_path,
    make_family,
    path_energy,
    principal_index,
    reduced_parameters,
    time_rescale,
)

LAME = dict(a=2.0, b=1.0, g2=28.0, g3=-24.0)


def test_path_energy_examples():
    assert path_energy(PathSpec(0.0, 2.0, 2.0)) == 0.5
    assert path_energy(PathSpec(0.0, 3.0, 1.0)) == 4.5


@given(st.floats(0.01, 100.0), st.floats(-10, 10))
def test_unit_velocity_paths_have_half_energy(t1, x0):
    p = PathSpec(x0, x0 + t1, t1)
    assert path_energy(p) == pytest.approx(0.5, rel=1e-12)


@given(st.floats(0.01, 10.0), st.floats(-5, 5), st.floats(0.1, 5), st.sampled_from([1, -1]))
def test_from_energy_round_trip(E, x0, t1, direction):
    p = PathSpec.from_energy(E, x0, t1, direction)
    assert p.energy == pytest.approx(E, rel=1e-12)
    assert math.copysign(1, p.velocity) == direction
    assert p.position(t1) == pytest.approx(p.x1, abs=1e-12)


def test_path_validation():
    with pytest.raises(DomainError):
        PathSpec(0.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        PathSpec(1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        PathSpec(0.0, math.nan, 1.0)


def test_coefficient_examples():
    assert coefficient(Hermite(1.0), 0.5, 0.0, 0.0) == 1.0
    assert coefficient(Legendre(2.0), 0.5, 400.0, 0.0) == 0.0
    assert coefficient(Lame(**LAME), 0.5, 0.0, 0.0) == 5.0
    assert coefficient(Constant(3.0), 0.5, 1.0, 2.0) == 3.0
    assert coefficient(Bessel(2.0, 1.0), 0.5, 1.0, 1.0) == pytest.approx(1.0 - 2.0 / 4.0)


def test_bessel_singularity():
    with pytest.raises(SingularCoefficient):
        Bessel(2.0).two_f(0.0)
    with pytest.raises(SingularCoefficient):
        coefficient(Bessel(2.0), 0.5, -1.0, 1.0)


def test_family_validation():
    for bad in (lambda: Hermite(0.0), lambda: Bessel(0.0), lambda: Legendre(0.0, 1.0),
                lambda: Lame(0.0, 1.0, 28.0, -24.0), lambda: Lame(1.0, 1.0, 3.0, 1.0)):
        with pytest.raises(DomainError):
            bad()


def test_make_family_round_trip():
    for fam in (Constant(2.0), Hermite(1.0), Bessel(2.0, 0.5), Legendre(6.0, 0.0), Lame(**LAME)):
        assert make_family(fam.name, **family_params(fam)) == fam
    with pytest.raises(DomainError):
        make_family("airy", a=1)
    assert make_family("lame", a=1, g2=28, g3=-24).b == 0.0
    with pytest.raises(DomainError):
        make_family("lame", a=1, g2=28)


def test_admissible_energies_examples():
    lv = admissible_energies(Hermite(1.0), 2)
    assert [x.E for x in lv] == [0.5, 1.0 / 18.0]
    assert [x.index for x in lv] == [0, 1]
    assert [x.E for x in admissible_energies(Bessel(2.0), 1)] == [0.5]
    lame = admissible_energies(Lame(**LAME), 1)
    assert lame[0].E == 0.5 and lame[0].reduced["B"] == 1.0


def test_admissible_energies_edge_cases():
    with pytest.raises(DomainError, match="every E"):
        admissible_energies(Constant(1.0), 3)
    assert admissible_energies(Hermite(-1.0), 3) == []
    assert admissible_energies(Bessel(-2.0, 1.0), 3) == []


@pytest.mark.parametrize("fam", [Hermite(0.7), Bessel(3.0, 2.0), Legendre(5.0, 0.0), Lame(**LAME)])
def test_spectrum_decreasing_and_reduced_relations(fam):
    levels = admissible_energies(fam, 8)
    assert all(x.E > y.E for x, y in zip(levels, levels[1:]))
    for lv in levels:
        red = reduced_parameters(fam, lv.E)
        if isinstance(fam, Hermite):
            assert red["lambda"] == pytest.approx(2 * lv.index + 1, rel=1e-12)
        else:
            idx = red["n"] if isinstance(fam, Lame) else red["nu"]
            assert idx == pytest.approx(lv.index, rel=1e-12)
            assert idx * (idx + 1) == pytest.approx(fam.a / (2 * lv.E), rel=1e-12)


@given(st.floats(-0.25, 100.0))
def test_principal_index(q):
    nu = principal_index(q)
    assert nu >= -0.5
    assert nu * (nu + 1) == pytest.approx(q, abs=1e-12 * max(1.0, abs(q)))


def test_principal_index_complex_below_quarter():
    nu = principal_index(-1.0)
    assert isinstance(nu, complex) and nu.real == -0.5
    assert nu * (nu + 1) == pytest.approx(-1.0)


def test_time_rescale_examples():
    for m in range(4):
        E = 1.0 / (2 * (2 * m + 1) ** 2)
        fam = Hermite(1.0)
        lv = level_for_path(fam, PathSpec.from_energy(E, 0.0, 1.0))
        s = time_rescale(fam, lv, 0.0)
        assert s.offset == 0.0
        assert s(1.0) == pytest.approx(1.0 / math.sqrt(2 * m + 1), rel=1e-14)
    lv = admissible_energies(Bessel(2.0), 1)[0]
    tau = time_rescale(Bessel(2.0), lv, 1.5)
    assert tau(2.0) == pytest.approx(math.sqrt(2 * lv.E) * 2.0 + 1.5)
    lame = Lame(**LAME)
    tau = time_rescale(lame, admissible_energies(lame, 1)[0], 0.0)
    assert tau.imag_offset == lame.ed.omega3_im and tau(1.0) == 1.0
    with pytest.raises(DomainError):
        time_rescale(Constant(1.0), lv, 0.0)


def test_level_for_path_labels():
    assert level_for_path(Hermite(1.0), PathSpec.from_energy(1 / 18, 0.0, 1.0)).index == 1
    assert level_for_path(Hermite(1.0), PathSpec.from_energy(0.3, 0.0, 1.0)).index is None
    assert level_for_path(Bessel(12.0, 1.0), PathSpec.from_energy(1.0, 1.0, 1.0)).index == 2
