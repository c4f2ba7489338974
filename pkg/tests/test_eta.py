"""Eta of model spectra, checked against an independent zeta oracle,
plus the heat extrapolation and the dimension functional."""

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from etaforge.dyadic import DyadicRational
from etaforge.eta import (EtaConvergenceError, EtaResult, SpectrumModel,
                          UnsupportedSpectrumError, dimension_functional,
                          dump_spectrum_csv, eta_closed_form, eta_numeric,
                          eta_result_json, fractional_part,
                          mode_zero_crossing_family)
from etaforge.subspaces import (ParityError, hardy_subspace, orthocomplement,
                                puncture, trivial_subspace)


def hurwitz_eta_at_zero(theta):
    # eta(s) of {n + theta} is zeta(s, theta) - zeta(s, 1 - theta), and
    # the Hurwitz zeta continues to zeta(0, a) = 1/2 - a
    mp = pytest.importorskip("mpmath")
    with mp.workdps(40):
        return float(mp.zeta(0, theta) - mp.zeta(0, 1.0 - theta))


# ---------------------------------------------------------------- models


def test_explicit_list_sorted_by_magnitude():
    m = SpectrumModel.explicit_list([(3.0, 1), (-1.0, 2), (2.0, 1), (1.0, 1)])
    assert m.pairs == ((-1.0, 2), (1.0, 1), (2.0, 1), (3.0, 1))


def test_zero_eigenvalue_rejected():
    with pytest.raises(ValueError):
        SpectrumModel.explicit_list([(0.0, 1)])


def test_from_eigenvalues_splits_kernel():
    m = SpectrumModel.from_eigenvalues([2.0, -2.0, 1e-14, 3e-13])
    assert m.kernel_dim == 2
    assert m.pairs == ((-2.0, 1), (2.0, 1))


def test_lattice_cutoff_floor():
    with pytest.raises(ValueError):
        SpectrumModel.lattice3_quadratic(cutoff=5)


def test_lattice_multiplicity_split():
    m = SpectrumModel.lattice3_quadratic()
    assert m.kernel_dim == 3
    # |k|^2 = 1 occurs for 6 lattice vectors: weight 6 upstairs, 12 down
    ones = [(l, mu) for l, mu in m.pairs if abs(l) == 1.0]
    up = sum(mu for l, mu in ones if l > 0)
    down = sum(mu for l, mu in ones if l < 0)
    assert (up, down) == (6, 12)


def test_ap_integer_theta_has_kernel():
    m = SpectrumModel.arithmetic_progression(0.0, mult=2)
    assert m.kernel_dim == 2
    assert all(l != 0.0 for l, _ in m.pairs)


# ----------------------------------------------------------- closed form


@pytest.mark.parametrize("theta,expected", [
    (0.1, 0.8),
    (0.25, 0.5),
    (0.5, 0.0),
    (0.9, -0.8),
])
def test_ap_closed_form_frozen(theta, expected):
    r = eta_closed_form(SpectrumModel.arithmetic_progression(theta))
    assert r.method == "ClosedForm"
    assert r.error_estimate == 0.0
    assert r.value == pytest.approx(expected, abs=1e-12)
    assert r.value == pytest.approx(hurwitz_eta_at_zero(theta), abs=1e-12)


def test_ap_closed_form_integer_theta_counts_kernel():
    r = eta_closed_form(SpectrumModel.arithmetic_progression(3.0, mult=2))
    assert r.value == 2.0
    assert r.kernel_dim == 2


def test_ap_closed_form_reduces_theta_mod_one():
    a = eta_closed_form(SpectrumModel.arithmetic_progression(0.3))
    b = eta_closed_form(SpectrumModel.arithmetic_progression(7.3))
    assert a.value == pytest.approx(b.value, abs=1e-12)


def test_lattice_closed_form_untwisted():
    r = eta_closed_form(SpectrumModel.lattice3_quadratic())
    assert r.value == 4.0
    assert r.kernel_dim == 3


def test_lattice_closed_form_twisted():
    r = eta_closed_form(SpectrumModel.lattice3_quadratic((0.5, 0.5, 0.5)))
    assert r.value == 0.0
    assert r.kernel_dim == 0


def test_no_closed_form_for_explicit_lists():
    with pytest.raises(UnsupportedSpectrumError):
        eta_closed_form(SpectrumModel.explicit_list([(1.0, 1)]))


@given(st.floats(min_value=0.01, max_value=0.99))
def test_ap_closed_form_is_one_minus_two_theta(theta):
    r = eta_closed_form(SpectrumModel.arithmetic_progression(theta))
    assert r.value == pytest.approx(1.0 - 2.0 * theta, abs=1e-12)


# -------------------------------------------------------------- numerics


@pytest.mark.parametrize("theta", [0.1, 0.25, 0.5, 0.9])
def test_ap_numeric_matches_closed_form(theta):
    m = SpectrumModel.arithmetic_progression(theta)
    num = eta_numeric(m)
    assert num.method == "HeatExtrapolated"
    assert num.error_estimate > 0.0
    assert abs(num.value - eta_closed_form(m).value) < 1e-6


def test_lattice_numeric_matches_closed_form():
    for theta in [(0.0, 0.0, 0.0), (0.5, 0.5, 0.5)]:
        m = SpectrumModel.lattice3_quadratic(theta)
        num, exact = eta_numeric(m), eta_closed_form(m)
        assert abs(num.value - exact.value) < 1e-2
        assert num.kernel_dim == exact.kernel_dim


def test_single_magnitude_spectrum():
    # one-magnitude spectra used to degenerate the t-grid; eta is just
    # the signed multiplicity count
    r = eta_numeric(SpectrumModel.explicit_list([(1.0, 3)]))
    assert abs(r.value - 3.0) < 1e-3


def test_narrow_two_level_spectrum():
    r = eta_numeric(SpectrumModel.explicit_list([(1.0, 1), (-2.0, 1)]))
    assert abs(r.value) < 1e-2


def test_kernel_only_spectrum():
    r = eta_numeric(SpectrumModel.explicit_list([], kernel_dim=2))
    assert r.value == 2.0
    assert r.kernel_dim == 2


@given(st.lists(st.tuples(st.floats(min_value=0.5, max_value=50.0),
                          st.integers(min_value=1, max_value=4)),
                min_size=1, max_size=6),
       st.integers(min_value=0, max_value=3))
@settings(max_examples=40, deadline=None)
def test_symmetric_spectrum_eta_is_kernel(pos, kernel):
    # sign-symmetric spectra cancel exactly, leaving the kernel term
    pairs = [(l, m) for l, m in pos] + [(-l, m) for l, m in pos]
    r = eta_numeric(SpectrumModel.explicit_list(pairs, kernel))
    assert abs(r.value - kernel) < 1e-3


def test_convergence_guard_fires_on_wrong_expansion():
    # data that does not follow the claimed small-t power law leaves the
    # extrapolants scattered, and the plateau test must refuse
    m = SpectrumModel("Lattice3Quadratic",
                      [(0.9, 80), (-1.1, 80), (1.3, 80), (-1.7, 80)],
                      0, {"theta": (0.0, 0.0, 0.0), "cutoff": 10})
    with pytest.raises(EtaConvergenceError):
        eta_numeric(m)


# -------------------------------------------------------- crossing family


def test_crossing_family_values_and_jump():
    fam = mode_zero_crossing_family()
    etas = []
    for c, model in fam:
        r = eta_numeric(model)
        v = r.value
        if abs(v - round(v)) < 1e-6:
            v = float(round(v))
        etas.append((c, v))
    for c, v in etas:
        assert v == (1.0 if c < 0.5 else -1.0)
    jumps = [abs(b - a) for (_, a), (_, b) in zip(etas, etas[1:])]
    assert max(jumps) == 2.0
    assert sum(j > 0 for j in jumps) == 1


def test_crossing_family_on_the_wall():
    (c, model), = mode_zero_crossing_family(c_values=[0.5])
    assert model.kernel_dim == 1
    r = eta_numeric(model)
    # symmetric bulk cancels; the zero mode contributes through the kernel
    assert abs(r.value - 1.0) < 1e-6


# ------------------------------------------------------------- EtaResult


def test_result_method_gates():
    with pytest.raises(ValueError):
        EtaResult(1.0, "Guess", 0.0, 0)
    with pytest.raises(ValueError):
        EtaResult(1.0, "ClosedForm", 1e-3, 0)
    with pytest.raises(ValueError):
        EtaResult(1.0, "HeatExtrapolated", 0.0, 0)


def test_result_json_key_order():
    r = EtaResult(0.5, "HeatExtrapolated", 1e-9, 1)
    s = eta_result_json(r)
    assert list(json.loads(s)) == ["value", "method", "error_estimate",
                                   "kernel_dim"]
    assert json.loads(s)["kernel_dim"] == 1


def test_spectrum_csv_roundtrip(tmp_path):
    m = SpectrumModel.explicit_list([(1.5, 2), (-0.5, 1)], kernel_dim=1)
    path = dump_spectrum_csv(m, tmp_path / "spec.csv")
    lines = open(path).read().splitlines()
    assert lines[0] == "eigenvalue,multiplicity"
    assert lines[1] == "0.0,1"
    got = [(float(a), int(b)) for a, b in
           (ln.split(",") for ln in lines[2:])]
    assert tuple(got) == m.pairs


# -------------------------------------------------- dimension functional


def test_dimension_functional_punctured_plane():
    L = puncture(trivial_subspace(2, 1))
    d = dimension_functional(L)
    assert d == DyadicRational(-1, 0)


def test_dimension_functional_complement_axiom():
    L = puncture(trivial_subspace(2, 1))
    d, dperp = dimension_functional(L), dimension_functional(orthocomplement(L))
    assert d + dperp == DyadicRational.from_integer(0)
    assert dperp == DyadicRational(1, 0)


def test_dimension_functional_needs_even_parity():
    with pytest.raises(ParityError):
        dimension_functional(hardy_subspace())


def test_fractional_part_of_dyadic():
    assert str(fractional_part(DyadicRational(-3, 1))) == "1/2"
    assert str(fractional_part(DyadicRational(4, 1))) == "0"
