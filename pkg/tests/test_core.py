import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import profile
from mfn_hrrp.core import (CoiMask, Dataset, DatasetFormatError, MfnComponents,
                           RangeProfile, first_run_length, load_dataset, save_dataset)
from mfn_hrrp.synth import SceneParams, make_ship, render_fleet


def small_dataset(n=2, s=16):
    rng = np.random.default_rng(0)
    return Dataset([profile(rng.exponential(1.0, s), aspect=10.0 * i, ship_id=f"v{i}")
                    for i in range(n)])


def test_round_trip_two_rows(tmp_path):
    ds = small_dataset()
    save_dataset(ds, tmp_path / "ds.csv")
    back = load_dataset(tmp_path / "ds.csv")
    assert len(back) == 2 and back.s == 16
    assert back == ds


def test_one_profile_file_has_header_and_one_row(tmp_path):
    save_dataset(small_dataset(1, 4), tmp_path / "one.csv")
    lines = (tmp_path / "one.csv").read_text().splitlines()
    assert lines[0] == "ship_id,aspect_deg,delta_r_m,ship_length_m,ship_width_m,c0,c1,c2,c3"
    assert len(lines) == 2


def test_header_only_file_is_empty_dataset(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("ship_id,aspect_deg,delta_r_m,ship_length_m,ship_width_m,c0,c1\n")
    ds = load_dataset(path)
    assert len(ds) == 0 and ds.s == 2


@pytest.mark.parametrize("row, fragment", [
    ("a,0,1,10,5,1.0,-1.0", "line 3: negative"),
    ("a,0,1,10,5,1.0", "columns"),
    ("a,zero,1,10,5,1.0,2.0", "non-numeric"),
    ("a,0,1,10,5,1.0,nan", "non-finite"),
])
def test_parse_errors_name_the_line(tmp_path, row, fragment):
    path = tmp_path / "bad.csv"
    path.write_text("ship_id,aspect_deg,delta_r_m,ship_length_m,ship_width_m,c0,c1\n"
                    "ok,0,1,10,5,1.0,2.0\n" + row + "\n")
    with pytest.raises(DatasetFormatError, match=fragment) as info:
        load_dataset(path)
    assert info.value.line == 3


def test_malformed_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("ship,aspect_deg,delta_r_m,ship_length_m,ship_width_m,c0\n")
    with pytest.raises(DatasetFormatError, match="header"):
        load_dataset(path)


def test_zero_cells_refused():
    with pytest.raises(ValueError):
        Dataset([], s=0)
    with pytest.raises(ValueError):
        profile([])


@pytest.mark.parametrize("kwargs", [
    dict(cells=[1.0, -0.1]), dict(cells=[1.0, np.inf]), dict(aspect=360.0),
    dict(aspect=-1.0), dict(width=200.0), dict(ship_id="a,b"),
])
def test_profile_invariants(kwargs):
    args = dict(cells=[1.0, 2.0])
    args.update(kwargs)
    with pytest.raises(ValueError):
        profile(**args)


def test_mixed_cell_counts_refused():
    with pytest.raises(ValueError):
        Dataset([profile([1.0]), profile([1.0, 2.0])])


def test_synthetic_round_trip_100(tmp_path):
    ships = [make_ship("a", 80, 12, 20, seed=1), make_ship("b", 82, 14, 20, seed=2)]
    ds = render_fleet(ships, list(np.linspace(0, 350, 10)), 5, SceneParams(s=160, seed=4))
    assert len(ds) == 100
    save_dataset(ds, tmp_path / "syn.csv")
    back = load_dataset(tmp_path / "syn.csv")
    for p, q in zip(ds, back):
        assert p.meta() == q.meta()
        np.testing.assert_allclose(q.cells, p.cells, rtol=1e-10, atol=0)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 1e12, allow_nan=False), min_size=1, max_size=20),
       st.floats(0, 359.999), st.text(st.characters(blacklist_characters=",\n\r\"",
                                                    blacklist_categories=("Cs",)), max_size=8))
def test_round_trip_property(tmp_path_factory, cells, aspect, ship_id):
    path = tmp_path_factory.mktemp("rt") / "p.csv"
    ds = Dataset([profile(cells, aspect=aspect, ship_id=ship_id)])
    save_dataset(ds, path)
    assert load_dataset(path) == ds


def test_coi_mask_lrp_matches_bits():
    m = CoiMask(np.array([0, 1, 1, 0, 1, 1, 1]))
    assert m.lrp_cells == 2
    with pytest.raises(ValueError):
        CoiMask(np.array([0, 1]), lrp_cells=2)
    assert CoiMask(np.zeros(4)).lrp_cells == 0


@given(st.lists(st.booleans(), max_size=40))
def test_first_run_length_brute_force(bits):
    from oracles import first_run
    assert first_run_length(bits) == first_run(bits)


def test_mfn_components_reject_unscaled_mask():
    with pytest.raises(ValueError):
        MfnComponents(np.array([1.0, 2.0]), np.zeros(2), np.zeros(2), 0.5)
    MfnComponents(np.array([0.0, 2.0, 2.0]), np.zeros(3), np.zeros(3), 0.5)


def test_profiles_are_read_only():
    p = profile([1.0, 2.0])
    with pytest.raises(ValueError):
        p.cells[0] = 5.0
    assert isinstance(p, RangeProfile)
