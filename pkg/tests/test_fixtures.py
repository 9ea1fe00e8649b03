import json

import pytest

from silting.fixtures import (
    PACK_NAMES,
    FixtureError,
    load_algebra_file,
    load_module_file,
    load_pack,
    pack_data,
    validate,
    validate_all,
)
from silting.linalg import PrimeField, Rationals


def test_all_packs_validate():
    assert validate_all() == list(PACK_NAMES)


def test_unknown_pack():
    with pytest.raises(FixtureError):
        pack_data("nope")


@pytest.mark.parametrize("name", PACK_NAMES)
def test_pack_roles_and_indecomposables_resolve(name):
    P = load_pack(name)
    for k in P.indecomposables:
        assert P.modules[k].dim > 0
    for role in P.roles:
        assert P[role].algebra is P.algebra


def test_packs_are_cached_per_field():
    assert load_pack("eximp") is load_pack("eximp")
    assert load_pack("eximp", "Q") is load_pack("eximp", Rationals())
    assert load_pack("eximp", "Q") is not load_pack("eximp", PrimeField(3))
    assert isinstance(load_pack("eximp", "Fp:3").algebra.field, PrimeField)


def test_radsq3_pack_names():
    P = load_pack("radsq3")
    assert {"Q1", "Q2", "J1", "J2", "R(0,1)", "R(inf,2)"} <= set(P.modules)
    assert P.modules["Q2"].dims == (2, 3, 0)
    assert P.modules["J2"].dims == (3, 2, 0)


def test_schema_rejects_bad_documents():
    with pytest.raises(FixtureError, match="algebra JSON invalid"):
        validate({"vertices": ["1"]}, "algebra")
    with pytest.raises(FixtureError):
        validate({"dim": {"1": -1}, "arrows": {}}, "module")


def test_file_loaders(tmp_path, eximp):
    A = eximp.algebra
    pa = tmp_path / "eximp.alg.json"
    pa.write_text(json.dumps(pack_data("eximp")["algebra"]))
    B = load_algebra_file(pa)
    assert B.structurally_equal(A)
    pm = tmp_path / "M.mod.json"
    pm.write_text(json.dumps(eximp["M"].to_json()))
    M = load_module_file(B, pm)
    assert M.name == "M" and M.dims == eximp["M"].dims
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(FixtureError, match="cannot read"):
        load_algebra_file(bad)
    with pytest.raises(FixtureError):
        load_algebra_file(tmp_path / "missing.json")
