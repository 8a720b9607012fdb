from __future__ import annotations

import pytest

from hazet import golden
from hazet.catalogue import dihedral_poset
from hazet.flagseries import cfhp


def test_tables_load():
    tables = golden.tables()
    assert len(tables) == 58
    for name in golden.DEFAULT + list(golden.SLOW):
        assert name in tables


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2", "H2", "shiA1", "catA2", "U:3,4", "Dres:3,2"])
def test_small_tables_match(name):
    result = golden.check(name)
    assert result.ok, result.detail


def test_dihedral_table_is_symbolic():
    for m in (3, 7):
        assert cfhp(dihedral_poset(m)).numerator == golden.dihedral_expected(m)


def test_unsupported_tables_report_failure():
    result = golden.check("E6")
    assert not result.ok
    assert "not reproducible" in result.detail


def test_select():
    assert golden.select("default")[-1] == "I2:m"
    assert golden.select("A3") == ["A3"]
    assert "A7" in golden.select("all", include_slow=True)
    assert "A7" not in golden.select("all")
    with pytest.raises(ValueError):
        golden.select("Z9")


def test_a_mismatch_is_reported(monkeypatch, capsys):
    fake = dict(golden.tables())
    fake["A2"] = [[1, 3, 2], [2, 3, 2]]
    monkeypatch.setattr(golden, "tables", lambda: fake)
    result = golden.check("A2")
    assert not result.ok
    assert "table has" in result.detail

    from hazet.cli import main

    assert main(["golden", "A2"]) == 1
    assert "first failing table: A2" in capsys.readouterr().out
