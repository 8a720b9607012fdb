from __future__ import annotations

import json

import pytest

from hazet.algebra import loads
from hazet.catalogue import poset_by_name
from hazet.cli import main, parse_exponents
from hazet.flagseries import fhp


def run(capsys, *argv: str) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_coarse_numerator(capsys):
    code, out = run(capsys, "coarse", "A2", "--numerator")
    assert code == 0
    assert out.strip() == "1+3Y+2Y²+(2+3Y+Y²)T"


def test_coarse_latex(capsys):
    _, out = run(capsys, "coarse", "A2", "--numerator", "--latex")
    assert out.strip() == "1 + 3Y + 2Y^{2} + (2 + 3Y + Y^{2})T"


def test_output_is_deterministic(capsys):
    first = run(capsys, "fhp", "B2")[1]
    second = run(capsys, "fhp", "B2")[1]
    assert first == second


def test_fhp_json_roundtrip(capsys):
    code, out = run(capsys, "fhp", "A3", "--json")
    assert code == 0
    data = json.loads(out)
    assert loads(json.dumps(data["series"])) == fhp(poset_by_name("A3")).series


def test_verify_reciprocity_fano(capsys):
    code, out = run(capsys, "verify", "reciprocity", "fano")
    assert code == 0
    assert "reciprocity: ok" in out


def test_verify_all_skips_central_checks_for_affine(capsys):
    code, out = run(capsys, "verify", "all", "shiA2")
    assert code == 0
    assert "skipped" in out


def test_verify_reciprocity_on_affine_is_an_error(capsys):
    assert main(["verify", "reciprocity", "par:3"]) == 2


def test_unknown_family(capsys):
    assert main(["coarse", "nothing"]) == 2
    assert "unknown family" in capsys.readouterr().err


def test_arrangement_file(tmp_path, capsys):
    path = tmp_path / "a2.txt"
    path.write_text("dim 3\nfield Q\n0 1 -1 0\n0 1 0 -1\n0 0 1 -1\n")
    _, out = run(capsys, "coarse", str(path), "--numerator")
    assert out.strip() == "1+3Y+2Y²+(2+3Y+Y²)T"


def test_topzeta_univariate(capsys):
    _, out = run(capsys, "topzeta", "A3", "--univariate")
    assert out.strip() == "(2 - s - 2*s^2 + 2*s^3)/(2 + 11*s + 22*s^2 + 19*s^3 + 6*s^4)"


def test_topzeta_latex(capsys):
    _, out = run(capsys, "topzeta", "A3", "--univariate", "--latex")
    assert out.strip() == r"\frac{2 - s - 2s^2 + 2s^3}{2 + 11s + 22s^2 + 19s^3 + 6s^4}"
    _, out = run(capsys, "topzeta", "par:2", "--latex")
    assert out.strip() == r"-1 + \frac{1}{(1 + s_{1})} + \frac{1}{(1 + s_{2})}"


def test_topzeta_json(capsys):
    code, out = run(capsys, "topzeta", "par:2", "--json")
    assert code == 0
    assert len(json.loads(out)["terms"]) == 3


def test_eval(capsys):
    _, out = run(capsys, "eval", "A1", "--q", "3", "--s", "[1]=1")
    assert out.strip() == "3/4"


def test_oracle_json(capsys):
    code, out = run(capsys, "oracle", "A1", "--prime", "3", "--level", "4", "--s", "x1=1", "--report", "json")
    assert code == 0
    data = json.loads(out)
    assert data["within_bound"] and data["closed_form"] == "3/4"


def test_atom_both_routes(capsys):
    code, out = run(capsys, "atom", "--type", "D", "--rank", "3", "--via", "both")
    assert code == 0
    assert "equals" in out


def test_trees_count(capsys):
    _, out = run(capsys, "trees", "--count", "--type", "A", "--rank", "4")
    assert out.strip() == "236"


def test_stirling(capsys):
    code, out = run(capsys, "stirling", "--type", "D", "--rank", "4")
    assert code == 0
    assert "k=3: flag sum 36, k!S(n,k) 36" in out


def test_golden_single_table(capsys):
    code, out = run(capsys, "golden", "B3")
    assert code == 0
    assert out.split() == ["B3", "ok"]


def test_golden_threads_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("HAZET_THREADS", "2")
    code, out = run(capsys, "golden", "A2")
    assert code == 0


def test_catalogue_listing(capsys):
    _, out = run(capsys, "catalogue")
    assert "Uniform n≤m" in out


def test_parse_exponents_keys():
    P = poset_by_name("A2")
    s = parse_exponents("top=2,[1,2]=1,s[3]=1/2,x1=1", P)
    assert s[P.top] == 3
    assert sum(s.values()) == 4 + 0.5
    with pytest.raises(ValueError):
        parse_exponents("y1=1", P)
    with pytest.raises(ValueError):
        parse_exponents("[9]=1", P)
