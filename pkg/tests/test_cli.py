import json

import pytest

from markoff.cli import main, parse_complex_literal, parse_k_range


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_complex_literal():
    assert parse_complex_literal("1.5+0.25i") == 1.5 + 0.25j
    assert parse_complex_literal("3") == 3 + 0j
    assert parse_complex_literal("-2i") == -2j
    with pytest.raises(ValueError):
        parse_complex_literal("one+i")


def test_parse_k_range():
    assert list(parse_k_range("-2..2")) == [-2, -1, 0, 1, 2]
    assert list(parse_k_range("5..4")) == []
    with pytest.raises(ValueError):
        parse_k_range("5")


def test_reduce_markoff_chain(capsys):
    code, out, _ = run_cli(
        capsys, "reduce", "--type", "11", "--k", "-2", "--point", "3,6,15"
    )
    assert code == 0
    assert "reduced: (3, 3, 3)" in out
    assert "word: Vz Vy" in out
    assert "status: reduced" in out


def test_reduce_exceptional_exit_zero(capsys):
    code, out, _ = run_cli(
        capsys,
        "reduce", "--type", "11", "--k", "6", "--point", "2,3,1",
        "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["status"] == "exceptional_hit"
    assert payload["exceptional"] == {"axis": "x", "value": 2}


def test_reduce_off_surface_exit_one(capsys):
    code, out, err = run_cli(
        capsys, "reduce", "--type", "11", "--k", "-2", "--point", "1,1,1"
    )
    assert code == 1
    assert "residual = 2" in err


def test_reduce_cap_hit_exit_two(capsys):
    code, _, _ = run_cli(
        capsys,
        "reduce", "--type", "11", "--k", "-2", "--point", "3,6,15",
        "--cap-steps", "1",
    )
    assert code == 2


def test_reduce_complex_mode(capsys):
    code, out, _ = run_cli(
        capsys,
        "reduce", "--type", "11", "--k", "-2", "--point", "3.0,3.0,3.0",
        "--complex", "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["status"] == "reduced"
    assert payload["steps"] == 0


def test_reduce_complex_04(capsys):
    code, out, _ = run_cli(
        capsys,
        "reduce", "--type", "04", "--k", "0.0,0.0,0.0,0.0", "--point", "2.0,0.0,0.0",
        "--complex", "--format", "json",
    )
    assert code == 0
    assert json.loads(out)["terminal_condition"] == 1


def test_scan_range_json(capsys):
    code, out, _ = run_cli(
        capsys, "scan", "--type", "11", "--k-range", "-2..2", "--box", "30"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["box"] == 30
    assert doc["generators"] == "gamma_prime"
    assert [row["k"] for row in doc["rows"]] == [-2, -1, 0, 1, 2]
    row = doc["rows"][0]
    assert row["h_star_gamma_prime"] == 2
    assert set(row) == {
        "k",
        "h_star_gamma_poly",
        "h_star_gamma_prime",
        "exceptional",
        "caps_hit",
        "representatives",
    }


def test_scan_empty_range_header_only(capsys):
    code, out, _ = run_cli(
        capsys,
        "scan", "--type", "11", "--k-range", "2..1", "--box", "10",
        "--format", "csv",
    )
    assert code == 0
    assert out.splitlines() == [
        "k,h_star_gamma_poly,h_star_gamma_prime,exceptional,caps_hit"
    ]


def test_scan_04_single_row(capsys):
    code, out, _ = run_cli(
        capsys, "scan", "--type", "04", "--k", "0,0,0,0", "--box", "8"
    )
    assert code == 0
    doc = json.loads(out)
    assert len(doc["rows"]) == 1
    assert doc["rows"][0]["k"] == [0, 0, 0, 0]


def test_scan_cache_byte_identical(tmp_path, capsys):
    cache = tmp_path / "cache.json"
    argv = [
        "scan", "--type", "11", "--k-range", "-2..0", "--box", "25",
        "--cache", str(cache),
    ]
    code1, out1, _ = run_cli(capsys, *argv)
    assert code1 == 0 and cache.exists()
    stamp = cache.read_text()
    code2, out2, _ = run_cli(capsys, *argv)
    assert code2 == 0
    assert out1 == out2
    assert cache.read_text() == stamp


def test_scan_cache_env_var(tmp_path, capsys, monkeypatch):
    cache = tmp_path / "envcache.json"
    monkeypatch.setenv("MARKOFF_CACHE", str(cache))
    code, _, _ = run_cli(capsys, "scan", "--type", "11", "--k", "-2", "--box", "10")
    assert code == 0
    assert cache.exists()
    entries = json.loads(cache.read_text())["entries"]
    assert len(entries) == 1


def test_scan_cache_key_includes_box(tmp_path, capsys):
    cache = tmp_path / "cache.json"
    run_cli(capsys, "scan", "--k", "-2", "--box", "10", "--cache", str(cache))
    run_cli(capsys, "scan", "--k", "-2", "--box", "20", "--cache", str(cache))
    entries = json.loads(cache.read_text())["entries"]
    assert len(entries) == 2


def test_scan_unwritable_cache(capsys):
    code, _, err = run_cli(
        capsys,
        "scan", "--k", "-2", "--box", "5",
        "--cache", "/nonexistent-dir/cache.json",
    )
    assert code == 1
    assert "cache" in err


def test_scan_parallel_matches_serial(capsys):
    argv = ["scan", "--type", "11", "--k-range", "-1..1", "--box", "20"]
    _, serial, _ = run_cli(capsys, *argv)
    _, parallel, _ = run_cli(capsys, *argv, "--jobs", "2")
    assert serial == parallel


def test_verify_passes(capsys):
    code, out, _ = run_cli(capsys, "verify", "--trials", "60", "--seed", "3")
    assert code == 0
    assert "9/9 suites passed" in out


def test_lines_text(capsys):
    code, out, _ = run_cli(capsys, "lines", "--k", "6")
    assert code == 0
    assert len([l for l in out.splitlines() if "[integral]" in l]) == 4
    code, out, _ = run_cli(capsys, "lines", "--k", "2")
    assert len([l for l in out.splitlines() if "[integral]" in l]) == 2
    code, out, _ = run_cli(capsys, "lines", "--k", "1")
    assert code == 0
    assert "no integral lines" in out


def test_lines_json(capsys):
    code, out, _ = run_cli(capsys, "lines", "--k", "11", "--format", "json")
    doc = json.loads(out)
    assert doc["square_root"] == 3
    assert len(doc["lines"]) == 4


def test_orbit_dump(capsys):
    code, out, _ = run_cli(
        capsys,
        "orbit", "--type", "11", "--k", "-2", "--start", "3,3,3",
        "--gens", "gamma_poly", "--cap-height", "20",
    )
    assert code == 2  # the orbit continues above the cap
    doc = json.loads(out)
    assert doc["caps_hit"] is True
    assert {"point": [3, 3, 3], "word": ""} in doc["points"]
    assert any(p["point"] == [3, 3, 6] for p in doc["points"])


def test_orbit_closed_exit_zero(capsys):
    code, out, _ = run_cli(
        capsys, "orbit", "--type", "11", "--k", "-2", "--start", "0,0,0",
        "--cap-height", "50",
    )
    assert code == 0
    assert json.loads(out)["points"] == [{"point": [0, 0, 0], "word": ""}]


def test_equiv_yes(capsys):
    code, out, _ = run_cli(
        capsys,
        "equiv", "--type", "11", "--k", "-2", "--p", "3,3,3", "--q", "3,6,15",
        "--cap-height", "100",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["equivalent"] is True
    assert doc["word"]


def test_equiv_no_within_caps(capsys):
    code, out, _ = run_cli(
        capsys,
        "equiv", "--type", "11", "--k", "-2", "--p", "0,0,0", "--q", "3,3,3",
    )
    assert code == 2
    assert json.loads(out)["equivalent"] is False


def test_equiv_off_surface_error(capsys):
    code, _, err = run_cli(
        capsys,
        "equiv", "--type", "11", "--k", "-2", "--p", "1,1,1", "--q", "3,3,3",
    )
    assert code == 1
    assert "not on the surface" in err


def test_scan_gamma_poly_rows(capsys):
    code, out, _ = run_cli(
        capsys,
        "scan", "--type", "11", "--k", "-2", "--box", "30", "--gens", "gamma_poly",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["generators"] == "gamma_poly"
    row = doc["rows"][0]
    # representatives come from the poly run; both counts still reported
    assert row["h_star_gamma_poly"] == len(row["representatives"])
    assert row["h_star_gamma_prime"] == 2


def test_invalid_config_exits_one(capsys):
    code, _, err = run_cli(capsys, "scan", "--k", "-2", "--box", "-5")
    assert code == 1 and "--box" in err
    code, _, err = run_cli(
        capsys, "orbit", "--k", "-2", "--start", "0,0,0", "--cap-height", "-1"
    )
    assert code == 1 and "cap-height" in err
    code, _, err = run_cli(
        capsys, "equiv", "--k", "-2", "--p", "0,0,0", "--q", "0,0,0", "--cap-count", "0"
    )
    assert code == 1
