"""Command-line surface: formats, round trips, exit codes."""

import json

import pytest

from qcode.cli import main


@pytest.fixture
def gen_file(tmp_path, design256):
    g, _ = design256
    path = tmp_path / "gen.json"
    path.write_text(json.dumps({"n": g.n, "p": g.p,
                                "V": [list(r) for r in g.V]}))
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_writes_design(tmp_path, gen_file, capsys):
    out_path = tmp_path / "design.txt"
    code, out, _ = run(capsys, "construct", "--input", gen_file,
                       "--output", out_path)
    assert code == 0
    assert out.strip() == "runs=256 factors=14"
    lines = out_path.read_text().splitlines()
    assert lines[0] == "runs=256 factors=14"
    assert len(lines) == 257


def test_construct_stdout(gen_file, capsys):
    code, out, _ = run(capsys, "construct", "--input", gen_file)
    assert code == 0
    assert out.startswith("runs=256 factors=14\n")


def test_analyze_generator_json(gen_file, capsys, design256):
    code, out, _ = run(capsys, "analyze", "--input", gen_file,
                       "--method", "both")
    assert code == 0
    payload = json.loads(out)
    assert payload["runs"] == 256
    assert payload["resolution"] == "13/2"
    assert payload["method"] == "both"
    assert payload["spectrum"] == [
        {"length": l, "rho": r, "count": c}
        for l, r, c in design256[1]["spectrum"]]
    assert payload["gwlp"][3] == "42"


def test_analyze_round_trip_and_determinism(tmp_path, gen_file, capsys):
    design = tmp_path / "d.txt"
    assert run(capsys, "construct", "--input", gen_file,
               "--output", design)[0] == 0
    outs = []
    for source in (design, gen_file, gen_file):
        code, out, _ = run(capsys, "analyze", "--input", source,
                           "--method", "bruteforce")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1] == outs[2]


def test_analyze_text_format(gen_file, capsys):
    code, out, _ = run(capsys, "analyze", "--input", gen_file,
                       "--format", "text")
    assert code == 0
    assert "resolution = 13/2 (6.5000000)" in out


def test_analyze_design_text_rejects_theory(tmp_path, gen_file, capsys):
    design = tmp_path / "d.txt"
    run(capsys, "construct", "--input", gen_file, "--output", design)
    code, _, err = run(capsys, "analyze", "--input", design,
                       "--method", "theory")
    assert code == 2
    assert "bruteforce" in err


def test_matrices_pinned_p1(capsys):
    code, out, _ = run(capsys, "matrices", "--p", 1)
    assert code == 0
    payload = json.loads(out)
    assert payload["C"] == [[0, 1, 2, 1], [0, 2, 0, 2]]
    assert payload["B"] == [[0, 1, 0, 1]]
    assert payload["K_order"] == ["1", "2"]
    assert payload["deltas"] == [0]


def test_verify_clean(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert out.count("note:") == 1
    assert "match" in out


def test_verify_single_p(capsys):
    code, out, _ = run(capsys, "verify", "--p", 2)
    assert code == 0
    assert "p=2" in out


def test_search_json(capsys):
    code, out, _ = run(capsys, "search", "--n", 1, "--p", 1,
                       "--top", 2)
    assert code == 0
    payload = json.loads(out)
    assert [row["F"] for row in payload] == [[0, 0, 0, 1], [0, 1, 0, 0]]
    assert payload[0]["resolution"] == "4"
    assert payload[0]["witness_V"] == [[3]]


def test_extend_fixture(tmp_path, gen_file, capsys, examples):
    f0 = tmp_path / "f0.json"
    ft = tmp_path / "ft.json"
    counts = [0] * 64
    for c in examples["design_256x14"]["F_one_cells"]:
        counts[c] = 1
    f0.write_text(json.dumps(counts))
    code, out, _ = run(capsys, "extend", "--input", f0, "--t", 1,
                       "--output", ft)
    assert code == 0
    payload = json.loads(out)
    assert payload["predicted_r"] == 70
    assert payload["predicted_rho"] == "1/131072"
    assert payload["rendered_resolution"] == "70.9999924"
    assert json.loads(ft.read_text()) \
        == examples["periodic_extension"]["Ft"]


def test_exit_2_on_missing_file(capsys):
    code, _, err = run(capsys, "analyze", "--input", "/no/such/file")
    assert code == 2 and "analyze:" in err


def test_exit_2_on_bad_generator(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 1, "p": 1, "V": [[7]]}')
    assert run(capsys, "analyze", "--input", bad)[0] == 2


def test_exit_2_on_bad_frequency(tmp_path, capsys):
    f = tmp_path / "f.json"
    f.write_text("[1, 2, 3]")
    code, _, err = run(capsys, "extend", "--input", f, "--t", 1)
    assert code == 2 and "power of 4" in err


def test_exit_3_on_search_budget(capsys):
    code, _, err = run(capsys, "search", "--n", 9, "--p", 3)
    assert code == 3 and "budget" in err


def test_exit_3_on_oversized_construct(tmp_path, capsys):
    big = tmp_path / "big.json"
    big.write_text(json.dumps({"n": 13, "p": 1,
                               "V": [[1]] * 13}))
    assert run(capsys, "construct", "--input", big)[0] == 3
