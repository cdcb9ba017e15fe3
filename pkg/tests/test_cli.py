"""Command-line driver: exit codes, output files, determinism."""

import json

import pytest

from cftpsample.cli import main

BWB_GRAPH = {
    "black": ["b0", "b1"],
    "white": ["w0"],
    "edges": [["b0", "w0"], ["b1", "w0"]],
}


def test_sample_records_and_determinism(tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    argv = [
        "sample", "--family", "boxes", "--params", "a=2,b=2,c=2",
        "--samples", "3", "--seed", "42",
    ]
    assert main(argv + ["--out", str(out1)]) == 0
    assert main(argv + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    records = json.loads(out1.read_text())
    assert len(records) == 3
    for i, rec in enumerate(records):
        assert rec["family"] == "boxes"
        assert rec["params"] == {"a": 2, "b": 2, "c": 2}
        assert rec["seed"] == 42 + i
        assert rec["schedule"] == "uniform" and rec["q"] == 1.0
        assert rec["T_final"] >= 1 and rec["update_count"] >= rec["T_final"]
        assert rec["algorithm_id"] == "splitmix64-ctr/v1"
        assert rec["tool_version"]
        assert "parts" in rec["state"]


def test_sample_rejects_non_json_format(tmp_path, capsys):
    code = main([
        "sample", "--family", "chain2", "--samples", "1", "--seed", "1",
        "--format", "ascii",
    ])
    assert code == 2
    assert "render" in capsys.readouterr().err


def test_count_formula_and_enumeration(tmp_path, capsys):
    assert main(["count", "--family", "boxes", "--params", "a=2,b=2,c=2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["count"] == 20 and doc["method"] == "formula"

    graph_file = tmp_path / "g.json"
    graph_file.write_text(json.dumps(BWB_GRAPH))
    assert main(["count", "--family", "indep", "--params", f"graph={graph_file}"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["count"] == 5 and doc["method"] == "enumeration"


def test_verify_census_passes(capsys):
    code = main(["verify", "census", "--family", "chain2", "--horizon", "6"])
    out = capsys.readouterr().out
    assert code == 0
    assert "census PASS" in out
    assert "uncoalesced mass" in out


def test_verify_uniformity_passes(capsys):
    code = main([
        "verify", "uniformity", "--family", "catalan", "--params", "n=3",
        "--samples", "400", "--seed", "7",
    ])
    out = capsys.readouterr().out
    assert code == 0
    assert "uniformity PASS" in out


def test_verify_forward_bias(capsys):
    code = main([
        "verify", "forward-bias", "--family", "chain2",
        "--samples", "2000", "--seed", "3",
    ])
    out = capsys.readouterr().out
    assert code == 0
    assert "forward-bias PASS" in out
    assert "uniformity rejected" in out


def test_verify_oracle(capsys):
    code = main([
        "verify", "oracle", "--family", "boxes", "--params", "a=2,b=2,c=1",
        "--seed", "11",
    ])
    out = capsys.readouterr().out
    assert code == 0
    assert "oracle PASS" in out
    assert "closed-form count 6" in out


def test_verify_oracle_needs_poset(capsys):
    code = main(["verify", "oracle", "--family", "asm", "--params", "n=3", "--seed", "1"])
    assert code == 2
    assert "no explicit element poset" in capsys.readouterr().err


def test_stats_writes_three_files(tmp_path, capsys):
    base = tmp_path / "report"
    code = main([
        "stats", "--family", "chain2", "--samples", "30", "--seed", "5",
        "--schedule", "all", "--out", str(base),
    ])
    assert code == 0
    doc = json.loads((tmp_path / "report.json").read_text())
    assert set(doc["schedules"]) == {"uniform", "sweep", "rank-parity"}
    assert doc["trials"] == 30
    csv_lines = (tmp_path / "report.csv").read_text().splitlines()
    assert csv_lines[0] == "schedule,t_final,count,frequency"
    assert len(csv_lines) > 3
    png = (tmp_path / "report.png").read_bytes()
    assert png[:8] == b"\x89PNG\r\n\x1a\n"
    assert "wrote" in capsys.readouterr().out


def test_stats_strips_known_suffix(tmp_path):
    base = tmp_path / "r.json"
    assert main([
        "stats", "--family", "chain2", "--samples", "10", "--seed", "1",
        "--out", str(base),
    ]) == 0
    assert (tmp_path / "r.json").exists()
    assert (tmp_path / "r.csv").exists()
    assert (tmp_path / "r.png").exists()


def test_render_from_records(tmp_path, capsys):
    records = tmp_path / "recs.json"
    assert main([
        "sample", "--family", "boxes", "--params", "a=2,b=2,c=2",
        "--samples", "2", "--seed", "9", "--out", str(records),
    ]) == 0

    svg_out = tmp_path / "pic.svg"
    assert main(["render", str(records), "--index", "1", "--out", str(svg_out)]) == 0
    svg = svg_out.read_text()
    # first line is a provenance comment, then the document itself
    head, rest = svg.split("\n", 1)
    meta = json.loads(head.removeprefix("<!-- ").removesuffix(" -->"))
    assert meta["family"] == "boxes" and meta["seed"] == 10
    assert rest.startswith("<svg ") and svg.count("<polygon") == 13

    assert main(["render", str(records), "--format", "ascii"]) == 0
    out = capsys.readouterr().out
    assert len(out.strip().splitlines()) == 2  # two rows of parts

    assert main(["render", str(records), "--index", "5"]) == 2
    assert "outside" in capsys.readouterr().err


def test_render_missing_file(tmp_path, capsys):
    assert main(["render", str(tmp_path / "nope.json")]) == 2
    assert "error" in capsys.readouterr().err


def test_figure1_small(tmp_path, capsys):
    out = tmp_path / "hex.svg"
    code = main([
        "figure1", "--side", "3", "--seed", "1", "--scale", "8", "--out", str(out),
    ])
    assert code == 0
    svg = out.read_text()
    assert svg.count("<polygon") == 3 * 9 + 1
    msg = capsys.readouterr().out
    assert msg.startswith(f"wrote {out}: side 3, seed 1, schedule rank-parity")
    assert "boxes" in msg and "T_final" in msg


def test_unknown_family_and_bad_params(capsys):
    assert main(["count", "--family", "mystery"]) == 2
    capsys.readouterr()
    assert main(["count", "--family", "boxes", "--params", "a=0,b=1,c=1"]) == 2
    capsys.readouterr()
    assert main(["sample", "--family", "boxes", "--params", "a=2;b=2",
                 "--samples", "1", "--seed", "1"]) == 2


def test_missing_seed_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["sample", "--family", "chain2", "--samples", "1"])
    assert exc.value.code == 2


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "cftpsample" in capsys.readouterr().out
