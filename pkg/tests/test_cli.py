import json
from pathlib import Path

import pytest

from relcr.cli import main

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", str(FIX / "A1.struct"))
    assert code == 0
    assert "6 elements" in out


def test_validate_json(capsys):
    code, out, _ = run(capsys, "validate", str(FIX / "A1.struct"), "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["relations"] == {"E": 6, "R": 1}


def test_validate_missing_file(capsys):
    code, _, err = run(capsys, "validate", str(FIX / "nope.struct"))
    assert code == 1
    assert "error" in err


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["no-such-command"])
    assert e.value.code == 2


def test_refine_and_csv(tmp_path, capsys):
    csv = tmp_path / "trace.csv"
    code, out, _ = run(capsys, "refine", str(FIX / "A1.struct"),
                       "--csv", str(csv))
    assert code == 0
    assert "stable at round 1" in out
    assert csv.read_text().startswith("round,relation,tuple_index,color_id")


def test_distinguish(capsys):
    code, out, _ = run(capsys, "distinguish", str(FIX / "A1.struct"),
                       str(FIX / "B1.struct"))
    assert code == 0
    assert "round 1" in out
    code, out, _ = run(capsys, "distinguish", str(FIX / "A1.struct"),
                       str(FIX / "A1.struct"))
    assert "indistinguishable" in out


def test_export_all_representations(tmp_path, capsys):
    for rep in ["grep", "vgrep", "incidence", "enriched-gaifman",
                "enriched-incidence", "jtrep"]:
        out_file = tmp_path / (rep + ".dot")
        code, _, _ = run(capsys, "export", str(FIX / "A1.struct"),
                         "--rep", rep, "-o", str(out_file))
        assert code == 0, rep
        assert out_file.read_text().startswith("digraph")


def test_export_jtrep_rejects_cyclic(tmp_path, capsys):
    tri = tmp_path / "tri.struct"
    tri.write_text("signature: E/2\nE(1, 2)\nE(2, 3)\nE(3, 1)\n")
    code, _, err = run(capsys, "export", str(tri), "--rep", "jtrep")
    assert code == 1
    assert "cyclic" in err


def test_gyo(tmp_path, capsys):
    code, out, _ = run(capsys, "gyo", str(FIX / "A1.struct"))
    assert code == 0
    assert out.count("edge:") == 6
    tri = tmp_path / "tri.struct"
    tri.write_text("signature: E/2\nE(1, 2)\nE(2, 3)\nE(3, 1)\n")
    code, out, _ = run(capsys, "gyo", str(tri))
    assert code == 0
    assert "cyclic" in out


def test_homcount(capsys):
    code, out, _ = run(capsys, "homcount", str(FIX / "A1.struct"),
                       str(FIX / "B1.struct"))
    assert code == 0
    assert out.strip() == "0"
    code, out, _ = run(capsys, "homcount", str(FIX / "A1.struct"),
                       str(FIX / "A1.struct"), "--brute")
    assert int(out.strip()) >= 1


def test_game(capsys):
    code, out, _ = run(capsys, "game", str(FIX / "A1.struct"),
                       str(FIX / "B1.struct"))
    assert code == 0
    assert "spoiler wins" in out
    code, out, _ = run(capsys, "game", str(FIX / "A1.struct"),
                       str(FIX / "A1.struct"), "--rounds", "4")
    assert "duplicator survives 4" in out


def test_synthesize_then_eval(tmp_path, capsys):
    formula = tmp_path / "f.sexp"
    code, _, _ = run(capsys, "synthesize", str(FIX / "A1.struct"),
                     "--tuple", "R,0", "-o", str(formula))
    assert code == 0
    assert formula.read_text().startswith("(")
    code, out, _ = run(capsys, "eval", str(formula), str(FIX / "A1.struct"),
                       "--assign", "y1=1", "--assign", "y2=2",
                       "--assign", "y3=3", "--assign", "y4=u",
                       "--assign", "y5=v", "--assign", "y6=w")
    assert code == 0
    assert out.strip() == "true"


def test_eval_bad_assignment(tmp_path, capsys):
    formula = tmp_path / "f.sexp"
    formula.write_text("(eq y1 y1)")
    code, _, err = run(capsys, "eval", str(formula), str(FIX / "A1.struct"),
                       "--assign", "y1=zzz")
    assert code == 1


def test_gen_is_deterministic(capsys):
    args = ["gen", "--signature", "R/3,E/2", "--elements", "6",
            "--tuples", "R=3,E=4", "--seed", "5"]
    code, out1, _ = run(capsys, *args)
    code, out2, _ = run(capsys, *args)
    assert code == 0 and out1 == out2
    assert out1.count("R(") == 3 and out1.count("E(") == 4


def test_gen_acyclic(tmp_path, capsys):
    out_file = tmp_path / "c.struct"
    code, _, _ = run(capsys, "gen", "--signature", "R/3,E/2", "--acyclic",
                     "--nodes", "4", "--seed", "9", "-o", str(out_file))
    assert code == 0
    code, out, _ = run(capsys, "gyo", str(out_file))
    assert "cyclic" not in out


def test_bench_tiny(capsys):
    code, out, _ = run(capsys, "bench", "--sizes", "50,100", "--seed", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "N,seconds"
    assert len(lines) == 3


def test_check_quick(capsys):
    code, out, _ = run(capsys, "check", "--quick", "--seed", "3")
    assert code == 0
    assert "FAIL" not in out
