import json
import subprocess
import sys

import pytest

from homlie.algebra import direct_sum, heisenberg, abelian
from homlie.cli import main
from homlie.serialize import save_algebra


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_validate_example(capsys, algebra_dir):
    code, doc = run_json(capsys, "validate", str(algebra_dir / "nilpotent_alpha_L.json"))
    assert code == 0 and doc["valid"]
    code, doc = run_json(capsys, "validate", str(algebra_dir / "nilpotent_alpha_K.json"))
    assert code == 0


def test_validate_names_multiplicativity_violation(capsys, algebra_dir):
    code, doc = run_json(capsys, "validate", str(algebra_dir / "nilpotent_alpha_L_bad.json"))
    assert code == 1
    assert doc["violations"] == ["multiplicativity: (e1, e2)"]


def test_validate_malformed(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, doc = run_json(capsys, "validate", str(p))
    assert code == 2 and "malformed" in doc["error"]
    code, _ = run_json(capsys, "validate", str(tmp_path / "missing.json"))
    assert code == 2


def test_invalid_algebra_blocks_other_commands(capsys, algebra_dir):
    code, doc = run_json(capsys, "report", str(algebra_dir / "nilpotent_alpha_L_bad.json"))
    assert code == 1 and doc["violations"]


@pytest.mark.parametrize(
    "name, expect",
    [
        ("sl2", {"H2": 0, "capable": True}),
        ("heisenberg1", {"H2": 2, "capable": True}),
        ("heisenberg2", {"capable": False}),
    ],
)
def test_report(capsys, algebra_dir, name, expect):
    code, doc = run_json(capsys, "report", str(algebra_dir / f"{name}.json"))
    assert code == 0
    for k, v in expect.items():
        assert doc[k] == v
    assert doc["hopf_oracle"]["agree"]
    assert {"Z", "Z_alpha", "derived", "abelianization", "H1", "H3", "J2", "Gamma", "Z_star",
            "Z_wedge", "conventions"} <= set(doc)


def test_output_is_key_sorted(capsys, algebra_dir):
    _, out = run(capsys, "center", str(algebra_dir / "heisenberg1.json"))
    doc = json.loads(out)
    assert out.strip() == json.dumps(doc, sort_keys=True, indent=2)


def test_text_format(capsys, algebra_dir):
    code, out = run(capsys, "multiplier", str(algebra_dir / "heisenberg1.json"), "--format", "text")
    assert code == 0
    assert "dim: 2" in out.splitlines()


def test_homology_command(capsys, algebra_dir):
    code, doc = run_json(capsys, "homology", "--n", "3", str(algebra_dir / "heisenberg1.json"))
    assert code == 0
    assert doc["dims"] == {"1": 2, "2": 2, "3": 1}
    assert "witnesses" not in doc
    _, doc = run_json(capsys, "homology", "--witness", str(algebra_dir / "heisenberg1.json"))
    assert len(doc["witnesses"]["2"]) == 2


def test_capability_command(capsys, algebra_dir):
    code, doc = run_json(capsys, "capability", "--witness", str(algebra_dir / "nilpotent_alpha_L.json"))
    assert code == 0
    assert doc["capable"] and doc["witness"]["algebra"]["dim"] == 4
    assert {"z", "z_alpha", "z_star", "z_wedge", "criteria_consistency"} <= set(doc)
    code, doc = run_json(capsys, "capability", "--witness", str(algebra_dir / "heisenberg2.json"))
    assert code == 0 and doc["capable"] is False and doc["witness"] is None


@pytest.mark.parametrize("cmd", ["tensor", "exterior", "gamma", "center"])
def test_product_commands(capsys, algebra_dir, cmd):
    code, doc = run_json(capsys, cmd, str(algebra_dir / "nilpotent_alpha_K.json"))
    assert code == 0
    if cmd in ("tensor", "exterior"):
        assert all(doc["certificates"].values())


def test_sequence_command(capsys, tmp_path, algebra_dir):
    code, doc = run_json(capsys, "sequence", str(algebra_dir / "heisenberg1.json"))
    assert code == 0 and doc["ok"] and not doc["split"]
    p = tmp_path / "sum.json"
    save_algebra(direct_sum(heisenberg(1), abelian(1)), p)
    ideal = tmp_path / "ideal.json"
    ideal.write_text("[[0, 0, 0, 1]]")
    code, doc = run_json(capsys, "sequence", str(p), "--ideal", str(ideal), "--split")
    assert code == 0 and doc["split"]
    assert doc["six_term"]["checks"]["split_first_injective"]
    code, doc = run_json(capsys, "sequence", str(algebra_dir / "heisenberg1.json"), "--split")
    assert code == 2


def test_dimension_guard(capsys, algebra_dir, monkeypatch):
    monkeypatch.setenv("HOMLIE_MAX_DIM", "3")
    code, doc = run_json(capsys, "report", str(algebra_dir / "heisenberg2.json"))
    assert code == 2 and "HOMLIE_MAX_DIM" in doc["error"]
    code, _ = run_json(capsys, "corpus", "--count", "1", "--dims", "1..4")
    assert code == 2


def test_corpus_empty(capsys):
    code, doc = run_json(capsys, "corpus", "--count", "0")
    assert code == 0 and doc["count"] == 0 and doc["failures"] == []


def test_corpus_failure_replays_through_report(capsys, tmp_path):
    code, doc = run_json(capsys, "corpus", "--count", "2", "--dims", "1..1", "--dump", str(tmp_path))
    assert code == 1
    dumped = sorted(tmp_path.iterdir())
    assert dumped
    rec = json.loads(dumped[0].read_text())
    code, rep = run_json(capsys, "report", str(dumped[0]))
    assert code == 1
    assert sorted(k for k, v in rep["checks"].items() if not v) == rec["failed"]


def test_corpus_is_deterministic(capsys):
    args = ("corpus", "--count", "3", "--alpha", "arbitrary", "--seed", "5", "--instances")
    _, a = run(capsys, *args)
    _, b = run(capsys, *args)
    assert a == b


def test_console_entry_point(algebra_dir):
    r = subprocess.run([sys.executable, "-m", "homlie.cli", "validate", str(algebra_dir / "sl2.json")],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["valid"]
