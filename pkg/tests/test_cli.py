import shutil

import pytest

from qnsigma.cli import main
from qnsigma.corpus import corpus_dir

from conftest import DATA, TREES


@pytest.fixture
def sample(tmp_path):
    p = tmp_path / "LmQ4.txt"
    shutil.copy(DATA / "LmQ4_sample.txt", p)
    return p


def test_run_sample(sample, capsys):
    assert main(["run", str(sample)]) == 0
    out = (sample.parent / "LmQ4-out.txt").read_text()
    assert "|Sub(L)|=158" in out and "70.5000000000000000" in out
    assert "sigma=79" in capsys.readouterr().out


def test_run_to_stdout_verbose(sample, capsys):
    assert main(["run", str(sample), "-o", "-", "--verbose"]) == 0
    assert "-- Joins of the closed partial lattice" in capsys.readouterr().out


def test_run_empty_document(tmp_path):
    p = tmp_path / "empty.txt"
    p.write_text("\\enddata\n")
    assert main(["run", str(p)]) == 0
    out = (tmp_path / "empty-out.txt").read_text()
    assert out.startswith("The computation took")


def test_run_cycle_reports_line(tmp_path, capsys):
    p = tmp_path / "cyc.txt"
    p.write_text("\\beginjob\n\\name\nc\n\\size\n2\n\\elements\nab\n\\edges\nab\nba\n"
                 "\\constraints\n\\endofjob\n\\enddata\n")
    assert main(["run", str(p)]) == 2
    assert f"{p}:10: CycleDetected" in capsys.readouterr().err


def test_run_parse_error(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text("\\beginjob\n")
    assert main(["run", str(p)]) == 2
    assert "UnterminatedJob" in capsys.readouterr().err
    assert main(["run", str(tmp_path / "missing.txt")]) == 2


def test_verify(sample, tmp_path, capsys):
    good = tmp_path / "good.tsv"
    good.write_text("LmQ4/C1 d*m=a\t158\t79\nLmQ4/C2 d*m=:x>=A\t282\t70.5\n")
    assert main(["verify", str(sample), str(good)]) == 0
    bad = tmp_path / "bad.tsv"
    bad.write_text("LmQ4/C1 d*m=a\t158\t79\nLmQ4/C2 d*m=:x>=A\t283\t70.75\n")
    assert main(["verify", str(sample), "--manifest", str(bad)]) == 1
    empty = tmp_path / "empty.tsv"
    empty.write_text("")
    capsys.readouterr()
    assert main(["verify", str(sample), str(empty)]) == 0
    assert "warning: ExtraJob" in capsys.readouterr().out


def test_expand(tmp_path, capsys):
    out = tmp_path / "demo.txt"
    assert main(["expand", str(TREES / "demo.tree"), "-o", str(out)]) == 0
    text = capsys.readouterr().out
    assert "6 job(s)" in text
    assert out.read_text().count("\\beginjob") == 6


def test_expand_threshold(tmp_path, capsys):
    out = tmp_path / "t2.txt"
    assert main(["expand", str(TREES / "LmT2.tree"), "-o", str(out), "--threshold", "70"]) == 0
    assert "OPEN" in capsys.readouterr().out


def test_corpus(capsys):
    assert main(["corpus"]) == 0
    assert "101 jobs, 101 verified" in capsys.readouterr().out


def test_corpus_detects_a_dropped_constraint(tmp_path, monkeypatch, capsys):
    d = tmp_path / "corpus"
    shutil.copytree(corpus_dir(), d)
    p = d / "LmSi.txt"
    p.write_text(p.read_text().replace("a+b=m", "", 1))
    monkeypatch.setenv("QNSIGMA_CORPUS_DIR", str(d))
    assert main(["corpus"]) == 1
    out = capsys.readouterr().out
    assert "MISMATCH" in out and "S_1" in out
