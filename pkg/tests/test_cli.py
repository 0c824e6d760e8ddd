import json
import subprocess
import sys

import pytest

from arboreal.cli import DEFAULT_SEED, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_wreath_count(capsys):
    code, out, _ = run(capsys, "wreath", "count", "--index", "2,3")
    assert code == 0
    assert "order: 72" in out and "full_cycles: 12" in out and "ratio: 1/6" in out
    assert "enumerated_order: 72" in out and "enumerated_full_cycles: 12" in out


def test_wreath_count_json(capsys):
    _, out, _ = run(capsys, "wreath", "count", "--index", "2,2,2", "--format", "json")
    rec = json.loads(out)
    assert rec["order"] == 128 and rec["full_cycles"] == 16 and rec["ratio"] == "1/8"


def test_wreath_enumerate(capsys):
    code, out, _ = run(capsys, "wreath", "enumerate", "--index", "2,2")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 8 and len(set(lines)) == 8
    assert json.loads(lines[0])["index"] == [2, 2]


def test_invalid_index_exits_1(capsys):
    code, _, err = run(capsys, "wreath", "count", "--index", "2,0")
    assert code == 1 and "error" in err


def test_limit_exceeded_exits_2(capsys):
    code, _, err = run(capsys, "wreath", "enumerate", "--index", "3,3", "--limit", "100")
    assert code == 2 and "limit" in err


def test_argparse_errors_exit_1():
    with pytest.raises(SystemExit) as exc:
        main(["wreath", "frobnicate", "--index", "2"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["scan", "stable"])
    assert exc.value.code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["scan", "stable", "--spec", "bogus:3"],
        ["scan", "stable", "--spec", "const:x^2-2", "--nmax", "0"],
        ["scan", "stable", "--spec", "const:x^2-2", "--pmax", "2"],
        ["generic", "sample", "--index", "3", "--exact", "--box", "3", "--samples", "5"],
        ["generic", "curve", "--boxes", "3,x"],
        ["frob", "hist", "--spec", "file:/nonexistent/seq.txt"],
    ],
)
def test_invalid_configs_exit_1(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 1


def test_scan_csv(capsys):
    code, out, err = run(capsys, "scan", "stable", "--spec", "const:x^2-2", "--nmax", "3", "--pmax", "1000")
    assert code == 0 and "scanned" in err
    lines = out.splitlines()
    assert lines[0] == "X,n,count,primes,density,predicted,irreducibility"
    assert len(lines) == 4


def test_scan_warns_when_unverified(capsys):
    code, _, err = run(capsys, "scan", "stable", "--spec", "const:x^2-1", "--nmax", "2", "--pmax", "300")
    assert code == 0 and "irreducibility unverified" in err


def test_scan_from_file(tmp_path, capsys):
    path = tmp_path / "seq.txt"
    path.write_text("# x^2-2 twice\n-2,0,1\nx^2-2\n")
    _, a, _ = run(capsys, "scan", "stable", "--spec", f"file:{path}", "--nmax", "2", "--pmax", "2000")
    _, b, _ = run(capsys, "scan", "stable", "--spec", "const:x^2-2", "--nmax", "2", "--pmax", "2000")
    assert a.splitlines()[1:] == b.splitlines()[1:]


def test_frob_outputs(capsys):
    _, out, _ = run(capsys, "frob", "hist", "--spec", "const:x^2-2", "--level", "2", "--pmax", "3000")
    hist = json.loads(out)
    assert hist["level"] == 2
    _, out, _ = run(capsys, "frob", "compare", "--spec", "random:2,2:25:0", "--level", "2", "--pmax", "5000",
                    "--format", "text")
    assert "tv_distance" in out and "predicted: 0.250000" in out


def test_generic_outputs(capsys):
    _, out, _ = run(capsys, "generic", "sample", "--index", "2", "--box", "100")
    assert out.splitlines()[1].startswith("2,100,40401,exact,0.970966")
    _, out, _ = run(capsys, "generic", "sample", "--box", "6", "--samples", "200", "--format", "json")
    assert json.loads(out)["samples"] == 200
    _, out, _ = run(capsys, "generic", "curve", "--boxes", "2,3")
    assert out.startswith("index,N,exceptional,total,fraction")


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "--out", str(target), "wreath", "count", "--index", "3", "--format", "json")
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["order"] == 6


DETERMINISM_RUNS = [
    ["wreath", "sample-ratio", "--index", "3,3,2", "--samples", "20000"],
    ["scan", "stable", "--spec", "fmf:3", "--nmax", "3", "--pmax", "3000"],
    ["frob", "compare", "--spec", "random:2,2,2:9:3", "--level", "3", "--pmax", "2000", "--samples", "5000"],
    ["generic", "sample", "--index", "2,2", "--box", "10", "--samples", "300"],
]


@pytest.mark.parametrize("argv", DETERMINISM_RUNS)
def test_byte_identical_across_runs_and_threads(capsys, argv):
    outputs = {run(capsys, *argv, "--threads", str(t))[1] for t in (1, 1, 3)}
    assert len(outputs) == 1


def test_default_seed_documented(capsys):
    with pytest.raises(SystemExit):
        main(["wreath", "--help"])
    assert str(DEFAULT_SEED) in capsys.readouterr().out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "arboreal", "wreath", "count", "--index", "3,2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and "order: 48" in proc.stdout
