import json
import subprocess
import sys

import pytest

from ppf import __version__
from ppf.cli import main

X6_X10 = ["--field", "n=3,m=1", "--function", "1,1=0x1;2,1=0x1"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_verify_pp(capsys):
    code, rep = run_json(capsys, "verify", *X6_X10, "--method", "both")
    assert code == 0 and rep["pseudo_planar"]
    assert rep["results"] == {"criterion": True, "bruteforce": True}
    assert rep["function"]["structured"] == "1,0=0x1;1,1=0x1"
    assert rep["version"] == __version__
    assert rep["field"]["n"] == 3 and rep["field"]["poly"].startswith("0x")


def test_verify_unwrapped_example_string_is_negative(capsys):
    # 1,0 and 2,0 read literally give x^3 + x^5
    code, rep = run_json(capsys, "verify", "--field", "n=3,m=1", "--function", "1,0=0x1;2,0=0x1", "--method", "both")
    assert code == 1 and not rep["pseudo_planar"]
    assert rep["function"]["generic"] == "0,1=0x1;0,2=0x1"
    assert "criterion_witness_b" in rep and "bruteforce_witness_a" in rep


def test_verify_family_and_generic(capsys):
    code, rep = run_json(capsys, "verify", "--field", "n=6,m=2", "--family", "t3-binomial", "--param", "c=g")
    assert code == 0 and rep["pseudo_planar"]
    code, rep = run_json(capsys, "verify", "--field", "n=3,m=1", "--generic", "--function", "0,1=1;1,2=1")
    assert code == 0
    code, rep = run_json(capsys, "verify", "--field", "n=6,m=2", "--family", "t3-trinomial", "--param", "c1=random", "--param", "c2=0", "--param", "c3=0", "--seed", "4")
    assert code in (0, 1)


def test_usage_errors(capsys):
    assert run(capsys, "verify", "--field", "n=3,m=1")[0] == 2  # no function
    code, _, err = run(capsys, "verify", "--field", "n=3,m=1", "--family", "nope")
    assert code == 2 and "unknown family" in err
    assert run(capsys, "verify", "--field", "n=3,m=2", "--function", "1,0=1")[0] == 2
    # generic pairs without a split cannot use the criterion
    assert run(capsys, "verify", "--field", "n=3", "--generic", "--function", "0,1=1")[0] == 2
    assert run(capsys, "verify", "--field", "n=3", "--generic", "--function", "0,1=1", "--method", "bruteforce")[0] == 1
    assert run(capsys, "verify", "--field", "n=3", "--generic", "--function", "0,1=0", "--method", "bruteforce")[0] == 0
    assert run(capsys, "search", "trinomial-t3", "--m", "3")[0] == 2  # long-run guard
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--method", "bogus", *X6_X10])
    assert exc.value.code == 2
    capsys.readouterr()


def test_search_text_and_json(capsys):
    code, out, _ = run(capsys, "search", "trinomial-t3", "--m", "1", "--format", "text")
    assert code == 0 and out == "count: 8\n"
    code, rep = run_json(capsys, "search", "trinomial-t3", "--m", "1", "--list")
    assert rep["count"] == 8 and rep["candidates"] == 512 and len(rep["members"]) == 8
    code, rep = run_json(capsys, "search", "t2-general", "--m", "2")
    assert rep["count"] == 6


def test_search_deterministic_across_jobs(capsys):
    a = run(capsys, "search", "trinomial-t3", "--m", "2", "--jobs", "1", "--list")[1]
    b = run(capsys, "search", "trinomial-t3", "--m", "2", "--jobs", "2", "--list")[1]
    assert a == b and json.loads(a)["count"] == 960


def test_search_checkpoint(tmp_path, capsys):
    ck = tmp_path / "ck.json"
    code, rep = run_json(capsys, "search", "trinomial-t3", "--m", "1", "--checkpoint", str(ck))
    assert code == 0 and json.loads(ck.read_text())["partial_count"] == 8


def test_rds(capsys):
    code, rep = run_json(capsys, "rds", *X6_X10, "--verify", "--list")
    assert code == 0 and rep["rds"] and rep["coverage_histogram"] == {"1": 56}
    assert rep["size"] == 8 and len(rep["elements"]) == 8
    code, rep = run_json(capsys, "rds", "--field", "n=3,m=1", "--function", "1,0=1;2,0=1", "--verify")
    assert code == 1 and not rep["rds"] and rep["first_violation"] is not None


def test_mub_and_codebook(capsys):
    code, rep = run_json(capsys, "mub", *X6_X10, "--verify")
    assert code == 0 and rep["bases"] == 9 and rep["verification"]["ok"]
    assert rep["verification"]["cross_pairs"] == 2304
    code, rep = run_json(capsys, "codebook", *X6_X10)
    assert (rep["N"], rep["K"], rep["imax_sq"], rep["levenstein_sq"]) == (72, 8, "1/8", "1/8")
    assert rep["meets_levenstein"] and len(rep["vectors"]) == 72
    code, rep = run_json(capsys, "codebook", *X6_X10, "--summary")
    assert "vectors" not in rep and rep["alphabet_size"] == 6
    code, out, _ = run(capsys, "codebook", *X6_X10, "--format", "csv")
    assert len(out.strip().splitlines()) == 72
    code, rep = run_json(capsys, "mub", "--field", "n=3,m=1", "--function", "1,0=1;2,0=1")
    assert code == 1 and rep["pseudo_planar"] is False


def test_out_file(tmp_path, capsys):
    path = tmp_path / "cb.json"
    code, out, _ = run(capsys, "codebook", *X6_X10, "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["N"] == 72


def test_semifield(capsys):
    code, rep = run_json(capsys, "semifield", "--field", "n=4,m=1", "--family", "t4-quad", "--nuclei")
    assert code == 0 and rep["commutative"] and rep["associative"]
    assert rep["nuclei"] == {"left": 16, "middle": 16, "right": 16}
    code, rep = run_json(capsys, "semifield", *X6_X10, "--e", "0x3")
    assert code == 0 and rep["e"] == "0x3"
    code, rep = run_json(capsys, "semifield", "--field", "n=3,m=1", "--function", "1,0=1;2,0=1")
    assert code == 1 and "zero divisor" in rep["error"]
    code, _, err = run(capsys, "semifield", "--field", "n=9,m=3", "--family", "kantor", "--param", "chain=9,3", "--param", "zeta=1")
    assert code == 2 and "allow_large" in err


def test_bounds(capsys):
    code, rep = run_json(capsys, "bounds", "72", "8")
    assert code == 0 and rep["levenstein_sq"] == "1/8" and rep["levenstein_sq_float"] == 0.125
    assert rep["welch_sq"] == "8/71"
    code, rep = run_json(capsys, "bounds", "64", "8")
    assert rep["levenstein_sq"] is None and "levenstein_note" in rep
    assert run(capsys, "bounds", "8", "8")[0] == 2


def test_console_script_module():
    out = subprocess.run([sys.executable, "-m", "ppf.cli", "bounds", "6", "2"], capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["levenstein_sq"] == "1/2"
