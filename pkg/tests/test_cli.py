import json
import logging
import shutil
import subprocess

import pytest

from lstring.cli import UsageError, main, parse_loop_word
from lstring.lattice import loop_sequence

from conftest import P_WORD


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_loop_word_examples(caplog):
    s = parse_loop_word(P_WORD)
    assert s.size == 1 and s.dim == 2 and s.length == 4
    pp = parse_loop_word(f"{P_WORD} ; {P_WORD}")
    assert pp.size == 2 and pp.ell == 16
    with caplog.at_level(logging.WARNING, logger="lstring"):
        with pytest.raises(UsageError, match="empty sequence"):
            parse_loop_word("@(0,0) +1 -1")
    assert "backtracks erased" in caplog.text
    with pytest.raises(UsageError, match="dimension mismatch"):
        parse_loop_word(P_WORD, dim=3)
    with pytest.raises(UsageError, match="dimension mismatch"):
        parse_loop_word(f"{P_WORD} ; @(0,0,0) +1 +2 -1 -2")
    with pytest.raises(ValueError):
        parse_loop_word("@(0,0) +1 +2")


def test_round_trip_words():
    s = parse_loop_word("@(1,1) +2 +1 +1 -2 -1 -1 ; " + P_WORD)
    again = parse_loop_word(s.word())
    assert again.key == s.key


def test_core_command(capsys):
    code, out, _ = run(capsys, "core", P_WORD, P_WORD)
    rep = json.loads(out)
    assert code == 0 and rep["ell"] == 16 and rep["size"] == 2


def test_catalog_command(capsys):
    code, out, _ = run(capsys, "catalog", P_WORD)
    rep = json.loads(out)
    assert code == 0 and rep["counts"]["NegDeform"] == 8 and len(rep["entries"]) == 33


def test_series_command(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("LSTRING_CACHE", str(tmp_path / "cache"))
    out_path = tmp_path / "series.json"
    code, out, _ = run(capsys, "series", "-k", "0", "--beta", "1e-4", "--imax", "3", P_WORD, "--out", str(out_path))
    rep = json.loads(out)
    assert code == 0
    assert rep["value"] == "0.00005" and rep["coefficients"] == ["0", "1/2", "0", "0"]
    # 1e-4 lies outside the region where the coefficient bound converges
    assert rep["certified"] is False and rep["tail_bound"] == "inf"
    assert json.loads(out_path.read_text()) == rep
    assert out_path.with_suffix(".csv").read_text().splitlines()[2] == "1,1/2"
    assert list((tmp_path / "cache").glob("coefficients-*.json"))


def test_series_command_certified(capsys):
    code, out, _ = run(capsys, "series", "--beta", "1e-20", "--imax", "1", P_WORD)
    rep = json.loads(out)
    assert rep["certified"] is True and rep["tail_bound"] != "inf"


def test_enumerate_command(capsys):
    code, out, _ = run(capsys, "enumerate", "--a", "1", "--b", "0", "--c", "0", "--d", "0", P_WORD)
    rep = json.loads(out)
    assert code == 0 and rep["trajectories"] == 4 and rep["signed_sum"] == "1/2*beta"


def test_enumerate_budget(capsys):
    code, _, err = run(capsys, "enumerate", "--a", "3", "--max-nodes", "5", P_WORD)
    assert code == 2 and "search nodes" in err


def test_coeff_command(capsys):
    code, out, _ = run(capsys, "coeff", "--i", "1", "-k", "0", P_WORD)
    rep = json.loads(out)
    assert rep["a"] == "1/2" and rep["b"] == "1/2"


def test_verify_master_figure7(capsys):
    code, out, _ = run(capsys, "verify-master", "--figure7")
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and rep["weight"] == "-1/226492416000*beta^7"


def test_verify_master_limit(capsys):
    code, out, _ = run(capsys, "verify-master", "-k", "0", "--beta", "1e-20", P_WORD)
    rep = json.loads(out)
    assert code == 0 and rep["ok"] and rep["symmetric"]["certified"]


def test_errors_exit_nonzero(capsys):
    code, _, err = run(capsys, "core", "@(0,0) +1 -1")
    assert code == 2 and "empty sequence" in err
    code, _, err = run(capsys, "core")
    assert code == 2 and "no loop words" in err
    with pytest.raises(SystemExit):
        main(["core", "--no-such-flag", P_WORD])


def test_mc_verify_reproducible(capsys, tmp_path):
    args = ["mc-verify", P_WORD, "--N", "3", "--beta", "0.2", "--sweeps", "3000", "--burn-in", "200", "--seed", "7"]
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert out1 == out2
    rep = json.loads(out1)
    assert rep["provenance"]["seed"] == 7 and len(rep["provenance"]["config_hash"]) == 64
    assert rep["ok"] == (rep["z"] <= 3) and code1 == (0 if rep["ok"] else 1)


def test_mc_estimate_with_config(capsys, tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[run]\nN = 2\nbeta = 0.0\nsweeps = 2000\nburn_in = 100\nseed = 3\n")
    code, out, _ = run(capsys, "mc-estimate", "--config", str(ini), P_WORD)
    rep = json.loads(out)
    assert code == 0 and rep["provenance"]["config"]["N"] == 2
    assert abs(rep["phi"]["mean"]) <= 3 * rep["phi"]["stderr"]


def test_compare_so_su_ladder(capsys, tmp_path):
    out_path = tmp_path / "cmp.json"
    code, out, _ = run(capsys, "compare-so-su", P_WORD, "--beta", "0.0", "--ladder", "2", "3", "--sweeps", "2000",
                       "--burn-in", "100", "--out", str(out_path))
    rep = json.loads(out)
    assert [r["N"] for r in rep["results"]] == [2, 3]
    assert len(out_path.with_suffix(".csv").read_text().splitlines()) == 3
    code, _, err = run(capsys, "compare-so-su", P_WORD, P_WORD)
    assert code == 2 and "single loop" in err


@pytest.mark.skipif(shutil.which("lstring") is None, reason="console script not installed")
def test_console_script():
    out = subprocess.run(["lstring", "core", P_WORD], capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["loops"] == loop_sequence(P_WORD).words()
