import json

import pytest

from pattern_forge.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_usage(capsys, *argv):
    with pytest.raises(SystemExit) as err:
        main(list(argv))
    out = capsys.readouterr()
    return err.value.code, out.err


# -- search ------------------------------------------------------------------

def test_search_found_exit_zero(capsys):
    code, out, _ = run(capsys, "search", "--n", "2", "--m", "5",
                       "--l-max", "3")
    assert code == 0
    data = json.loads(out)
    assert data["status"] == "found"
    assert data["pattern"]["m"] == 5


def test_search_exhausted_exit_one(capsys):
    code, out, _ = run(capsys, "search", "--n", "3", "--m", "0",
                       "--entry-bound", "2", "--l-max", "4")
    assert code == 1
    assert json.loads(out)["status"] == "exhausted"


def test_search_inconclusive_exit_two(capsys):
    code, out, _ = run(capsys, "search", "--n", "3", "--m", "2",
                       "--l-max", "8", "--node-cap", "3")
    assert code == 2
    assert json.loads(out)["status"] == "inconclusive"


def test_search_missing_flag_is_usage_error(capsys):
    code, err = run_usage(capsys, "search", "--n", "3", "--m", "2")
    assert code == 64
    assert "--l-max" in err


def test_search_m0_requires_entry_bound(capsys):
    code, err = run_usage(capsys, "search", "--n", "3", "--m", "0",
                          "--l-max", "4")
    assert code == 64
    assert "entry-bound" in err


def test_search_out_file_embeds_manifest(tmp_path, capsys):
    out_file = tmp_path / "result.json"
    code, out, _ = run(capsys, "search", "--n", "2", "--m", "3",
                       "--l-max", "3", "--out", str(out_file))
    assert code == 0
    payload = json.loads(out_file.read_text())
    assert payload["result"] == json.loads(out)
    manifest = payload["manifest"]
    assert manifest["command"] == "search"
    assert manifest["version"]
    assert manifest["outputs"] == [str(out_file)]
    assert manifest["config"]["n"] == 2


def test_search_threads_do_not_change_output(capsys):
    argv = ["search", "--n", "3", "--m", "2", "--l-max", "8"]
    _, out1, _ = run(capsys, *argv, "--threads", "1")
    _, out8, _ = run(capsys, *argv, "--threads", "8")
    assert out1 == out8


def test_threads_env_fallback(capsys, monkeypatch):
    monkeypatch.setenv("PATTERN_FORGE_THREADS", "4")
    code, out, _ = run(capsys, "search", "--n", "2", "--m", "2",
                       "--l-max", "3")
    assert code == 0


# -- colour ------------------------------------------------------------------

def test_colour_sum_squares(capsys):
    code, out, _ = run(capsys, "colour", "--id", "sum_squares",
                       "--element", "[1,-1,0]")
    assert code == 0
    assert out.strip() == "2"


def test_colour_valuation(capsys):
    code, out, _ = run(capsys, "colour", "--id", "valuation:a=2",
                       "--element", "[4,3,0]")
    assert code == 0
    assert out.strip() == "0"


def test_colour_delta(capsys):
    code, out, _ = run(capsys, "colour", "--id", "delta",
                       "--branches", '["000","010"]')
    assert code == 0
    assert out.strip() == '[["TOP",1],[1,"TOP"]]'


def test_colour_product_sigma_with_group(capsys):
    group = json.dumps({"factors": [{"kind": "prime_power", "p": 3, "k": 1},
                                    {"kind": "prime_power", "p": 5, "k": 1}]})
    code, out, _ = run(capsys, "colour", "--id", "product_sigma",
                       "--element", "[1,2]", "--group", group)
    assert code == 0
    assert out.strip() == "[[1],[2]]"


def test_colour_product_sigma_without_group_is_usage_error(capsys):
    code, err = run_usage(capsys, "colour", "--id", "product_sigma",
                          "--element", "[1,2]")
    assert code == 64


def test_colour_unknown_id(capsys):
    code, err = run_usage(capsys, "colour", "--id", "mystery",
                          "--element", "[1]")
    assert code == 64


# -- verify ------------------------------------------------------------------

def test_verify_lemma31(capsys):
    code, out, _ = run(capsys, "verify", "--claim", "lemma3.1",
                       "--dim", "2", "--bound", "2")
    assert code == 0
    assert json.loads(out)["status"] == "verified"


def test_verify_thm41(capsys):
    code, out, _ = run(capsys, "verify", "--claim", "thm4.1",
                       "--kappa", "2", "--max-set", "2")
    assert code == 0


def test_verify_thm54_group_json(capsys):
    group = json.dumps({"factors": [{"kind": "prime_power", "p": 3, "k": 1},
                                    {"kind": "prime_power", "p": 3, "k": 1}]})
    code, out, _ = run(capsys, "verify", "--claim", "thm5.4",
                       "--group", group)
    assert code == 0
    assert json.loads(out)["claim"] == "thm5.4"


def test_verify_counterexample_exit_one(capsys):
    code, out, _ = run(capsys, "verify", "--claim", "thm3.2",
                       "--dim", "3", "--bound", "1", "--n", "2")
    assert code == 1
    assert json.loads(out)["status"] == "counterexample"


def test_verify_unknown_claim(capsys):
    code, err = run_usage(capsys, "verify", "--claim", "thm9.9")
    assert code == 64


def test_verify_missing_claim_flag(capsys):
    code, err = run_usage(capsys, "verify", "--claim", "lemma3.1",
                          "--dim", "2")
    assert code == 64
    assert "--bound" in err


def test_verify_thm56(capsys):
    code, out, _ = run(capsys, "verify", "--claim", "thm5.6", "--a", "2",
                       "--dim", "1", "--bound", "1")
    assert code == 0


def test_verify_thm23_standard_basis(capsys):
    group = json.dumps({"factors": [{"kind": "cyclic", "m": 5}] * 5})
    code, out, _ = run(capsys, "verify", "--claim", "thm2.3",
                       "--group", group, "--alphas", "0,1", "--beta", "2",
                       "--gammas", "3,4", "--colouring", "product_sigma")
    assert code == 0
    assert json.loads(out)["status"] == "verified"


def test_verify_thm51_shadow(capsys):
    group = json.dumps({"factors": [{"kind": "cyclic", "m": 3}] * 3})
    elements = json.dumps([[1, 2, 0], [0, 1, 2]])
    code, out, _ = run(capsys, "verify", "--claim", "thm5.1-shadow",
                       "--group", group, "--elements", elements)
    assert code == 0
    data = json.loads(out)
    assert data["claim"] == "thm5.1-shadow"
    assert data["status"] == "verified"


# -- bench -------------------------------------------------------------------

def test_bench_known_workload(capsys):
    code, out, _ = run(capsys, "bench", "--workload", "search-n2-m3")
    assert code == 0
    report = json.loads(out)
    assert report["workload"] == "search-n2-m3"
    assert report["nodes"] > 0
    assert "wall_seconds" in report


def test_bench_unknown_workload(capsys):
    code, err = run_usage(capsys, "bench", "--workload", "none")
    assert code == 64
