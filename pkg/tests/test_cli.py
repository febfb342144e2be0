import io
import json
import subprocess
import sys

import pytest

from homing.analysis import equivalence
from homing.cli import main
from homing.counters import counter_machine_to_dict
from homing.gallery import gallery_all, gallery_thm1_dim2
from homing.machine import dumps_machine, load_machine

from test_counters import anbn_blind, anbn_zero_testing


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_run_accepts():
    assert call("run", "gallery:upow", "aaa") == (0, "accept\n", "")


def test_run_rejects():
    code, out, _ = call("run", "gallery:upow", "aaaa")
    assert (code, out) == (1, "reject\n")


def test_run_stats_and_empty_word():
    code, out, _ = call("run", "gallery:thm1_dim2", "", "--stats")
    assert code == 0
    assert out.splitlines() == ["accept", "steps=0 max_configs=1 max_entry=1"]
    assert call("run", "gallery:thm1_dim2", "ε")[0] == 0


def test_run_csv_symbols():
    assert call("run", "gallery:mpal_2", "a_1,a_2,#,a_2,a_1")[1] == "accept\n"
    assert call("run", "gallery:mpal_2", "a_1,#,a_2", "--symbols", "csv")[1] == "reject\n"


def test_run_unknown_symbol():
    code, _, err = call("run", "gallery:upow", "ab")
    assert code == 2 and err.startswith("error: invalid-input:")


def test_run_budget():
    code, _, err = call("run", "gallery:upow", "a" * 30, "--max-configs", "2")
    assert code == 3 and err.startswith("error: budget:")


def test_trace_output():
    code, out, _ = call("trace", "gallery:subsetsum_r", "1#")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "0 ε: t0: 0 0 1 1 1"
    assert lines[-1] == "2 1#: block: 1 0 1 1 1"


def test_trace_dead():
    _, out, _ = call("trace", "gallery:pow", "ba")
    assert out.splitlines()[-1] == "2 ba: (dead)"


def test_enum():
    code, out, _ = call("enum", "gallery:upow", "--maxlen", "12")
    assert code == 0 and out.split() == ["aaa", "aaaaaa", "aaaaaaaaaaa"]
    assert call("enum", "gallery:mpal_2", "--maxlen", "1")[1] == "#\n"


def test_verify_defaults_to_own_oracle():
    code, out, _ = call("verify", "gallery:thm1_dim2", "--maxlen", "14")
    assert code == 0 and out.startswith("pass: 32767 words up to length 14")


def test_verify_with_other_oracle():
    code, out, _ = call("verify", "gallery:thm1_dim1", "--oracle", "thm1_dim2", "--maxlen", "8")
    assert code == 0
    code, out, _ = call("verify", "gallery:pow", "--oracle", "thm1_dim2", "--maxlen", "4")
    assert code == 1 and out.startswith("disagreement at")
    code, _, err = call("verify", "gallery:pow", "--oracle", "nope", "--maxlen", "4")
    assert code == 2 and err.startswith("error: unknown-oracle:")


def test_verify_file_needs_oracle(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(dumps_machine(gallery_thm1_dim2().machine))
    assert call("verify", str(path), "--maxlen", "3")[0] == 64
    assert call("verify", str(path), "--oracle", "thm1_dim2", "--maxlen", "10")[0] == 0


def test_equiv():
    assert call("equiv", "gallery:thm1_dim2", "gallery:thm1_dim1", "--maxlen", "10")[0] == 0
    code, out, _ = call("equiv", "gallery:thm1_dim2", "gallery:pow", "--maxlen", "10")
    assert code == 1 and out.startswith("disagreement at 'ε'")
    code, _, err = call("equiv", "gallery:pow", "gallery:upow", "--maxlen", "3")
    assert code == 2


@pytest.mark.parametrize(
    "args,expected",
    [
        (("--k", "2", "10"), "2 3"),
        (("--k", "2", "011"), "5 2"),
        (("--k", "2", ""), "1 1"),
        (("--k", "3", "1"), "3 1 1"),
        (("--k", "3", "a_1,a_3"), "3 1 5"),
        (("--k", "3", "ε"), "1 1 1"),
    ],
)
def test_encode(args, expected):
    assert call("encode", *args) == (0, expected + "\n", "")


def test_encode_errors():
    assert call("encode", "--k", "3", "4")[0] == 2
    assert call("encode", "--k", "3", "x")[0] == 2


@pytest.mark.parametrize(
    "args,expected",
    [(("--k", "2", "3 5"), "010"), (("--k", "2", "1 1"), "ε"), (("--k", "3", "3 1 1"), "a_1")],
)
def test_decode(args, expected):
    assert call("decode", *args) == (0, expected + "\n", "")


def test_decode_invalid():
    code, out, err = call("decode", "--k", "2", "2 2")
    assert code == 2 and out == ""
    assert err.startswith("error: invalid-encoding: ")
    assert call("decode", "--k", "3", "2 2 1")[0] == 2
    assert call("decode", "--k", "2", "x y")[0] == 2


def test_compile_counter(tmp_path):
    for cm in (anbn_blind(), anbn_zero_testing()):
        src = tmp_path / f"{cm.name}.json"
        src.write_text(json.dumps(counter_machine_to_dict(cm)))
        code, out, _ = call("compile-counter", str(src))
        assert code == 0
        dst = tmp_path / f"{cm.name}_hva.json"
        dst.write_text(out)
        hva = load_machine(dst)
        assert hva.dimension == 2
        assert call("run", str(dst), "aabb")[0] == 0
        assert call("run", str(dst), "aab")[0] == 1


def test_compile_counter_errors(tmp_path):
    assert call("compile-counter", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("[]")
    assert call("compile-counter", str(bad))[0] == 2


def test_gallery_list():
    code, out, _ = call("gallery", "list")
    names = [line.split("\t")[0] for line in out.splitlines()]
    assert code == 0 and names == [e.name for e in gallery_all()]
    assert "upow\tNBHVA(3)" in out
    assert "thm1_dim2\tDHVA(2)" in out


@pytest.mark.parametrize("entry", gallery_all(), ids=lambda e: e.name)
def test_gallery_export_round_trip(entry, tmp_path):
    code, out, _ = call("gallery", "export", entry.name)
    assert code == 0
    path = tmp_path / "m.json"
    path.write_text(out)
    loaded = load_machine(path)
    maxlen = 10 if len(entry.alphabet) <= 3 else 7
    assert equivalence(loaded, entry.machine, maxlen).passed


def test_gallery_verify():
    code, out, _ = call("gallery", "verify", "thm1_dim2", "--maxlen", "14")
    assert code == 0 and out.startswith("pass:")
    assert call("gallery", "verify", "nope")[0] == 2
    assert call("gallery", "export")[0] == 64


def test_bound():
    assert call("bound", "--s", "1", "--m", "1", "--k", "1", "--n", "1") == (
        0,
        "entry_bound 1\nconfig_bound 3\n",
        "",
    )
    assert call("bound", "--s", "1", "--m", "1", "--k", "2", "--n", "3")[1].startswith("entry_bound 8\n")
    assert call("bound", "--s", "0", "--m", "1", "--k", "2", "--n", "3")[0] == 2


def test_audit():
    code, out, _ = call("audit", "gallery:thm1_dim1", "--maxlen", "10")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "thm1_dim1: m=2 k=1 s=4"
    assert lines[-1] == "violations: 0"
    assert len(lines) == 13


def even_machine_file(tmp_path):
    d = {
        "name": "even",
        "dimension": 1,
        "alphabet": ["a"],
        "states": ["p"],
        "initial_state": "p",
        "accept_states": ["p"],
        "deterministic": True,
        "blind": True,
        "initial_vector": ["1"],
        "transitions": [{"from": "p", "symbol": "a", "guard": "any", "to": "p", "matrix": [["-1"]]}],
    }
    path = tmp_path / "even.json"
    path.write_text(json.dumps(d))
    return path


def test_unary_dfa(tmp_path):
    path = even_machine_file(tmp_path)
    code, out, _ = call("unary-dfa", str(path), "--budget", "10")
    assert code == 0
    assert json.loads(out) == {"states": 2, "initial": 0, "accepting": [0], "successor": [1, 0], "symbol": "a"}
    target = tmp_path / "dfa.json"
    assert call("unary-dfa", str(path), "--budget", "10", "-o", str(target)) == (0, "", "")
    assert json.loads(target.read_text())["states"] == 2


def test_unary_dfa_rejects_unsuitable_machines():
    code, out, _ = call("unary-dfa", "gallery:upow", "--budget", "5")
    assert code == 2  # nondeterministic
    code, out, _ = call("unary-dfa", "gallery:thm1_dim2", "--budget", "5")
    assert code == 2  # not unary


def test_unary_dfa_undetermined(tmp_path):
    path = even_machine_file(tmp_path)
    d = json.loads(path.read_text())
    d["transitions"][0]["matrix"] = [["2"]]
    path.write_text(json.dumps(d))
    code, out, _ = call("unary-dfa", str(path), "--budget", "10")
    assert code == 1 and out.startswith("undetermined:")


def test_missing_file():
    code, _, err = call("run", "/nonexistent/machine.json", "a")
    assert code == 2 and err.startswith("error: io:")


def test_invalid_file_lists_violations(tmp_path):
    d = json.loads(dumps_machine(gallery_thm1_dim2().machine))
    d["blind"] = True
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(d))
    code, _, err = call("run", str(path), "ab")
    lines = err.splitlines()
    assert code == 2
    assert lines[0].startswith("error: invalid-machine:")
    assert len(lines) == 3 and all(line.startswith("  transition #") for line in lines[1:])


def test_unknown_gallery_entry():
    code, _, err = call("run", "gallery:nope", "a")
    assert code == 2 and err.startswith("error: unknown-machine:")


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["run"], ["bound", "--s", "1"], ["run", "gallery:upow", "a", "--bogus"]])
def test_usage_errors(argv):
    code, _, err = call(*argv)
    assert code == 64 and err.startswith("error: usage:")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "homing", "run", "gallery:upow", "aaa"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout == "accept\n"
