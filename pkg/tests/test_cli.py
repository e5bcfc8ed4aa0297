import json

import pytest

from isoltest.cli import main
from isoltest.lts import aut_read


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_eight_sources_minimized(capsys, tmp_path):
    code, out, _ = run(capsys, "build-lts", "--sources", 8, "--minimize", "strong", "--out", tmp_path / "m.aut")
    assert code == 0
    assert "182 states, 558 transitions, 99 labels" in out
    assert aut_read(tmp_path / "m.aut").n_states == 182


def test_zero_sources_is_usage_error(capsys):
    assert run(capsys, "build-lts", "--sources", 0)[0] == 2


def test_single_source_has_no_reject(capsys, tmp_path):
    code, _, _ = run(capsys, "build-lts", "--sources", 1, "--out", tmp_path / "one.aut")
    assert code == 0
    assert not any(lab.gate.startswith("Reject_") for lab in aut_read(tmp_path / "one.aut").labels)


def test_missing_command(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "gen-ctg")[0] == 2


def test_compare(capsys, tmp_path):
    e, mt, bad = tmp_path / "e.aut", tmp_path / "mt.aut", tmp_path / "bad.aut"
    run(capsys, "build-lts", "--out", e)
    run(capsys, "build-lts", "--sources", 1, "--multitasking", "--out", mt)
    run(capsys, "build-lts", "--mutation", "drop-security-check", "--out", bad)
    assert run(capsys, "compare", e, e)[0] == 0
    assert run(capsys, "compare", e, mt, "--drop-ids", "--hide", "Config")[0] == 0
    code, out, _ = run(capsys, "compare", e, bad)
    assert code == 1
    assert "Grant_Read" in out.split("trace:")[1]


def test_gen_ctg_scenario1(capsys, tmp_path):
    code, out, _ = run(capsys, "gen-ctg", "--scenario", 1, "--out", tmp_path / "s1")
    assert code == 0
    assert out.startswith("183 states")
    assert "choices 384" in out
    side = json.loads((tmp_path / "s1.json").read_text())
    assert side["states"] == 183 and len(side["pass"]) == 1


def test_artifacts_are_byte_identical(capsys, tmp_path):
    for d in ("a", "b"):
        (tmp_path / d).mkdir()
        run(capsys, "gen-ctg", "--scenario", 3, "--out", tmp_path / d / "c")
        run(capsys, "gen-suite", "--scenario", 1, "--out", tmp_path / d / "s.json")
    for name in ("c.aut", "c.json", "s.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_infer_scenario1(capsys):
    code, out, _ = run(capsys, "infer", "--scenario", 1)
    assert code == 0
    assert "4 steps" in out
    assert "target_reject_protection" in out.splitlines()[-2]


def test_infer_sample_is_seeded(capsys):
    a = run(capsys, "infer", "--scenario", 1, "--select", "sample", "--seed", 4)[1]
    b = run(capsys, "infer", "--scenario", 1, "--select", "sample", "--seed", 4)[1]
    assert a == b


def test_run_suite_with_mutation(capsys, tmp_path):
    suite = tmp_path / "s1.json"
    run(capsys, "gen-suite", "--scenario", 1, "--out", suite)
    code, out, _ = run(capsys, "run-suite", "--suite", suite)
    assert code == 0 and "FAIL 0" in out
    code, out, _ = run(capsys, "run-suite", "--suite", suite, "--mutation", "drop-security-check")
    assert code == 1
    fails = int(out.split("FAIL")[1])
    assert fails >= 1
    assert run(capsys, "run-suite", "--suite", suite, "--mutation", "drop-security-check", "--expect-fail")[0] == 0


def test_run_suite_digest_warning(capsys, tmp_path):
    suite = tmp_path / "s1.json"
    run(capsys, "gen-suite", "--scenario", 1, "--out", suite)
    code, _, err = run(capsys, "run-suite", "--suite", suite, "--sources", 2)
    assert "warning" in err


def test_bad_tp_file(capsys, tmp_path):
    tp = tmp_path / "bad.tp"
    tp.write_text("purpose p is Foo(*); accept end purpose\n")
    code, _, err = run(capsys, "gen-ctg", "--tp", tp)
    assert code == 2
    assert "bad.tp:1:14" in err


def test_empty_ctg(capsys, tmp_path):
    tp = tmp_path / "never.tp"
    tp.write_text("purpose never is Grant_Write(42); accept end purpose\n")
    code, _, err = run(capsys, "gen-ctg", "--tp", tp)
    assert code == 1 and "EMPTY_CTG" in err


def test_unsatisfiable_intent(capsys, tmp_path):
    vi = tmp_path / "never.vi"
    vi.write_text("intent never { target_grant_protection g; activity { g; } constraint g.in.src_sec == nonsecure; }\n")
    code, _, err = run(capsys, "infer", "--vi", vi)
    assert code == 1 and "UNSATISFIABLE" in err


def test_state_limit_env(capsys, monkeypatch):
    monkeypatch.setenv("ISOLTEST_STATE_LIMIT", "50")
    code, _, err = run(capsys, "build-lts", "--sources", 8)
    assert code == 1 and "limit" in err


def test_params_file(capsys, tmp_path):
    p = tmp_path / "soc.params"
    p.write_text("sources = 1\nsource.1 = secure privileged data1\n")
    code, out, _ = run(capsys, "build-lts", "--params", p)
    assert code == 0
    assert out == run(capsys, "build-lts", "--sources", 1)[1]
    bad = tmp_path / "bad.params"
    bad.write_text("sources = 1\nsource.1 = secure privileged data7\n")
    assert run(capsys, "build-lts", "--params", bad)[0] == 2


def test_extended(capsys, tmp_path):
    code, out, _ = run(capsys, "extended", "--out", tmp_path / "ext.json")
    assert code == 0
    assert "one test with" in out
    assert len(json.loads((tmp_path / "ext.json").read_text())["tests"]) == 1


def test_repro_quick(capsys):
    code, out, _ = run(capsys, "repro", "--quick")
    assert code == 0
    assert "0 hard criteria missed" in out
    assert "decision states" in out
