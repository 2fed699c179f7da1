import io
import json
import os
import subprocess
import sys

import jsonschema
import pytest

from dserkit.cli import REPORT_SCHEMA, main, parse_config, report_dict, run, to_json, to_markdown
from dserkit.errors import ConfigError, RankTooSmall
from dserkit.identities import LemmaId, SuiteConfig, verify_suite
from dserkit.ring import Modular, Rationals


def test_defaults():
    cfg = parse_config(["verify"], env={})
    s = cfg.suite
    assert s.ring == Modular(10007) and (s.m, s.n, s.seed, s.trials) == (4, 3, 1, 50)
    assert s.lemmas == tuple(LemmaId) and s.mode == "random" and s.threads == 1 and s.fault is None
    assert cfg.format == "json" and cfg.out is None


def test_explicit_options():
    cfg = parse_config(["verify", "--lemma", "c04,L01,L01", "--ring", "rationals", "--m", "3", "--n", "2",
                        "--seed", "9", "--trials", "5", "--mode", "both", "--format", "markdown"],
                       env={"DSER_THREADS": "3"})
    s = cfg.suite
    assert s.lemmas == (LemmaId.L01, LemmaId.C04)
    assert s.ring == Rationals() and (s.m, s.n, s.seed, s.trials, s.mode, s.threads) == (3, 2, 9, 5, "both", 3)
    assert cfg.format == "markdown"


@pytest.mark.parametrize("argv", [
    ["verify", "--ring", "zmod:9"],
    ["verify", "--ring", "zmod:2"],
    ["verify", "--ring", "zmod:x"],
    ["verify", "--ring", "reals"],
    ["verify", "--lemma", ","],
    ["verify", "--lemma", "L99"],
    ["verify", "--m", "0"],
    ["verify", "--trials", "0"],
    ["verify", "--seed", "-1"],
    ["verify", "--format", "xml"],
    ["frobnicate"],
])
def test_bad_configs(argv):
    with pytest.raises(ConfigError):
        parse_config(argv, env={})


def test_bad_thread_count():
    with pytest.raises(ConfigError):
        parse_config(["verify"], env={"DSER_THREADS": "many"})


def test_rank_too_small_names_branches():
    with pytest.raises(RankTooSmall, match="L04"):
        parse_config(["verify", "--lemma", "L04", "--m", "2"], env={})
    assert main(["verify", "--lemma", "L08", "--m", "3"]) == 2


def small_suite(**kw):
    base = dict(ring=Modular(101), m=3, n=2, seed=5, trials=6, lemmas=(LemmaId.L01, LemmaId.L04, LemmaId.C01))
    return SuiteConfig(**(base | kw))


def test_report_validates_and_counts():
    report = verify_suite(small_suite())
    d = report_dict(report, "T")
    jsonschema.validate(d, REPORT_SCHEMA)
    assert report.neither == 0 and d["failures"] == []
    for lem in d["lemmas"]:
        for b in lem["branches"]:
            assert b["cases"] == 6
            assert b["cases"] == sum(b[k] for k in ("matches_both", "proof_only", "statement_only",
                                                    "neither", "statement_absent"))


def test_symbolic_mode_counts_every_case():
    report = verify_suite(small_suite(mode="symbolic", trials=0, lemmas=(LemmaId.L01,)))
    assert report.branch(LemmaId.L01, "i=k")["cases"] == 3 * 2 * 2
    assert report.branch(LemmaId.L01, "i!=k")["cases"] == 6 * 2 * 2
    assert report.neither == 0


def test_same_seed_same_report_and_seed_matters():
    a = to_json(verify_suite(small_suite()), "T")
    assert a == to_json(verify_suite(small_suite()), "T")
    assert a != to_json(verify_suite(small_suite(seed=6)), "T")


def test_parallel_matches_serial():
    serial = to_json(verify_suite(small_suite()), "T")
    assert to_json(verify_suite(small_suite(threads=3)), "T") == serial


def test_fault_is_reported_and_cleared():
    rep = verify_suite(small_suite(fault="l01"))
    assert rep.branch(LemmaId.L01, "i!=k")["neither"] > 0
    assert rep.branch(LemmaId.C01, "i!=k")["neither"] == 0
    f = rep.failures[0]
    assert f["lemma"] == "L01" and {"lhs", "rhs_statement", "rhs_proof", "generators"} <= set(f)
    # the override must not leak into the next run
    assert verify_suite(small_suite()).neither == 0


def test_markdown_layout():
    text = to_markdown(verify_suite(small_suite()), "T")
    assert text.startswith("# dserkit verification report")
    assert "| L04 | otherwise | 6 |" in text
    assert "## Failures" in text and "none" in text


def test_run_writes_file(tmp_path):
    out = tmp_path / "r.json"
    cfg = parse_config(["verify", "--lemma", "L02", "--m", "2", "--n", "1", "--trials", "3",
                        "--out", str(out)], env={})
    buf = io.StringIO()
    assert run(cfg, buf) == 0 and buf.getvalue() == ""
    jsonschema.validate(json.loads(out.read_text()), REPORT_SCHEMA)


def _cli(*args, env=None):
    e = dict(os.environ) | (env or {})
    return subprocess.run([sys.executable, "-m", "dserkit", *args], capture_output=True, text=True, env=e)


def test_exit_codes_via_subprocess():
    ok = _cli("verify", "--lemma", "L01", "--m", "2", "--n", "1", "--trials", "4")
    assert ok.returncode == 0, ok.stderr
    assert json.loads(ok.stdout)["meta"]["config"]["lemmas"] == ["L01"]
    bad = _cli("verify", "--lemma", "L01", "--m", "2", "--n", "1", "--trials", "4", "--inject-fault", "l01")
    assert bad.returncode == 1
    assert _cli("verify", "--ring", "zmod:15").returncode == 2
    assert _cli("verify", "--lemma", "L08", "--m", "3").returncode == 2
