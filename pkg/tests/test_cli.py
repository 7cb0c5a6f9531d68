from __future__ import annotations

from importlib import resources

import pytest

from grcp import textfmt
from grcp.cli import EXIT_PARSE, EXIT_USAGE, main, run
from grcp.report import parse_structured


def corpus(name):
    return str(resources.files("grcp.corpus").joinpath(name))


def structured(*argv):
    code, text = run([*argv, "--format", "structured"])
    return code, parse_structured(text)


@pytest.mark.parametrize("name", ["estar.grcp", "estar_job.grcp", "two_sink.grcp", "crossed_k2.grcp", "laurent.grcp"])
def test_check_realization_certifies(name):
    code, rec = structured("check-realization", corpus(name))
    assert code == 0 and rec["certificate"] == "windowed-certified" and rec["exit"] == "0"


def test_estar_job_details():
    _, rec = structured("check-realization", corpus("estar_job.grcp"))
    assert rec["instance.dim"] == "25"
    assert rec["check.identity.witness.span"] == "{u, w}"


def test_toeplitz_job_is_refuted_with_witness():
    code, rec = structured("check-realization", corpus("toeplitz_job.grcp"))
    assert code == 1 and rec["certificate"] == "refuted"
    assert rec["check.condition-3.status"] == "fail"
    assert rec["check.condition-3.witness.r"] == "u"


def test_small_window_is_inconclusive():
    code, rec = structured("check-realization", corpus("estar.grcp"), "--window=-1..1", "--wordlen", "2")
    assert code == 2 and rec["certificate"] == "inconclusive-window"


def test_check_grcp1_and_steinberg():
    assert run(["check-grcp1", corpus("crossed_k2.grcp")])[0] == 0
    code, rec = structured("check-steinberg", corpus("estar_htriple.grcp"))
    assert code == 0
    for name in ("htriple-products", "htriple-hypothesis", "htriple-generation", "annihilator-formula", "unperforated"):
        assert rec[f"check.{name}.status"] == "pass"
    assert rec["check.annihilator-formula.witness.span"] == "{(v,0,v)}"


def test_build_lpa():
    code, rec = structured("build-lpa", corpus("estar.grcp"), "--basis")
    assert code == 0 and rec["instance.dim"] == "25"
    assert rec["instance.dims"] == "-2:2 -1:6 0:9 1:6 2:2"
    assert rec["check.confluence.status"] == "pass"
    code, rec = structured("build-lpa", corpus("estar.grcp"), "--toeplitz", "--window=-1..1", "--wordlen", "2")
    assert code == 0 and rec["instance.relations"] == "toeplitz"


def test_build_groupoid_output_parses():
    code, text = run(["build-groupoid", corpus("estar.grcp")])
    assert code == 0
    G = textfmt.doc_groupoid(textfmt.parse(text))
    assert len(G) == 25


@pytest.mark.parametrize("strategy", ["singleton", "maximal"])
def test_decompose(strategy):
    code, rec = structured("decompose", corpus("estar_htriple.grcp"), "--set", "(ef,1,f) (g,0,g)",
                           "--strategy", strategy)
    assert code == 0 and rec["check.decomposition.status"] == "pass"


def test_decompose_not_generated():
    code, rec = structured("decompose", corpus("estar_htriple.grcp"), "--set", "(eg,0,ef)", "--fixed-order")
    assert code in (0, 1)
    code, _ = structured("decompose", corpus("estar_htriple.grcp"), "--set", "(ef,2,v)", "--fixed-order")
    assert code == 1


def test_fuzz_is_seeded():
    a = run(["fuzz", "--seed", "5", "--count", "5"])
    b = run(["fuzz", "--seed", "5", "--count", "5"])
    assert a == b and a[0] == 0


def test_output_is_deterministic():
    assert run(["check-realization", corpus("estar_job.grcp")]) == run(["check-realization", corpus("estar_job.grcp")])


def test_timing_is_opt_in():
    _, rec = structured("check-realization", corpus("laurent.grcp"))
    assert not any(k.startswith("timing") for k in rec)
    _, rec = structured("check-realization", corpus("laurent.grcp"), "--timing")
    assert "timing.total" in rec


def test_prime_field():
    assert run(["check-realization", corpus("crossed_k2.grcp"), "--field", "7"])[0] == 0


def test_exit_codes_for_errors(tmp_path, capsys):
    assert run(["check-realization", str(tmp_path / "missing.grcp")])[0] == EXIT_USAGE
    empty = tmp_path / "empty.grcp"
    empty.write_text("")
    assert run(["check-realization", str(empty)])[0] == EXIT_PARSE
    bad = tmp_path / "bad.grcp"
    bad.write_text(open(corpus("estar.grcp")).read().replace("e = u", "e = nowhere"))
    assert run(["build-lpa", str(bad)])[0] == EXIT_PARSE
    assert "nowhere" in capsys.readouterr().err
    assert run(["check-realization", corpus("estar.grcp"), "--field", "8"])[0] == EXIT_USAGE
    assert run(["check-realization", corpus("estar.grcp"), "--window", "sideways"])[0] == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        run(["no-such-command"])
    assert exc.value.code == EXIT_USAGE


def test_cyclic_graph_is_unsupported(tmp_path):
    loop = tmp_path / "loop.grcp"
    loop.write_text("[document]\nkind = graph\n\n[graph]\nvertices = v\nedges = e\n\n[range]\ne = v\n\n[source]\ne = v\n")
    assert run(["build-groupoid", str(loop)])[0] == EXIT_USAGE


def test_main_writes_stdout(capsys):
    assert main(["check-realization", corpus("laurent.grcp")]) == 0
    assert "certificate: windowed-certified" in capsys.readouterr().out
