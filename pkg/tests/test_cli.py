import json

import jsonschema
import pytest

from sprime.cli import main
from sprime.harness import theorem_ids
from sprime.instance import load_schema

Z12 = {
    "ring": {"zmod": 12},
    "module": {"regular": {"zmod": 12}},
    "subsets": {"S": {"kind": "msystem", "elements": [4]},
                "P": {"kind": "submodule", "elements": [0, 6]},
                "Q": {"kind": "submodule", "elements": [0, 3, 6, 9]}},
}


@pytest.fixture()
def z12_doc(tmp_path):
    p = tmp_path / "z12.json"
    p.write_text(json.dumps(Z12))
    return str(p)


@pytest.fixture(scope="module")
def report_schema():
    return load_schema("report.schema.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    docs = [json.loads(line) for line in out.out.splitlines() if line.startswith("{")]
    return code, docs, out.err


def test_s_prime_with_witness(capsys, z12_doc, report_schema):
    code, [doc], _ = run(capsys, "check", "is-s-prime-submodule", z12_doc, "--P", "P", "--S", "S")
    assert code == 0 and doc["holds"] is True and doc["witness"]["s"] == 4
    jsonschema.validate(doc, report_schema)


def test_not_prime_with_counterexample(capsys, z12_doc, report_schema):
    code, [doc], _ = run(capsys, "check", "is-prime-submodule", z12_doc, "--P", "P")
    assert code == 0 and doc["holds"] is False
    m, a = doc["counterexample"]["m"], doc["counterexample"]["a"]
    # m R a inside P, m outside P, a outside (P :_R M) = {0,6}
    assert all((m * r * a) % 12 in (0, 6) for r in range(12))
    assert m not in (0, 6) and a not in (0, 6)
    jsonschema.validate(doc, report_schema)


def test_colon_commands(capsys, z12_doc):
    _, [doc], _ = run(capsys, "check", "colon", z12_doc, "--of", "P", "--over", "M")
    assert doc["result"] == [0, 6]
    _, [doc], _ = run(capsys, "check", "colon", z12_doc, "--of", "P", "--by-element", "4")
    assert doc["result"] == [0, 3, 6, 9]
    _, [doc], _ = run(capsys, "check", "is-prime-submodule", z12_doc, "--P", "Q")
    assert doc["holds"] is True


def test_witness_re_verifies(capsys, z12_doc, tmp_path):
    _, [doc], _ = run(capsys, "check", "is-s-prime-submodule", z12_doc, "--P", "P", "--S", "S",
                      "--mode", "uniform")
    s = doc["witness"]["s"]
    # feed the witness back as a one-element m-system
    again = dict(Z12, subsets=dict(Z12["subsets"], W={"kind": "msystem", "elements": [s]}))
    path = tmp_path / "again.json"
    path.write_text(json.dumps(again))
    _, [doc2], _ = run(capsys, "check", "is-s-prime-submodule", str(path), "--P", "P", "--S", "W")
    assert doc2["holds"] is True and doc2["witness"]["s"] == s


def test_generate_and_msystem(capsys, z12_doc):
    _, [doc], _ = run(capsys, "check", "generate", z12_doc, "--gens", "8", "--kind", "ideal")
    assert doc["result"] == [0, 4, 8]
    _, [doc], _ = run(capsys, "check", "is-msystem", z12_doc, "--S", "S")
    assert doc["holds"] is True


def test_other_predicates(capsys, z12_doc, report_schema):
    for argv in (["is-multiplication"], ["is-s-multiplication", "--S", "S"],
                 ["is-s-finite", "--N", "Q", "--S", "S", "--max-gens", "1"],
                 ["is-s-noetherian", "--S", "S"], ["is-s-noetherian", "--S", "S", "--ring"],
                 ["is-s-prime-submodule", "--P", "P", "--S", "S", "--form", "ideal"],
                 ["is-s-prime-submodule", "--P", "P", "--S", "S", "--mode", "per-pair"]):
        code, [doc], _ = run(capsys, "check", argv[0], z12_doc, *argv[1:])
        assert code == 0 and doc["holds"] is True, argv
        jsonschema.validate(doc, report_schema)


def test_figure_written(capsys, z12_doc, tmp_path):
    fig = tmp_path / "lattice.png"
    code, [doc], _ = run(capsys, "check", "is-s-prime-submodule", z12_doc, "--P", "P", "--S", "S",
                         "--figure", str(fig))
    assert code == 0 and fig.read_bytes()[:4] == b"\x89PNG"


def test_exit_codes(capsys, z12_doc, tmp_path):
    assert run(capsys, "verify", "thm-0.0")[0] == 2
    assert run(capsys, "check", "is-s-prime-submodule", z12_doc, "--P", "P")[0] == 2
    assert run(capsys, "check", "nonsense", z12_doc)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"ring": {"zmod": 4},
                               "subsets": {"S": {"kind": "msystem", "elements": [2]}}}))
    code, _, err = run(capsys, "check", "is-msystem", str(bad), "--S", "S")
    assert code == 3 and "not an m-system" in err
    # prime and disjoint from S, so S-prime
    code, [doc], _ = run(capsys, "check", "is-s-prime-submodule", z12_doc, "--P", "Q", "--S", "S")
    assert code == 0 and doc["holds"] is True
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert run(capsys, "check", "is-multiplication", str(broken))[0] == 2


def test_s_meeting_colon_is_validation_error(capsys, tmp_path):
    doc = dict(Z12, subsets={"S": {"kind": "msystem", "elements": [4]},
                             "P": {"kind": "submodule", "elements": [0, 4, 8]}})
    path = tmp_path / "meet.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "check", "is-s-prime-submodule", str(path), "--P", "P", "--S", "S")
    assert code == 3 and "NotDisjoint" in err


def test_verify_and_figures(capsys, tmp_path, report_schema):
    corpus = tmp_path / "corpus.json"
    corpus.write_text(json.dumps({"rings": [{"zmod": 6}], "products": []}))
    figs = tmp_path / "figs"
    code, docs, _ = run(capsys, "verify", "all", "--corpus", str(corpus), "--figures", str(figs))
    assert code == 0 and len(docs) == len(theorem_ids())
    for d in docs:
        jsonschema.validate(d, report_schema)
        assert d["passed"]
    assert (figs / "theorem_summary.png").exists()


def test_search_and_list(capsys, tmp_path):
    corpus = tmp_path / "corpus.json"
    corpus.write_text(json.dumps({"rings": [{"zmod": 2}], "products": [], "n_max": 3}))
    code, [doc], _ = run(capsys, "search", "thm-2.13/smult", "--corpus", str(corpus))
    assert code == 0 and doc["violation_count"] > 0
    code, [doc], _ = run(capsys, "list")
    assert "thm-2.13" in doc["theorems"] and "thm-2.16/ker" in doc["toggles"]
    assert run(capsys, "search", "nope")[0] == 2
    assert run(capsys, "verify", "all", "--corpus", str(tmp_path / "missing.json"))[0] == 2


def test_schema_and_corpus_commands(capsys):
    assert main(["schema", "instance"]) == 0
    assert "$schema" in json.loads(capsys.readouterr().out)
    assert main(["corpus"]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 0
