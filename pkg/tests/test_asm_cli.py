import json
import re
from collections import Counter

import pytest

from freearrays import ParseError, format_program, parse_program
from freearrays.cli import main
from freearrays.listings import corpus_names, corpus_source


# -- parser ------------------------------------------------------------------

def test_parse_two_instructions():
    prog = parse_program("CONST 1\nRETURN")
    assert [i.op for i in prog.instrs] == ["CONST", "RETURN"]


def test_undefined_label_named():
    with pytest.raises(ParseError, match="missing"):
        parse_program("GOTO missing")


@pytest.mark.parametrize("text, line, column", [
    ("CONST 1\nFROB\n", 2, 1),
    ("CONST\n", 1, 1),
    ("CONST 1\n  IFCMP zz end\nLABEL end\nRETURN", 2, 9),
    ("FREEINT x 5 1", 1, 11),
])
def test_parse_errors_are_located(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_program(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_comments_and_case():
    prog = parse_program("; header\nconst 2 ; two\n\nReturn\n")
    assert [(i.op, i.args) for i in prog.instrs] == [("CONST", (2,)), ("RETURN", ())]


def test_duplicate_label():
    with pytest.raises(ParseError, match="duplicate"):
        parse_program("LABEL a\nLABEL a\nRETURN")


@pytest.mark.parametrize("name", corpus_names())
def test_format_round_trip(name):
    prog = parse_program(corpus_source(name), name)
    text = format_program(prog)
    again = parse_program(text, name)
    assert [(i.op, i.args) for i in again.instrs] == [(i.op, i.args) for i in prog.instrs]
    assert format_program(again) == text


def test_corpus_size():
    assert len(corpus_names()) >= 10


# -- cli ------------------------------------------------------------------------

def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_listing2_text(capsys):
    code, out, _ = run_cli(capsys, "run", "listing2")
    values = [int(line.split()[1]) for line in out.splitlines()]
    assert code == 0 and values == [0, 2, 4, 6, 8, 10]


@pytest.mark.parametrize("strategy", ["label", "symbolic", "delayed"])
def test_listing2_json_any_strategy(capsys, strategy):
    code, out, _ = run_cli(capsys, "run", "corpus:listing2", "--strategy", strategy, "--format", "json")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and [r["value"] for r in recs] == [0, 2, 4, 6, 8, 10]


def test_sort3_first(capsys):
    code, out, _ = run_cli(capsys, "run", "sort3", "--max-solutions", "1", "--format", "json")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and len(recs) == 1 and recs[0]["value"] == sorted([2, 1, 3])


def test_oob_exception(capsys):
    code, out, _ = run_cli(capsys, "run", "oob", "--format", "json")
    recs = [json.loads(line) for line in out.splitlines()]
    assert [(r["kind"], r["value"]) for r in recs] == [("exception", "ArrayIndexOutOfBoundsException")]


def test_no_solutions_exit_2(capsys, tmp_path):
    path = tmp_path / "fail.fal"
    path.write_text("FAIL\n")
    assert run_cli(capsys, "run", str(path))[0] == 2


def test_parse_error_exit_1(capsys, tmp_path):
    path = tmp_path / "bad.fal"
    path.write_text("CONST 1\nNOPE\n")
    code, _, err = run_cli(capsys, "run", str(path))
    assert code == 1 and "line 2" in err


def test_missing_file_exit_1(capsys):
    assert run_cli(capsys, "run", "/nonexistent/x.fal")[0] == 1


def test_budget_exit_1(capsys, tmp_path):
    path = tmp_path / "loop.fal"
    path.write_text("LABEL top\nGOTO top\n")
    assert run_cli(capsys, "run", str(path), "--step-budget", "100")[0] == 1


def test_pending_delayed_exit_1(capsys):
    code, _, err = run_cli(capsys, "run", "delayed", "--strategy", "delayed", "--no-label")
    assert code == 1 and "delayed" in err


def test_stats_json(capsys):
    code, out, _ = run_cli(capsys, "run", "delayed", "--strategy", "delayed", "--format", "json", "--stats")
    last = json.loads(out.splitlines()[-1])
    assert last["kind"] == "stats" and last["stats"]["delayed_singleton_checks"] > 0


def _parse_text(line):
    parts = line.split("  ")
    kind, value = parts[0], parts[1]
    fields = {"bindings": {}, "arrays": {}}
    for part in parts[2:]:
        head, _, body = part.partition(": ")
        if head in fields:
            fields[head] = json.loads("{" + re.sub(r"([A-Za-z_][\w.$]*)=", r'"\1": ', body) + "}")
    try:
        value = json.loads(value)
    except ValueError:
        pass
    return json.dumps([kind, value, fields["bindings"], fields["arrays"]], sort_keys=True)


@pytest.mark.parametrize("name", ["listing1", "bounds", "nested", "initializer"])
def test_text_and_json_agree(capsys, name):
    _, text, _ = run_cli(capsys, "run", name)
    _, js, _ = run_cli(capsys, "run", name, "--format", "json")
    from_text = Counter(_parse_text(line) for line in text.splitlines())
    from_json = Counter(json.dumps([r["kind"], r["value"], r["bindings"], r["arrays"]], sort_keys=True)
                        for r in map(json.loads, js.splitlines()))
    assert from_text == from_json


@pytest.mark.parametrize("name", corpus_names())
@pytest.mark.parametrize("strategy", ["label", "symbolic", "delayed"])
def test_check_never_fails(capsys, name, strategy):
    code, _, err = run_cli(capsys, "run", name, "--strategy", strategy, "--check", "--max-len", "4")
    assert code in (0, 2), err


def test_fmt_and_corpus(capsys):
    code, out, _ = run_cli(capsys, "fmt", "listing2")
    assert code == 0 and parse_program(out).instrs
    code, out, _ = run_cli(capsys, "corpus")
    assert code == 0 and "listing2" in out.split()
