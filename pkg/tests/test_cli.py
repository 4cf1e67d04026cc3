"""The `gamiso` command: exit codes, output shapes, JSON stability."""

import io
import json

import pytest

from gamiso.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# --------------------------------------------------------------- exit codes

def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_missing_command_exits_2():
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 2


def test_parse_error_exits_2(capsys):
    code, _, err = run(capsys, "parse", "fun x ->")
    assert code == 2 and "error" in err


def test_unknown_strategy_exits_2(capsys):
    code, _, err = run(capsys, "extract", "mystery")
    assert code == 2 and "unknown strategy" in err


# ------------------------------------------------------------------- theory

def test_iso_positive(capsys):
    code, out, _ = run(capsys, "iso", "var[bool]",
                       "(bool -> unit) * (unit -> bool)")
    assert code == 0 and out.strip() == "isomorphic"


def test_iso_reflexive_on_unit(capsys):
    code, out, _ = run(capsys, "iso", "unit", "unit")
    assert code == 0 and out.strip() == "isomorphic"


def test_iso_negative(capsys):
    code, out, _ = run(capsys, "iso", "unit", "bool")
    assert code == 1 and out.strip() == "not isomorphic"


def test_iso_json(capsys):
    code, out, _ = run(capsys, "iso", "unit", "unit", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["format"] == "decision/1" and doc["isomorphic"]


def test_nf(capsys):
    code, out, _ = run(capsys, "nf", "bool * unit")
    assert code == 0 and out.strip() == "bool"


def test_coerce_positive(capsys):
    code, out, _ = run(capsys, "coerce", "bool * unit", "bool")
    assert code == 0 and "forward" in out and "backward" in out


def test_coerce_negative(capsys):
    code, _, err = run(capsys, "coerce", "unit", "bool")
    assert code == 1 and "not isomorphic" in err


# ---------------------------------------------------------------- language

def test_parse_pretty(capsys):
    code, out, _ = run(capsys, "parse", "fun x: bool -> x")
    assert code == 0 and out.strip() == "fun x: bool -> x"


def test_parse_json_ast(capsys):
    code, out, _ = run(capsys, "parse", "<true, skip>", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["format"] == "term/1"
    assert doc["ast"]["node"] == "Pair"


def test_typecheck_reports_the_type(capsys):
    code, out, _ = run(capsys, "typecheck", "fun f: bool -> unit -> f true")
    assert code == 0 and out.strip() == "(bool -> unit) -> unit"


def test_typecheck_with_free_vars(capsys):
    code, out, _ = run(capsys, "typecheck", "f skip",
                       "--var", "f=unit -> bool")
    assert code == 0 and out.strip() == "bool"


def test_typecheck_negative_exits_1(capsys):
    code, _, err = run(capsys, "typecheck", "true false")
    assert code == 1 and "ill-typed" in err


def test_eval_value(capsys):
    code, out, _ = run(capsys, "eval", "new r := true in (r := false; !r)")
    assert code == 0 and out.strip() == "false"


def test_eval_divergence_exits_1(capsys):
    code, out, _ = run(capsys, "eval", "while true do skip", "--fuel", "500")
    assert code == 1 and "diverged" in out


def test_eval_stuck_exits_1(capsys):
    code, out, _ = run(capsys, "eval", "new r: bool in !r")
    assert code == 1 and "stuck" in out


def test_eval_lnat(capsys):
    code, out, _ = run(capsys, "eval", "let <q, r> = div 17 5 in <q, r>",
                       "--lang", "lnat")
    assert code == 0 and out.strip() == "<3, 2>"


def test_eval_json(capsys):
    code, out, _ = run(capsys, "eval", "skip", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["format"] == "eval/1"
    assert doc["status"] == "value" and doc["value"] == "skip"


# ------------------------------------------------------------------- arenas

def test_arena_summary(capsys):
    code, out, _ = run(capsys, "arena", "var[bool]")
    assert code == 0 and "1 component" in out and "7 moves" in out


def test_arena_json(capsys):
    code, out, _ = run(capsys, "arena", "bool", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["format"] == "arena-family/1"
    assert len(doc["components"]) == 2


def test_arena_dot(capsys):
    code, out, _ = run(capsys, "arena", "unit -> bool", "--dot")
    assert code == 0 and out.startswith("digraph")


def test_arena_iso_positive(capsys):
    code, out, _ = run(capsys, "arena-iso", "var[bool]",
                       "(bool -> unit) * (unit -> bool)")
    assert code == 0 and "isomorphic" in out


def test_arena_iso_negative(capsys):
    code, out, _ = run(capsys, "arena-iso", "bool -> unit", "unit -> bool")
    assert code == 1


def test_arena_iso_json_with_witness_depth(capsys):
    code, out, _ = run(capsys, "arena-iso", "bool -> bool", "bool -> bool",
                       "--json", "--depth", "1")
    doc = json.loads(out)
    assert code == 0 and doc["format"] == "family-iso/1"
    assert doc["bijection"]
    below = doc["witnesses"]["0"]["initials"][0]["below"]
    assert below["depth"] == 1


# -------------------------------------------------------------------- plays

def make_play_json():
    from gamiso.arena import interpret_type
    from gamiso.plays import legal_extension_entries, play_to_json
    from gamiso.syntax import parse_type
    a = interpret_type(parse_type("unit -> bool"))[0]
    s = ()
    for _ in range(2):
        s = s + (legal_extension_entries(a, s)[0],)
    return play_to_json(s)


def test_play_check_from_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(make_play_json()))
    code, out, _ = run(capsys, "play-check", "unit -> bool")
    assert code == 0 and "legal" in out


def test_play_check_file_and_json(tmp_path, capsys):
    p = tmp_path / "play.json"
    p.write_text(make_play_json())
    code, out, _ = run(capsys, "play-check", "unit -> bool", str(p), "--json")
    doc = json.loads(out)
    assert code == 0 and doc["format"] == "play-check/1" and doc["legal"]


def test_play_check_illegal_exits_1(tmp_path, capsys):
    doc = json.loads(make_play_json())
    doc["entries"][1]["justifier"] = None
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "play-check", "unit -> bool", str(p))
    assert code == 1


def test_play_check_malformed_exits_2(tmp_path, capsys):
    p = tmp_path / "junk.json"
    p.write_text('{"entries": [{"move": "zzz", "justifier": null}]}')
    code, _, err = run(capsys, "play-check", "unit -> bool", str(p))
    assert code == 2 and "bad play" in err


# --------------------------------------------------------------- strategies

def test_compose_reports_play_count(capsys):
    code, out, _ = run(capsys, "compose", "involution", "involution",
                       "--bound", "6")
    assert code == 0 and "plays" in out


def test_check_iso_involution(capsys):
    code, out, _ = run(capsys, "check-iso", "involution", "involution",
                       "--bound", "8")
    assert code == 0 and out.count("yes") == 2


def test_check_iso_json(capsys):
    code, out, _ = run(capsys, "check-iso", "involution", "involution",
                       "--bound", "6", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["format"] == "strategy-iso/1"
    assert doc["isomorphism"]


def test_extract_involution(capsys):
    code, out, _ = run(capsys, "extract", "involution", "--depth", "1")
    assert code == 0 and "->" in out


def test_extract_json(capsys):
    code, out, _ = run(capsys, "extract", "involution", "--json",
                       "--depth", "2")
    doc = json.loads(out)
    assert code == 0 and doc["format"] == "pathiso/1"
    assert doc["initials"][0]["below"]["depth"] == 2


def test_extract_non_iso_exits_1(capsys):
    code, _, err = run(capsys, "extract", "cell:bool")
    assert code == 1 and "no path isomorphism" in err


def test_copycat_spec_takes_component_index(capsys):
    code, _, _ = run(capsys, "compose", "copycat:bool:1", "copycat:bool:1",
                     "--bound", "4")
    assert code == 0


# ----------------------------------------------------------------- fixtures

def test_fixtures_table(capsys):
    code, out, _ = run(capsys, "fixtures")
    lines = [l for l in out.strip().splitlines()]
    assert code == 0 and len(lines) == 7
    assert all(l.startswith("PASS") for l in lines)


# -------------------------------------------------------------- determinism

def test_json_outputs_are_stable_across_runs(capsys):
    args = ("arena-iso", "var[bool]", "(bool -> unit) * (unit -> bool)",
            "--json", "--depth", "2")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2
