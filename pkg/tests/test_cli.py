from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from dilogskein.cli import main

ROOT = Path(__file__).resolve().parents[1]
SCHEMAS = {p.name: json.loads(p.read_text()) for p in (ROOT / "schema").glob("*.schema.json")}
REGISTRY = Registry().with_resources(
    (s["$id"], Resource.from_contents(s)) for s in SCHEMAS.values()
)


def validate(doc, name):
    schema = SCHEMAS[name]
    Draft202012Validator(schema, registry=REGISTRY).validate(doc)


def invoke(capsys, *argv):
    code = main([*argv, "--no-timing"])
    out, err = capsys.readouterr()
    return code, out, err


def test_schemas_are_valid():
    for s in SCHEMAS.values():
        Draft202012Validator.check_schema(s)


def test_orders(capsys):
    code, out, err = invoke(capsys, "orders", "--n", "3")
    assert code == 0
    data = json.loads(out)
    assert data["count"] == 2 and len(data["orders"]) == 2
    validate(data, "orders.v1.schema.json")
    assert "admissible orders" in err


def test_pentagon_and_shifted(capsys):
    code, out, _ = invoke(capsys, "pentagon", "--degree", "4")
    assert code == 0
    validate(json.loads(out), "report.v1.schema.json")
    code, out, _ = invoke(capsys, "pentagon", "--degree", "4", "--middle-power", "1")
    assert code == 1
    data = json.loads(out)
    validate(data, "report.v1.schema.json")
    assert data["first_discrepancy"]["exponent"] == [1, 1]


def test_reineke_reports(capsys):
    code, out, _ = invoke(capsys, "reineke", "--n", "3", "--degree", "3", "--order", "all")
    assert code == 0
    data = json.loads(out)
    assert len(data) == 2
    for r in data:
        validate(r, "report.v1.schema.json")


def test_reineke_explicit_order(capsys):
    code, out, _ = invoke(capsys, "reineke", "--n", "2", "--degree", "3", "--order", "[[2,2],[1,2],[1,1]]")
    assert code == 2
    code, out, _ = invoke(capsys, "reineke", "--n", "2", "--degree", "3", "--order", "[[1,1],[1,2],[2,2]]")
    assert code == 0


def test_mutate_traces(capsys):
    code, out, _ = invoke(capsys, "mutate", "--n", "3")
    assert code == 0
    validate(json.loads(out), "trace.v1.schema.json")
    code, out, _ = invoke(capsys, "mutate", "--n", "3", "--order", "all")
    assert code == 0
    data = json.loads(out)
    validate(data, "trace.v1.schema.json")
    assert len(data["traces"]) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["equivalence", "--n", "2"],
        ["twists", "--n", "4"],
        ["conjugation", "--degree", "3"],
        ["shadow", "--n", "2", "--degree", "3", "--order", "all"],
    ],
)
def test_passing_commands(capsys, argv):
    code, out, _ = invoke(capsys, *argv)
    assert code == 0
    data = json.loads(out)
    for r in data if isinstance(data, list) else [data]:
        validate(r, "report.v1.schema.json")


@pytest.mark.parametrize(
    "argv",
    [
        ["orders"],
        ["pentagon"],
        ["reineke", "--n", "0", "--degree", "2"],
        ["reineke", "--n", "2", "--degree", "-1"],
        ["reineke", "--n", "2", "--degree", "2", "--order", "7"],
        ["reineke", "--n", "2", "--degree", "2", "--order", "[[1,1]"],
        ["pentagon", "--degree", "2", "--middle-power", "1/3"],
        ["equivalence", "--n", "9"],
        ["twists", "--n", "2", "--jobs", "0"],
        ["conjugation", "--config", "no-such-file.json"],
        ["orders", "--n", "9"],
    ],
)
def test_invalid_config_exits_2(capsys, argv):
    code, out, err = invoke(capsys, *argv)
    assert code == 2
    assert out == ""
    assert "invalid configuration" in err


def test_convention_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"version": 99}')
    assert invoke(capsys, "pentagon", "--degree", "2", "--convention-file", str(bad))[0] == 2
    typo = tmp_path / "typo.json"
    typo.write_text('{"pentagon_middle_pwr": "1"}')
    assert invoke(capsys, "pentagon", "--degree", "2", "--convention-file", str(typo))[0] == 2
    shifted = tmp_path / "shifted.json"
    shifted.write_text('{"version": 1, "pentagon_middle_power": "1"}')
    assert invoke(capsys, "pentagon", "--degree", "2", "--convention-file", str(shifted))[0] == 1
    packaged = ROOT / "src" / "dilogskein" / "data" / "conventions.json"
    validate(json.loads(packaged.read_text()), "conventions.v1.schema.json")


def test_shipped_skein_config_matches_schema():
    data = json.loads((ROOT / "src" / "dilogskein" / "data" / "linkskein_n2.json").read_text())
    validate(data, "linkskein_config.v1.schema.json")


def test_out_flag(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = invoke(capsys, "twists", "--n", "3", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["status"] == "pass"


def test_output_is_byte_identical(capsys):
    argv = ["reineke", "--n", "3", "--degree", "3", "--order", "all"]
    first = invoke(capsys, *argv)[1]
    assert invoke(capsys, *argv)[1] == first
    assert invoke(capsys, *argv, "--jobs", "2")[1] == first


def test_equivalence_jobs_identical(capsys):
    a = invoke(capsys, "equivalence", "--n", "4")[1]
    b = invoke(capsys, "equivalence", "--n", "4", "--jobs", "3")[1]
    assert a == b


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "dilogskein", "orders", "--n", "2", "--no-timing"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["count"] == 1
    assert proc.stderr.strip()
