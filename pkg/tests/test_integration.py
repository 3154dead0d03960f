"""
Integration tests for the detection toolkit CLI.

Tests run main() end to end against a temporary output directory.
"""

import json
from pathlib import Path

import pytest

from adapters.storage.csv_writer import CSVWriter
from main import main

SCHEMA_PATH = Path(__file__).resolve().parent.parent / "docs" / "schema" / "v1.json"
SCHEMA = json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))


def _required_keys(branch: int) -> set[str]:
    return set(SCHEMA["oneOf"][branch]["required"])


def _resolve(schema: dict) -> dict:
    while "$ref" in schema:
        schema = SCHEMA["$defs"][schema["$ref"].rsplit("/", 1)[-1]]
    return schema


def _result_schema(command: str) -> dict:
    for rule in SCHEMA["oneOf"][0]["allOf"]:
        if rule["if"]["properties"]["command"]["const"] == command:
            return _resolve(rule["then"]["properties"]["result"])
    raise KeyError(command)


def _missing_keys(instance, schema: dict, path: str = "result") -> list[str]:
    """Required keys absent anywhere in instance, following properties and items."""
    schema = _resolve(schema)
    missing: list[str] = []
    if isinstance(instance, dict):
        missing += [f"{path}.{key}" for key in schema.get("required", []) if key not in instance]
        for key, sub in schema.get("properties", {}).items():
            if key in instance:
                missing += _missing_keys(instance[key], sub, f"{path}.{key}")
    elif isinstance(instance, list) and "items" in schema:
        for i, item in enumerate(instance):
            missing += _missing_keys(item, schema["items"], f"{path}[{i}]")
    return missing


class TestCommandLine:
    """End-to-end runs of main()."""

    def test_efficacy(self, tmp_path: Path):
        output = tmp_path / "efficacy.json"
        status = main(
            ["efficacy", "--detector", "np", "--sigma0-sq", "1", "--sigma1-sq", "1",
             "--output", str(output)]
        )

        assert status == 0
        document = json.loads(output.read_text(encoding="utf-8"))
        assert _required_keys(0) == set(document)
        assert document["result"]["nu"] == 2
        assert document["result"]["sqrt_efficacy"] == pytest.approx(5.65685, abs=1e-5)

    def test_re(self, tmp_path: Path):
        output = tmp_path / "re.json"
        status = main(
            ["re", "--a", "np", "--b", "energy", "--mu1", "0.2", "--sigma1-sq", "0.04",
             "--alpha", "0.1", "--beta", "0.9", "--output", str(output)]
        )

        assert status == 0
        result = json.loads(output.read_text(encoding="utf-8"))["result"]
        assert {"n_a", "n_b", "re"} <= set(result)

    def test_incomparable_orders_exit_code(self, tmp_path: Path, capsys):
        status = main(["are", "--a", "np", "--b", "linear", "--output", str(tmp_path / "are.json")])

        assert status == 1
        lines = capsys.readouterr().err.splitlines()
        record = json.loads([line for line in lines if line.startswith("{")][-1])
        assert record["status"] == "error"
        assert "incomparable orders" in record["error"]["message"]
        assert not (tmp_path / "are.json").exists()

    def test_usage_error_exit_code(self, capsys):
        assert main(["efficacy", "--sigma0-sq", "not-a-number"]) == 2
        assert main(["efficacy", "--sigma0-sq", "-1"]) == 2
        assert main(["teleport"]) == 2
        assert '"status": "error"' in capsys.readouterr().err

    def test_converge_csv(self, tmp_path: Path):
        output = tmp_path / "sweep.csv"
        status = main(
            ["converge", "--a", "energy", "--b", "energy", "--n-grid", "100,1000",
             "--output", str(output)]
        )

        assert status == 0
        records = CSVWriter().parse(output.read_bytes())
        assert [r.re for r in records] == [1.0, 1.0]
        assert [r.relative_gap for r in records] == [0.0, 0.0]

    @pytest.mark.parametrize(
        "argv",
        [
            ["mc-validate", "--n", "20", "--mu1", "0.3", "--trials", "300", "--batch-size", "64", "--seed", "9"],
            ["roc", "--a", "energy", "--n", "40"],
            ["threshold", "--n", "100", "--sigma1-sq", "0.5"],
        ],
    )
    def test_repeated_runs_are_byte_identical(self, tmp_path: Path, argv: list[str]):
        first, second = tmp_path / "first.out", tmp_path / "second.out"
        assert main(argv + ["--output", str(first)]) == 0
        assert main(argv + ["--output", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    @pytest.mark.parametrize(
        "argv",
        [
            ["roc", "--a", "energy", "--n", "40", "--format", "json"],
            ["threshold", "--n", "100", "--sigma1-sq", "0.5"],
            ["efficacy", "--a", "energy"],
            ["are", "--a", "np", "--b", "energy"],
            ["re", "--a", "np", "--b", "energy", "--mu1", "0.2", "--sigma1-sq", "0.04"],
            ["converge", "--a", "energy", "--b", "energy", "--n-grid", "100,1000", "--format", "json"],
            ["mc-validate", "--n", "20", "--mu1", "0.3", "--trials", "300", "--batch-size", "64"],
            ["mc-validate", "--n", "20", "--mu0", "0.3", "--mu1", "0.2", "--trials", "300"],
        ],
    )
    def test_results_match_command_schema(self, tmp_path: Path, argv: list[str]):
        output = tmp_path / "result.json"
        assert main(argv + ["--output", str(output)]) == 0

        document = json.loads(output.read_text(encoding="utf-8"))
        assert document["command"] == argv[0]
        assert _missing_keys(document["result"], _result_schema(argv[0])) == []

    def test_every_command_has_result_schema(self):
        commands = SCHEMA["oneOf"][0]["properties"]["command"]["enum"]
        for command in commands:
            assert _result_schema(command)["type"] == "object"

    def test_noise_mean_threshold(self, tmp_path: Path):
        output = tmp_path / "threshold.json"
        status = main(
            ["threshold", "--mu0", "0.3", "--mu1", "0.2", "--n", "100", "--output", str(output)]
        )

        assert status == 0
        result = json.loads(output.read_text(encoding="utf-8"))["result"]
        assert result["pf"] == pytest.approx(0.1, abs=1e-10)
        assert result["threshold"] == pytest.approx(result["gamma_prime"])
