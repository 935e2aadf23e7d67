from __future__ import annotations

import gzip
import json

import pytest

from sqif.cli import (
    SCHEMA_VERSION,
    build_document,
    build_parser,
    dumps_document,
    main,
    parse_document,
    read_document,
    write_document,
)
from sqif.pipeline import IterationTrace, PipelineConfig, RunReport
from sqif.relations import SrPair


def _sample_document() -> dict:
    # 128-bit n exercises the decimal-string integer encoding
    n = 275538060341916784483102145290705042411
    config = PipelineConfig(n=n, dimension=18, max_iterations=7, seed=5)
    report = RunReport(
        n=n,
        bits=128,
        dimension=18,
        method="brute-force",
        iterations=7,
        sr_pairs=2,
        required_sr_pairs=650,
        outcome="fail",
        factors=(),
        wall_seconds=1.25,
        seed=5,
        trace=(
            IterationTrace(1, 12.5, 1, 1),
            IterationTrace(2, 11.0, 1, 2),
        ),
    )
    pairs = [
        SrPair(2**70, 1, -1, (70, 0), (1, 3)),
        SrPair(81, 1, 1, (0, 4), (2, 0)),
    ]
    return build_document(config, report, pairs)


def test_document_round_trip_preserves_big_integers() -> None:
    doc = _sample_document()
    assert doc["schema_version"] == SCHEMA_VERSION
    assert doc["config"]["n"] == "275538060341916784483102145290705042411"
    assert doc["sr_pairs"][0]["u"] == str(2**70)
    rebuilt = json.loads(dumps_document(doc))
    config, report, pairs = parse_document(rebuilt)
    assert config.n == 275538060341916784483102145290705042411
    assert report.n == config.n
    assert report.trace[1] == IterationTrace(2, 11.0, 1, 2)
    assert pairs[0].u == 2**70
    assert pairs[0].residual_sign == -1
    assert build_document(config, report, pairs) == doc


def test_parse_document_rejects_unknown_schema() -> None:
    doc = _sample_document()
    doc["schema_version"] = 99
    with pytest.raises(ValueError):
        parse_document(doc)


def test_write_and_read_document_plain(tmp_path) -> None:
    doc = _sample_document()
    path = write_document(doc, tmp_path / "report.json")
    assert path == tmp_path / "report.json"
    assert read_document(path) == doc
    again = write_document(doc, tmp_path / "copy.json")
    assert path.read_bytes() == again.read_bytes()


def test_write_and_read_document_gzip(tmp_path) -> None:
    doc = _sample_document()
    path = write_document(doc, tmp_path / "report.json.gz")
    raw = path.read_bytes()
    assert raw[:2] == b"\x1f\x8b"
    assert json.loads(gzip.decompress(raw).decode()) == doc
    assert read_document(path) == doc
    # gzip output is deterministic (fixed mtime)
    second = write_document(doc, tmp_path / "again.json.gz")
    assert second.read_bytes() == raw


def test_parser_defaults() -> None:
    parser = build_parser()
    args = parser.parse_args(["factor", "--n", "22499"])
    assert args.n == 22499
    assert args.method == "brute-force"
    assert args.seed == 1
    assert args.max_iterations == 1000
    args = parser.parse_args(["reproduce-table"])
    assert args.tier == "quick"
    with pytest.raises(SystemExit):
        parser.parse_args(["factor", "--n", "22499", "--seed", "-3"])
    with pytest.raises(SystemExit):
        parser.parse_args(["factor", "--n", "22499", "--method", "annealing"])


def test_parser_random_seed() -> None:
    parser = build_parser()
    args = parser.parse_args(["factor", "--n", "22499", "--seed", "random"])
    assert 0 <= args.seed < 2**32


def test_main_factor_success(capsys) -> None:
    code = main(
        ["factor", "--n", "22499", "--dimension", "8", "--max-iterations", "300"]
    )
    captured = capsys.readouterr()
    assert code == 0
    doc = json.loads(captured.out)
    assert doc["report"]["outcome"] == "success"
    assert doc["report"]["factors"] == ["149", "151"]
    assert "149 * 151" in captured.err


def test_main_factor_fail_exit_code(capsys) -> None:
    code = main(["factor", "--n", "624911573291", "--max-iterations", "2"])
    captured = capsys.readouterr()
    assert code == 1
    doc = json.loads(captured.out)
    assert doc["report"]["outcome"] == "fail"
    assert doc["report"]["dimension"] == 7


def test_main_screening_exit_code(capsys) -> None:
    code = main(["factor", "--n", "91"])
    captured = capsys.readouterr()
    assert code == 2
    assert "trivial factor 7" in captured.err
    code = main(["factor", "--n", "1000003", "--dimension", "8"])
    captured = capsys.readouterr()
    assert code == 2
    assert "prime" in captured.err


def test_main_config_error_exit_code(capsys) -> None:
    code = main(
        ["factor", "--n", "22499", "--dimension", "8", "--lll-delta", "1.5"]
    )
    captured = capsys.readouterr()
    assert code == 2
    assert "error:" in captured.err


def test_main_writes_report_file(tmp_path, capsys) -> None:
    out = tmp_path / "run.json"
    code = main(
        [
            "factor",
            "--n",
            "22499",
            "--dimension",
            "8",
            "--max-iterations",
            "300",
            "--out",
            str(out),
        ]
    )
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out == ""
    assert "report written" in captured.err
    doc = read_document(out)
    assert doc["report"]["outcome"] == "success"
    assert doc["trace"][0]["iteration"] == 1
    assert len(doc["sr_pairs"]) == doc["report"]["sr_pairs"]


def test_main_verbose_progress(capsys) -> None:
    code = main(
        [
            "factor",
            "--n",
            "22499",
            "--dimension",
            "8",
            "--max-iterations",
            "300",
            "-v",
        ]
    )
    captured = capsys.readouterr()
    assert code == 0
    assert "iter 1:" in captured.err


def test_main_ledger_checkpoint_and_resume(tmp_path, capsys) -> None:
    ledger = tmp_path / "pairs.json"
    code = main(
        [
            "factor",
            "--n",
            "22499",
            "--dimension",
            "8",
            "--max-iterations",
            "300",
            "--ledger-file",
            str(ledger),
        ]
    )
    first = capsys.readouterr()
    assert code == 0
    saved = json.loads(ledger.read_text())
    assert saved["n"] == "22499"
    assert len(saved["sr_pairs"]) == json.loads(first.out)["report"]["sr_pairs"]

    # resuming from the completed ledger finishes in one iteration
    code = main(
        [
            "factor",
            "--n",
            "22499",
            "--dimension",
            "8",
            "--max-iterations",
            "300",
            "--ledger-file",
            str(ledger),
        ]
    )
    second = capsys.readouterr()
    assert code == 0
    assert "resuming with" in second.err
    assert json.loads(second.out)["report"]["iterations"] == 1


def test_main_ledger_rejects_other_modulus(tmp_path, capsys) -> None:
    ledger = tmp_path / "pairs.json"
    main(
        [
            "factor",
            "--n",
            "22499",
            "--dimension",
            "8",
            "--max-iterations",
            "300",
            "--ledger-file",
            str(ledger),
        ]
    )
    capsys.readouterr()
    code = main(
        [
            "factor",
            "--n",
            "25591",
            "--dimension",
            "8",
            "--ledger-file",
            str(ledger),
        ]
    )
    captured = capsys.readouterr()
    assert code == 2
    assert "recorded for n=22499" in captured.err


def test_reports_are_byte_identical_without_timing(capsys) -> None:
    argv = ["factor", "--n", "22499", "--dimension", "8", "--max-iterations", "300"]
    main(argv)
    first = json.loads(capsys.readouterr().out)
    main(argv)
    second = json.loads(capsys.readouterr().out)
    first.pop("timing")
    second.pop("timing")
    assert dumps_document(first) == dumps_document(second)
