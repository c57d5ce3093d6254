import json

import pytest

from metricdim import format_edge_list, generate, graph_from_json_dict
from metricdim.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_graph(tmp_path, g, name="graph.txt"):
    path = tmp_path / name
    path.write_text(format_edge_list(g))
    return str(path)


def test_decompose_complete5(tmp_path, capsys):
    path = write_graph(tmp_path, generate("complete", 5))
    code, out, _ = run(capsys, "decompose", path, "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["b"] == 10
    assert payload["junctions"] == [0, 1, 2, 3, 4]
    assert payload["two_core_size"] == 5


def test_decompose_path7(tmp_path, capsys):
    path = write_graph(tmp_path, generate("path", 7))
    code, out, _ = run(capsys, "decompose", path, "--format", "json")
    assert code == 0
    assert json.loads(out)["b"] == 1


def test_decompose_disconnected_exit3(tmp_path, capsys):
    path = tmp_path / "two_edges.txt"
    path.write_text("0 1\n2 3\n")
    code, _, err = run(capsys, "decompose", str(path))
    assert code == 3
    assert "component" in err


def test_parse_failure_exit2(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("0 x\n")
    code, _, err = run(capsys, "decompose", str(path))
    assert code == 2 and "line 1" in err


def test_solve_cycle6(tmp_path, capsys):
    path = write_graph(tmp_path, generate("cycle", 6))
    code, out, _ = run(capsys, "solve", path, "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["dimension"] == 2
    assert payload["engine"] == "brute"  # auto picks brute at n <= 12


def test_solve_complete5_and_spider(tmp_path, capsys):
    path = write_graph(tmp_path, generate("complete", 5))
    code, out, _ = run(capsys, "solve", path, "--format", "json")
    assert code == 0 and json.loads(out)["dimension"] == 4

    path = write_graph(tmp_path, generate("spider", 3, 2))
    code, out, _ = run(capsys, "solve", path, "--format", "json", "--engine", "fpt-pragmatic")
    assert code == 0
    payload = json.loads(out)
    assert payload["dimension"] == 2 and payload["engine"] == "fpt-pragmatic"


def test_solve_engine_auto_large_uses_pragmatic(tmp_path, capsys):
    path = write_graph(tmp_path, generate("cycle", 14))
    code, out, _ = run(capsys, "solve", path, "--format", "json")
    assert code == 0
    assert json.loads(out)["engine"] == "fpt-pragmatic"


def test_solve_disconnected_exit3(tmp_path, capsys):
    path = tmp_path / "two_edges.txt"
    path.write_text("0 1\n2 3\n")
    code, _, err = run(capsys, "solve", str(path))
    assert code == 3


def test_solve_budget_exit4(tmp_path, capsys):
    path = write_graph(tmp_path, generate("cycle", 14))
    code, _, err = run(
        capsys, "solve", path, "--engine", "fpt-pragmatic", "--budget-nodes", "2"
    )
    assert code == 4
    assert "upper bound" in err


def test_solve_json_byte_identical(tmp_path, capsys):
    path = write_graph(tmp_path, generate("spider", 3, 3))
    _, out1, _ = run(capsys, "solve", path, "--format", "json", "--engine", "fpt-pragmatic")
    _, out2, _ = run(capsys, "solve", path, "--format", "json", "--engine", "fpt-pragmatic")
    assert out1 == out2
    assert "ms" not in json.loads(out1).get("stats", {})


def test_verify_ok(tmp_path, capsys):
    path = write_graph(tmp_path, generate("path", 5))
    code, out, _ = run(capsys, "verify", path, "--set", "0")
    assert code == 0 and "OK" in out


def test_verify_failure_prints_pair(tmp_path, capsys):
    path = write_graph(tmp_path, generate("cycle", 4))
    code, out, _ = run(capsys, "verify", path, "--set", "0", "--format", "json")
    assert code == 1
    assert json.loads(out)["unresolved"] == [1, 3]


def test_verify_empty_set_is_usage_error(tmp_path, capsys):
    path = write_graph(tmp_path, generate("path", 5))
    code, _, err = run(capsys, "verify", path, "--set", "")
    assert code == 2 and "empty landmark set" in err


def test_bounds_reports(tmp_path, capsys):
    path = write_graph(tmp_path, generate("complete", 5))
    code, out, _ = run(capsys, "bounds", path, "--format", "json")
    assert code == 0
    assert json.loads(out) == {
        "b": 10,
        "ell": 4,
        "ell_le_2b": True,
        "ratio_b_over_ell_sq": 10 / 16,
    }
    path = write_graph(tmp_path, generate("path", 7))
    code, out, _ = run(capsys, "bounds", path, "--format", "json")
    payload = json.loads(out)
    assert (payload["b"], payload["ell"], payload["ell_le_2b"]) == (1, 2, True)
    path = write_graph(tmp_path, generate("star", 6))
    code, out, _ = run(capsys, "bounds", path, "--format", "json")
    payload = json.loads(out)
    assert (payload["b"], payload["ell"], payload["ell_le_2b"]) == (6, 6, True)


def test_bounds_guard_exit4(tmp_path, capsys):
    path = write_graph(tmp_path, generate("path", 30))
    code, _, err = run(capsys, "bounds", path)
    assert code == 4 and "guard" in err


def test_gen_round_trip(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "spider", "3", "2")
    assert code == 0
    assert out.startswith("n 7\n")
    code, out2, _ = run(capsys, "gen", "spider", "3", "2")
    assert out == out2
    code, out_a, _ = run(capsys, "gen", "random_connected", "10", "12", "--seed", "5")
    code, out_b, _ = run(capsys, "gen", "random_connected", "10", "12", "--seed", "5")
    assert out_a == out_b


def test_gen_reads_back_through_stdin(tmp_path, capsys, monkeypatch):
    import io

    code, out, _ = run(capsys, "gen", "cycle", "6")
    monkeypatch.setattr("sys.stdin", io.StringIO(out))
    code, out2, _ = run(capsys, "solve", "-", "--format", "json")
    assert code == 0 and json.loads(out2)["dimension"] == 2


def test_bench_agreement(tmp_path, capsys):
    code, out, _ = run(
        capsys,
        "bench",
        "cycle 3..8, complete 3..5",
        "--engines",
        "brute,fpt-pragmatic",
        "--format",
        "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["agree"] is True
    dims = {
        (row["family"], tuple(row["params"])): row["results"]["brute"]["dimension"]
        for row in payload["rows"]
    }
    assert dims[("complete", (5,))] == 4
    assert dims[("cycle", (6,))] == 2


def test_bench_budget_exit4(tmp_path, capsys):
    code, out, _ = run(
        capsys,
        "bench",
        "cycle 12..13",
        "--engines",
        "fpt-pragmatic",
        "--budget-nodes",
        "2",
        "--format",
        "json",
    )
    assert code == 4
    payload = json.loads(out)
    statuses = {row["results"]["fpt-pragmatic"]["status"] for row in payload["rows"]}
    assert statuses == {"budget"}


def test_bench_disagreement_exit5(tmp_path, capsys, monkeypatch):
    import metricdim.cli as cli

    real = cli._solve_once

    def skewed(g, engine, budget):
        result = real(g, engine, budget)
        if engine == "fpt-pragmatic":
            result["dimension"] += 1
        return result

    monkeypatch.setattr(cli, "_solve_once", skewed)
    code, out, err = run(
        capsys,
        "bench",
        "cycle 5..5",
        "--engines",
        "brute,fpt-pragmatic",
        "--format",
        "json",
    )
    assert code == 5
    assert "disagreement" in err
    # the offending graph is serialized for triage
    blob = err[err.index("offending graph: ") + len("offending graph: "):]
    g = graph_from_json_dict(json.loads(blob.strip().splitlines()[0]))
    assert g.vertex_count == 5


def test_inspect_indistinct(tmp_path, capsys):
    path = write_graph(tmp_path, generate("spider", 3, 2))
    code, out, _ = run(
        capsys,
        "inspect-indistinct",
        path,
        "--s", "2", "--A", "1", "--B", "2",
        "--format", "json",
    )
    assert code == 0
    assert json.loads(out) == {
        "s": 2,
        "A": 1,
        "B": 2,
        "segments": [{"a0": 1, "b0": 1, "a1": 2, "b1": 2, "slope": 1}],
    }


def test_inspect_bad_branch_exit2(tmp_path, capsys):
    path = write_graph(tmp_path, generate("path", 5))
    code, _, err = run(capsys, "inspect-indistinct", path, "--s", "0", "--A", "0", "--B", "7")
    assert code == 2


def test_unknown_command_exit2(capsys):
    assert main(["nonsense"]) == 2


def test_decompose_deterministic_json(tmp_path, capsys):
    path = write_graph(tmp_path, generate("spider", 4, 2))
    _, out1, _ = run(capsys, "decompose", path, "--format", "json")
    _, out2, _ = run(capsys, "decompose", path, "--format", "json")
    assert out1 == out2
