import json
import subprocess
import sys

import pytest

from cyclepack.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def clique_files(tmp_path):
    graph, notes = tmp_path / "g.txt", tmp_path / "g.json"
    assert main(["gen", "planted-clique", "24", "4", "--seed", "1",
                 "--graph-out", str(graph), "--out", str(notes)]) == 0
    return graph, notes


def test_gen_to_stdout(capsys):
    code, out, _ = run(["gen", "grid", "2", "2"], capsys)
    assert code == 0
    assert out.split()[:2] == ["4", "8"]


def test_gen_dot(capsys):
    code, out, _ = run(["gen", "planted-cycles", "2", "--format", "dot"], capsys)
    assert code == 0 and out.startswith("digraph")


def test_pack_and_verify(clique_files, tmp_path, capsys):
    graph, notes = clique_files
    cert = tmp_path / "cert.json"
    code, _, _ = run(["pack", str(graph), "--k", "1", "--p", "3", "--annotations", str(notes),
                      "--trace", "--out", str(cert)], capsys)
    assert code == 0
    body = json.loads(cert.read_text())
    assert body["kind"] == "cycle_packing" and body["trace"]
    code, out, _ = run(["verify", str(graph), str(cert)], capsys)
    assert code == 0 and json.loads(out)["accepted"] is True
    body["cycles"][0] = body["cycles"][0][::-1] + [99]
    cert.write_text(json.dumps(body))
    code, out, _ = run(["verify", str(graph), str(cert)], capsys)
    assert code == 1 and json.loads(out)["accepted"] is False


def test_pack_with_planted_constants(tmp_path, capsys):
    graph, notes = tmp_path / "d.txt", tmp_path / "d.json"
    assert main(["gen", "planted-driver", "2", "3", "sparse", "--graph-out", str(graph),
                 "--out", str(notes)]) == 0
    with pytest.warns(UserWarning):
        code, out, _ = run(["pack", str(graph), "--k", "2", "--p", "3", "--annotations", str(notes)],
                           capsys)
    assert code == 0 and len(json.loads(out)["cycles"]) == 2


def test_pack_failure_report(tmp_path, capsys):
    graph = tmp_path / "path.txt"
    graph.write_text("4 3\n0 1\n1 2\n2 3\n")
    code, out, _ = run(["pack", str(graph), "--k", "1", "--p", "2", "--terminals", "0,3"], capsys)
    assert code == 1
    body = json.loads(out)
    assert body["kind"] == "failure" and body["stage"] == "well-linkedness"


def test_usage_errors(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    graph.write_text("2 1\n0 1\n")
    assert run(["pack", str(graph), "--k", "1", "--p", "2"], capsys)[0] == 2
    assert run(["pack", str(tmp_path / "missing.txt"), "--k", "1", "--p", "2", "--terminals", "0"], capsys)[0] == 2
    assert run(["pack", str(graph), "--k", "1", "--p", "2", "--terminals", "0",
                "--constants", "paper", "--q", "3"], capsys)[0] == 2
    assert run(["gen", "grid", "x"], capsys)[0] == 2
    assert run(["bogus"], capsys)[0] == 2
    assert run(["partition", str(graph), "--h", "1"], capsys)[0] == 2


def test_oracle_commands(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    assert main(["gen", "planted-cycles", "3", "1", "--graph-out", str(graph)]) == 0
    capsys.readouterr()
    code, out, _ = run(["oracle", str(graph)], capsys)
    body = json.loads(out)
    assert code == 0 and body["cp_1"] == body["fvs_opt"] == 3
    code, out, _ = run(["oracle", str(graph), "report", "--csv"], capsys)
    assert out.splitlines()[0].startswith("n,m,fvs_opt")
    code, out, _ = run(["oracle", str(graph), "fvs"], capsys)
    assert json.loads(out)["size"] == 3
    code, out, _ = run(["oracle", str(graph), "packing", "--congestion", "2"], capsys)
    assert json.loads(out)["k"] == 6
    code, _, err = run(["oracle", str(graph), "fvs", "--cap", "3"], capsys)
    assert code == 1 and "cap" in err


def test_partition_command(tmp_path, capsys):
    path = tmp_path / "b.txt"
    edges = [(i, j) for i in range(6) for j in range(6)]
    path.write_text(f"6 6 {len(edges)}\n" + "\n".join(f"{i} {j}" for i, j in edges))
    code, out, _ = run(["partition", str(path), "--h", "0", "--d", "1"], capsys)
    body = json.loads(out)
    assert code == 0 and len(body["pairs"]) == 1 and body["edges"][0] >= 12
    code, _, _ = run(["partition", str(path), "--h", "2", "--d", "1"], capsys)
    assert code == 1


def test_witness_commands(tmp_path, capsys):
    graph, notes = tmp_path / "w.txt", tmp_path / "w.json"
    assert main(["gen", "planted-gridwitness", "3", "--graph-out", str(graph), "--out", str(notes)]) == 0
    capsys.readouterr()
    code, out, _ = run(["witness", str(graph), "--kind", "grid", "--witness", str(notes)], capsys)
    cert = tmp_path / "dtw.json"
    cert.write_text(out)
    assert code == 0 and json.loads(out)["kind"] == "dtw_witness"
    assert run(["verify", str(graph), str(cert)], capsys)[0] == 0
    assert run(["witness", str(graph), "--kind", "grid"], capsys)[0] == 2

    path = tmp_path / "p.txt"
    path.write_text("6 5\n0 1\n1 2\n2 3\n3 4\n4 5\n")
    code, out, _ = run(["witness", str(path), "--kind", "separation", "--W", "0,1,2,3,4,5", "--w", "0"], capsys)
    assert code == 0 and json.loads(out)["order"] == 0
    code, out, _ = run(["witness", str(path), "--kind", "well-linked", "--W", "0,5"], capsys)
    assert code == 1 and json.loads(out)["verdict"] is False


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cyclepack.cli", "gen", "grid", "1", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.split()[:2] == ["2", "2"]
