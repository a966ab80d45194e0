import io
import subprocess
import sys

import pytest

from wmgsynth.cli import run
from wmgsynth.formats import emit_lts, emit_net, parse_net

from figures import WORD_8_21, bounded_region_lts, four_label_counterexample_net, staircase_lts


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, dict(_pairs(out.getvalue())), out.getvalue(), err.getvalue()


def _pairs(text):
    for line in text.splitlines():
        key, sep, value = line.partition(": ")
        if sep and " " not in key:
            yield key, value


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write


def test_solve_binary_reports_circuit():
    code, report, _, _ = call("solve-binary", WORD_8_21)
    assert code == 0
    assert report["tokens_total"] == "28" and report["states"] == "29"
    assert report["quotients"] == "2,3,2,3,3,2,3,3"


def test_solve_binary_negative_and_bad_input():
    code, report, _, err = call("solve-binary", "abab")
    assert code == 1 and report["error"] == "NotPrimeParikh" and "NotPrimeParikh" in err
    assert call("solve-binary", "abc")[0] == 2


def test_solve_binary_writes_net_file_and_plot(tmp_path):
    net_path, png = tmp_path / "c.net", tmp_path / "trace.png"
    code, report, _, _ = call("solve-binary", "aabab", "--out", str(net_path), "--plot", str(png))
    assert code == 0
    assert parse_net(net_path.read_text()).net.places
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert report["plot"] == str(png)


def test_solve_cyclic_verdicts():
    code, report, _, _ = call("solve-cyclic", "aabbc")
    assert code == 1 and report["verdict"] == "UnsolvableByTheorem6" and report["witness_pair"] == "a,b"
    code, report, _, _ = call("solve-cyclic", "abcab")
    assert code == 0 and report["certified"] == "true"
    code, report, _, _ = call("solve-cyclic", "aacbbdabd")
    assert code == 0 and report["verdict"] == "OracleSolvable"
    assert call("solve-cyclic", "aacbbdabd", "--oracle", "--budget", "5")[0] == 3


def test_oracle_on_word_and_lts(files):
    code, report, _, _ = call("oracle", "abc")
    assert code == 0 and int(report["group_space"]) <= int(report["flat_space"])
    path = files("stair.lts", emit_lts(staircase_lts()))
    code, report, _, _ = call("oracle", path, "--lts", "--max-weight", "2", "--max-tokens", "3")
    assert code == 1 and report["verdict"] == "OracleUnsolvable"


def test_synth_acyclic_with_plot(files, tmp_path):
    path = files("region.lts", emit_lts(bounded_region_lts()))
    png = tmp_path / "lattice.png"
    code, report, _, _ = call("synth-acyclic", path, "--plot", str(png), "--format", "dot")
    assert code == 0 and report["states"] == "51" and report["counters"] == "none"
    assert sum(key.startswith("region_") for key in report) == 4
    assert png.stat().st_size > 0


def test_synth_acyclic_nonconvex_still_plots(files, tmp_path):
    path = files("stair.lts", emit_lts(staircase_lts()))
    png = tmp_path / "stair.png"
    code, report, _, _ = call("synth-acyclic", path, "--plot", str(png))
    assert code == 1 and report["error"] == "NonConvex"
    assert png.exists()


def test_synth_reversible(files):
    ring = "initial s0\n" + "".join(f"arc s{i} {t} s{(i + 1) % 5}\n" for i, t in enumerate("aabab"))
    code, report, _, _ = call("synth-reversible", files("ring.lts", ring))
    assert code == 0 and report["tokens_total"] == "4"


def test_simulate_and_bound(files, tmp_path):
    path = files("net.txt", emit_net(four_label_counterexample_net()))
    png = tmp_path / "rg.png"
    code, report, text, _ = call("simulate", path, "--plot", str(png))
    assert code == 0 and report["states"] == "9" and report["wmg"] == "true"
    assert "arc " in text and png.exists()
    unbounded = files("grow.net", "place p tokens=0 in=a:1\n")
    code, report, _, _ = call("simulate", unbounded, "--bound", "10")
    assert code == 3 and report["error"] == "BoundExceeded"


def test_isomorphic(files):
    a = files("a.lts", "initial x\narc x a y\n")
    b = files("b.lts", "initial p\narc p a q\n")
    c = files("c.lts", "initial p\narc p b q\n")
    code, report, _, _ = call("isomorphic", a, b)
    assert code == 0 and report["map_x"] == "p"
    assert call("isomorphic", a, c)[0] == 1
    assert call("isomorphic", a, files("bad.lts", "arc x a y\n"))[0] == 2


def test_predict_states():
    code, report, _, _ = call("predict-states", "8", "21", "28", "--simulate")
    assert code == 0 and report["predicted_states"] == report["simulated_states"] == "29"
    assert call("predict-states", "8", "21", "20")[0] == 2
    assert call("predict-states", "2", "4", "9")[0] == 2


def test_infinite_check():
    code, report, _, _ = call("infinite-check", "2", "3", "4")
    assert code == 0 and report["equivalent"] == "true"
    code, report, _, _ = call("infinite-check", "2", "3", "4", "--against", "2", "3", "5")
    assert code == 1 and "divergence_state" in report


def test_export_dot(files, tmp_path):
    lts_path = files("a.lts", "initial x\narc x a y\n")
    code, _, text, _ = call("export-dot", lts_path)
    assert code == 0 and text.startswith('digraph "lts"')
    net_path = files("n.net", emit_net(four_label_counterexample_net()))
    assert call("export-dot", net_path)[2].startswith('digraph "net"')
    out = tmp_path / "rg.dot"
    code, report, _, _ = call("export-dot", net_path, "--kind", "rg", "--out", str(out))
    assert code == 0 and out.read_text().count("->") == 9


def test_missing_file_and_bad_arguments():
    code, report, _, _ = call("simulate", "/nonexistent/file.net")
    assert code == 2 and report["error"] == "FileNotFoundError"
    assert call("predict-states", "0", "1", "1")[0] == 2
    assert call()[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wmgsynth", "solve-binary", "ab"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "tokens_total: 1" in proc.stdout
