import pytest

from flagcodes.cli import EXIT_BUDGET, EXIT_NOT_FT, EXIT_OK, EXIT_USAGE, dispatch
from flagcodes.gadget import circuit_from_text


def run(capsys, *argv):
    code = dispatch([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_bch(capsys, tmp_path):
    code, out, _ = run(capsys, "bch", "--w", 15, "--t", 2)
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "8 15" and len(lines) == 9
    code, out, _ = run(capsys, "bch", "--w", 15, "--t", 2, "--sorted", "--check-distance", "--field-poly", "19")
    assert code == EXIT_OK
    assert run(capsys, "bch", "--w", 3, "--t", 5)[0] == EXIT_USAGE
    assert run(capsys, "bch", "--w", 15)[0] == EXIT_USAGE


def test_synth_double_then_verify(capsys, tmp_path):
    path = tmp_path / "c26.txt"
    assert run(capsys, "synth", "--w", 13, "--t", 2, "--reps", 3, "--double", "--out", path)[0] == EXIT_OK
    c = circuit_from_text(path.read_text())
    assert c.w == 26 and c.f == 24
    code, out, _ = run(capsys, "verify", "--circuit", path, "--t", 2, "--format", "kv")
    assert code == EXIT_OK and out.startswith("ft=yes t=2 w=26 flags=24")


def test_table_then_verify(capsys, tmp_path):
    circ = tmp_path / "c.txt"
    tab = tmp_path / "t.txt"
    run(capsys, "synth", "--w", 15, "--t", 1, "--reps", 4, "--out", circ)
    h = tmp_path / "h.txt"
    run(capsys, "bch", "--w", 15, "--t", 1, "--sorted", "--out", h)
    for decoder in ("brute", "ball", "majority"):
        code, _, _ = run(capsys, "table", "--circuit", circ, "--t", 1, "--decoder", decoder, "--check", h, "--out", tab)
        assert code == EXIT_OK and tab.read_text().startswith(f"t=1 decoder={decoder}")
        code, out, _ = run(capsys, "verify", "--circuit", circ, "--t", 1, "--table", tab)
        assert code == EXIT_OK and out.startswith("FT at t=1")
    assert run(capsys, "table", "--circuit", circ, "--t", 1, "--decoder", "majority")[0] == EXIT_USAGE


def test_verify_not_ft(capsys, tmp_path):
    circ = tmp_path / "c.txt"
    run(capsys, "synth", "--w", 15, "--t", 2, "--reps", 2, "--out", circ)
    code, out, err = run(capsys, "verify", "--circuit", circ, "--t", 2)
    assert code == EXIT_NOT_FT and "no consistent correction" in err
    tab = tmp_path / "t.txt"
    run(capsys, "table", "--circuit", circ, "--t", 2, "--decoder", "brute", "--out", tab)
    code, out, _ = run(capsys, "verify", "--circuit", circ, "--t", 2, "--table", tab)
    assert code == EXIT_NOT_FT and "counterexample" in out


def test_missing_file(capsys):
    code, _, err = run(capsys, "verify", "--circuit", "missing.txt", "--t", 1)
    assert code == EXIT_USAGE and "missing.txt" in err


def test_grid(capsys, tmp_path):
    fig = tmp_path / "grid.png"
    code, out, _ = run(capsys, "grid", "--w", 9, "--t-max", 2, "--r-max", 3, "--figure", fig)
    assert code == EXIT_OK
    assert out.splitlines()[2].split() == ["1", "Y", "Y"]
    assert fig.read_bytes()[:4] == b"\x89PNG"
    code, out, _ = run(capsys, "grid", "--w", 15, "--t-max", 2, "--r-max", 3, "--budget", 1000)
    assert code == EXIT_BUDGET and "skipped" in out


def test_search(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "--w", 5, "--t", 2, "--flags", 2, "--slots", 10)
    assert code == EXIT_OK and "flags=2 cols=10 w=5" in out and "t=2 decoder=ball" in out
    out_path = tmp_path / "s.txt"
    run(capsys, "search", "--w", 5, "--t", 2, "--flags", 2, "--slots", 10, "--out", out_path)
    assert circuit_from_text(out_path.read_text()).w == 5
    assert (tmp_path / "s.txt.table").exists()
    assert run(capsys, "search", "--w", 6, "--t", 1, "--flags", 0, "--slots", 6)[0] == EXIT_NOT_FT
    code, _, err = run(capsys, "search", "--w", 5, "--t", 2, "--flags", 2, "--slots", 10, "--budget", 5)
    assert code in (EXIT_OK, EXIT_BUDGET)


def test_connect(capsys):
    code, out, _ = run(capsys, "connect", "--code", "513", "--s", 4, "--reps", 3, "--format", "kv")
    assert code == EXIT_OK
    assert "sW=64" in out and "flags=18" in out
    assert run(capsys, "connect")[0] == EXIT_USAGE


def test_connect_sweep(capsys):
    code, out, _ = run(capsys, "connect", "--code", "steane", "--s", 2, "--reps", 3, "--sweep", "--format", "kv")
    assert code == EXIT_OK and "ft=yes" in out


def test_resources(capsys, tmp_path):
    fig = tmp_path / "res.png"
    code, out, _ = run(
        capsys, "resources", "--code", "shor", "--code", "steane", "--tau", 38.5, "--mu", 12.3, "--s", 4, "--figure", fig
    )
    assert code == EXIT_OK and fig.stat().st_size > 1000
    code, out, _ = run(capsys, "resources", "--code", "513", "--format", "kv")
    assert "shor=64 flag=18" in out


def test_code_file(capsys, tmp_path):
    f = tmp_path / "code.txt"
    f.write_text("n=5 t=1\nXZZXI\nIXZZX\nXIXZZ\nZXIXZ\n")
    code, out, _ = run(capsys, "resources", "--code-file", f, "--format", "kv")
    assert code == EXIT_OK and "W=16" in out
