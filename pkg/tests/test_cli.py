import subprocess
import sys

import pytest

from folner.cli import main
from folner.dynamics import bernoulli, sample
from folner.formats import dump_word, pack_bits
from folner.groups import Group
from folner.monotiling import Monotiling


def run(*argv):
    return main(list(argv))


def test_verify(capsys):
    assert run("verify", "--group", "zd:2", "--tiling", "zd-cubes", "--n-max", "8") == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "ok   partition n=8" in out
    assert run("verify", "--group", "zd:2", "--tiling", "zd-cubes", "--n-max", "1") == 0
    assert run("verify", "--group", "ut:3", "--tiling", "heis3", "--n-max", "3") == 0
    assert run("verify", "--group", "ut:3", "--tiling", "utd:p=2", "--n-max", "2") == 0


def test_unknown_tokens_are_usage_errors():
    assert run("verify", "--group", "zd:2", "--tiling", "nope") == 2
    assert run("verify", "--group", "qq:2", "--tiling", "zd-cubes") == 2
    assert run("verify", "--group", "zd:2") == 2


def test_encode_decode_round_trip(tmp_path):
    M = Monotiling(Group("zd", 2), "zd-cubes")
    src = tmp_path / "w.mtw"
    src.write_bytes(dump_word(sample(bernoulli(0.3, 0.7, seed=5), M.tile(12)), M))
    bits = tmp_path / "w.mtb"
    back = tmp_path / "back.mtw"
    assert run("encode", str(src), "--k", "2", "--out", str(bits)) == 0
    assert run("decode", str(bits), "--group", "zd:2", "--tiling", "zd-cubes",
               "--alphabet", "2", "--out", str(back)) == 0
    assert back.read_bytes() == src.read_bytes()


def test_encode_keeps_shortest_k(tmp_path):
    from folner.codec import encode_freq
    from folner.formats import unpack_bits
    M = Monotiling(Group("zd", 1), "zd-cubes")
    w = sample(bernoulli(0.5, 0.5, seed=2), M.tile(64))
    src, bits, back = tmp_path / "w.mtw", tmp_path / "w.mtb", tmp_path / "b.mtw"
    src.write_bytes(dump_word(w, M))
    assert run("encode", str(src), "--k", "1,2,4", "--out", str(bits)) == 0
    best = min(len(encode_freq(w, k, M)) for k in (1, 2, 4))
    assert len(unpack_bits(bits.read_bytes())) == best
    assert run("decode", str(bits), "--group", "zd:1", "--tiling", "zd-cubes",
               "--out", str(back)) == 0
    assert back.read_bytes() == src.read_bytes()


def test_encode_index_list_support(tmp_path):
    M = Monotiling(Group("ut", 3), "heis3")
    w = sample(bernoulli(0.5, 0.5, seed=1), M.tile(2))
    src = tmp_path / "w.mtw"
    src.write_bytes(dump_word(w))  # explicit index list
    out = tmp_path / "w.mtb"
    assert run("encode", str(src), "--k", "1", "--out", str(out)) == 2
    assert run("encode", str(src), "--k", "1", "--tiling", "heis3", "--n", "2",
               "--out", str(out)) == 0


def test_decode_errors(tmp_path):
    bad = tmp_path / "bad.mtb"
    bad.write_bytes(b"NOPE" + bytes(8))
    args = ["--group", "zd:2", "--tiling", "zd-cubes", "--out", str(tmp_path / "x")]
    assert run("decode", str(bad), *args) == 2
    trunc = tmp_path / "t.mtb"
    trunc.write_bytes(pack_bits("1111")[:-1])
    assert run("decode", str(trunc), *args) == 3
    short = tmp_path / "s.mtb"
    short.write_bytes(pack_bits("110001"))
    assert run("decode", str(short), *args) == 3
    assert run("decode", str(tmp_path / "missing.mtb"), *args) == 3


def test_brudno_csv_is_deterministic(tmp_path, capsys):
    argv = ["brudno", "--group", "zd:2", "--tiling", "zd-cubes", "--model", "bernoulli:0.5,0.5",
            "--k", "1,2", "--n", "16", "--samples", "3", "--seed", "4"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(*argv, "--out", str(a)) == 0
    assert run(*argv, "--out", str(b)) == 0
    text = a.read_text()
    assert text == b.read_text()
    lines = text.splitlines()
    assert lines[0] == "# folner-brudno-csv v1"
    assert lines[1].split(",")[:6] == ["n", "k", "sample", "code_bits", "sites", "rate"]
    rows = [l.split(",") for l in lines[2:]]
    assert len(rows) == 6
    for r in rows:
        assert float(r[5]) == pytest.approx(int(r[3]) / int(r[4]), abs=1e-6)
    assert "mean_rate" in capsys.readouterr().out


def test_brudno_periodic_and_usage(tmp_path):
    out = tmp_path / "p.csv"
    assert run("brudno", "--group", "zd:2", "--tiling", "zd-cubes", "--model", "periodic:1,2",
               "--k", "2", "--n", "128", "--out", str(out)) == 0
    row = out.read_text().splitlines()[2].split(",")
    assert float(row[5]) < 0.05 and row[7] == ""
    assert run("brudno", "--group", "zd:2", "--tiling", "zd-cubes", "--model", "periodic:1,2",
               "--k", "2", "--n", "8", "--samples", "0") == 2
    assert run("brudno", "--group", "zd:2", "--tiling", "zd-cubes", "--model", "gauss:1",
               "--k", "2", "--n", "8") == 2


def test_tempered(capsys):
    assert run("tempered", "--group", "zd:1", "--tiling", "zd-cubes", "--count", "3") == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "1 3 6"
    assert all(float(l.split(":")[1]) <= 2 for l in out[1:])
    assert run("tempered", "--group", "zd:1", "--tiling", "zd-cubes", "--count", "1") == 0
    assert capsys.readouterr().out.strip() == "1"
    assert run("tempered", "--group", "zd:2", "--tiling", "zd-cubes", "--count", "5",
               "--budget", "1000") == 4


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "folner.cli", "tempered", "--group", "ut:3",
                           "--tiling", "heis3", "--count", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.split()[:2] == ["1", "3"]
