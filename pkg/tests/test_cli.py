import csv
import io
import json
import math

import pytest

from volconj.cli import main
from volconj.sweep import (
    CSV_COLUMNS,
    Descriptor,
    RunConfig,
    SweepRecord,
    parse_range,
    read_records,
    run_sweep,
    write_records,
)


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("VOLCONJ_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.delenv("VOLCONJ_THREADS", raising=False)
    return tmp_path / "cache"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_range():
    assert parse_range("200:1000:8")[-1] == 1000
    assert len(parse_range("200:1000:8")) == 101
    assert parse_range("1:10:4") == [1, 5, 9]
    assert parse_range("7") == [7]
    for bad in ("0:5", "5:1", "1:5:0", "a:b"):
        with pytest.raises(ValueError):
            parse_range(bad)


def test_descriptor_keys():
    assert Descriptor("wd", 2, 3, 0).key == "wd_p2_q3_r0"
    assert Descriptor("torus", 2, 3, 5).key == "torus_p2_q3"
    assert Descriptor("wl", 4, 9, -1).key == "wl_r-1"
    with pytest.raises(ValueError):
        Descriptor("wd", 2, 4, 0)
    with pytest.raises(ValueError):
        Descriptor("torus", None, 3)


def test_run_config_precedence(monkeypatch, tmp_path):
    monkeypatch.setenv("VOLCONJ_THREADS", "3")
    assert RunConfig.resolve().threads == 3
    assert RunConfig.resolve(threads=2).threads == 2
    monkeypatch.delenv("VOLCONJ_THREADS")
    assert RunConfig.resolve().threads >= 1
    assert RunConfig.resolve(cache_dir=tmp_path).cache_dir == tmp_path
    assert RunConfig.resolve(use_cache=False).cache_dir is None
    with pytest.raises(ValueError):
        RunConfig.resolve(threads=0)


def test_eval_wl_hand_value(capsys):
    code, out, _ = run(capsys, "eval", "--knot", "wl", "--r", "0", "--N", "2")
    assert code == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert float(row["log_abs"]) == pytest.approx(math.log(8), abs=1e-12)
    assert float(row["im"]) == pytest.approx(8.0)


@pytest.mark.parametrize("knot", [["torus", "--p", "2", "--q", "3"], ["wd", "--p", "2", "--q", "3", "--r", "0"]])
def test_eval_trivial_colour(capsys, knot):
    code, out, _ = run(capsys, "eval", "--knot", *knot, "--N", "1", "--format", "json")
    assert code == 0
    rec = json.loads(out)[0]
    assert rec["re"] == pytest.approx(1.0) and rec["im"] == pytest.approx(0.0, abs=1e-12)


def test_eval_usage_errors(capsys):
    assert run(capsys, "eval", "--knot", "torus", "--p", "2", "--q", "4", "--N", "5")[0] == 2
    assert run(capsys, "eval", "--knot", "wl", "--N", "0")[0] == 2
    assert run(capsys, "eval", "--knot", "wd", "--N", "5")[0] == 2


def test_sweep_rows_and_cache(capsys, tmp_path):
    out = tmp_path / "wl.csv"
    code, _, err = run(capsys, "sweep", "--knot", "wl", "--r", "0", "--N", "20:60:2", "--out", str(out), "--threads", "1")
    assert code == 0 and "cache hits: 0" in err
    first = out.read_text()
    code, _, err = run(capsys, "sweep", "--knot", "wl", "--r", "0", "--N", "20:60:2", "--out", str(out), "--threads", "1")
    assert code == 0
    assert "cache hits: 21" in err and "evaluated: 0" in err
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert len(rows) == 21
    assert list(rows[0].keys()) == CSV_COLUMNS
    # cached values are identical to fresh ones
    strip = [{k: v for k, v in r.items() if k != "wall_time_ms"} for r in csv.DictReader(io.StringIO(first))]
    assert strip == [{k: v for k, v in r.items() if k != "wall_time_ms"} for r in rows]


def test_sweep_cache_version_mismatch_is_ignored(isolated_cache):
    desc = Descriptor("torus", 2, 3)
    cfg = RunConfig.resolve(threads=1, cache_dir=isolated_cache)
    run_sweep(desc, [5, 6], cfg)
    path = isolated_cache / f"{desc.key}.jsonl"
    lines = [json.loads(x) for x in path.read_text().splitlines()]
    for d in lines:
        d["format"] = 999
    path.write_text("\n".join(json.dumps(d) for d in lines) + "\nnot json\n")
    _, stats = run_sweep(desc, [5, 6], cfg)
    assert stats == {"cache_hits": 0, "evaluated": 2}


def test_sweep_parallel_matches_serial(tmp_path):
    desc = Descriptor("wd", 2, 3, 1)
    serial, _ = run_sweep(desc, [5, 9, 14], RunConfig.resolve(threads=1, use_cache=False))
    par, _ = run_sweep(desc, [5, 9, 14], RunConfig.resolve(threads=2, use_cache=False))
    assert [r.re for r in serial] == [r.re for r in par]
    assert [r.im for r in serial] == [r.im for r in par]


def test_sweep_unwritable(capsys, tmp_path):
    code, _, err = run(capsys, "sweep", "--knot", "wl", "--N", "2:4", "--out", str(tmp_path / "nope" / "x.csv"))
    assert code == 3 and "cannot write" in err


def test_sweep_bad_range(capsys, tmp_path):
    assert run(capsys, "sweep", "--knot", "wl", "--N", "5:1", "--out", str(tmp_path / "x.csv"))[0] == 2


def test_overflowing_values_store_nulls(tmp_path):
    rec = SweepRecord("wl", None, None, 0, 2000, None, None, 800.0, 2.5, 1.0, arg=0.25)
    buf = io.StringIO()
    write_records([rec], buf)
    row = read_records(io.StringIO(buf.getvalue()))[0]
    assert row["re"] is None and row["im"] is None and row["log_abs"] == 800.0
    assert rec.value().log_abs() == pytest.approx(800.0)
    assert rec.value().arg() == pytest.approx(0.25)


def test_csv_round_trip_keeps_unknown_columns():
    rows = [dict(zip(CSV_COLUMNS, ["wl", "", "", "0", str(n), "1.5", "-2.0", "0.9", "0.1", "3.0"]), note=f"n{n}") for n in range(3)]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS + ["note"], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    parsed = read_records(io.StringIO(buf.getvalue()))
    assert parsed[1]["note"] == "n1" and parsed[1]["N"] == 1 and parsed[1]["p"] is None
    out = io.StringIO()
    write_records(parsed, out)
    again = read_records(io.StringIO(out.getvalue()))
    assert again == parsed
    assert out.getvalue().splitlines()[0] == ",".join(CSV_COLUMNS + ["note"])


def _synthetic_csv(path, fn, Ns):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for N in Ns:
            y = fn(N)
            la = y / (2 * math.pi)
            w.writerow(["wl", "", "", 0, N, "", "", repr(la), repr(y / N), 0.0])


def test_fit_synthetic_exact_recovery(capsys, tmp_path):
    path = tmp_path / "syn.csv"
    _synthetic_csv(path, lambda N: 2 * N + 3 * math.log(N) + 1, range(50, 300, 10))
    code, out, _ = run(capsys, "fit", str(path), "--format", "json")
    assert code == 0
    res = json.loads(out)
    assert set(res) == {"a", "b", "c", "max_residual", "rms_residual", "n_points", "window", "verdicts"}
    assert (res["a"], res["b"], res["c"]) == pytest.approx((2, 3, 1), abs=1e-9)


def test_fit_verdicts(capsys, tmp_path):
    path = tmp_path / "syn.csv"
    _synthetic_csv(path, lambda N: 3.6638623767 * N + 3 * math.pi * math.log(N) - 3, range(200, 1001, 8))
    code, out, _ = run(capsys, "fit", str(path), "--target", "whitehead-volume", "--b-target", "3pi")
    assert code == 0 and out.count("PASS") == 3
    code, out, _ = run(capsys, "fit", str(path), "--target", "zero", "--b-target", "4pi")
    assert code == 1 and "FAIL" in out


def test_fit_malformed(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("N,log_abs\n10,abc\n")
    assert run(capsys, "fit", str(bad))[0] == 2
    bad.write_text("x,y\n1,2\n")
    assert run(capsys, "fit", str(bad))[0] == 2
    short = tmp_path / "short.csv"
    _synthetic_csv(short, lambda N: N, range(10, 15))
    assert run(capsys, "fit", str(short))[0] == 2
    assert run(capsys, "fit", str(tmp_path / "missing.csv"))[0] == 3


def test_nonvanish_cli(capsys):
    code, out, _ = run(capsys, "nonvanish", "--p", "7", "--q", "2")
    assert code == 0 and out.strip().splitlines()[-1] == "zeros: 0 of 56"
    code, out, _ = run(capsys, "nonvanish", "--p", "3", "--q", "2", "--k", "0")
    assert out.strip().splitlines()[-1] == "zeros: 24 of 24"
    code, out, _ = run(capsys, "nonvanish", "--p", "3", "--q", "5")
    assert code == 0 and len(out.strip().splitlines()) == 62
    assert run(capsys, "nonvanish", "--p", "4", "--q", "2")[0] == 2


def test_ratio_cli(capsys):
    code, out, _ = run(capsys, "ratio", "--p", "2", "--q", "3", "--N", "200", "--delta", "0.6")
    assert code == 0 and "value=" in out
    assert run(capsys, "ratio", "--p", "2", "--q", "3", "--N", "200", "--delta", "0.7")[0] == 2
    code, out, _ = run(capsys, "ratio", "--p", "2", "--q", "3", "--series", "200,400,800", "--delta", "0.6")
    assert code == 0 and "PASS" in out


def test_volume_and_selfcheck(capsys):
    code, out, _ = run(capsys, "volume", "--digits", "20")
    assert code == 0 and "3.6638623767088760602" in out
    code, out, _ = run(capsys, "selfcheck")
    assert code == 0 and "FAIL" not in out
