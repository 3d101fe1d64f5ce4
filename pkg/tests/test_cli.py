import csv
import io
import json

import pytest

from fatpoints import linsys
from fatpoints.cli import main, merge_config, parse_int_list


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_int_list():
    assert parse_int_list("0..3") == [0, 1, 2, 3]
    assert parse_int_list("1,4,6..7") == [1, 4, 6, 7]


def test_cohomology_csv(capsys):
    code, out, _ = run(capsys, "cohomology", "--weights", "1,2,3", "--point", "1,1,1",
                       "--m", "0..2", "--n", "0..12")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 39
    assert all(int(r["chi"]) == int(r["h0"]) - int(r["h1"]) + int(r["h2"]) for r in rows)


def test_cohomology_m0_is_dim(capsys):
    code, out, _ = run(capsys, "cohomology", "--weights", "1,2,3", "--m", "0..0", "--n", "0..6")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [int(r["h0"]) for r in rows] == [1, 1, 2, 3, 4, 5, 7]


def test_missing_point_file(capsys, tmp_path):
    code, out, err = run(capsys, "cohomology", "--points", str(tmp_path / "nope.txt"))
    assert code == 2 and out == "" and "cannot read point file" in err


@pytest.mark.parametrize("argv", [
    ["reg", "--weights", "2,4,5"],
    ["reg", "--point", "0,1,1"],
    ["reg", "--field", "fp:9"],
    ["sigma", "--s", "abc"],
    ["nagata"],
    ["split-demo", "--weights", "1,2,3", "--field", "q"],
])
def test_invalid_input_exit_code(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_argparse_errors_exit_2(capsys):
    assert run(capsys, "reg", "--m-max", "x")[0] == 2
    assert run(capsys, "bogus")[0] == 2


def test_negcurve(capsys):
    code, out, _ = run(capsys, "negcurve", "--weights", "1,2,3", "--point", "1,1,1", "--m-max", "2")
    cert = json.loads(out)["certificate"]
    assert (cert["d"], cert["m0"], cert["s_candidate"]) == (2, 1, "3")


def test_sigma_all_zero(capsys):
    code, out, _ = run(capsys, "sigma", "--weights", "1,1,1", "--points", "random:1", "--s", "1",
                       "--m-max", "10")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 10
    assert all(r["sigma"] == "0" for r in rows)


def test_sinv_235(capsys):
    code, out, _ = run(capsys, "sinv", "--weights", "2,3,5", "--point", "1,1,1", "--m-max", "4")
    assert json.loads(out)["certificate"]["s_candidate"] == "6"


def test_reg_csv(capsys):
    code, out, _ = run(capsys, "reg", "--weights", "1,2,3", "--m-max", "3")
    assert out == "m,a2,reg\n1,-1,1\n2,2,4\n3,5,7\n"


def test_nagata_commands(capsys):
    rep = json.loads(run(capsys, "nagata", "--n", "16", "--m", "1,2")[1])
    assert rep["verdict"] == "vanishing holds"
    rep = json.loads(run(capsys, "nagata", "--n", "9", "--m", "1")[1])
    assert rep["checks"][0]["violation"]["d"] == 3
    rep = json.loads(run(capsys, "nagata", "--factor", "1,2,3", "--r", "2", "--m-max", "8",
                         "--seed", "42")[1])
    assert len(rep["per_m"]) == 8 and rep["seed"] == 42


def test_split_demo_and_basechange(capsys):
    rep = json.loads(run(capsys, "split-demo", "--weights", "1,2,3", "--point", "1,1,1")[1])
    assert rep["prime"] == 7 and rep["orbits"][0]["size"] == 6
    rep = json.loads(run(capsys, "basechange-check", "--weights", "1,2,3", "--m-max", "2")[1])
    assert rep["holds"] and [r["reg_up"] for r in rep["rows"]] == [4, 7]


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# settings\nweights = 1,2,3\nm_max = 2\npoint = 1,1,1\n")
    assert merge_config(["reg", "--config", str(cfg), "--m-max", "3"])[:1] == ["reg"]
    code, out, _ = run(capsys, "reg", "--config", str(cfg))
    assert out == "m,a2,reg\n1,-1,1\n2,2,4\n"
    code, out, _ = run(capsys, "reg", "--config", str(cfg), "--m-max", "1")
    assert out == "m,a2,reg\n1,-1,1\n"


def test_out_file(capsys, tmp_path):
    target = tmp_path / "t.csv"
    code, out, _ = run(capsys, "reg", "--m-max", "2", "--out", str(target))
    assert code == 0 and out == "" and target.read_text().startswith("m,a2,reg")


def test_cache_flag_repeat_run(capsys, tmp_path, caplog):
    cache = tmp_path / "cache.jsonl"
    argv = ["cohomology", "--weights", "2,3,5", "--m", "1..2", "--n", "0..20", "--cache", str(cache)]
    linsys.clear_memo()
    first = run(capsys, *argv)[1]
    computed_first = linsys.STATS["rank"]
    linsys.clear_memo()
    second = run(capsys, *argv)[1]
    assert first == second
    assert linsys.STATS["rank"] == computed_first
    linsys.clear_memo()
    assert run(capsys, *argv[:-2])[1] == first


def test_point_file_input(capsys, tmp_path):
    f = tmp_path / "pts.txt"
    f.write_text("# two points\n1 1 1\n2 -1 3\n")
    code, out, _ = run(capsys, "cohomology", "--weights", "1,2,3", "--points", str(f), "--m", "1",
                       "--n", "0..3")
    assert code == 0
    assert out.splitlines()[1].startswith("1,2,3,2,")
