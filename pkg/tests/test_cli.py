import json

import pytest
from click.testing import CliRunner

from pgl1d.cache import ENV_VAR, HEADER, cache_path, read_partition, write_partition, CacheError
from pgl1d.census import full_partition, report_from_partition
from pgl1d.cli import FIELDS, main, parse_k

SCHEMA = ["k", "r_param", "order_log2", "num_classes", "num_real_classes", "real_by_layer",
          "order4_real_count", "mode", "lift_polynomial", "timings"]


@pytest.fixture
def runner():
    return CliRunner()


def records(output):
    return [json.loads(line) for line in output.strip().splitlines()]


def test_parse_k():
    assert parse_k("7") == (7,)
    assert parse_k("7..10") == (7, 8, 9, 10)


def test_census_json_schema(runner):
    res = runner.invoke(main, ["census", "--k", "5..6"])
    assert res.exit_code == 0, res.output
    recs = records(res.output)
    assert [r["k"] for r in recs] == [5, 6]
    for r in recs:
        assert list(r)[:len(SCHEMA)] == SCHEMA
    assert recs[1]["num_real_classes"] == 25
    assert recs[1]["lift_polynomial"][3] == 1


def test_census_csv_columns(runner):
    res = runner.invoke(main, ["census", "--k", "4", "--format", "csv"])
    assert res.exit_code == 0
    header, row = res.output.strip().splitlines()
    assert header.split(",") == FIELDS
    assert row.startswith("4,1,8,25,11,")


def test_census_text(runner):
    res = runner.invoke(main, ["census", "--k", "4", "--format", "text"])
    assert res.exit_code == 0
    assert "r(G)=11" in res.output


@pytest.mark.parametrize("args", [["--k", "3"], ["--k", "11"], ["--k", "7", "--mode", "fast"], ["--k", "x"],
                                  ["--k", "7", "--r-param", "3"]])
def test_usage_errors(runner, args):
    assert runner.invoke(main, ["census", *args]).exit_code == 2


def test_feasibility_refusal(runner):
    res = runner.invoke(main, ["census", "--k", "13", "--mode", "fast"])
    assert res.exit_code == 3
    assert "GiB" in res.output


def test_fast_mode(runner):
    res = runner.invoke(main, ["census", "--k", "8", "--mode", "fast"])
    assert res.exit_code == 0, res.output
    (rec,) = records(res.output)
    assert rec["num_classes"] is None and rec["num_real_classes"] == 25 and rec["mode"] == "fast"


def test_cache_roundtrip_k7(runner, tmp_path, ctx_of):
    first = runner.invoke(main, ["census", "--k", "7", "--cache-dir", str(tmp_path)])
    ctx = ctx_of(7, 1)
    path = cache_path(tmp_path, ctx)
    assert path.exists()
    assert path.stat().st_size == HEADER.size + 4 * ctx.order
    second = runner.invoke(main, ["census", "--k", "7", "--cache-dir", str(tmp_path)])
    a, b = records(first.output)[0], records(second.output)[0]
    assert "cache_load" in b["timings"] and "partition" in a["timings"]
    a.pop("timings"), b.pop("timings")
    assert a == b


def test_cache_read_gives_identical_partition(tmp_path, ctx_of):
    ctx = ctx_of(6, 1)
    part = full_partition(ctx)
    path = write_partition(tmp_path / "p.bin", ctx, part)
    back = read_partition(path, ctx)
    assert back.same_as(part)
    assert report_from_partition(ctx, back, {}).counts() == report_from_partition(ctx, part, {}).counts()


def test_cache_keyed_by_config(tmp_path, ctx_of):
    c1, c2 = ctx_of(6, 1), ctx_of(6, 2)
    assert cache_path(tmp_path, c1) != cache_path(tmp_path, c2)
    path = write_partition(tmp_path / "p.bin", c1, full_partition(c1))
    with pytest.raises(CacheError):
        read_partition(path, c2)


def test_env_var_cache_dir(runner, tmp_path, ctx_of):
    res = runner.invoke(main, ["census", "--k", "5"], env={ENV_VAR: str(tmp_path)})
    assert res.exit_code == 0
    assert cache_path(tmp_path, ctx_of(5, 1)).exists()


@pytest.mark.parametrize("damage", ["garbage", "flip", "truncate"])
def test_corrupt_cache_recomputes(runner, tmp_path, ctx_of, damage):
    ctx = ctx_of(6, 1)
    path = write_partition(cache_path(tmp_path, ctx), ctx, full_partition(ctx))
    data = bytearray(path.read_bytes())
    if damage == "garbage":
        data = bytearray(b"x" * 50)
    elif damage == "flip":
        data[-1] ^= 1
    else:
        data = data[:-8]
    path.write_bytes(bytes(data))
    res = runner.invoke(main, ["census", "--k", "6", "--cache-dir", str(tmp_path)])
    assert res.exit_code == 0
    rec = records(res.stdout)[0]
    assert "partition" in rec["timings"] and rec["num_real_classes"] == 25
    # rewritten with a valid file
    assert read_partition(path, ctx).num_classes == 109


def test_export(runner, tmp_path, ctx_of):
    out = tmp_path / "k5.bin"
    res = runner.invoke(main, ["export", "--k", "5", "--out", str(out)])
    assert res.exit_code == 0
    assert read_partition(out, ctx_of(5, 1)).num_classes == 53
    assert runner.invoke(main, ["export", "--k", "5"], env={ENV_VAR: ""}).exit_code == 2


def test_verify_oracle(runner):
    res = runner.invoke(main, ["verify", "--suite", "oracle-f8"])
    assert res.exit_code == 0
    lines = [l for l in res.output.splitlines() if l.startswith(("PASS", "FAIL"))]
    assert len(lines) == 18 and all(l.startswith("PASS") for l in lines)


def test_verify_unknown_suite(runner):
    assert runner.invoke(main, ["verify", "--suite", "nope"]).exit_code == 2


def test_verify_claims(runner):
    res = runner.invoke(main, ["verify", "--suite", "claims-s8"])
    assert res.exit_code == 0, res.output
    assert "PASS  r_U1(U4/U7) = 25 with 14/7/4 by layer" in res.output
    assert "PASS  no real elements of order 4 in U1/U10" in res.output
    assert "PASS  C_U1(xU3) = C_U1(x)U2" in res.output
