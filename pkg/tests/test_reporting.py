import json
import math

import pytest

from toporouter.reporting import (
    ResultTable,
    read_csv,
    sha256_of_file,
    tool_version,
    write_csv,
    write_manifest,
)


def test_csv_round_trip_preserves_types_and_values(tmp_path):
    awkward = (0.1, 1 / 3, 1e300, 5e-324, -0.0, math.pi, float("inf"), float("nan"))
    table = ResultTable(
        columns=("name", "count") + tuple(f"x{i}" for i in range(len(awkward))),
        rows=(("run_a", 3) + awkward, ("run_b", -17) + awkward),
        provenance=("demo table", "second line"),
    )
    path = write_csv(table, tmp_path / "t.csv")
    back = read_csv(path)
    assert back.columns == table.columns
    assert back.provenance == ("demo table", "second line")
    for row, orig in zip(back.rows, table.rows):
        assert row[0] == orig[0]
        assert isinstance(row[1], int) and row[1] == orig[1]
        for got, want in zip(row[2:], orig[2:]):
            if math.isnan(want):
                assert math.isnan(got)
            else:
                assert got == want  # repr round-trip is exact


def test_cell_format_guards(tmp_path):
    with pytest.raises(TypeError):
        write_csv(ResultTable(("a",), ((True,),)), tmp_path / "b.csv")
    with pytest.raises(ValueError):
        write_csv(ResultTable(("a",), (("x,y",),)), tmp_path / "c.csv")


def test_row_width_checked():
    with pytest.raises(ValueError):
        ResultTable(columns=("a", "b"), rows=((1,),))


def test_column_accessor():
    table = ResultTable(("a", "b"), ((1, 2.0), (3, 4.0)))
    assert table.column("b") == [2.0, 4.0]
    with pytest.raises(ValueError):
        table.column("missing")


def test_read_csv_requires_header(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text("# only provenance\n")
    with pytest.raises(ValueError, match="no header"):
        read_csv(p)


def test_manifest_records_hashes_and_no_timestamp(tmp_path):
    out = tmp_path / "file.csv"
    out.write_text("col\n1\n")
    manifest_path = write_manifest(
        tmp_path, "demo", {"seed": 1}, [out], {"answer": 42}
    )
    manifest = json.loads(manifest_path.read_text())
    assert manifest["tool"] == "toporouter"
    assert manifest["command"] == "demo"
    assert manifest["config"] == {"seed": 1}
    assert manifest["results"] == {"answer": 42}
    assert manifest["outputs"]["file.csv"] == sha256_of_file(out)
    assert "time" not in json.dumps(manifest).lower()
    # identical rerun produces identical bytes
    first = manifest_path.read_bytes()
    write_manifest(tmp_path, "demo", {"seed": 1}, [out], {"answer": 42})
    assert manifest_path.read_bytes() == first


def test_tool_version_is_nonempty_string():
    v = tool_version()
    assert isinstance(v, str) and v
