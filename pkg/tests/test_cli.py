import csv
import io
import xml.etree.ElementTree as ET

import pytest

from transversal import cli, experiments
from transversal.experiments import (
    PLANARIZE_HEADER,
    PLY_HEADER,
    STATS_HEADER,
    STRUCTURE_HEADER,
    TRACE_HEADER,
    TRANSVERSAL_HEADER,
    ExperimentConfig,
)
from transversal.graph import serialize_gg, gen_grid
from transversal.subdivision import InvariantError
from transversal.svg import emit_scatter

SVG = "{http://www.w3.org/2000/svg}"


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_flat_and_subcommand_forms_agree(capsys):
    code, flat, _ = _run(capsys, "--gen", "grid:16", "--kind", "lines", "--trials", "300", "--seed", "42")
    assert code == 0
    code, sub, _ = _run(capsys, "sample", "--gen", "grid:16", "--trials", "300")
    assert code == 0 and sub == flat
    rows = _rows(flat)
    assert tuple(rows[0]) == TRANSVERSAL_HEADER
    assert rows[1][:5] == ["grid:16", "256", "480", "lines", "300"]


def test_rerun_byte_identical_across_threads(capsys, monkeypatch):
    argv = ("--gen", "grid:16", "--kind", "segments", "--trials", "1000", "--seed", "42")
    monkeypatch.setenv("TRANSVERSAL_THREADS", "1")
    _, one, _ = _run(capsys, *argv)
    monkeypatch.setenv("TRANSVERSAL_THREADS", "6")
    _, six, _ = _run(capsys, *argv)
    _, again, _ = _run(capsys, *argv)
    assert one == six == again


def test_nested_lower_bound(capsys):
    _, out, _ = _run(capsys, "--gen", "nested:64", "--kind", "lines", "--trials", "400")
    assert float(_rows(out)[1][5]) >= 32


@pytest.mark.parametrize(
    "kind,header",
    [("stats", STATS_HEADER), ("ply", PLY_HEADER), ("planarize", PLANARIZE_HEADER), ("disks", TRANSVERSAL_HEADER)],
)
def test_headers_match_schemas(capsys, kind, header):
    code, out, _ = _run(capsys, "--gen", "grid:6,random:60:1", "--kind", kind, "--trials", "50")
    assert code == 0
    rows = _rows(out)
    assert tuple(rows[0]) == header and len(rows) == 3


def test_query_bench_all_ok(capsys, tmp_path):
    stats = tmp_path / "structure.csv"
    code, out, _ = _run(capsys, "bench", "--gen", "grid:32", "--trials", "100", "--stats", str(stats))
    assert code == 0
    rows = _rows(out)
    assert tuple(rows[0]) == TRACE_HEADER
    assert len(rows) == 101 and {r[4] for r in rows[1:]} == {"ok"}
    srows = _rows(stats.read_text())
    assert tuple(srows[0]) == STRUCTURE_HEADER and srows[1][0] == "grid:32"


def test_input_file_and_output_path(capsys, tmp_path):
    gg = tmp_path / "g.gg"
    gg.write_text(serialize_gg(gen_grid(5)))
    out = tmp_path / "out.csv"
    code, stdout, _ = _run(capsys, "stats", "--input", str(gg), "--out", str(out))
    assert code == 0 and stdout == ""
    assert _rows(out.read_text())[1] == ["g", "25", "40", "4", "40", "1"]


def test_errors_exit_nonzero(capsys, tmp_path):
    code, _, err = _run(capsys, "--input", str(tmp_path / "missing.gg"), "--kind", "stats")
    assert code == 1 and "transversal: error:" in err
    bad = tmp_path / "bad.gg"
    bad.write_text("gg 2 1\n0 0\n1 x\n0 1\n")
    code, _, err = _run(capsys, "--input", str(bad), "--kind", "stats")
    assert code == 1 and "bad.gg:3:" in err
    code, _, err = _run(capsys, "--gen", "hex:3", "--kind", "stats")
    assert code == 1 and "hex:3" in err
    code, _, err = _run(capsys, "--gen", "grid:4", "--kind", "lines", "--stats", "x.csv")
    assert code == 1
    assert cli.main([]) == 2
    capsys.readouterr()


def test_invariant_violation_named(capsys, monkeypatch):
    def broken(g):
        raise InvariantError("Euler characteristic is 3, expected 2")

    monkeypatch.setattr(experiments, "build_structure", broken)
    code, _, err = _run(capsys, "bench", "--gen", "grid:4", "--trials", "5")
    assert code == 1 and "Euler characteristic" in err


def test_svg_written_next_to_csv(capsys, tmp_path):
    out = tmp_path / "lines.csv"
    code, _, _ = _run(capsys, "--gen", "grid:8,grid:16", "--kind", "lines", "--trials", "100", "--out", str(out), "--svg")
    assert code == 0
    root = ET.fromstring((tmp_path / "lines.svg").read_text())
    assert len([c for c in root.iter(SVG + "circle") if c.get("class") == "point"]) == 2


def test_plot_subcommand(capsys, tmp_path):
    paths = []
    for kind in ("lines", "segments"):
        p = tmp_path / f"{kind}.csv"
        assert cli.main(["--gen", "grid:8,grid:16,grid:32", "--kind", kind, "--trials", "100", "--out", str(p)]) == 0
        paths.append(str(p))
    code, svg, _ = _run(capsys, "plot", *paths)
    assert code == 0
    root = ET.fromstring(svg)
    assert len([c for c in root.iter(SVG + "circle") if c.get("class") == "point"]) == 6
    code, _, err = _run(capsys, "plot", str(tmp_path / "nothing.csv"))
    assert code == 1


def test_emit_scatter_two_rows():
    root = ET.fromstring(emit_scatter([(64, 5.0), (256, 9.5)]))
    assert root.tag == SVG + "svg"
    assert len(list(root.iter(SVG + "circle"))) == 2
    paths = [p for p in root.iter(SVG + "path") if p.get("class") == "reference"]
    assert len(paths) == 1
    assert "href" not in emit_scatter([(64, 5.0), (256, 9.5)])
    with pytest.raises(ValueError):
        emit_scatter([(64, 5.0)])


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(kind="nope", gens=("grid:4",))
    with pytest.raises(ValueError):
        ExperimentConfig(kind="lines", gens=("grid:4",), trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig(kind="lines")
    assert ExperimentConfig(kind="lines", gens=("grid:4",)).seed == 42
