"""Smoke tests for the rnapars extension module and the CLI binary."""

import csv
import io
import json
import os
import subprocess

import pytest

import rnapars


def test_distances():
    assert rnapars.bp_distance("((..))", "(....)") == 1
    assert rnapars.rf_distance("((..))", "(....)") == 1
    assert rnapars.il_distance("((..))", "(....)") == 3
    assert rnapars.re_distance("(....)", ".(...)") == 1
    cost, mapping = rnapars.te_distance("(....)", ".(...)", cost="shift")
    assert cost == 1
    assert ((1, 6), (2, 6)) in mapping


def test_bad_input_raises_value_error():
    with pytest.raises(ValueError):
        rnapars.rf_distance("((.", "...")


def test_medians():
    inputs = ["((..))", "(....)", "......"]
    assert rnapars.rf_nc_median(inputs) == "(....)"
    assert rnapars.mcost("(....)", inputs, "rf") == 2
    tree, cost = rnapars.il_ilc_median(["((..))", "(....)"])
    assert cost == 3
    assert tree in ("((..))", "(....)")
    _, nc_cost = rnapars.il_nc_median(["((..))", "(....)"])
    assert nc_cost <= cost


def test_small_parsimony():
    newick = "((x,y)u,z)r;"
    structures = {"x": "((..))", "y": "((..))", "z": "(....)"}
    cost, assignment = rnapars.rf_nc_sp(newick, structures)
    assert cost == 1
    assert assignment["u"] == "((..))"
    assert assignment["r"] == "(....)"
    assert rnapars.sp_cost(newick, assignment, "rf") == 1

    lr_cost, _ = rnapars.leaf_restricted_sp(newick, structures, "re")
    assert lr_cost >= 0
    heur_cost, _ = rnapars.median_heuristic_sp(newick, structures, "il", "ilc")
    assert heur_cost <= rnapars.leaf_restricted_sp(newick, structures, "il")[0]


def test_sampling():
    assert rnapars.count_structures(4, 3) == 1
    assert rnapars.count_structures(5, 3) == 2
    assert rnapars.count_structures(7, 3) == 8
    assert rnapars.count_structures(100, 3) == int(str(rnapars.count_structures(100, 3)))
    s = rnapars.sample_structure(30, 3, seed=7)
    assert s == rnapars.sample_structure(30, 3, seed=7)
    assert len(s) == 30
    newick, leaves = rnapars.sample_phylogeny(20, 3, height=3, seed=1)
    assert newick.endswith(";")
    assert len(leaves) == 8


def test_degap():
    out = rnapars.degap([("a", "(-..)"), ("b", "(...)")])
    assert out == [("a", "(..)"), ("b", "(..)")]


STOCKHOLM = """\
# STOCKHOLM 1.0
seq1 GGAAACC
seq2 GCAAAGC
seq3 AC-AAGC
#=GC SS_cons <<...>>
//
"""


def test_project_stockholm():
    records = rnapars.project_stockholm(STOCKHOLM)
    assert records[0] == ("seq1", "((...))")
    assert records[1] == ("seq2", "((...))")
    # Outer pair is non-canonical for seq3 and one inner position is gapped.
    assert records[2] == ("seq3", ".(-..).")


def test_cli_reads_stockholm(cli, tmp_path):
    sto = tmp_path / "family.sto"
    sto.write_text(STOCKHOLM)
    tree = tmp_path / "tree.nwk"
    tree.write_text("((seq1,seq2),seq3);\n")
    result = subprocess.run(
        [cli, "smallpars", "--structures", str(sto), "--tree", str(tree),
         "--metric", "rf", "--constraint", "nc", "--solver", "exact"],
        capture_output=True, text=True,
    )
    assert result.returncode == 0
    rows = list(csv.DictReader(io.StringIO(result.stdout)))
    assert rows[-1]["node_id"] == "summary"
    assert "dropped 1 gapped column" in result.stderr


def test_enumeration_matches_counts():
    assert len(rnapars.enumerate_structures(7, 3)) == 8


@pytest.fixture()
def cli():
    path = os.environ.get("RNAPARS_CLI")
    if not path or not os.path.exists(path):
        pytest.skip("RNAPARS_CLI not set")
    return path


def test_cli_distance_roundtrip(cli, tmp_path):
    fasta = tmp_path / "structures.fa"
    fasta.write_text(">a\n((..))\n>b\n(....)\n")
    result = subprocess.run(
        [cli, "distance", "--input", str(fasta), "--metric", "il"],
        capture_output=True, text=True,
    )
    assert result.returncode == 0
    rows = list(csv.DictReader(io.StringIO(result.stdout)))
    assert rows[0]["value"] == "3"

    def values(metric):
        out = subprocess.run(
            [cli, "distance", "--input", str(fasta), "--metric", metric],
            capture_output=True, text=True, check=True,
        ).stdout
        return [(r["id1"], r["id2"], r["value"]) for r in csv.DictReader(io.StringIO(out))]

    assert values("bp") == values("rf")


def test_cli_median_and_exit_codes(cli, tmp_path):
    fasta = tmp_path / "structures.fa"
    fasta.write_text(">a\n((..))\n>b\n(....)\n>c\n......\n")
    ok = subprocess.run(
        [cli, "median", "--input", str(fasta), "--metric", "rf", "--constraint", "nc"],
        capture_output=True, text=True,
    )
    assert ok.returncode == 0
    rows = list(csv.DictReader(io.StringIO(ok.stdout)))
    assert rows[0]["dotbracket"] == "(....)"
    assert rows[0]["mcost"] == "2"

    as_json = subprocess.run(
        [cli, "median", "--input", str(fasta), "--metric", "rf", "--json"],
        capture_output=True, text=True,
    )
    assert as_json.returncode == 0
    payload = json.loads(as_json.stdout)
    assert payload[0]["dotbracket"] == "(....)"

    bad = subprocess.run(
        [cli, "median", "--input", str(fasta), "--metric", "re"],
        capture_output=True, text=True,
    )
    assert bad.returncode == 2
    assert "open problem" in bad.stderr

    missing = subprocess.run(
        [cli, "distance", "--input", str(tmp_path / "nope.fa")],
        capture_output=True, text=True,
    )
    assert missing.returncode == 2


def test_cli_smallpars_and_experiment(cli, tmp_path):
    subprocess.run(
        [cli, "sample", "--length", "40", "--theta", "3", "--height", "2",
         "--seed", "11", "--replicates", "2", "--out-dir", str(tmp_path / "data")],
        check=True,
    )
    assert (tmp_path / "data" / "rep000" / "structures.fa").exists()
    assert (tmp_path / "data" / "rep001" / "tree.nwk").exists()

    sp = subprocess.run(
        [cli, "smallpars",
         "--structures", str(tmp_path / "data" / "rep000" / "structures.fa"),
         "--tree", str(tmp_path / "data" / "rep000" / "tree.nwk"),
         "--metric", "rf", "--constraint", "nc", "--solver", "exact"],
        capture_output=True, text=True,
    )
    assert sp.returncode == 0
    rows = list(csv.DictReader(io.StringIO(sp.stdout)))
    assert rows[-1]["node_id"] == "summary"
    assert float(rows[-1]["spcost"]) >= 0

    exp = subprocess.run(
        [cli, "experiment", "--data-dir", str(tmp_path / "data"),
         "--methods", "rf_nc,re", "--out", str(tmp_path / "out.csv")],
        capture_output=True, text=True,
    )
    assert exp.returncode == 0
    rows = list(csv.DictReader(open(tmp_path / "out.csv")))
    assert {r["method"] for r in rows} == {"rf_nc", "re"}
    assert {r["replicate"] for r in rows} == {"rep000", "rep001"}

    again = subprocess.run(
        [cli, "experiment", "--data-dir", str(tmp_path / "data"),
         "--methods", "rf_nc,re", "--out", str(tmp_path / "out2.csv")],
        capture_output=True, text=True,
    )
    assert again.returncode == 0

    def stable(path):
        with open(path) as handle:
            return [{k: v for k, v in row.items() if k != "wall_ms"}
                    for row in csv.DictReader(handle)]

    assert stable(tmp_path / "out.csv") == stable(tmp_path / "out2.csv")


def test_cli_invalid_solver_combo(cli, tmp_path):
    fasta = tmp_path / "structures.fa"
    fasta.write_text(">a\n((..))\n>b\n(....)\n")
    tree = tmp_path / "tree.nwk"
    tree.write_text("(a,b);\n")
    result = subprocess.run(
        [cli, "smallpars", "--structures", str(fasta), "--tree", str(tree),
         "--metric", "il", "--constraint", "nc", "--solver", "exact"],
        capture_output=True, text=True,
    )
    assert result.returncode == 2


def test_cli_leaf_id_mismatch_is_listed(cli, tmp_path):
    fasta = tmp_path / "structures.fa"
    fasta.write_text(">a\n((..))\n>extra\n(....)\n")
    tree = tmp_path / "tree.nwk"
    tree.write_text("(a,missing);\n")
    result = subprocess.run(
        [cli, "smallpars", "--structures", str(fasta), "--tree", str(tree)],
        capture_output=True, text=True,
    )
    assert result.returncode == 2
    assert "extra" in result.stderr
    assert "missing" in result.stderr


def test_cli_config_file(cli, tmp_path):
    fasta = tmp_path / "structures.fa"
    fasta.write_text(">a\n((..))\n>b\n(....)\n>c\n......\n")
    cfg = tmp_path / "run.ini"
    cfg.write_text("[distance]\nmetric=il\npairs=first-vs-rest\n")
    result = subprocess.run(
        [cli, "--config", str(cfg), "distance", "--input", str(fasta)],
        capture_output=True, text=True,
    )
    assert result.returncode == 0
    rows = list(csv.DictReader(io.StringIO(result.stdout)))
    assert [(r["id1"], r["id2"], r["metric"]) for r in rows] == [
        ("a", "b", "il"), ("a", "c", "il")]


def test_cli_experiment_empty_methods(cli, tmp_path):
    result = subprocess.run(
        [cli, "experiment", "--data-dir", str(tmp_path), "--methods", ""],
        capture_output=True, text=True,
    )
    assert result.returncode == 0
    assert result.stdout.splitlines() == [
        "replicate,method,node_height,mean_bp,max_bp,spcost_per_edge,wall_ms"
    ]
