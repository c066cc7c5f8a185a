import json
import sys
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).resolve().parents[1]))

from prescheck import cli
from prescheck.errors import ElementOutOfRange
from prescheck.lattice_core import free_bounded_distributive_lattice


def run_json(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def check(data, name):
    return next(c for c in data["checks"] if c["name"] == name)


def test_lattice_free(capsys):
    code, data = run_json(capsys, "lattice", "free", "--gens", "2")
    assert code == 0
    assert data["v"] == 1 and data["subcommand"] == "lattice free"
    rec = check(data, "free-size(n=2)")
    assert rec["verdict"] and rec["details"]["size"] == 6 and rec["details"]["oracle"] == 6
    assert "duration" not in rec


def test_lattice_free_sizes_up_to_four(capsys):
    code, data = run_json(capsys, "lattice", "free")
    assert code == 0
    sizes = [c["details"]["size"] for c in data["checks"] if c["name"].startswith("free-size")]
    assert sizes == [2, 3, 6, 20, 168]


def test_non_distributive_lattice_exits_2(tmp_path, capsys):
    meet = [[0] * 5 for _ in range(5)]
    join = [[4] * 5 for _ in range(5)]
    for a in range(5):
        meet[a][a] = join[a][a] = a
        meet[a][4] = meet[4][a] = a
        join[a][0] = join[0][a] = a
        meet[a][0] = meet[0][a] = 0
        join[a][4] = join[4][a] = 4
    f = tmp_path / "m3.json"
    f.write_text(json.dumps({"size": 5, "meet": meet, "join": join, "bottom": 0, "top": 4}), encoding="utf-8")
    code, data = run_json(capsys, "lattice", "validate", "--lattice-json", str(f))
    assert code == 2
    assert data["error"] == "NonDistributive"
    assert len(data["witness"]) == 3


def test_simplicial_check_respects_bound(capsys):
    code, data = run_json(capsys, "lattice", "simplicial-check", "--gens", "3", "--bound", "100")
    assert code == 2
    assert data["error"] == "EnumerationTooLarge"
    assert data["witness"] == {"size": 400, "bound": 100}


def test_simplicial_check_on_fd2(capsys):
    code, data = run_json(capsys, "lattice", "simplicial-check", "--gens", "2")
    assert code == 0
    assert len(data["checks"]) == 36


def test_lattice_chain_by_labels(capsys):
    code, data = run_json(capsys, "lattice", "chain", "--gens", "2", "--constraints", "g1<=g2")
    assert code == 0
    assert data["parameters"]["constraints"] == [["g1", "g2"]]


def test_bad_constraint_is_a_parse_error(capsys):
    code, data = run_json(capsys, "lattice", "chain", "--gens", "2", "--constraints", "g1")
    assert code == 2
    assert data["error"] == "SpecParseError"


def test_parse_constraints_accepts_ids_and_labels():
    L = free_bounded_distributive_lattice(2)
    assert cli.parse_constraints(L, "#1<=#2, #0<=#5") == [(1, 2), (0, 5)]
    assert cli.parse_constraints(L, "0<=1") == [(0, 5)]
    with pytest.raises(ElementOutOfRange):
        cli.parse_constraints(L, "#9<=1")


def test_ring_h1_on_z6(capsys):
    code, data = run_json(capsys, "ring", "h1", "--ring", "Z/6", "--cover", "3,4")
    assert code == 0
    rec = check(data, "h1")
    assert rec["details"]["h0"] == 6 and rec["details"]["h1"] == 1 and rec["details"]["exact"]
    assert check(data, "cochain-condition")["verdict"]


def test_ring_h1_rejects_non_unimodular_cover(capsys):
    code, data = run_json(capsys, "ring", "h1", "--ring", "Z/6", "--cover", "2,4")
    assert code == 2
    assert data["error"] == "NotUnimodular"
    assert data["witness"]["cover"] == [2, 4]


def test_corrupted_control_detects_cohomology(capsys):
    code, data = run_json(capsys, "ring", "h1", "--ring", "Z/12", "--cover", "5,10", "--corrupt")
    assert code == 0
    assert check(data, "h1")["details"]["h1"] > 1


def test_ring_flat_expectation(capsys):
    code, data = run_json(capsys, "ring", "flat", "--ring", "Z/12", "--algebra", "Z/3", "--expect", "flat")
    assert code == 0
    code, data = run_json(capsys, "ring", "flat", "--ring", "Z/4", "--algebra", "Z/2", "--expect", "flat")
    assert code == 1
    assert check(data, "flatness")["details"]["classification"] == "not-flat"


def test_ring_localize_bundled_name(capsys):
    code, data = run_json(capsys, "ring", "localize", "--ring", "z6", "--element", "2")
    assert code == 0
    assert check(data, "localization(2)")["details"]["size"] == 3


def test_site_presentation_failure(capsys):
    code, data = run_json(capsys, "site", "presentation", "--presentation", "at-most:2", "--bound", "3")
    assert code == 1
    rec = check(data, "presentation(at-most:2)")
    assert rec["witness"]["base"] == 2 and rec["witness"]["fibers"] == [2, 2]


def test_site_check_cover_from_file(tmp_path, capsys):
    f = tmp_path / "f.json"
    f.write_text(json.dumps({"domain": 4, "codomain": 2, "table": [0, 1, 1, 0]}), encoding="utf-8")
    code, data = run_json(capsys, "site", "check-cover", "--map", str(f), "--presentation", "odd")
    assert code == 1
    assert check(data, "cover")["witness"] == {"point": 0, "fiber_size": 2}


def test_site_sheaf_on_given_map(tmp_path, capsys):
    f = tmp_path / "f.json"
    f.write_text(json.dumps({"domain": 3, "codomain": 1, "table": [0, 0, 0]}), encoding="utf-8")
    code, data = run_json(capsys, "site", "sheaf", "--map", str(f), "--target", "3")
    assert code == 0
    assert check(data, "sheaf-equalizer")["details"]["base_size"] == 3


def test_join_homology_text(capsys):
    code = cli.main(["join", "homology", "--discrete", "2", "--power", "3", "--format", "text"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("join homology: 2 passed, 0 failed")
    assert "PASS join-connectivity" in out


def test_jsonl_format(capsys):
    code = cli.main(["join", "stabilize", "--set", "2", "--target", "3", "--format", "jsonl"])
    lines = capsys.readouterr().out.strip().splitlines()
    assert code == 0
    rows = [json.loads(line) for line in lines]
    assert all(r["v"] == 1 for r in rows)
    assert rows[0]["name"] == "stabilize(A=2,X=3)"
    assert rows[0]["details"]["maps_from_join"] == 3
    assert rows[-1]["summary"] == {"passed": 1, "failed": 0, "total": 1}


def test_timings_and_out_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = cli.main(["--timings", "--out", str(out), "site", "projective", "--target", "2"])
    assert code == 0
    assert capsys.readouterr().out == ""
    data = json.loads(out.read_text(encoding="utf-8"))
    assert "duration" in data["checks"][0]


def test_verbose_adds_proof(capsys):
    code, data = run_json(capsys, "ring", "spec", "--ring", "Z/2", "--algebra", "prod(Z/2,Z/2)", "-v")
    assert code == 0
    assert data["proof"]
    rec = check(data, "spec-points")
    assert len(rec["details"]["points"]) == 2
    assert rec["details"]["kernel"] == 1


def test_html_format(capsys):
    code = cli.main(["join", "build", "--sphere", "1", "--power", "2", "--format", "html"])
    out = capsys.readouterr().out
    assert code == 0
    assert "<h2>Check Report</h2>" in out


def test_bad_arguments_exit_2(capsys):
    assert cli.main(["lattice"]) == 2
    assert cli.main(["ring", "h1"]) == 2
    assert cli.main(["site", "projective", "--format", "xml"]) == 2


def test_run_returns_report():
    rep, code, diag, args = cli.run(["join", "fibers", "--samples", "20"])
    assert diag is None and code == 0
    assert args.samples == 20
    assert rep.checks[0].name == "fiber-of-join"


def test_ring_spec_counts_points_without_verbose(capsys):
    code, data = run_json(capsys, "ring", "spec", "--ring", "Z/6", "--algebra", "quot(Z/6,x^2-x)")
    assert code == 0
    assert "proof" not in data
    rec = check(data, "spec-points")
    assert len(rec["details"]["points"]) == 4 and rec["details"]["point_count"] == 4


def test_ring_spec_expected_points(capsys):
    code, data = run_json(capsys, "ring", "spec", "--ring", "Z/6", "--algebra", "quot(Z/6,x^2-x)",
                          "--expect-points", "3")
    assert code == 1
    assert check(data, "spec-points")["witness"]["expected"] == 3


def test_simplicial_details_carry_equalizer_report(capsys):
    code = cli.main(["lattice", "simplicial-check", "--lattice", "square-with-top", "--format", "jsonl"])
    rows = [json.loads(line) for line in capsys.readouterr().out.strip().splitlines()]
    assert code == 0
    details = rows[0]["details"]
    assert {"pair", "lattice", "lattice_size", "equalizer_size", "bijective"} <= set(details)
    assert details["equalizer_size"] == details["lattice_size"]


def test_emit_lattice_round_trip(tmp_path, capsys):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["lattice", "validate", "--gens", "2", "--emit-lattice", str(first)]) == 0
    assert cli.main(["lattice", "validate", "--lattice-json", str(first), "--emit-lattice", str(second)]) == 0
    capsys.readouterr()
    assert first.read_bytes() == second.read_bytes()
    assert json.loads(first.read_text(encoding="utf-8"))["size"] == 6


CHAIN3 = {
    "size": 3,
    "meet": [[0, 0, 0], [0, 1, 1], [0, 1, 2]],
    "join": [[0, 1, 2], [1, 1, 2], [2, 2, 2]],
    "bottom": 0,
    "top": 2,
}


def test_given_congruence_inline(tmp_path, capsys):
    f = tmp_path / "theta.json"
    f.write_text(json.dumps({"lattice": CHAIN3, "classes": [0, 0, 1]}), encoding="utf-8")
    code, data = run_json(capsys, "lattice", "congruence", "--congruence", str(f))
    assert code == 0
    assert data["subcommand"] == "lattice congruence"
    assert check(data, "closure-of-classes")["details"]["blocks"] == [[0, 1], [2]]
    assert check(data, "quotient-projection")["details"]["quotient_size"] == 2


def test_given_congruence_by_path(tmp_path, capsys):
    (tmp_path / "chain.json").write_text(json.dumps(CHAIN3), encoding="utf-8")
    f = tmp_path / "theta.json"
    f.write_text(json.dumps({"lattice": "chain.json", "classes": [0, 1, 1]}), encoding="utf-8")
    code, data = run_json(capsys, "lattice", "congruence", "--congruence", str(f))
    assert code == 0
    assert check(data, "quotient-projection")["details"]["projection"] == [0, 1, 1]


def test_incompatible_congruence_exits_2(tmp_path, capsys):
    boolean2 = {
        "size": 4,
        "meet": [[0, 0, 0, 0], [0, 1, 0, 1], [0, 0, 2, 2], [0, 1, 2, 3]],
        "join": [[0, 1, 2, 3], [1, 1, 3, 3], [2, 3, 2, 3], [3, 3, 3, 3]],
        "bottom": 0,
        "top": 3,
    }
    f = tmp_path / "theta.json"
    f.write_text(json.dumps({"lattice": boolean2, "classes": [0, 1, 1, 2]}), encoding="utf-8")
    code, data = run_json(capsys, "lattice", "congruence", "--congruence", str(f))
    assert code == 2
    assert data["error"] == "NotALattice"


def test_congruence_file_needs_classes(tmp_path, capsys):
    f = tmp_path / "theta.json"
    f.write_text(json.dumps({"lattice": CHAIN3}), encoding="utf-8")
    code, data = run_json(capsys, "lattice", "congruence", "--congruence", str(f))
    assert code == 2
    assert data["error"] == "SpecParseError"


def test_ring_glue_composes_refined_covers(capsys):
    code, data = run_json(capsys, "ring", "glue", "--ring", "Z/6", "--cover", "3,4")
    assert code == 0
    rec = check(data, "zariski-composition")
    assert rec["verdict"] and rec["details"]["unimodular"]
    assert rec["details"]["h1"] == 1
