"""End-to-end tests for the command-line interface.

Everything goes through main(argv) so the tests cover the same code path
as the installed console script, including exit codes and stdout bytes.
"""

import json

import pytest

from ternlink.cli import (
    CatalogEntry,
    RunReport,
    SchemaError,
    UsageError,
    catalog_entries,
    load_structure_file,
    main,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out), err


# -- catalog ---------------------------------------------------------------


def test_catalog_names_unique():
    names = [e.name for e in catalog_entries()]
    assert len(names) == len(set(names))


def test_catalog_kinds():
    kinds = {e.kind for e in catalog_entries()}
    assert kinds == {"structure", "cocycle", "gfamily", "system", "hopf"}


def test_every_catalog_entry_validates():
    for entry in catalog_entries():
        assert entry.validate(), entry.name


def test_catalog_smoke_through_cli(capsys):
    code, rep, _ = run_json(capsys, "verify")
    rows = rep["result"]["catalog"]
    assert code == 0
    assert rep["result"]["ok"] is True
    assert len(rows) == len(catalog_entries())
    assert {r["name"] for r in rows} >= {"heap:Z4", "heap:D3",
                                         "alexander-gfamily:SL2Z3",
                                         "group-algebra:S3", "lie:sl2"}


def test_catalog_entry_repr():
    e = catalog_entries()[0]
    assert e.name in repr(e)


# -- the documented examples ----------------------------------------------


def test_verify_heap_z4(capsys):
    code, rep, _ = run_json(capsys, "verify", "--structure", "heap:Z4")
    assert code == 0
    assert rep["result"]["tsd"]["ok"] is True
    assert rep["result"]["rack"]["ok"] is True
    assert rep["result"]["size"] == 4


def test_compare_square_of_sigma_on_z4(capsys):
    code, rep, _ = run_json(
        capsys, "compare", "--structure", "heap:Z4", "--cocycle", "phi:1",
        "--braid", "n=2; s1 s1 s1 s1", "--char-order", "4")
    assert code == 0
    assert rep["result"]["equal"] is True
    assert rep["result"]["quantum"] == rep["result"]["statesum_image"]


def test_cohomology_of_z2_heap(capsys):
    code, rep, _ = run_json(capsys, "cohomology", "--structure", "heap:Z2",
                            "--coeffs", "Z2")
    assert code == 0
    assert rep["result"]["group"] == "Z2 + Z2"
    assert rep["result"]["torsion"] == [2, 2]


def test_heap_d3_is_a_six_element_rack(capsys):
    code, rep, _ = run_json(capsys, "verify", "--structure", "heap:D3")
    assert code == 0
    assert rep["result"]["size"] == 6
    assert rep["result"]["rack"]["ok"] is True


def test_gfamily_has_24_operations(capsys):
    code, rep, _ = run_json(capsys, "verify", "--structure",
                            "alexander-gfamily:SL2Z3")
    assert code == 0
    assert rep["result"]["operations"] == 24
    assert all(ax["ok"] for ax in rep["result"]["axioms"])


# -- reproducibility -------------------------------------------------------


def test_json_output_is_byte_stable(capsys):
    argv = ("cocycle", "--structure", "heap:Z4", "--cocycle", "phi:2")
    _, first, _ = run(capsys, *argv, "--json")
    _, second, _ = run(capsys, *argv, "--json")
    assert first == second


def test_sampled_system_check_is_seed_stable(capsys):
    argv = ("system", "--structure", "mutual-shift:Z5",
            "--budget", "2000", "--seed", "11")
    _, first, _ = run(capsys, *argv, "--json")
    _, second, _ = run(capsys, *argv, "--json")
    assert first == second
    rep = json.loads(first)
    assert rep["coverage"]["mode"] == "sampled"
    assert rep["coverage"]["seed"] == 11


def test_timing_is_not_serialized():
    rep = RunReport({"subcommand": "verify", "options": {}}, {}, {"ok": True})
    rep.timing_ms = 123
    assert "123" not in rep.dumps()
    assert "timing" not in rep.dumps()


def test_inputs_carry_hashes(capsys):
    _, rep, _ = run_json(capsys, "invariant", "--structure", "heap:Z2",
                         "--cocycle", "zero", "--braid", "n=2; s1 t1^2")
    assert len(rep["inputs"]["structure"]["sha256"]) == 64
    assert len(rep["inputs"]["cocycle"]["sha256"]) == 64
    # the braid is echoed in normal form
    assert rep["inputs"]["braid"]["word"] == "n=2; t2^2 s1"


# -- exit code 2: usage ----------------------------------------------------


def test_unknown_structure_name(capsys):
    code, _, err = run(capsys, "verify", "--structure", "heap:Q8")
    assert code == 2
    assert "unknown structure" in err


def test_unknown_cocycle_name(capsys):
    code, _, err = run(capsys, "cocycle", "--structure", "heap:Z4",
                       "--cocycle", "nope")
    assert code == 2
    assert "unknown cocycle" in err


def test_bad_braid_word(capsys):
    code, _, err = run(capsys, "quantum", "--structure", "heap:Z4",
                       "--cocycle", "phi:1", "--braid", "n=2; s7",
                       "--char-order", "4")
    assert code == 2
    assert "braid" in err


def test_cocycle_structure_mismatch(capsys):
    code, _, err = run(capsys, "cocycle", "--structure", "heap:Z4",
                       "--cocycle", "d3psi")
    assert code == 2
    assert "not on the requested structure" in err


def test_phi_index_out_of_range(capsys):
    code, _, err = run(capsys, "cocycle", "--structure", "heap:Z4",
                       "--cocycle", "phi:9")
    assert code == 2


def test_missing_char_order(capsys):
    code, _, err = run(capsys, "quantum", "--structure", "heap:Z4",
                       "--cocycle", "phi:1", "--braid", "n=2; s1")
    assert code == 2
    assert "char-order" in err


def test_missing_required_flag(capsys):
    code, _, err = run(capsys, "cohomology")
    assert code == 2
    assert "--structure" in err


def test_unknown_subcommand(capsys):
    assert main(["frobnicate"]) == 2
    capsys.readouterr()


def test_workers_must_be_positive(capsys):
    code, _, err = run(capsys, "verify", "--structure", "heap:Z2",
                       "--workers", "0")
    assert code == 2
    assert "workers" in err


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    capsys.readouterr()


def test_cocycle_on_lie_object_rejected(capsys):
    code, _, err = run(capsys, "hopf", "--structure", "lie:abelian2",
                       "--cocycle", "phi:1", "--char-order", "2")
    assert code == 2
    assert "involutory" in err


# -- exit code 1: mathematical failure ------------------------------------


def test_non_tsd_table_fails_with_counterexample(tmp_path, capsys):
    path = tmp_path / "xor.json"
    path.write_text(json.dumps({"kind": "ternary", "name": "xor", "size": 2,
                                "table": [0, 0, 1, 1, 1, 1, 0, 0]}))
    code, rep, _ = run_json(capsys, "verify", "--structure", str(path))
    assert code == 1
    assert rep["result"]["reason"] == "structure fails self-distributivity"
    witness = rep["result"]["check"]["counterexample"]
    assert len(witness) == 5


def test_corrupted_cocycle_file_fails(tmp_path, capsys):
    from ternlink.cohomology import phi_i_cocycle

    c = phi_i_cocycle(4, 1)
    obj = c.to_json()
    obj["values"] = list(obj["values"])
    obj["values"][5] += 1
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(obj))
    code, rep, _ = run_json(capsys, "invariant", "--structure", "heap:Z4",
                            "--cocycle", str(path), "--braid", "n=2; s1")
    assert code == 1
    assert rep["result"]["reason"] == "cochain fails the 2-cocycle condition"
    assert rep["result"]["check"]["counterexample"] is not None


def test_cocycle_subcommand_reports_failing_cochain(tmp_path, capsys):
    from ternlink.cohomology import phi_i_cocycle

    c = phi_i_cocycle(3, 1)
    obj = c.to_json()
    obj["values"] = list(obj["values"])
    obj["values"][0] += 1
    path = tmp_path / "broken3.json"
    path.write_text(json.dumps(obj))
    code, rep, _ = run_json(capsys, "cocycle", "--structure", "heap:Z3",
                            "--cocycle", str(path))
    assert code == 1
    assert rep["result"]["cocycle_condition"]["ok"] is False


# -- file loading ----------------------------------------------------------


def test_load_structure_file_roundtrip(tmp_path):
    from ternlink.tsd import cyclic_group, heap_of_group

    s = heap_of_group(cyclic_group(3))
    path = tmp_path / "z3.json"
    path.write_text(json.dumps(s.to_json()))
    loaded = load_structure_file(str(path))
    assert loaded.size == 3
    assert loaded.left_inverse is not None


def test_schema_error_missing_kind(tmp_path):
    path = tmp_path / "nokind.json"
    path.write_text(json.dumps({"size": 2, "table": [0] * 8}))
    with pytest.raises(SchemaError) as exc:
        load_structure_file(str(path))
    assert exc.value.pointer == "/kind"


def test_schema_error_bad_json(tmp_path):
    path = tmp_path / "garbage.json"
    path.write_text("{this is not json")
    with pytest.raises(SchemaError) as exc:
        load_structure_file(str(path))
    assert exc.value.pointer == ""


def test_schema_error_non_object(tmp_path):
    path = tmp_path / "list.json"
    path.write_text("[1, 2, 3]")
    with pytest.raises(SchemaError):
        load_structure_file(str(path))


def test_schema_error_unknown_kind(tmp_path):
    path = tmp_path / "weird.json"
    path.write_text(json.dumps({"kind": "octonion", "size": 2}))
    with pytest.raises(SchemaError) as exc:
        load_structure_file(str(path))
    assert exc.value.pointer == "/kind"


def test_missing_file_is_usage_error(capsys):
    code, _, err = run(capsys, "verify", "--structure",
                       "/nonexistent/path.json")
    assert code == 2


def test_hopf_file_roundtrip(tmp_path, capsys):
    from ternlink.hopf import build_named, hopf_to_json

    H = build_named("group-algebra:Z3")
    path = tmp_path / "kz3.json"
    path.write_text(json.dumps(hopf_to_json(H)))
    code, rep, _ = run_json(capsys, "hopf", "--structure", str(path))
    assert code == 0
    assert rep["result"]["axioms"] is True
    assert rep["result"]["heap_tsd"] is True


# -- subcommand payloads ---------------------------------------------------


def test_cocycle_reports_nontrivial_class(capsys):
    code, rep, _ = run_json(capsys, "cocycle", "--structure", "heap:Z4",
                            "--cocycle", "phi:1")
    assert code == 0
    assert rep["result"]["cocycle_condition"]["ok"] is True
    assert rep["result"]["is_coboundary"] is False
    assert rep["result"]["witness"] is None


def test_zero_cocycle_is_a_coboundary(capsys):
    code, rep, _ = run_json(capsys, "cocycle", "--structure", "heap:Z2",
                            "--cocycle", "zero")
    assert code == 0
    assert rep["result"]["is_coboundary"] is True
    assert rep["result"]["witness"] is not None


def test_invariant_of_unknot_with_zero_weights(capsys):
    code, rep, _ = run_json(capsys, "invariant", "--structure", "heap:Z2",
                            "--cocycle", "zero", "--braid", "n=1;")
    assert code == 0
    inv = rep["result"]["invariant"]
    assert inv["components"] == 1
    # arcs of the blackboard-doubled unknot carry element pairs
    assert inv["colorings"] == 4


def test_quantum_trace_of_twisted_unknot(capsys):
    code, rep, _ = run_json(capsys, "quantum", "--structure", "heap:Z4",
                            "--cocycle", "phi:1", "--braid", "n=1; t1",
                            "--char-order", "4")
    assert code == 0
    # one full twist with gcd(1, 4) = 1 sums the twist weights to exactly m
    assert rep["result"]["root_order"] == 4
    assert rep["result"]["trace"] == {"order": 4, "coords": [4, 0]}


def test_hopf_with_lifted_cocycle(capsys):
    code, rep, _ = run_json(capsys, "hopf", "--structure", "group-algebra:Z4",
                            "--cocycle", "phi:1", "--char-order", "4")
    assert code == 0
    res = rep["result"]
    assert res["categorical_cocycle"]["ok"] is True
    assert res["categorical_cocycle"]["normalized"] is False
    assert res["braid_identities"]["ok"] is True
    assert res["frobenius"]["ok"] is True


def test_hopf_s3_skips_nothing(capsys):
    code, rep, _ = run_json(capsys, "hopf", "--structure", "group-algebra:S3")
    assert code == 0
    res = rep["result"]
    # group algebras are cocommutative even when the group is not abelian
    assert res["cocommutative"] is True
    assert res["heap_rack"] is True
    assert res["frobenius"]["scalars"]["eps_lambda"] == {"order": 1,
                                                         "coords": [6]}


def test_lie_hopf_subcommand(capsys):
    code, rep, _ = run_json(capsys, "hopf", "--structure", "lie:sl2")
    assert code == 0
    assert rep["result"]["tsd_object"] is True
    assert rep["result"]["dim"] == 4


def test_system_augmented_exhaustive(capsys):
    code, rep, _ = run_json(capsys, "system", "--structure", "augmented:2-2-3",
                            "--exhaustive")
    assert code == 0
    assert rep["result"]["distributivity"]["ok"] is True
    assert rep["result"]["cocycle"]["ok"] is True
    assert rep["coverage"]["mode"] == "exhaustive"


def test_system_bad_augmented_pattern(capsys):
    code, _, err = run(capsys, "system", "--structure", "augmented:2-2")
    assert code == 2


def test_heap_pattern_beyond_catalog(capsys):
    code, rep, _ = run_json(capsys, "verify", "--structure", "heap:Z15")
    assert code == 0
    assert rep["result"]["size"] == 15


def test_dihedral_composed_structure(capsys):
    code, rep, _ = run_json(capsys, "verify", "--structure", "dihedral:Z5")
    assert code == 0
    assert rep["result"]["tsd"]["ok"] is True


# -- environment and output modes -----------------------------------------


def test_max_cells_env_blocks_large_table(monkeypatch, capsys):
    monkeypatch.setenv("TSD_MAX_CELLS", "5")
    code, _, err = run(capsys, "verify", "--structure", "heap:Z12")
    assert code == 2
    assert "TSD_MAX_CELLS" in err


def test_human_output_has_status_line(capsys):
    code, out, _ = run(capsys, "verify", "--structure", "heap:Z3")
    assert code == 0
    assert "status: pass" in out
    assert "time:" in out


def test_human_output_marks_failure(tmp_path, capsys):
    path = tmp_path / "xor.json"
    path.write_text(json.dumps({"kind": "ternary", "name": "xor", "size": 2,
                                "table": [0, 0, 1, 1, 1, 1, 0, 0]}))
    code, out, _ = run(capsys, "verify", "--structure", str(path))
    assert code == 1
    assert "status: FAIL" in out


def test_command_echo_includes_options(capsys):
    _, rep, _ = run_json(capsys, "cohomology", "--structure", "heap:Z2",
                         "--coeffs", "Z2", "--seed", "3")
    assert rep["command"]["subcommand"] == "cohomology"
    assert rep["command"]["options"]["coeffs"] == "Z2"
    assert rep["command"]["options"]["seed"] == 3


def test_run_report_repr():
    rep = RunReport({"subcommand": "verify", "options": {}}, {}, {})
    assert "verify" in repr(rep)
