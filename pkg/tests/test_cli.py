import json
from fractions import Fraction

import pytest

from src import errors
from src.cli.generator import generate, parse_range
from src.cli.main import main
from src.cli.manifest import dump_manifest, ingest_manifest, parse_manifest, to_graph_data
from src.graph.manifold import validate

REDUCED_C = {
    "schema_version": 1,
    "vertices": [{"id": "a", "charge": 1}, {"id": "b", "charge": "2/2"}],
    "edges": [{"id": "t", "ends": ["a", "b"], "b": 1}],
}

GLUING_C = {
    "schema_version": 1,
    "vertices": [{"id": "a"}, {"id": "b"}],
    "edges": [{"id": "t", "ends": ["a", "b"], "gluing": [[1, 1], [0, -1]]}],
}


def write(path, payload):
    path.write_text(json.dumps(payload))
    return path


def read_report(path):
    return json.loads(path.read_text())["report"]


def test_analyze_writes_report(tmp_path, capsys):
    source = write(tmp_path / "c.json", REDUCED_C)
    output = tmp_path / "out.json"
    assert main(["analyze", "--input", str(source), "--output", str(output)]) == 0
    envelope = json.loads(output.read_text())
    assert envelope["report"]["verdict_vf"] is True
    assert envelope["report"]["verdict_npc"] is False
    assert len(envelope["input_digest"]) == 64
    assert "NPC=no VF=yes" in capsys.readouterr().out


def test_analyze_default_output_location(tmp_path):
    source = write(tmp_path / "c.json", REDUCED_C)
    assert main(["analyze", "--input", str(source)]) == 0
    assert (tmp_path / "c.report.json").exists()


def test_bad_rational_exits_with_code(tmp_path, capsys):
    payload = {**REDUCED_C, "vertices": [{"id": "a", "charge": "1/0"}, {"id": "b", "charge": 1}]}
    source = write(tmp_path / "bad.json", payload)
    assert main(["analyze", "--input", str(source)]) == 2
    error = json.loads(capsys.readouterr().out)["error"]
    assert error["code"] == "BAD_RATIONAL"


def test_validation_error_exits_with_code(tmp_path, capsys):
    payload = {**REDUCED_C, "edges": []}
    source = write(tmp_path / "split.json", payload)
    assert main(["analyze", "--input", str(source)]) == 2
    assert json.loads(capsys.readouterr().out)["error"]["code"] == "DISCONNECTED_GRAPH"


def test_mixed_forms_are_rejected():
    payload = {**GLUING_C, "vertices": [{"id": "a", "charge": 1}, {"id": "b"}]}
    with pytest.raises(errors.BadManifest):
        parse_manifest(json.dumps(payload))
    with pytest.raises(errors.BadManifest):
        parse_manifest("{not json")


def test_float_charges_are_rejected():
    payload = {**REDUCED_C, "vertices": [{"id": "a", "charge": 0.5}, {"id": "b", "charge": 1}]}
    with pytest.raises(errors.BadRational):
        parse_manifest(json.dumps(payload))


def test_gluing_form_matches_reduced_form(tmp_path):
    reduced = write(tmp_path / "reduced.json", REDUCED_C)
    glued = write(tmp_path / "glued.json", GLUING_C)
    assert main(["analyze", "--input", str(reduced), "--output", str(tmp_path / "r1.json")]) == 0
    assert main(["analyze", "--input", str(glued), "--output", str(tmp_path / "r2.json")]) == 0
    assert read_report(tmp_path / "r1.json") == read_report(tmp_path / "r2.json")


def test_ingest_writes_reduced_manifest(tmp_path):
    glued = write(tmp_path / "glued.json", GLUING_C)
    output = tmp_path / "reduced.json"
    assert main(["ingest", "--input", str(glued), "--output", str(output)]) == 0
    manifest = parse_manifest(output.read_text())
    assert manifest.form == "reduced"
    assert [v.charge for v in manifest.vertices] == [1, 1]


def test_ingested_manifest_reports_like_its_gluing_form(tmp_path):
    glued = write(tmp_path / "glued.json", GLUING_C)
    reduced = tmp_path / "reduced.json"
    assert main(["ingest", "--input", str(glued), "--output", str(reduced)]) == 0
    assert reduced.read_text() == ingest_manifest(parse_manifest(json.dumps(GLUING_C)))
    for source, name in ((glued, "g.json"), (reduced, "r.json")):
        assert main(["analyze", "--input", str(source), "--output", str(tmp_path / name), "--certify"]) == 0
    assert read_report(tmp_path / "g.json") == read_report(tmp_path / "r.json")


def test_certificates_are_opt_in(tmp_path):
    source = write(tmp_path / "c.json", REDUCED_C)
    assert main(["analyze", "--input", str(source), "--output", str(tmp_path / "plain.json")]) == 0
    assert read_report(tmp_path / "plain.json")["certificate"] is None
    assert main(["analyze", "--input", str(source), "--output", str(tmp_path / "cert.json"), "--certify"]) == 0
    report = read_report(tmp_path / "cert.json")
    assert report["certificate"]["strictness"] == "weak"
    assert report["boundary_classes"] is not None


def test_canonical_round_trip():
    text = dump_manifest(parse_manifest(json.dumps({
        "schema_version": 1,
        "vertices": [{"id": "a", "charge": "-6/4"}],
        "edges": [{"id": "l", "ends": ["a", "a"], "b": 2, "bw_sign": -1}],
    })))
    assert json.loads(text)["vertices"][0]["charge"] == "-3/2"
    assert dump_manifest(parse_manifest(text)) == text


def test_generate_forced_shapes():
    pair = generate(2, 1, seed=1)
    assert len(pair.vertices) == 2 and len(pair.edges) == 1
    loop = generate(1, 1, seed=7)
    assert loop.edges[0].ends == ("v0", "v0")


def test_generate_is_deterministic():
    first = dump_manifest(generate(5, 8, seed=42, charge_denominator=3))
    assert dump_manifest(generate(5, 8, seed=42, charge_denominator=3)) == first


def test_generated_instances_validate():
    for seed in range(20):
        for gluing in (False, True):
            manifest = generate(4, 6, seed=seed, b_range=(1, 4), gluing=gluing)
            assert validate(to_graph_data(manifest)).valid


def test_generate_rejects_impossible_shapes():
    with pytest.raises(errors.InfeasibleShape):
        generate(4, 2, seed=0)
    with pytest.raises(errors.InfeasibleShape):
        generate(0, 0, seed=0)


def test_generate_command(tmp_path, capsys):
    assert main(["generate", "--vertices", "3", "--edges", "3", "--seed", "9"]) == 0
    first = capsys.readouterr().out
    output = tmp_path / "g.json"
    assert main(["generate", "--vertices", "3", "--edges", "3", "--seed", "9", "--output", str(output)]) == 0
    assert output.read_text() == first
    assert main(["generate", "--vertices", "3", "--edges", "1", "--seed", "9"]) == 2


def test_parse_range():
    assert parse_range("-1/2..3") == (Fraction(-1, 2), Fraction(3))
    assert parse_range("1..4", integral=True) == (1, 4)
    with pytest.raises(errors.BadManifest):
        parse_range("3..1")


def test_batch_analysis(tmp_path, capsys):
    inputs = tmp_path / "in"
    inputs.mkdir()
    write(inputs / "one.json", REDUCED_C)
    write(inputs / "two.json", GLUING_C)
    outputs = tmp_path / "out"
    assert main(["analyze", "--input", str(inputs), "--output", str(outputs), "--jobs", "2"]) == 0
    assert sorted(p.name for p in outputs.iterdir()) == ["one.report.json", "two.report.json"]
    assert "2/2 manifests analyzed" in capsys.readouterr().out


def test_selftest_examples_only(capsys):
    assert main(["selftest", "--breadth", "0"]) == 0
    assert "0 failure(s)" in capsys.readouterr().out
