import json
from pathlib import Path

import pytest
from jsonschema import Draft4Validator

from schemamine.cli import main
from schemamine.schema_assembler import serialize

from fig2_expected import FIG2_REFINED, FIXTURES
from eval_pairs import PAIRS


def _read(path: Path) -> dict:
    return json.loads(path.read_text(encoding="utf-8"))


def test_mine_writes_schema_plan_and_diagnostics(tmp_path):
    out = tmp_path / "out"
    rc = main(["mine", str(FIXTURES / "sklearn_stub.py"), "--out", str(out)])
    assert rc == 0
    doc = _read(out / "sklearn_stub" / "LogisticRegression.json")
    assert doc["class_name"] == "LogisticRegression"
    plan = _read(out / "plans" / "LogisticRegression.json")
    assert plan["candidates"]["solver"] == ["linear", "sag", "lbfgs"]
    diag = _read(out / "diagnostics.json")
    assert diag["classes"]["written"] == ["LogisticRegression"]


def test_mine_empty_input_exit_2(tmp_path):
    src = tmp_path / "empty"
    src.mkdir()
    (src / "nothing.py").write_text("x = 1\n")
    rc = main(["mine", str(src), "--out", str(tmp_path / "out")])
    assert rc == 2


def test_mine_exclude_accounting(tmp_path):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"exclude": ["LogisticRegression"]}))
    out = tmp_path / "out"
    rc = main(["--config", str(cfg), "mine",
               str(FIXTURES / "sklearn_stub.py"), "--out", str(out)])
    assert rc == 2
    diag = _read(out / "diagnostics.json")
    assert diag["classes"] == {"written": [],
                               "excluded": ["LogisticRegression"],
                               "failed": []}


def test_every_class_accounted_for(tmp_path):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"exclude": ["MLP*"]}))
    out = tmp_path / "out"
    main(["--config", str(cfg), "mine", str(FIXTURES), "--out", str(out)])
    diag = _read(out / "diagnostics.json")
    buckets = diag["classes"]
    assert buckets["excluded"] == ["MLPClassifier"]
    assert buckets["failed"] == []
    assert sorted(buckets["written"] + buckets["excluded"]) == [
        "GradientBoostingClassifier", "LogisticRegression", "MLPClassifier",
        "OneHotEncoder"]


def test_realistic_tree_module_mines_cleanly(tmp_path):
    out = tmp_path / "out"
    rc = main(["mine", str(FIXTURES / "tree_stub.py"), "--out", str(out)])
    assert rc == 0
    validator = Draft4Validator(Draft4Validator.META_SCHEMA)

    gbc = _read(out / "tree_stub" / "GradientBoostingClassifier.json")
    validator.validate(gbc["hyperparams"])
    props = gbc["hyperparams"]["allOf"][0]["properties"]
    assert props["criterion"]["type"] == "string"
    assert props["criterion"]["default"] == "friedman_mse"
    assert props["max_features"]["anyOf"] == [
        {"type": "integer"}, {"type": "number"}, {"type": "string"},
        {"enum": [None]}]
    assert props["max_features"]["default"] is None
    assert props["n_estimators"]["default"] == 100
    # keyword-only argument after the bare * still lands in the schema
    assert "validation_fraction" in props
    assert gbc["hyperparams"]["allOf"][0]["required"][-1] == \
        "validation_fraction"
    assert gbc["fit_input"]["properties"]["X"]["type"] == "array"
    assert gbc["output"]["laleType"]["shape"] == ["n_samples"]

    ohe = _read(out / "tree_stub" / "OneHotEncoder.json")
    validator.validate(ohe["hyperparams"])
    cat = ohe["hyperparams"]["allOf"][0]["properties"]["categories"]
    # the type line is beyond the grammar: schema-less fragment, but the
    # argument stays present with the signature default recorded
    assert cat == {"description": "Categories per feature.", "default": None}
    diag = _read(out / "diagnostics.json")
    assert diag["counts"]["parse_failure"] >= 1


def test_unknown_config_key_exit_1(tmp_path):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"not_a_real_key": 1}))
    rc = main(["--config", str(cfg), "mine", str(FIXTURES)])
    assert rc == 1


def test_bad_overrides_exit_1(tmp_path):
    out = tmp_path / "out"
    main(["mine", str(FIXTURES / "sklearn_stub.py"), "--out", str(out)])
    bad = tmp_path / "bad_overrides.json"
    bad.write_text(json.dumps({"LogisticRegression.C": {"distro": "x"}}))
    rc = main(["refine", str(out), "--overrides", str(bad),
               "--out", str(tmp_path / "ref")])
    assert rc == 1


def test_refine_cli_golden(tmp_path):
    out = tmp_path / "out"
    main(["mine", str(FIXTURES / "sklearn_stub.py"), "--out", str(out)])
    refined_dir = tmp_path / "refined"
    rc = main(["refine", str(out),
               "--observations", str(FIXTURES / "observations"),
               "--overrides", str(FIXTURES / "overrides.json"),
               "--out", str(refined_dir)])
    assert rc == 0
    doc = _read(refined_dir / "sklearn_stub" / "LogisticRegression.json")
    assert doc["hyperparams"] == FIG2_REFINED


def test_refine_without_observation_file(tmp_path):
    out = tmp_path / "out"
    main(["mine", str(FIXTURES / "sklearn_stub.py"), "--out", str(out)])
    empty_obs = tmp_path / "no_obs"
    empty_obs.mkdir()
    refined_dir = tmp_path / "refined"
    rc = main(["refine", str(out), "--observations", str(empty_obs),
               "--out", str(refined_dir)])
    assert rc == 0
    raw = _read(out / "sklearn_stub" / "LogisticRegression.json")
    ref = _read(refined_dir / "sklearn_stub" / "LogisticRegression.json")
    assert ref["hyperparams"] == raw["hyperparams"]


def _write_pairs(tmp_path: Path) -> tuple[Path, Path]:
    gen_dir = tmp_path / "generated"
    cur_dir = tmp_path / "curated"
    for gen, cur in PAIRS:
        for root, doc in ((gen_dir, gen), (cur_dir, cur)):
            path = root / f"{doc.class_name}.json"
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(serialize(doc), encoding="utf-8")
    return gen_dir, cur_dir


def test_eval_cli_json(tmp_path, capsys):
    gen_dir, cur_dir = _write_pairs(tmp_path)
    rc = main(["eval", str(gen_dir), str(cur_dir), "--format", "json"])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["report"]["categories"]["arguments"]["precision"] == 1.0
    assert out["report"]["categories"]["constraints"]["generated"] == 2
    assert out["unpaired"] == {"generated_only": [], "curated_only": []}


def test_eval_cli_table(tmp_path, capsys):
    gen_dir, cur_dir = _write_pairs(tmp_path)
    rc = main(["eval", str(gen_dir), str(cur_dir)])
    assert rc == 0
    text = capsys.readouterr().out
    assert "constraints" in text and "coverage" in text


def test_eval_empty_curated_exit_1(tmp_path):
    gen_dir, _ = _write_pairs(tmp_path)
    empty = tmp_path / "nothing"
    empty.mkdir()
    assert main(["eval", str(gen_dir), str(empty)]) == 1


def test_eval_reports_unpaired(tmp_path, capsys):
    gen_dir, cur_dir = _write_pairs(tmp_path)
    (gen_dir / "AlphaModel.json").unlink()
    rc = main(["eval", str(gen_dir), str(cur_dir), "--format", "json"])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["unpaired"]["curated_only"] == ["AlphaModel"]


def test_plan_subcommand_validates_against_published_schema(tmp_path):
    out = tmp_path / "out"
    main(["mine", str(FIXTURES), "--out", str(out)])
    plans = tmp_path / "plans"
    rc = main(["plan", str(out), "--out", str(plans)])
    assert rc == 0
    schema = json.loads(
        (Path("src/schemamine/schemas/probe_plan.schema.json")).read_text())
    validator = Draft4Validator(schema)
    plan_files = sorted(plans.glob("*.json"))
    assert plan_files
    for pf in plan_files:
        validator.validate(_read(pf))


def test_greedy_pool_crosses_classes(tmp_path):
    src = tmp_path / "src"
    src.mkdir()
    (src / "a.py").write_text(
        'class Alpha:\n'
        '    """doc\n\n    Parameters\n    ----------\n'
        '    mode : str, {\'fast\', \'slow\'}, default \'fast\'\n'
        '        Mode.\n    """\n'
        '    def __init__(self, mode="fast"):\n        pass\n')
    (src / "b.py").write_text(
        'class Beta:\n'
        '    """doc\n\n    Parameters\n    ----------\n'
        '    mode : string, optional (default="fast")\n'
        '        Mode.\n    """\n'
        '    def __init__(self, mode="fast"):\n        pass\n')
    out = tmp_path / "out"
    main(["mine", str(src), "--out", str(out)])
    beta_plan = _read(out / "plans" / "Beta.json")
    assert beta_plan["candidates"]["mode"] == ["fast", "slow"]


def test_trigger_config_reaches_the_miner(tmp_path):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"constraint_triggers": []}))
    out = tmp_path / "out"
    main(["--config", str(cfg), "mine", str(FIXTURES / "sklearn_stub.py"),
          "--out", str(out)])
    doc = _read(out / "sklearn_stub" / "LogisticRegression.json")
    assert len(doc["hyperparams"]["allOf"]) == 1    # nothing flagged


def test_mine_determinism_byte_identical(tmp_path):
    out1 = tmp_path / "one"
    out2 = tmp_path / "two"
    main(["mine", str(FIXTURES), "--out", str(out1)])
    main(["mine", str(FIXTURES), "--out", str(out2)])
    files1 = sorted(p.relative_to(out1) for p in out1.rglob("*.json"))
    files2 = sorted(p.relative_to(out2) for p in out2.rglob("*.json"))
    assert files1 == files2
    for rel in files1:
        assert (out1 / rel).read_bytes() == (out2 / rel).read_bytes()
