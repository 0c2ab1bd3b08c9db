import json
import math

import numpy as np
import pytest

from pagree import (
    LogitMatrix,
    OptimizerConfig,
    RunConfig,
    SyntheticSpec,
    benchmark_curve,
    load_pair,
    load_run_config,
    read_logits,
    read_power,
    read_sweep_csv,
    run_sweep,
    sweep_table_to_json,
    write_benchmark_csv,
    write_logits,
    write_sweep_csv,
)
from pagree.errors import (
    AlignmentError,
    DuplicateIdError,
    ParseError,
    ValidationError,
)

from test_sweep import flip_pool


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


# ------------------------------------------------------------- logits files


def test_logits_round_trip(tmp_path):
    matrix = LogitMatrix([[0.1 + 0.2, -1e-17], [math.pi, 2.0]], ids=("a", "b"))
    labels = np.array([1, 0])
    path = tmp_path / "m.csv"
    write_logits(path, matrix, labels)
    back, back_labels = read_logits(path)
    assert back.ids == matrix.ids
    assert np.array_equal(back.scores, matrix.scores)  # 17 digits survive exactly
    assert np.array_equal(back_labels, labels)


def test_logits_round_trip_without_labels(tmp_path):
    matrix = LogitMatrix([[1.5, -2.5]])
    path = tmp_path / "m.csv"
    write_logits(path, matrix)
    back, back_labels = read_logits(path)
    assert back_labels is None
    assert np.array_equal(back.scores, matrix.scores)


def test_read_logits_parses_plain_csv(tmp_path):
    path = write(tmp_path / "m.csv", "id,label,f_0,f_1\nx,0,1.0,2.0\ny,1,3e-1,-4\n")
    matrix, labels = read_logits(path)
    assert matrix.n == 2 and matrix.k == 2
    assert matrix.ids == ("x", "y")
    assert list(labels) == [0, 1]
    assert matrix.scores[1, 0] == 0.3


def test_read_logits_rejects_bad_headers(tmp_path):
    for header in ("id,f_0,f_1", "id,label,f_0", "id,label,f_1,f_0", "", "score"):
        path = write(tmp_path / "m.csv", header + "\nx,0,1.0,2.0\n")
        with pytest.raises(ParseError) as err:
            read_logits(path)
        assert err.value.line == 1


def test_read_logits_names_the_bad_cell(tmp_path):
    path = write(tmp_path / "m.csv", "id,label,f_0,f_1\nx,0,1.0,2.0\ny,1,1.0,oops\n")
    with pytest.raises(ParseError) as err:
        read_logits(path)
    assert err.value.line == 3
    assert err.value.column == "f_1"
    assert "m.csv:3" in str(err.value)


def test_read_logits_rejects_nonfinite_scores(tmp_path):
    path = write(tmp_path / "m.csv", "id,label,f_0,f_1\nx,0,inf,2.0\n")
    with pytest.raises(ParseError) as err:
        read_logits(path)
    assert err.value.column == "f_0"


def test_read_logits_rejects_duplicate_ids(tmp_path):
    path = write(tmp_path / "m.csv", "id,label,f_0,f_1\nx,0,1,2\nx,0,3,4\n")
    with pytest.raises(DuplicateIdError) as err:
        read_logits(path)
    assert "line 2" in str(err.value)


def test_read_logits_rejects_mixed_label_column(tmp_path):
    path = write(tmp_path / "m.csv", "id,label,f_0,f_1\nx,0,1,2\ny,,3,4\nz,1,5,6\n")
    with pytest.raises(ParseError) as err:
        read_logits(path)
    assert err.value.line == 3
    assert err.value.column == "label"


def test_read_logits_rejects_bad_labels(tmp_path):
    path = write(tmp_path / "m.csv", "id,label,f_0,f_1\nx,7,1,2\n")
    with pytest.raises(ParseError):
        read_logits(path)
    path = write(tmp_path / "m.csv", "id,label,f_0,f_1\nx,0.5,1,2\n")
    with pytest.raises(ParseError):
        read_logits(path)


def test_read_logits_rejects_ragged_and_empty_files(tmp_path):
    path = write(tmp_path / "m.csv", "id,label,f_0,f_1\nx,0,1\n")
    with pytest.raises(ParseError) as err:
        read_logits(path)
    assert err.value.line == 2
    path = write(tmp_path / "m.csv", "")
    with pytest.raises(ParseError):
        read_logits(path)
    path = write(tmp_path / "m.csv", "id,label,f_0,f_1\n")
    with pytest.raises(ParseError):
        read_logits(path)


# -------------------------------------------------------------- power files


def test_read_power(tmp_path):
    path = write(tmp_path / "p.csv", "id,power\na,0.5\nb,0\n")
    assert read_power(path) == {"a": 0.5, "b": 0.0}


def test_read_power_rejects_bad_rows(tmp_path):
    with pytest.raises(ParseError):
        read_power(write(tmp_path / "p.csv", "id,eps\na,0.5\n"))
    with pytest.raises(ParseError) as err:
        read_power(write(tmp_path / "p.csv", "id,power\na,-1\n"))
    assert err.value.line == 2
    with pytest.raises(DuplicateIdError):
        read_power(write(tmp_path / "p.csv", "id,power\na,1\na,2\n"))


# -------------------------------------------------------------------- pairs


def pair_files(tmp_path, clean_text, shifted_text):
    return (
        write(tmp_path / "clean.csv", clean_text),
        write(tmp_path / "shifted.csv", shifted_text),
    )


def test_load_pair_joins_by_id(tmp_path):
    clean, shifted = pair_files(
        tmp_path,
        "id,label,f_0,f_1\na,0,1,0\nb,1,0,1\nc,0,2,0\n",
        "id,label,f_0,f_1\nc,0,0,2\na,0,0,1\nb,1,1,0\n",  # different order
    )
    pool = load_pair(clean, shifted)
    assert pool.n == 3
    assert pool.clean.ids == pool.shifted.ids == ("a", "b", "c")
    assert pool.shifted.scores[0, 1] == 1.0  # row "a" realigned
    assert list(pool.labels) == [0, 1, 0]


def test_load_pair_reports_missing_ids(tmp_path):
    clean, shifted = pair_files(
        tmp_path,
        "id,label,f_0,f_1\na,,1,0\nb,,0,1\n",
        "id,label,f_0,f_1\na,,1,0\nz,,0,1\n",
    )
    with pytest.raises(AlignmentError) as err:
        load_pair(clean, shifted)
    message = str(err.value)
    assert "b" in message and "z" in message


def test_load_pair_rejects_class_count_mismatch(tmp_path):
    clean, shifted = pair_files(
        tmp_path,
        "id,label,f_0,f_1\na,,1,0\n",
        "id,label,f_0,f_1,f_2\na,,1,0,0\n",
    )
    with pytest.raises(AlignmentError):
        load_pair(clean, shifted)


def test_load_pair_rejects_contradictory_labels(tmp_path):
    clean, shifted = pair_files(
        tmp_path,
        "id,label,f_0,f_1\na,0,1,0\n",
        "id,label,f_0,f_1\na,1,1,0\n",
    )
    with pytest.raises(AlignmentError) as err:
        load_pair(clean, shifted)
    assert "'a'" in str(err.value)


def test_load_pair_takes_labels_from_either_side(tmp_path):
    clean, shifted = pair_files(
        tmp_path,
        "id,label,f_0,f_1\na,,1,0\n",
        "id,label,f_0,f_1\na,1,1,0\n",
    )
    pool = load_pair(clean, shifted)
    assert list(pool.labels) == [1]
    both_empty = load_pair(
        *pair_files(
            tmp_path,
            "id,label,f_0,f_1\na,,1,0\n",
            "id,label,f_0,f_1\na,,1,0\n",
        )
    )
    assert both_empty.labels is None


def test_load_pair_aligns_power(tmp_path):
    clean, shifted = pair_files(
        tmp_path,
        "id,label,f_0,f_1\na,,1,0\nb,,0,1\n",
        "id,label,f_0,f_1\nb,,1,0\na,,0,1\n",
    )
    power = write(tmp_path / "p.csv", "id,power\nb,0.25\na,0.75\n")
    pool = load_pair(clean, shifted, power)
    assert list(pool.power) == [0.75, 0.25]

    missing = write(tmp_path / "p2.csv", "id,power\na,0.75\n")
    with pytest.raises(AlignmentError) as err:
        load_pair(clean, shifted, missing)
    assert "b" in str(err.value)

    extra = write(tmp_path / "p3.csv", "id,power\na,1\nb,1\nq,1\n")
    with pytest.raises(AlignmentError) as err:
        load_pair(clean, shifted, extra)
    assert "q" in str(err.value)


def test_load_pair_default_level_tag(tmp_path):
    clean, shifted = pair_files(
        tmp_path,
        "id,label,f_0,f_1\na,,1,0\n",
        "id,label,f_0,f_1\na,,1,0\n",
    )
    assert load_pair(clean, shifted).level_tag == "shift"
    assert load_pair(clean, shifted, level_tag="eps=8/255").level_tag == "eps=8/255"


# ------------------------------------------------------------- sweep tables


def test_sweep_table_round_trip(tmp_path):
    table = run_sweep([flip_pool()], [0.0, 0.5, 1.0])
    path = tmp_path / "sweep.csv"
    write_sweep_csv(table, path)
    assert read_sweep_csv(path) == table


def test_sweep_table_round_trip_with_missing_columns(tmp_path):
    table = run_sweep([flip_pool(labels=False)], [0.0, 1.0])
    path = tmp_path / "sweep.csv"
    write_sweep_csv(table, path)
    back = read_sweep_csv(path)
    assert back == table
    assert back.rows[0].afr_t is None


def test_sweep_table_json_shape(tmp_path):
    table = run_sweep([flip_pool()], [0.0])
    doc = sweep_table_to_json(table)
    assert doc["format_version"] == 1
    assert len(doc["rows"]) == 1
    assert doc["rows"][0]["level_tag"] == "flip"


def test_benchmark_csv_header(tmp_path):
    curve = benchmark_curve(20, [0.5], seed=0)
    path = tmp_path / "bench.csv"
    write_benchmark_csv(curve, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "classifier,p,pa_raw,pa_theoretical,beta_star,accuracy"
    assert len(lines) == 4


# -------------------------------------------------------------- run configs


def minimal_config(tmp_path, **overrides):
    doc = {
        "clean": "clean.csv",
        "shifted": "shifted.csv",
        "ratios": [0.0, 1.0],
        "output_csv": "out.csv",
        "output_json": "out.json",
    }
    doc.update(overrides)
    for key in [k for k, v in doc.items() if v is None]:
        del doc[key]
    path = tmp_path / "run.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def test_run_config_minimal(tmp_path):
    cfg = load_run_config(minimal_config(tmp_path))
    assert cfg.ratios == (0.0, 1.0)
    assert cfg.report == "raw"
    assert cfg.optimizer == OptimizerConfig()
    assert cfg.synthetic is None
    assert cfg.level_tag == "shift"


def test_run_config_nested_sections(tmp_path):
    path = minimal_config(
        tmp_path,
        clean=None,
        shifted=None,
        synthetic={"n": 100, "p": 0.5, "classifier": "constant"},
        optimizer={"epochs": 50, "learning_rate": 0.05},
        report="theoretical",
        level_tag="bench",
    )
    cfg = load_run_config(path)
    assert cfg.synthetic == SyntheticSpec(n=100, p=0.5, classifier="constant")
    assert cfg.optimizer.epochs == 50
    assert cfg.optimizer.learning_rate == 0.05
    assert cfg.report == "theoretical"


def test_run_config_rejects_unknown_keys(tmp_path):
    with pytest.raises(ValidationError) as err:
        load_run_config(minimal_config(tmp_path, tolerance=0.1))
    assert "tolerance" in str(err.value)
    with pytest.raises(ValidationError) as err:
        load_run_config(minimal_config(tmp_path, optimizer={"momentum": 0.9}))
    assert "momentum" in str(err.value)
    with pytest.raises(ValidationError):
        load_run_config(minimal_config(tmp_path, synthetic={"n": 10, "p": 0.5, "size": 2}))


def test_run_config_requires_exactly_one_source(tmp_path):
    with pytest.raises(ValidationError):
        load_run_config(minimal_config(tmp_path, synthetic={"n": 10, "p": 0.5}))
    with pytest.raises(ValidationError):
        load_run_config(minimal_config(tmp_path, clean=None, shifted=None))
    with pytest.raises(ValidationError):
        load_run_config(minimal_config(tmp_path, shifted=None))


def test_run_config_validates_fields(tmp_path):
    with pytest.raises(ValidationError):
        load_run_config(minimal_config(tmp_path, ratios=[0.0, 1.5]))
    with pytest.raises(ValidationError):
        load_run_config(minimal_config(tmp_path, ratios=[]))
    with pytest.raises(ValidationError):
        load_run_config(minimal_config(tmp_path, report="fancy"))
    with pytest.raises(ValidationError):
        load_run_config(minimal_config(tmp_path, subset_fallback=True))
    cfg = load_run_config(minimal_config(tmp_path, subset_fallback=True, seed=3))
    assert cfg.subset_fallback and cfg.seed == 3


def test_run_config_requires_output_paths(tmp_path):
    with pytest.raises(ValidationError):
        load_run_config(minimal_config(tmp_path, output_csv=None))
    with pytest.raises(ValidationError):
        load_run_config(minimal_config(tmp_path, ratios=None))


def test_run_config_reports_json_syntax_errors(tmp_path):
    path = tmp_path / "run.json"
    path.write_text('{"clean": \n oops}', encoding="utf-8")
    with pytest.raises(ParseError) as err:
        load_run_config(str(path))
    assert err.value.line == 2


def test_run_config_direct_construction_is_validated():
    with pytest.raises(ValidationError):
        RunConfig(ratios=(0.5,), output_csv="a.csv", output_json="a.json")
