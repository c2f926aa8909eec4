"""End-to-end CLI flows, driven in-process through main(argv)."""

import json

import pytest

from lplearn.cli import main
from lplearn.core import load_schema, parse_model


def run(*argv, capsys):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def dataset_dir(tmp_path):
    out = tmp_path / "data"
    code = main(["generate", "--out", str(out), "--m", "400", "--n", "4",
                 "--x", "3", "--noise", "0.1", "--seed", "7"])
    assert code == 0
    return out


def test_generate_writes_the_full_set(dataset_dir, capsys):
    names = {p.name for p in dataset_dir.iterdir()}
    assert names == {"schema.json", "model.txt", "train.csv", "test.csv",
                     "manifest.json"}
    manifest = json.loads((dataset_dir / "manifest.json").read_text("utf-8"))
    assert manifest["config"]["m"] == 400


def test_generate_is_idempotent(dataset_dir, tmp_path, capsys):
    out = tmp_path / "again"
    assert main(["generate", "--out", str(out), "--m", "400", "--n", "4",
                 "--x", "3", "--noise", "0.1", "--seed", "7"]) == 0
    for name in ("schema.json", "model.txt", "train.csv", "test.csv",
                 "manifest.json"):
        assert (out / name).read_bytes() == (dataset_dir / name).read_bytes()


@pytest.mark.parametrize("algo", ["dpa", "ga", "greedy"])
def test_train_each_algorithm(dataset_dir, tmp_path, algo, capsys):
    model_out = tmp_path / f"{algo}.txt"
    code, out, _ = run(
        "train", "--algo", algo,
        "--schema", str(dataset_dir / "schema.json"),
        "--train", str(dataset_dir / "train.csv"),
        "--model-out", str(model_out),
        "--gens", "10",
        capsys=capsys,
    )
    assert code == 0
    assert "train accuracy" in out
    schema = load_schema(dataset_dir / "schema.json")
    model = parse_model(model_out.read_text("utf-8").strip(), schema)
    model.validate_for(schema)
    stats = json.loads((tmp_path / f"{algo}.txt.stats.json").read_text("utf-8"))
    assert stats["algo"] == algo
    assert stats["train_examples"] == 320
    assert stats["satisfied"] <= 320
    assert stats["train_accuracy"] == stats["satisfied"] / 320


def test_train_is_idempotent(dataset_dir, tmp_path, capsys):
    outs = []
    for name in ("one", "two"):
        model_out = tmp_path / f"{name}.txt"
        stats_out = tmp_path / f"{name}.json"
        assert main(["train", "--algo", "ga",
                     "--schema", str(dataset_dir / "schema.json"),
                     "--train", str(dataset_dir / "train.csv"),
                     "--model-out", str(model_out),
                     "--stats-out", str(stats_out),
                     "--gens", "5", "--seed", "3"]) == 0
        outs.append((model_out.read_bytes(), stats_out.read_bytes()))
    assert outs[0] == outs[1]


def test_train_ga_history(dataset_dir, tmp_path, capsys):
    history = tmp_path / "history.csv"
    assert main(["train", "--algo", "ga",
                 "--schema", str(dataset_dir / "schema.json"),
                 "--train", str(dataset_dir / "train.csv"),
                 "--model-out", str(tmp_path / "m.txt"),
                 "--history-out", str(history),
                 "--pop", "20", "--parents", "10", "--gens", "8"]) == 0
    lines = history.read_text("utf-8").splitlines()
    assert lines[0] == "generation,best_fitness,mean_fitness"
    assert len(lines) == 1 + 9  # header, then generations 0..8
    bests = [int(line.split(",")[1]) for line in lines[1:]]
    assert bests == sorted(bests)


def test_dpa_dominates_via_stats(dataset_dir, tmp_path, capsys):
    satisfied = {}
    for algo in ("dpa", "ga", "greedy"):
        stats_out = tmp_path / f"{algo}.json"
        assert main(["train", "--algo", algo,
                     "--schema", str(dataset_dir / "schema.json"),
                     "--train", str(dataset_dir / "train.csv"),
                     "--model-out", str(tmp_path / f"{algo}.txt"),
                     "--stats-out", str(stats_out), "--gens", "30"]) == 0
        satisfied[algo] = json.loads(stats_out.read_text("utf-8"))["satisfied"]
    assert satisfied["dpa"] >= satisfied["ga"]
    assert satisfied["dpa"] >= satisfied["greedy"]


def test_compare_subcommand(dataset_dir, tmp_path, capsys):
    # the generated hidden model against objects from its own schema
    schema = load_schema(dataset_dir / "schema.json")
    model = parse_model((dataset_dir / "model.txt").read_text("utf-8").strip(),
                        schema)
    first = model.entries[0]
    names = schema.attributes[first.attribute].values
    top, runner_up = names[first.order[0]], names[first.order[1]]
    obj = ["v1"] * schema.n
    a, b = list(obj), list(obj)
    a[first.attribute], b[first.attribute] = top, runner_up

    code, out, _ = run("compare", "--schema", str(dataset_dir / "schema.json"),
                       "--model", str(dataset_dir / "model.txt"),
                       "--a", ",".join(a), "--b", ",".join(b), capsys=capsys)
    assert (code, out.strip()) == (0, "Better")
    code, out, _ = run("compare", "--schema", str(dataset_dir / "schema.json"),
                       "--model", str(dataset_dir / "model.txt"),
                       "--a", ",".join(b), "--b", ",".join(a), capsys=capsys)
    assert (code, out.strip()) == (0, "Worse")
    code, out, _ = run("compare", "--schema", str(dataset_dir / "schema.json"),
                       "--model", str(dataset_dir / "model.txt"),
                       "--a", ",".join(obj), "--b", ",".join(obj), capsys=capsys)
    assert (code, out.strip()) == (0, "Equivalent")


def test_eval_hidden_model_on_test_split(dataset_dir, capsys):
    code, out, _ = run("eval", "--schema", str(dataset_dir / "schema.json"),
                       "--model", str(dataset_dir / "model.txt"),
                       "--test", str(dataset_dir / "test.csv"), capsys=capsys)
    assert code == 0
    value = float(out.strip())
    assert out.strip() == f"{value:.4f}"
    assert 0.8 <= value <= 1.0  # 10% noise, so roughly 90% survive


def test_eval_perfect_on_noise_free(tmp_path, capsys):
    out = tmp_path / "clean"
    assert main(["generate", "--out", str(out), "--m", "200", "--n", "3",
                 "--x", "3", "--noise", "0", "--seed", "1"]) == 0
    capsys.readouterr()  # drain the generate chatter
    code, text, _ = run("eval", "--schema", str(out / "schema.json"),
                        "--model", str(out / "model.txt"),
                        "--test", str(out / "test.csv"), capsys=capsys)
    assert (code, text.strip()) == (0, "1.0000")


def test_bench_outputs_and_thread_stability(tmp_path, capsys):
    args = ["bench", "--sizes", "40,80", "--reps", "2", "--n", "3", "--x", "3",
            "--noise", "0.1", "--pop", "10", "--parents", "5", "--gens", "5",
            "--no-timing"]
    assert main(args + ["--out", str(tmp_path / "a"), "--threads", "1"]) == 0
    assert main(args + ["--out", str(tmp_path / "b"), "--threads", "2"]) == 0
    for name in ("results.csv", "summary.csv", "accuracy.svg", "time.svg"):
        assert (tmp_path / "a" / name).read_bytes() == \
            (tmp_path / "b" / name).read_bytes(), name


def test_bench_algo_subset(tmp_path, capsys):
    assert main(["bench", "--out", str(tmp_path), "--sizes", "30",
                 "--reps", "1", "--n", "2", "--x", "2", "--algos", "dpa,greedy",
                 "--no-timing"]) == 0
    body = (tmp_path / "results.csv").read_text("utf-8")
    assert "ga," not in body and "dpa," in body and "greedy," in body


def test_verify_small_suite(capsys):
    code, out, _ = run("verify", "--lpo", "12", "--lpl", "6", "--sublists", "4",
                       capsys=capsys)
    assert code == 0
    assert "value-order agreement: 12/12" in out
    assert "full-list agreement: 6/6" in out
    assert "sublist-optimum agreement: 4/4" in out
    assert "all checks passed" in out


def test_usage_errors_exit_1(capsys):
    for argv in ([], ["trainx"], ["train"], ["generate", "--m", "10"],
                 ["bench", "--out", "x", "--reps", "no"]):
        code = main(argv)
        assert code == 1, argv
        assert "usage error" in capsys.readouterr().err


def test_data_errors_exit_2(tmp_path, capsys):
    missing = tmp_path / "nope.json"
    code = main(["train", "--algo", "dpa", "--schema", str(missing),
                 "--train", str(missing), "--model-out", str(tmp_path / "m")])
    assert code == 2
    assert "error:" in capsys.readouterr().err

    # bad m is a validation error, not a usage error
    assert main(["generate", "--out", str(tmp_path / "d"), "--m", "0"]) == 2
    assert "error:" in capsys.readouterr().err

    # malformed model text against a generated schema
    out = tmp_path / "gen"
    assert main(["generate", "--out", str(out), "--m", "20", "--n", "2",
                 "--x", "2", "--seed", "0"]) == 0
    capsys.readouterr()
    bad_model = tmp_path / "bad.txt"
    bad_model.write_text("A1:v1>v1;A2:v1>v2\n", encoding="utf-8")
    code = main(["eval", "--schema", str(out / "schema.json"),
                 "--model", str(bad_model), "--test", str(out / "test.csv")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_empty_training_file_exits_2(tmp_path, capsys):
    out = tmp_path / "gen"
    assert main(["generate", "--out", str(out), "--m", "10", "--n", "2",
                 "--x", "2", "--seed", "0"]) == 0
    header = (out / "train.csv").read_text("utf-8").splitlines()[0]
    empty = tmp_path / "empty.csv"
    empty.write_text(header + "\n", encoding="utf-8")
    code = main(["train", "--algo", "dpa", "--schema", str(out / "schema.json"),
                 "--train", str(empty), "--model-out", str(tmp_path / "m.txt")])
    assert code == 2
    assert "no training examples" in capsys.readouterr().err


def test_help_and_version_exit_0(capsys):
    assert main(["--help"]) == 0
    assert "generate" in capsys.readouterr().out
    assert main(["--version"]) == 0
    assert capsys.readouterr().out.strip() == "0.1.0"
