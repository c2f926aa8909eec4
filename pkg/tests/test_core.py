"""Schemas, examples, comparison semantics, and the three file formats."""

import numpy as np
import pytest

from lplearn.core import (
    Example,
    ExampleSet,
    LPEntry,
    LPList,
    ParseError,
    Relation,
    Schema,
    SchemaError,
    compare,
    compare_many,
    count_satisfied,
    load_schema,
    parse_model,
    reverse_value_orders,
    satisfies,
    save_schema,
    serialize_model,
)

# ---------------------------------------------------------------------------
# Schema
# ---------------------------------------------------------------------------

def test_schema_basics(car_schema):
    assert car_schema.n == 4
    assert car_schema.domain_sizes == (2, 3, 2, 3)
    assert car_schema.attribute_index("M") == 2
    assert car_schema.value_index(1, "b") == 2
    assert car_schema.object_of(["s", "b", "t", "m"]) == (0, 2, 0, 1)
    assert car_schema.names_of((0, 2, 0, 1)) == ("s", "b", "t", "m")


def test_schema_rejects_duplicates_and_tiny_domains():
    with pytest.raises(SchemaError, match="duplicate"):
        Schema([("A", ["p", "q"]), ("A", ["p", "q"])])
    with pytest.raises(SchemaError, match="at least 2"):
        Schema([("A", ["only"])])
    with pytest.raises(SchemaError, match="repeats"):
        Schema([("A", ["p", "p"])])
    with pytest.raises(SchemaError, match="non-empty"):
        Schema([("", ["p", "q"])])
    with pytest.raises(SchemaError, match="at least one"):
        Schema([])


def test_schema_unknown_names(car_schema):
    with pytest.raises(SchemaError, match="unknown attribute"):
        car_schema.attribute_index("Z")
    with pytest.raises(SchemaError, match="unknown value"):
        car_schema.value_index(0, "z")
    with pytest.raises(SchemaError):
        car_schema.object_of(["s", "b", "t"])  # too short


def test_schema_json_round_trip(tmp_path, car_schema):
    path = tmp_path / "schema.json"
    save_schema(car_schema, path)
    assert load_schema(path) == car_schema
    # saving again is byte-identical
    first = path.read_bytes()
    save_schema(car_schema, path)
    assert path.read_bytes() == first


def test_schema_json_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(ParseError, match="JSON"):
        load_schema(bad)
    bad.write_text('{"nope": []}', encoding="utf-8")
    with pytest.raises(ParseError, match="attributes"):
        load_schema(bad)


# ---------------------------------------------------------------------------
# LP-list construction
# ---------------------------------------------------------------------------

def test_lplist_validation(car_schema):
    with pytest.raises(SchemaError, match="permutation"):
        LPEntry(0, (0, 0))
    with pytest.raises(SchemaError, match="repeats"):
        LPList((LPEntry(0, (0, 1)), LPEntry(0, (1, 0))))
    short = LPList((LPEntry(1, (0, 1)),))  # order shorter than C's domain
    with pytest.raises(SchemaError, match="domain"):
        short.validate_for(car_schema)
    with pytest.raises(SchemaError, match="out of range"):
        LPList((LPEntry(7, (0, 1)),)).validate_for(car_schema)


def test_lplist_helpers(car_schema, car_model):
    assert car_model.attribute_sequence == (0, 2, 1)
    assert not car_model.is_full_length(car_schema)
    twice = reverse_value_orders(reverse_value_orders(car_model))
    assert twice == car_model


# ---------------------------------------------------------------------------
# Comparison semantics
# ---------------------------------------------------------------------------

def test_compare_car_pairs(car_schema, car_model):
    # hand-checked: medium blue Toyota sedan beats low white Chevrolet sedan
    sedan_a = car_schema.object_of(["s", "b", "t", "m"])
    sedan_b = car_schema.object_of(["s", "w", "c", "l"])
    assert compare(car_model, sedan_a, sedan_b) is Relation.BETTER
    assert compare(car_model, sedan_b, sedan_a) is Relation.WORSE
    # differently priced but otherwise equal trucks tie: price is unlisted
    truck_a = car_schema.object_of(["t", "k", "c", "h"])
    truck_b = car_schema.object_of(["t", "k", "c", "l"])
    assert compare(car_model, truck_a, truck_b) is Relation.EQUIVALENT


def test_compare_empty_model_all_equivalent(car_schema):
    empty = LPList(())
    a = car_schema.object_of(["s", "b", "t", "m"])
    b = car_schema.object_of(["t", "k", "c", "h"])
    assert compare(empty, a, b) is Relation.EQUIVALENT


def test_compare_rejects_mismatched_objects(car_model):
    with pytest.raises(SchemaError):
        compare(car_model, (0, 1), (0, 1, 0, 1))
    with pytest.raises(SchemaError):
        compare(car_model, (0, 9, 0, 0), (0, 1, 0, 0))


def test_relation_text():
    assert str(Relation.BETTER) == "Better"
    assert str(Relation.WORSE) == "Worse"
    assert str(Relation.EQUIVALENT) == "Equivalent"


def test_satisfies(car_schema, car_model, car_examples):
    assert satisfies(car_model, car_examples[0])
    assert not satisfies(car_model, car_examples[1])  # ties earn nothing
    same = car_schema.object_of(["t", "k", "c", "h"])
    assert not satisfies(car_model, Example(same, same))
    assert not satisfies(LPList(()), car_examples[0])


def test_count_satisfied(car_schema, car_model, car_examples):
    assert count_satisfied(car_model, car_examples) == 1
    assert count_satisfied(car_model, ExampleSet.from_examples(car_schema, [])) == 0
    tripled = ExampleSet.from_examples(car_schema, [car_examples[0]] * 3)
    assert count_satisfied(car_model, tripled) == 3
    # iterable-of-Example path agrees with the array path
    assert count_satisfied(car_model, list(car_examples)) == 1


def test_compare_many_matches_scalar(car_schema, car_model):
    rng = np.random.default_rng(3)
    sizes = np.array(car_schema.domain_sizes)
    a = rng.integers(0, sizes, size=(200, 4), dtype=np.int16)
    b = rng.integers(0, sizes, size=(200, 4), dtype=np.int16)
    examples = ExampleSet(car_schema, a, b)
    rel = compare_many(car_model, examples)
    for i, e in enumerate(examples):
        expected = compare(car_model, e.alpha, e.beta)
        assert rel[i] == expected.value
    assert count_satisfied(car_model, examples) == int((rel == 1).sum())


def test_orientation_identity(car_schema, car_model):
    rng = np.random.default_rng(4)
    sizes = np.array(car_schema.domain_sizes)
    a = rng.integers(0, sizes, size=(300, 4), dtype=np.int16)
    b = rng.integers(0, sizes, size=(300, 4), dtype=np.int16)
    examples = ExampleSet(car_schema, a, b)
    forward = count_satisfied(car_model, examples)
    backward = count_satisfied(car_model, examples.reversed())
    ties = int((compare_many(car_model, examples) == 0).sum())
    assert forward + backward + ties == len(examples)


def test_reversing_orders_flips_comparisons(car_schema, car_model):
    flipped = reverse_value_orders(car_model)
    a = car_schema.object_of(["s", "b", "t", "m"])
    b = car_schema.object_of(["s", "w", "c", "l"])
    assert compare(car_model, a, b) is Relation.BETTER
    assert compare(flipped, a, b) is Relation.WORSE


# ---------------------------------------------------------------------------
# Model text format
# ---------------------------------------------------------------------------

def test_serialize_car_model(car_schema, car_model):
    assert serialize_model(car_model, car_schema) == "B:s>t;M:t>c;C:w>b>k"


def test_parse_round_trip(car_schema, car_model):
    text = serialize_model(car_model, car_schema)
    assert parse_model(text, car_schema) == car_model
    assert parse_model("", car_schema) == LPList(())
    assert parse_model("  B : s > t ;  M:t>c ; C:w>b>k ", car_schema) == car_model


@pytest.mark.parametrize("text,reason", [
    ("B:s>s;M:t>c", "repeated"),
    ("Z:s>t", "unknown attribute"),
    ("B:s>z", "unknown value"),
    ("B s>t", "missing ':'"),
    ("B:s>t;B:t>s", "repeated"),
    ("C:w>b", "all 3 values"),
    ("B:s>t;;M:t>c", "empty entry"),
    ("B:s>>t", "empty value"),
])
def test_parse_errors(car_schema, text, reason):
    with pytest.raises(ParseError, match=reason):
        parse_model(text, car_schema)


# ---------------------------------------------------------------------------
# ExampleSet
# ---------------------------------------------------------------------------

def test_example_set_multiset_ops(car_schema, car_examples):
    assert len(car_examples) == 2
    assert car_examples[0].alpha == (0, 2, 0, 1)
    swapped = car_examples.reversed()
    assert swapped[0].alpha == car_examples[0].beta
    taken = car_examples.take([1, 0, 1])
    assert len(taken) == 3 and taken[0] == car_examples[1]
    both = car_examples.concat(swapped)
    assert len(both) == 4
    assert car_examples == car_examples.take([0, 1])
    assert car_examples != swapped


def test_example_set_validates_shape_and_range(car_schema):
    with pytest.raises(SchemaError):
        ExampleSet(car_schema, np.zeros((2, 3), dtype=np.int16),
                   np.zeros((2, 4), dtype=np.int16))
    bad = np.zeros((1, 4), dtype=np.int16)
    bad_b = bad.copy()
    bad_b[0, 1] = 9
    with pytest.raises(SchemaError, match="range"):
        ExampleSet(car_schema, bad, bad_b)


def test_examples_csv_round_trip(tmp_path, car_schema, car_examples):
    path = tmp_path / "pairs.csv"
    car_examples.to_csv(path)
    header = path.read_text(encoding="utf-8").splitlines()[0]
    assert header == "a_B,a_C,a_M,a_P,b_B,b_C,b_M,b_P"
    loaded = ExampleSet.from_csv(path, car_schema)
    assert loaded == car_examples
    loaded.to_csv(tmp_path / "again.csv")
    assert (tmp_path / "again.csv").read_bytes() == path.read_bytes()


def test_examples_csv_empty(tmp_path, car_schema):
    path = tmp_path / "none.csv"
    ExampleSet.from_examples(car_schema, []).to_csv(path)
    assert len(ExampleSet.from_csv(path, car_schema)) == 0


def test_examples_csv_errors(tmp_path, car_schema):
    path = tmp_path / "bad.csv"
    path.write_text("a_B,wrong\nx,y\n", encoding="utf-8")
    with pytest.raises(ParseError, match="header"):
        ExampleSet.from_csv(path, car_schema)
    path.write_text("a_B,a_C,a_M,a_P,b_B,b_C,b_M,b_P\ns,b,t\n", encoding="utf-8")
    with pytest.raises(ParseError, match="cells"):
        ExampleSet.from_csv(path, car_schema)
    path.write_text("a_B,a_C,a_M,a_P,b_B,b_C,b_M,b_P\ns,b,t,m,s,w,zzz,l\n",
                    encoding="utf-8")
    with pytest.raises(ParseError, match="zzz"):
        ExampleSet.from_csv(path, car_schema)
    path.write_text("", encoding="utf-8")
    with pytest.raises(ParseError, match="empty"):
        ExampleSet.from_csv(path, car_schema)


def test_examples_csv_warns_on_equal_pair(tmp_path, car_schema):
    path = tmp_path / "tied.csv"
    path.write_text("a_B,a_C,a_M,a_P,b_B,b_C,b_M,b_P\ns,b,t,m,s,b,t,m\n",
                    encoding="utf-8")
    with pytest.warns(UserWarning, match="identical"):
        loaded = ExampleSet.from_csv(path, car_schema)
    assert len(loaded) == 1  # kept, merely unsatisfiable
