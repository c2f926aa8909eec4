import pytest

from lplearn.core import Example, ExampleSet, Schema, parse_model


@pytest.fixture
def car_schema():
    """Small single-character demo schema: body, color, make, price."""
    return Schema([
        ("B", ["s", "t"]),
        ("C", ["k", "w", "b"]),
        ("M", ["t", "c"]),
        ("P", ["l", "m", "h"]),
    ])


@pytest.fixture
def car_model(car_schema):
    """Body, then make, then color; price never matters."""
    return parse_model("B:s>t;M:t>c;C:w>b>k", car_schema)


@pytest.fixture
def car_examples(car_schema):
    """Two hand-built pairs: one the model satisfies, one it ties on."""
    sedan_pair = Example(
        car_schema.object_of(["s", "b", "t", "m"]),
        car_schema.object_of(["s", "w", "c", "l"]),
    )
    truck_pair = Example(
        car_schema.object_of(["t", "k", "c", "h"]),
        car_schema.object_of(["t", "k", "c", "l"]),
    )
    return ExampleSet.from_examples(car_schema, [sedan_pair, truck_pair])
