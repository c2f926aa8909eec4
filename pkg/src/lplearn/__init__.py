"""Learning lexicographic preference lists from pairwise comparisons.

The package bundles three learners over a shared core:

* :mod:`lplearn.learn_dp` -- exact subset dynamic programs, one for a
  single attribute's value order and one for a full LP-list.
* :mod:`lplearn.learn_ga` -- a genetic algorithm over full-length lists.
* :mod:`lplearn.learn_greedy` -- a one-pass baseline that never revisits
  an attribute choice.

:mod:`lplearn.oracle` holds brute-force reference implementations,
:mod:`lplearn.datagen` generates synthetic corpora with optional noise,
and :mod:`lplearn.bench` runs the accuracy/runtime comparison that the
``lplearn bench`` command exposes.
"""

from .core import (
    Attribute,
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

__version__ = "0.1.0"

__all__ = [
    "Attribute",
    "Example",
    "ExampleSet",
    "LPEntry",
    "LPList",
    "ParseError",
    "Relation",
    "Schema",
    "SchemaError",
    "compare",
    "compare_many",
    "count_satisfied",
    "load_schema",
    "parse_model",
    "reverse_value_orders",
    "satisfies",
    "save_schema",
    "serialize_model",
    "__version__",
]
