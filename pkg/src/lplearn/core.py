"""Object schemas, pairwise examples, and lexicographic preference lists.

A lexicographic preference list (LP-list) ranks objects by walking an
ordered list of attributes, each carrying a total order over its value
domain: the first attribute on which two objects differ decides which one
is preferred.  Everything in this module is immutable after construction
and safe to share across threads.

Values are stored as dense integer indices into the schema's domain
lists; value *names* appear only at I/O boundaries (schema JSON, model
text, example CSV).
"""

from __future__ import annotations

import csv
import enum
import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

__all__ = [
    "SchemaError",
    "ParseError",
    "Attribute",
    "Schema",
    "Example",
    "ExampleSet",
    "LPEntry",
    "LPList",
    "Relation",
    "compare",
    "satisfies",
    "count_satisfied",
    "compare_many",
    "reverse_value_orders",
    "serialize_model",
    "parse_model",
    "save_schema",
    "load_schema",
]

ObjectVec = tuple  # one domain-value index per attribute, schema-aligned

_VALUE_DTYPE = np.int16  # domain sizes are capped well below int16 range


class SchemaError(ValueError):
    """Invalid schema, model, or object, or a mismatch between them."""


class ParseError(ValueError):
    """Malformed textual input; message carries position and reason."""


# ---------------------------------------------------------------------------
# Schema
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Attribute:
    name: str
    values: tuple[str, ...]

    @property
    def size(self) -> int:
        return len(self.values)


class Schema:
    """An ordered set of named attributes with finite value domains.

    The attribute order given at construction is the canonical index
    order used everywhere else (object vectors, CSV columns, bitmasks).
    Every domain must hold at least two values: a one-value attribute
    could never decide a comparison.
    """

    def __init__(self, attributes: Iterable[Union[Attribute, tuple]]):
        attrs = []
        for item in attributes:
            if isinstance(item, Attribute):
                attrs.append(Attribute(item.name, tuple(item.values)))
            else:
                name, values = item
                attrs.append(Attribute(str(name), tuple(str(v) for v in values)))
        self.attributes: tuple[Attribute, ...] = tuple(attrs)
        if not self.attributes:
            raise SchemaError("schema needs at least one attribute")

        seen = set()
        for attr in self.attributes:
            if not attr.name:
                raise SchemaError("attribute name must be non-empty")
            if attr.name in seen:
                raise SchemaError(f"duplicate attribute name {attr.name!r}")
            seen.add(attr.name)
            if len(attr.values) < 2:
                raise SchemaError(
                    f"attribute {attr.name!r} has {len(attr.values)} value(s); "
                    "every domain needs at least 2"
                )
            if any(not v for v in attr.values):
                raise SchemaError(f"attribute {attr.name!r} has an empty value name")
            if len(set(attr.values)) != len(attr.values):
                raise SchemaError(f"attribute {attr.name!r} repeats a value name")

        self._attr_index = {a.name: i for i, a in enumerate(self.attributes)}
        self._value_index = tuple(
            {v: i for i, v in enumerate(a.values)} for a in self.attributes
        )

    @property
    def n(self) -> int:
        return len(self.attributes)

    @property
    def domain_sizes(self) -> tuple[int, ...]:
        return tuple(a.size for a in self.attributes)

    def attribute_index(self, name: str) -> int:
        try:
            return self._attr_index[name]
        except KeyError:
            raise SchemaError(f"unknown attribute {name!r}") from None

    def value_index(self, attribute: int, name: str) -> int:
        try:
            return self._value_index[attribute][name]
        except KeyError:
            raise SchemaError(
                f"unknown value {name!r} for attribute "
                f"{self.attributes[attribute].name!r}"
            ) from None

    def object_of(self, names: Sequence[str]) -> ObjectVec:
        """Translate a per-attribute sequence of value names into an object."""
        if len(names) != self.n:
            raise SchemaError(f"expected {self.n} values, got {len(names)}")
        return tuple(self.value_index(i, nm) for i, nm in enumerate(names))

    def names_of(self, obj: Sequence[int]) -> tuple[str, ...]:
        self.check_object(obj)
        return tuple(self.attributes[i].values[v] for i, v in enumerate(obj))

    def check_object(self, obj: Sequence[int]) -> None:
        if len(obj) != self.n:
            raise SchemaError(f"object has {len(obj)} values, schema has {self.n}")
        for i, v in enumerate(obj):
            if not 0 <= int(v) < self.attributes[i].size:
                raise SchemaError(
                    f"value index {v} out of range for attribute "
                    f"{self.attributes[i].name!r}"
                )

    def __eq__(self, other) -> bool:
        return isinstance(other, Schema) and self.attributes == other.attributes

    def __hash__(self) -> int:
        return hash(self.attributes)

    def __repr__(self) -> str:
        parts = ", ".join(f"{a.name}({a.size})" for a in self.attributes)
        return f"Schema[{parts}]"


def save_schema(schema: Schema, path) -> None:
    payload = {
        "attributes": [
            {"name": a.name, "values": list(a.values)} for a in schema.attributes
        ]
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def load_schema(path) -> Schema:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(payload, dict) or "attributes" not in payload:
        raise ParseError(f"{path}: expected an object with an 'attributes' list")
    try:
        pairs = [(a["name"], a["values"]) for a in payload["attributes"]]
    except (TypeError, KeyError) as exc:
        raise ParseError(f"{path}: each attribute needs 'name' and 'values'") from exc
    return Schema(pairs)


# ---------------------------------------------------------------------------
# Examples
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Example:
    """An ordered pair asserting that `alpha` is preferred to `beta`."""

    alpha: ObjectVec
    beta: ObjectVec


class ExampleSet:
    """A multiset of examples stored as two aligned index arrays.

    `a[r]` / `b[r]` are the preferred / dispreferred objects of row r.
    Rows keep their file or generation order; duplicates are allowed and
    counted with multiplicity.
    """

    def __init__(self, schema: Schema, a: np.ndarray, b: np.ndarray, *,
                 validate: bool = True):
        a = np.asarray(a, dtype=_VALUE_DTYPE)
        b = np.asarray(b, dtype=_VALUE_DTYPE)
        if a.ndim != 2 or a.shape != b.shape or a.shape[1] != schema.n:
            raise SchemaError(
                f"example arrays must both be (m, {schema.n}); "
                f"got {a.shape} and {b.shape}"
            )
        if validate and len(a):
            sizes = np.asarray(schema.domain_sizes, dtype=_VALUE_DTYPE)
            for arr in (a, b):
                if arr.min() < 0 or (arr >= sizes).any():
                    raise SchemaError("value index out of domain range")
        self.schema = schema
        self.a = a
        self.b = b
        self.a.setflags(write=False)
        self.b.setflags(write=False)

    @classmethod
    def from_examples(cls, schema: Schema, examples: Iterable[Example]) -> "ExampleSet":
        rows = list(examples)
        a = np.array([e.alpha for e in rows], dtype=_VALUE_DTYPE)
        b = np.array([e.beta for e in rows], dtype=_VALUE_DTYPE)
        if not rows:
            a = a.reshape(0, schema.n)
            b = b.reshape(0, schema.n)
        return cls(schema, a, b)

    def __len__(self) -> int:
        return self.a.shape[0]

    def __getitem__(self, i: int) -> Example:
        return Example(tuple(int(v) for v in self.a[i]),
                       tuple(int(v) for v in self.b[i]))

    def __iter__(self) -> Iterator[Example]:
        for i in range(len(self)):
            yield self[i]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExampleSet)
            and self.schema == other.schema
            and np.array_equal(self.a, other.a)
            and np.array_equal(self.b, other.b)
        )

    __hash__ = None

    def take(self, indices) -> "ExampleSet":
        """Row subset (or reordering) by position, multiset semantics."""
        idx = np.asarray(indices)
        return ExampleSet(self.schema, self.a[idx], self.b[idx], validate=False)

    def reversed(self) -> "ExampleSet":
        """Every example with alpha and beta swapped."""
        return ExampleSet(self.schema, self.b, self.a, validate=False)

    def concat(self, other: "ExampleSet") -> "ExampleSet":
        if other.schema != self.schema:
            raise SchemaError("cannot concatenate example sets of different schemas")
        return ExampleSet(
            self.schema,
            np.concatenate([self.a, other.a]),
            np.concatenate([self.b, other.b]),
            validate=False,
        )

    # -- CSV format: header a_<name1>,...,a_<nameN>,b_<name1>,...,b_<nameN>;
    #    one row per example, value names as cells, row order = multiset order.

    def to_csv(self, path) -> None:
        names = [a.name for a in self.schema.attributes]
        header = [f"a_{n}" for n in names] + [f"b_{n}" for n in names]
        values = [attr.values for attr in self.schema.attributes]
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for r in range(len(self)):
                row = [values[j][self.a[r, j]] for j in range(self.schema.n)]
                row += [values[j][self.b[r, j]] for j in range(self.schema.n)]
                writer.writerow(row)

    @classmethod
    def from_csv(cls, path, schema: Schema) -> "ExampleSet":
        names = [a.name for a in schema.attributes]
        expected = [f"a_{n}" for n in names] + [f"b_{n}" for n in names]
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise ParseError(f"{path}: empty file, expected a header row") from None
            if header != expected:
                raise ParseError(
                    f"{path}: header mismatch; expected {','.join(expected)}"
                )
            n = schema.n
            a_rows, b_rows = [], []
            for lineno, row in enumerate(reader, start=2):
                if len(row) != 2 * n:
                    raise ParseError(
                        f"{path}:{lineno}: expected {2 * n} cells, got {len(row)}"
                    )
                try:
                    a_rows.append([schema.value_index(j, row[j]) for j in range(n)])
                    b_rows.append([schema.value_index(j, row[n + j]) for j in range(n)])
                except SchemaError as exc:
                    raise ParseError(f"{path}:{lineno}: {exc}") from None
        a = np.array(a_rows, dtype=_VALUE_DTYPE).reshape(len(a_rows), n)
        b = np.array(b_rows, dtype=_VALUE_DTYPE).reshape(len(b_rows), n)
        es = cls(schema, a, b, validate=False)
        if len(es):
            ties = int((es.a == es.b).all(axis=1).sum())
            if ties:
                warnings.warn(
                    f"{path}: {ties} example(s) have identical objects on both "
                    "sides; they can never be satisfied",
                    stacklevel=2,
                )
        return es


# ---------------------------------------------------------------------------
# LP-lists
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LPEntry:
    """One list entry: an attribute and a total order over its domain.

    `order` holds value indices, most-preferred first, and must be a
    permutation of the attribute's full domain.
    """

    attribute: int
    order: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(v) for v in self.order))
        object.__setattr__(self, "attribute", int(self.attribute))
        if sorted(self.order) != list(range(len(self.order))):
            raise SchemaError(
                f"order {self.order} is not a permutation of "
                f"0..{len(self.order) - 1}"
            )


@dataclass(frozen=True)
class LPList:
    """An ordered list of distinct attributes, each with a value order.

    Earlier entries dominate later ones.  The list may mention any subset
    of the schema's attributes, including none (the empty list ranks
    everything as equivalent).
    """

    entries: tuple[LPEntry, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        attrs = [e.attribute for e in self.entries]
        if len(set(attrs)) != len(attrs):
            raise SchemaError("LP-list repeats an attribute")

    @property
    def attribute_sequence(self) -> tuple[int, ...]:
        return tuple(e.attribute for e in self.entries)

    def is_full_length(self, schema: Schema) -> bool:
        return len(self.entries) == schema.n

    def validate_for(self, schema: Schema) -> None:
        for e in self.entries:
            if not 0 <= e.attribute < schema.n:
                raise SchemaError(f"attribute index {e.attribute} out of range")
            if len(e.order) != schema.attributes[e.attribute].size:
                raise SchemaError(
                    f"order for attribute {schema.attributes[e.attribute].name!r} "
                    f"has {len(e.order)} values, domain has "
                    f"{schema.attributes[e.attribute].size}"
                )


def reverse_value_orders(model: LPList) -> LPList:
    """The same attribute list with every value order reversed."""
    return LPList(tuple(
        LPEntry(e.attribute, tuple(reversed(e.order))) for e in model.entries
    ))


class Relation(enum.Enum):
    BETTER = 1
    WORSE = -1
    EQUIVALENT = 0

    def __str__(self) -> str:
        return self.name.capitalize()


# ---------------------------------------------------------------------------
# Comparison semantics
# ---------------------------------------------------------------------------

def compare(model: LPList, o: Sequence[int], o2: Sequence[int]) -> Relation:
    """Rank two objects under an LP-list.

    Walks the entries in order; the first attribute on which the objects
    differ decides.  If no listed attribute distinguishes them the
    objects are equivalent.  Linear in the total size of the list.
    """
    if len(o) != len(o2):
        raise SchemaError(f"objects have different lengths: {len(o)} vs {len(o2)}")
    for entry in model.entries:
        attr = entry.attribute
        if attr >= len(o):
            raise SchemaError(f"attribute index {attr} out of range for objects")
        va, vb = int(o[attr]), int(o2[attr])
        size = len(entry.order)
        if not (0 <= va < size and 0 <= vb < size):
            raise SchemaError(
                f"object value out of range for attribute {attr} "
                f"(domain size {size})"
            )
        if va != vb:
            if entry.order.index(va) < entry.order.index(vb):
                return Relation.BETTER
            return Relation.WORSE
    return Relation.EQUIVALENT


def satisfies(model: LPList, example: Example) -> bool:
    """True iff the model strictly prefers alpha to beta.

    Equivalence does not satisfy: a tie earns no credit.
    """
    return compare(model, example.alpha, example.beta) is Relation.BETTER


def _entry_ranks(model: LPList) -> list[tuple[int, np.ndarray]]:
    # rank[value] = position in the entry's order (0 = most preferred)
    out = []
    for entry in model.entries:
        rank = np.empty(len(entry.order), dtype=_VALUE_DTYPE)
        rank[np.fromiter(entry.order, dtype=np.intp)] = np.arange(
            len(entry.order), dtype=_VALUE_DTYPE
        )
        out.append((entry.attribute, rank))
    return out


def compare_many(model: LPList, examples: ExampleSet) -> np.ndarray:
    """Vectorized compare over every row: +1 Better, -1 Worse, 0 Equivalent."""
    _check_model_fits(model, examples.schema)
    result = np.zeros(len(examples), dtype=np.int8)
    idx = np.arange(len(examples))
    a, b = examples.a, examples.b
    for attr, rank in _entry_ranks(model):
        if idx.size == 0:
            break
        va = a[idx, attr]
        vb = b[idx, attr]
        ne = va != vb
        if ne.any():
            decided = idx[ne]
            result[decided] = np.where(rank[va[ne]] < rank[vb[ne]], 1, -1)
            idx = idx[~ne]
    return result


def count_satisfied(model: LPList,
                    examples: Union[ExampleSet, Iterable[Example]]) -> int:
    """Number of examples (with multiplicity) the model satisfies.

    This is the fitness functional shared by every learner.
    """
    if isinstance(examples, ExampleSet):
        return _count_satisfied_arrays(model, examples)
    return sum(1 for e in examples if satisfies(model, e))


def _count_satisfied_arrays(model: LPList, examples: ExampleSet) -> int:
    _check_model_fits(model, examples.schema)
    a, b = examples.a, examples.b
    idx = None  # None means "all rows"; avoids materializing the full range
    total = 0
    for attr, rank in _entry_ranks(model):
        if idx is None:
            va = a[:, attr]
            vb = b[:, attr]
        else:
            if idx.size == 0:
                break
            va = a[idx, attr]
            vb = b[idx, attr]
        ne = va != vb
        if ne.any():
            total += int(np.count_nonzero(rank[va[ne]] < rank[vb[ne]]))
            eq = ~ne
            idx = np.flatnonzero(eq) if idx is None else idx[eq]
        elif idx is None:
            idx = np.arange(a.shape[0])
    return total


def _check_model_fits(model: LPList, schema: Schema) -> None:
    try:
        model.validate_for(schema)
    except SchemaError:
        raise
    # validate_for raises with a precise message; nothing to add here


# ---------------------------------------------------------------------------
# Model text format: entries joined by ';', each NAME:v1>v2>...>vk,
# most-preferred value first.  Whitespace around tokens is ignored.
# ---------------------------------------------------------------------------

def serialize_model(model: LPList, schema: Schema) -> str:
    model.validate_for(schema)
    parts = []
    for e in model.entries:
        attr = schema.attributes[e.attribute]
        parts.append(attr.name + ":" + ">".join(attr.values[v] for v in e.order))
    return ";".join(parts)


def parse_model(text: str, schema: Schema) -> LPList:
    entries: list[LPEntry] = []
    seen_attrs: set[int] = set()
    if not text.strip():
        return LPList(())
    for pos, chunk in enumerate(text.strip().split(";"), start=1):
        chunk = chunk.strip()
        if not chunk:
            raise ParseError(f"entry {pos}: empty entry")
        if ":" not in chunk:
            raise ParseError(f"entry {pos}: missing ':' in {chunk!r}")
        name, _, rest = chunk.partition(":")
        name = name.strip()
        try:
            attr_i = schema.attribute_index(name)
        except SchemaError:
            raise ParseError(f"entry {pos}: unknown attribute {name!r}") from None
        if attr_i in seen_attrs:
            raise ParseError(f"entry {pos}: attribute {name!r} repeated")
        seen_attrs.add(attr_i)
        value_names = [tok.strip() for tok in rest.split(">")]
        if any(not tok for tok in value_names):
            raise ParseError(f"entry {pos}: empty value token in {chunk!r}")
        try:
            order = tuple(schema.value_index(attr_i, v) for v in value_names)
        except SchemaError as exc:
            raise ParseError(f"entry {pos}: {exc}") from None
        if len(set(order)) != len(order):
            raise ParseError(f"entry {pos}: value repeated in {chunk!r}")
        if len(order) != schema.attributes[attr_i].size:
            raise ParseError(
                f"entry {pos}: order must list all "
                f"{schema.attributes[attr_i].size} values of {name!r}"
            )
        entries.append(LPEntry(attr_i, order))
    return LPList(tuple(entries))
