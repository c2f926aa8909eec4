"""Exact learners: optimal value orders and optimal LP-lists.

Both are dynamic programs over subsets encoded as bitmasks.

The value-order program scores one attribute: ``count[i][j]`` counts the
examples whose preferred side carries value ``i`` and dispreferred side
carries value ``j`` (ties on the attribute are not counted), and the
recurrence picks, for every subset of values, which member to place last
(least preferred).  Placing ``i`` last earns every ``count[j][i]`` with
``j`` still in the subset: those examples prefer some remaining value
over ``i``, and any order ending in ``i`` satisfies them.

The list program stacks that over attribute subsets: an LP-list whose
prefix uses exactly the attributes of ``S`` leaves undecided precisely
the examples that tie on all of ``S``, so the best list covering ``S``
ends in some attribute ``X`` whose order is fit on the examples tying on
everything else in ``S``.

Argmax ties everywhere resolve so that the lower index wins the earlier
(more preferred) slot; concretely the scans run over candidates in
ascending index with greater-or-equal replacement, leaving the largest
tied candidate in the last-place seat.  On empty data both programs
therefore return plain ascending orders.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import ExampleSet, LPEntry, LPList, SchemaError, count_satisfied

__all__ = [
    "MAX_SET_BITS",
    "LpoResult",
    "LplResult",
    "DpTables",
    "build_count_matrix",
    "compute_lpo",
    "compute_lpl",
]

# subsets live in one machine word; anything wider is refused up front
MAX_SET_BITS = 24


@dataclass(frozen=True)
class DpTables:
    """Subset tables of one DP run: optimum value and last-placed choice.

    `value[mask]` is the best satisfiable count using exactly the members
    of `mask`; `choice[mask]` is the member placed last for that subset
    (-1 for the empty set).  Indices are value indices in the value-order
    program and attribute indices in the list program.
    """

    value: np.ndarray
    choice: np.ndarray


@dataclass(frozen=True)
class LpoResult:
    """A value order (most-preferred first) and the count it achieves."""

    order: tuple[int, ...]
    count: int
    tables: Optional[DpTables] = None


@dataclass(frozen=True)
class LplResult:
    """A learned LP-list, its training count, and the subset tables."""

    model: LPList
    count: int
    tables: DpTables


def build_count_matrix(examples: ExampleSet, attribute: int) -> np.ndarray:
    """Pairwise value counts for one attribute.

    `M[i][j]` = number of examples whose preferred object has value i and
    dispreferred object has value j on the attribute; examples tying on
    it are not counted, so the diagonal is zero.
    """
    schema = examples.schema
    if not 0 <= attribute < schema.n:
        raise SchemaError(f"attribute index {attribute} out of range (n={schema.n})")
    x = schema.attributes[attribute].size
    va = examples.a[:, attribute].astype(np.int64)
    vb = examples.b[:, attribute].astype(np.int64)
    ne = va != vb
    codes = va[ne] * x + vb[ne]
    return np.bincount(codes, minlength=x * x).reshape(x, x)


def _order_from_matrix(matrix) -> tuple[int, tuple[int, ...], list, list]:
    """Subset DP over one count matrix.

    Returns (count, order, value_table, choice_table); order lists value
    indices most-preferred first.
    """
    x = len(matrix)
    if x > MAX_SET_BITS:
        raise ValueError(f"domain size {x} exceeds the bitmask limit {MAX_SET_BITS}")
    counts = matrix.tolist() if isinstance(matrix, np.ndarray) else matrix
    full = (1 << x) - 1
    value = [0] * (full + 1)
    choice = [-1] * (full + 1)
    for mask in range(1, full + 1):
        members = [i for i in range(x) if mask >> i & 1]
        if len(members) == 1:
            choice[mask] = members[0]
            continue  # value stays 0
        best = -1
        best_i = -1
        for i in members:
            gain = value[mask ^ (1 << i)]
            for j in members:
                if j != i:
                    gain += counts[j][i]
            if gain >= best:  # >= leaves the largest tied index in last place
                best = gain
                best_i = i
        value[mask] = best
        choice[mask] = best_i

    order = []
    mask = full
    while mask:
        i = choice[mask]
        order.append(i)
        mask ^= 1 << i
    order.reverse()
    return value[full], tuple(order), value, choice


def compute_lpo(examples: ExampleSet, attribute: int, *,
                with_tables: bool = False) -> LpoResult:
    """Optimal value order for one attribute.

    Maximizes the number of examples decided correctly by the attribute
    alone.  Deterministic: argmax ties leave the lower value index in
    the earlier slot, so empty data yields the ascending order.
    """
    matrix = build_count_matrix(examples, attribute)
    count, order, value, choice = _order_from_matrix(matrix)

    check = sum(int(matrix[order[p], order[q]])
                for p in range(len(order)) for q in range(p + 1, len(order)))
    if check != count:
        raise RuntimeError(
            f"internal inconsistency: DP count {count}, recount {check}"
        )

    tables = None
    if with_tables:
        tables = DpTables(value=np.asarray(value, dtype=np.int64),
                          choice=np.asarray(choice, dtype=np.int8))
    return LpoResult(order=order, count=count, tables=tables)


# ---------------------------------------------------------------------------
# Optimal LP-list
# ---------------------------------------------------------------------------

def _per_attribute_rows(examples: ExampleSet):
    """Per attribute: tie masks and value-pair codes of the rows that differ on it.

    tie_bits[r] has bit j set when row r's objects agree on attribute j;
    only rows differing on X can ever contribute to X's count matrix, so
    each attribute keeps just those rows.
    """
    a, b = examples.a, examples.b
    n = examples.schema.n
    eq = a == b
    weights = (1 << np.arange(n, dtype=np.int32))
    tie_bits = eq.astype(np.int32) @ weights
    per_attr = []
    for attr in range(n):
        x = examples.schema.attributes[attr].size
        rows = np.flatnonzero(~eq[:, attr])
        codes = (a[rows, attr].astype(np.int16) * x + b[rows, attr]).astype(np.int16)
        per_attr.append((tie_bits[rows], codes, x))
    return per_attr


def _masked_lpo(per_attr_entry, need: int) -> tuple[int, tuple[int, ...]]:
    """Best order for one attribute over the examples tying on `need`."""
    tie_bits, codes, x = per_attr_entry
    if codes.size:
        if need:
            sel = (tie_bits & need) == need
            picked = codes[sel]
        else:
            picked = codes
        if picked.size:
            matrix = np.bincount(picked, minlength=x * x).reshape(x, x)
            count, order, _, _ = _order_from_matrix(matrix)
            return count, order
    return 0, tuple(range(x))


def compute_lpl(examples: ExampleSet) -> LplResult:
    """Optimal LP-list over all attributes.

    Held-Karp-style: for every attribute subset S, the best list covering
    exactly S ends in some X whose value order is fit on the examples
    tying on all of S minus X.  Extending a list never loses satisfied
    examples, so the full-set optimum is the optimum over all LP-lists.
    The returned count is re-verified against an independent recount.
    """
    schema = examples.schema
    n = schema.n
    if n > MAX_SET_BITS:
        raise ValueError(f"{n} attributes exceed the bitmask limit {MAX_SET_BITS}")
    for attr in schema.attributes:
        if attr.size > MAX_SET_BITS:
            raise ValueError(
                f"domain size {attr.size} of {attr.name!r} exceeds the "
                f"bitmask limit {MAX_SET_BITS}"
            )

    per_attr = _per_attribute_rows(examples)
    full = (1 << n) - 1
    value = np.zeros(full + 1, dtype=np.int64)
    choice = np.full(full + 1, -1, dtype=np.int8)
    for mask in range(1, full + 1):
        best = -1
        best_attr = -1
        remaining = mask
        while remaining:
            low = remaining & -remaining
            attr = low.bit_length() - 1
            remaining ^= low
            total = int(value[mask ^ low]) + _masked_lpo(per_attr[attr],
                                                         mask ^ low)[0]
            if total >= best:  # >= leaves the largest tied attribute last
                best = total
                best_attr = attr
        value[mask] = best
        choice[mask] = best_attr

    entries_last_first = []
    mask = full
    while mask:
        attr = int(choice[mask])
        rest = mask ^ (1 << attr)
        _, order = _masked_lpo(per_attr[attr], rest)
        entries_last_first.append(LPEntry(attr, order))
        mask = rest
    model = LPList(tuple(reversed(entries_last_first)))

    count = int(value[full])
    recount = count_satisfied(model, examples)
    if recount != count:
        raise RuntimeError(
            f"internal inconsistency: DP count {count}, recount {recount}"
        )
    return LplResult(model=model, count=count,
                     tables=DpTables(value=value, choice=choice))
