"""Greedy baseline: build the list front to back, never revisiting a pick.

At each step the learner fits the best value order for every unused
attribute on the still-undecided examples that differ on it, commits to
the attribute deciding the most of them (ties to the lowest index), and
narrows the undecided set to the examples tying on the pick.  Leftover
attributes are appended with ascending value orders once nothing remains
to decide.

This is a reconstruction of the usual greedy recipe for lexicographic
learners, kept here as the weak baseline; only the exact learner
guarantees optimality.
"""

from __future__ import annotations

import numpy as np

from .core import ExampleSet, LPEntry, LPList
from .learn_dp import _order_from_matrix

__all__ = ["greedy_lpl"]


def greedy_lpl(examples: ExampleSet) -> LPList:
    schema = examples.schema
    n = schema.n
    a, b = examples.a, examples.b
    undecided = np.ones(len(examples), dtype=bool)
    unused = list(range(n))
    entries: list[LPEntry] = []

    while unused and undecided.any():
        best_count = -1
        best_attr = -1
        best_order: tuple[int, ...] = ()
        for attr in unused:
            x = schema.attributes[attr].size
            rows = undecided & (a[:, attr] != b[:, attr])
            if rows.any():
                codes = (a[rows, attr].astype(np.int32) * x + b[rows, attr])
                matrix = np.bincount(codes, minlength=x * x).reshape(x, x)
                count, order, _, _ = _order_from_matrix(matrix)
            else:
                count, order = 0, tuple(range(x))
            if count > best_count:  # strict: ties keep the lowest attribute
                best_count = count
                best_attr = attr
                best_order = order
        entries.append(LPEntry(best_attr, best_order))
        unused.remove(best_attr)
        undecided &= a[:, best_attr] == b[:, best_attr]

    for attr in unused:  # ascending by construction
        entries.append(LPEntry(attr, tuple(range(schema.attributes[attr].size))))
    return LPList(tuple(entries))
