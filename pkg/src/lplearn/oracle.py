"""Brute-force reference implementations for verification.

Everything here enumerates candidates outright and exists solely to
check the real learners on small instances.  Hard size limits refuse
anything slow by construction instead of degrading silently: the oracle
is a referee, not a competitor.
"""

from __future__ import annotations

import itertools

import numpy as np

from .core import ExampleSet, LPEntry, LPList, Schema, SchemaError, count_satisfied
from .learn_dp import LpoResult

__all__ = [
    "BRUTE_LPO_MAX_DOMAIN",
    "BRUTE_LPL_MAX_ATTRIBUTES",
    "BRUTE_LPL_MAX_DOMAIN",
    "brute_lpo",
    "brute_lpl",
    "random_instance",
]

BRUTE_LPO_MAX_DOMAIN = 8
BRUTE_LPL_MAX_ATTRIBUTES = 4
BRUTE_LPL_MAX_DOMAIN = 4


def brute_lpo(examples: ExampleSet, attribute: int) -> LpoResult:
    """Best value order for one attribute, by trying every permutation.

    Ties go to the lexicographically smallest index sequence (the
    enumeration is lexicographic and only strict improvements replace
    the incumbent).
    """
    schema = examples.schema
    if not 0 <= attribute < schema.n:
        raise SchemaError(f"attribute index {attribute} out of range (n={schema.n})")
    x = schema.attributes[attribute].size
    if x > BRUTE_LPO_MAX_DOMAIN:
        raise ValueError(
            f"domain size {x} exceeds the brute-force limit "
            f"{BRUTE_LPO_MAX_DOMAIN}; use the exact learner instead"
        )

    # pairwise counts by plain iteration; no shortcuts in the referee
    counts = [[0] * x for _ in range(x)]
    for va, vb in zip(examples.a[:, attribute].tolist(),
                      examples.b[:, attribute].tolist()):
        if va != vb:
            counts[va][vb] += 1

    best = -1
    best_order: tuple[int, ...] = ()
    for perm in itertools.permutations(range(x)):
        score = 0
        for p in range(x):
            row = counts[perm[p]]
            for q in range(p + 1, x):
                score += row[perm[q]]
        if score > best:
            best = score
            best_order = perm
    return LpoResult(order=best_order, count=best)


def brute_lpl(examples: ExampleSet,
              include_sublists: bool = False) -> tuple[LPList, int]:
    """Best LP-list by trying every candidate.

    Enumerates every full-length list; with `include_sublists` also every
    list over every nonempty attribute subset (shorter lists come first).
    Returns the first maximizer in enumeration order: attribute
    sequences lexicographic, value orders lexicographic per position.
    """
    schema = examples.schema
    if schema.n > BRUTE_LPL_MAX_ATTRIBUTES:
        raise ValueError(
            f"{schema.n} attributes exceed the brute-force limit "
            f"{BRUTE_LPL_MAX_ATTRIBUTES}"
        )
    if max(schema.domain_sizes) > BRUTE_LPL_MAX_DOMAIN:
        raise ValueError(
            f"domain size {max(schema.domain_sizes)} exceeds the brute-force "
            f"limit {BRUTE_LPL_MAX_DOMAIN}"
        )

    lengths = range(1, schema.n + 1) if include_sublists else (schema.n,)
    best = -1
    best_model = LPList(())
    for k in lengths:
        for attr_seq in itertools.permutations(range(schema.n), k):
            spaces = [
                itertools.permutations(range(schema.attributes[X].size))
                for X in attr_seq
            ]
            for orders in itertools.product(*spaces):
                model = LPList(tuple(
                    LPEntry(X, order) for X, order in zip(attr_seq, orders)
                ))
                c = count_satisfied(model, examples)
                if c > best:
                    best = c
                    best_model = model
    return best_model, best


def random_instance(rng: np.random.Generator, *, n: int, x: int,
                    m: int) -> ExampleSet:
    """A uniformly random labeled instance for agreement suites.

    Both objects of each pair are drawn independently and uniformly, so
    the labels carry no structure at all; componentwise-equal pairs are
    kept (they are unsatisfiable and exercise the tie handling).
    """
    from .datagen import make_schema

    schema = make_schema(n, x)
    a = rng.integers(0, x, size=(m, n), dtype=np.int16)
    b = rng.integers(0, x, size=(m, n), dtype=np.int16)
    return ExampleSet(schema, a, b, validate=False)
