"""Genetic algorithm over full-length LP-lists.

Chromosomes are LP-lists with a canonical text encoding.  Each
generation ranks the population by fitness (satisfied training
examples), takes the top slice as parents, and lets every parent emit
two children: one by re-shuffling its attribute ordering, one by
re-shuffling the value order of a single random attribute.  Survivors
are the best of parents plus children, so the best fitness never drops.

Note the first operator really is a unary shuffle, not a two-parent
recombination; a conventional two-parent order crossover is available
behind `use_order_crossover` as an off-by-default extension.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import (
    ExampleSet,
    LPEntry,
    LPList,
    ParseError,
    Schema,
    count_satisfied,
    parse_model,
    serialize_model,
)
from .datagen import STAGE_GA, random_lplist

__all__ = [
    "GaConfig",
    "GaResult",
    "Chromosome",
    "encode",
    "decode",
    "fitness",
    "crossover_shuffle",
    "order_crossover",
    "mutate_values",
    "evolve",
]


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 100
    parent_count: int = 50
    generations: int = 100
    seed: int = 0
    use_order_crossover: bool = False  # extension, see module docstring

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError(f"population_size must be >= 1, got {self.population_size}")
        if not 0 < self.parent_count <= self.population_size:
            raise ValueError(
                f"parent_count must be in 1..population_size, got {self.parent_count}"
            )
        if self.generations < 1:
            raise ValueError(f"generations must be >= 1, got {self.generations}")


@dataclass(frozen=True)
class Chromosome:
    """An LP-list plus its canonical encoding; the text doubles as a tie-break key."""

    model: LPList
    text: str

    @classmethod
    def make(cls, model: LPList, schema: Schema) -> "Chromosome":
        return cls(model=model, text=encode(model, schema))


def _single_char_names(schema: Schema) -> bool:
    return all(
        len(a.name) == 1 and all(len(v) == 1 for v in a.values)
        for a in schema.attributes
    )


def encode(model: LPList, schema: Schema) -> str:
    """Chromosome text: space-separated genes when every name is one character.

    A gene is the attribute name immediately followed by its values,
    most-preferred first ("Bst Mtc Cwbk" style).  Schemas with longer
    names fall back to the standard model format, which is unambiguous.
    """
    model.validate_for(schema)
    if not _single_char_names(schema):
        return serialize_model(model, schema)
    genes = []
    for entry in model.entries:
        attr = schema.attributes[entry.attribute]
        genes.append(attr.name + "".join(attr.values[v] for v in entry.order))
    return " ".join(genes)


def decode(text: str, schema: Schema) -> LPList:
    if ":" in text:
        return parse_model(text, schema)
    if not _single_char_names(schema):
        raise ParseError(
            "compact gene text needs single-character names; "
            "use the NAME:v1>v2 format for this schema"
        )
    entries = []
    seen: set[int] = set()
    for pos, gene in enumerate(text.split(), start=1):
        name, value_names = gene[0], gene[1:]
        try:
            attr_i = schema.attribute_index(name)
        except Exception:
            raise ParseError(f"gene {pos}: unknown attribute {name!r}") from None
        if attr_i in seen:
            raise ParseError(f"gene {pos}: attribute {name!r} repeated")
        seen.add(attr_i)
        attr = schema.attributes[attr_i]
        try:
            order = tuple(schema.value_index(attr_i, v) for v in value_names)
        except Exception as exc:
            raise ParseError(f"gene {pos}: {exc}") from None
        if len(set(order)) != len(order):
            raise ParseError(f"gene {pos}: value repeated in {gene!r}")
        if len(order) != attr.size:
            raise ParseError(
                f"gene {pos}: expected all {attr.size} values of {name!r}, "
                f"got {len(order)}"
            )
        entries.append(LPEntry(attr_i, order))
    return LPList(tuple(entries))


def fitness(chromosome: Union[Chromosome, LPList], examples: ExampleSet) -> int:
    """Number of training examples satisfied; the quantity being maximized."""
    model = chromosome.model if isinstance(chromosome, Chromosome) else chromosome
    return count_satisfied(model, examples)


def crossover_shuffle(parent: Chromosome, schema: Schema,
                      rng: np.random.Generator) -> Chromosome:
    """Child with a uniformly re-shuffled attribute ordering, value orders kept."""
    entries = parent.model.entries
    perm = rng.permutation(len(entries))
    child = LPList(tuple(entries[int(i)] for i in perm))
    return Chromosome.make(child, schema)


def order_crossover(parent: Chromosome, partner: Chromosome, schema: Schema,
                    rng: np.random.Generator) -> Chromosome:
    """Two-parent order crossover (the extension operator).

    Keeps a random slice of the parent's attribute sequence in place and
    fills the remaining positions with the partner's attributes in the
    partner's order.  Value orders come from the parent throughout.
    """
    entries = parent.model.entries
    n = len(entries)
    lo, hi = sorted(int(c) for c in rng.integers(0, n + 1, size=2))
    kept = entries[lo:hi]
    kept_attrs = {e.attribute for e in kept}
    by_attr = {e.attribute: e for e in entries}
    filler = [by_attr[e.attribute] for e in partner.model.entries
              if e.attribute not in kept_attrs]
    child = LPList(tuple(filler[:lo]) + kept + tuple(filler[lo:]))
    return Chromosome.make(child, schema)


def mutate_values(parent: Chromosome, schema: Schema,
                  rng: np.random.Generator) -> Chromosome:
    """Child with one uniformly chosen attribute's value order re-shuffled."""
    entries = list(parent.model.entries)
    k = int(rng.integers(len(entries)))
    shuffled = tuple(int(v) for v in rng.permutation(entries[k].order))
    entries[k] = LPEntry(entries[k].attribute, shuffled)
    return Chromosome.make(LPList(tuple(entries)), schema)


@dataclass(frozen=True)
class GaResult:
    model: LPList
    fitness: int
    best_history: tuple[int, ...]  # index 0 is the initial population
    mean_history: tuple[float, ...]


def evolve(train: ExampleSet, config: GaConfig,
           rng: "np.random.Generator | None" = None) -> GaResult:
    """Run the GA and return the best survivor with its fitness history.

    Replacement is elitist truncation: the next population is the best
    `population_size` of (parents + children), ranked by fitness with
    ties broken by encoding text, so runs are reproducible and the best
    fitness is monotone.  Without an explicit generator, randomness
    derives from `config.seed`.
    """
    schema = train.schema
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence([config.seed, STAGE_GA]))

    cache: dict[str, int] = {}

    def fit(c: Chromosome) -> int:
        got = cache.get(c.text)
        if got is None:
            got = cache[c.text] = count_satisfied(c.model, train)
        return got

    def ranked(chroms: list[Chromosome]) -> list[Chromosome]:
        return sorted(chroms, key=lambda c: (-fit(c), c.text))

    population = ranked([
        Chromosome.make(random_lplist(schema, rng), schema)
        for _ in range(config.population_size)
    ])
    best_history = [fit(population[0])]
    mean_history = [float(np.mean([fit(c) for c in population]))]

    for _ in range(config.generations):
        parents = population[: config.parent_count]
        children = []
        for i, parent in enumerate(parents):
            if config.use_order_crossover and len(parents) > 1:
                partner = parents[(i + 1) % len(parents)]
                children.append(order_crossover(parent, partner, schema, rng))
            else:
                children.append(crossover_shuffle(parent, schema, rng))
            children.append(mutate_values(parent, schema, rng))
        population = ranked(parents + children)[: config.population_size]
        best_history.append(fit(population[0]))
        mean_history.append(float(np.mean([fit(c) for c in population])))

    best = population[0]
    return GaResult(
        model=best.model,
        fitness=fit(best),
        best_history=tuple(best_history),
        mean_history=tuple(mean_history),
    )
