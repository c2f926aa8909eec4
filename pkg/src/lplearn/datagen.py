"""Synthetic corpora: hidden models, labeled pairs, noise, and splits.

A hidden full-length LP-list is drawn at random, example pairs are
sampled and oriented by it, a fixed fraction of them is flipped to
simulate inconsistent preferences, and the pool is shuffled into train
and test files.

Every stochastic step draws from its own stream derived from the config
seed, so regenerating any part is deterministic and independent of
evaluation order or thread count.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .core import (
    ExampleSet,
    LPEntry,
    LPList,
    Schema,
    SchemaError,
    compare_many,
    save_schema,
    serialize_model,
)

__all__ = [
    "GenConfig",
    "GenResult",
    "make_schema",
    "stage_rng",
    "random_lplist",
    "sample_examples",
    "apply_noise",
    "split",
    "generate_dataset",
    "write_files",
]

# stream tags: one sub-stream per stochastic stage, plus one reserved for
# the GA so its draws never interleave with generation
STAGE_MODEL, STAGE_SAMPLE, STAGE_NOISE, STAGE_SPLIT, STAGE_GA = range(5)

_FLOOR_GUARD = 1e-9  # soaks up float dust in m*fraction before flooring


@dataclass(frozen=True)
class GenConfig:
    """One dataset recipe; equal configs generate byte-identical files."""

    m: int
    n: int = 10
    x: int = 5
    noise: float = 0.15
    train_fraction: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.x < 2:
            raise ValueError(f"x must be >= 2, got {self.x}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if not 0.0 <= self.noise <= 1.0:
            raise ValueError(f"noise must be in [0, 1], got {self.noise}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(
                f"train_fraction must be in (0, 1), got {self.train_fraction}"
            )
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def make_schema(n: int, x: int) -> Schema:
    """The standard synthetic schema: attributes A1..An, values v1..vx each."""
    return Schema(
        (f"A{i + 1}", tuple(f"v{j + 1}" for j in range(x))) for i in range(n)
    )


def stage_rng(seed: int, stage: int) -> np.random.Generator:
    """Generator for one stage of one dataset, independent of the others."""
    return np.random.default_rng(np.random.SeedSequence([seed, stage]))


def _floor_fraction(total: int, fraction: float) -> int:
    return math.floor(total * fraction + _FLOOR_GUARD)


def random_lplist(schema: Schema, rng: np.random.Generator) -> LPList:
    """Uniformly random full-length model.

    The attribute permutation is drawn first, then one value permutation
    per entry in list order; callers relying on determinism get the same
    model from the same generator state.
    """
    entries = []
    for attr in rng.permutation(schema.n):
        order = rng.permutation(schema.attributes[int(attr)].size)
        entries.append(LPEntry(int(attr), tuple(int(v) for v in order)))
    return LPList(tuple(entries))


def sample_examples(schema: Schema, hidden: LPList, m: int,
                    rng: np.random.Generator) -> ExampleSet:
    """m pairs of distinct uniform objects, oriented by the hidden model.

    Componentwise-equal pairs are re-drawn (the hidden model cannot
    orient them); with the default domains that costs about one redraw
    per ten million pairs.
    """
    hidden.validate_for(schema)
    if not hidden.is_full_length(schema):
        raise SchemaError("hidden model must mention every attribute")
    sizes = np.asarray(schema.domain_sizes)
    a = rng.integers(0, sizes, size=(m, schema.n), dtype=np.int16)
    b = rng.integers(0, sizes, size=(m, schema.n), dtype=np.int16)
    while True:
        equal_rows = np.flatnonzero((a == b).all(axis=1))
        if equal_rows.size == 0:
            break
        a[equal_rows] = rng.integers(0, sizes, size=(equal_rows.size, schema.n),
                                     dtype=np.int16)
        b[equal_rows] = rng.integers(0, sizes, size=(equal_rows.size, schema.n),
                                     dtype=np.int16)
    rel = compare_many(hidden, ExampleSet(schema, a, b, validate=False))
    swap = (rel < 0)[:, None]
    return ExampleSet(schema, np.where(swap, b, a), np.where(swap, a, b),
                      validate=False)


def apply_noise(examples: ExampleSet, noise: float,
                rng: np.random.Generator) -> tuple[ExampleSet, np.ndarray]:
    """Flip floor(m*noise) examples chosen uniformly without replacement.

    Returns the noisy set and the sorted flipped positions.  Flipping
    swaps the two objects, so applying the same swap again restores the
    original set.
    """
    if not 0.0 <= noise <= 1.0:
        raise ValueError(f"noise must be in [0, 1], got {noise}")
    m = len(examples)
    k = _floor_fraction(m, noise)
    positions = np.sort(rng.choice(m, size=k, replace=False))
    a = examples.a.copy()
    b = examples.b.copy()
    a[positions] = examples.b[positions]
    b[positions] = examples.a[positions]
    return ExampleSet(examples.schema, a, b, validate=False), positions


def split(examples: ExampleSet, train_fraction: float,
          rng: np.random.Generator, *, with_indices: bool = False):
    """Uniform shuffle, first floor(m*fraction) rows to train, rest to test.

    With `with_indices` the positions each split row came from are
    returned too: (train, test, train_indices, test_indices).
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    perm = rng.permutation(len(examples))
    cut = _floor_fraction(len(examples), train_fraction)
    train_idx, test_idx = perm[:cut], perm[cut:]
    train, test = examples.take(train_idx), examples.take(test_idx)
    if with_indices:
        return train, test, train_idx, test_idx
    return train, test


@dataclass(frozen=True)
class GenResult:
    """One generated dataset with full provenance for introspection."""

    config: GenConfig
    schema: Schema
    hidden: LPList
    examples: ExampleSet  # oriented, before noise
    noisy: ExampleSet
    flipped: np.ndarray  # sorted positions in the pooled set
    train: ExampleSet
    test: ExampleSet
    train_indices: np.ndarray
    test_indices: np.ndarray

    @property
    def train_flip_count(self) -> int:
        return int(np.isin(self.train_indices, self.flipped).sum())

    @property
    def test_flip_count(self) -> int:
        return int(np.isin(self.test_indices, self.flipped).sum())

    @property
    def unflipped_train_fraction(self) -> float:
        """Training accuracy the hidden model achieves; a floor for the exact learner."""
        return 1.0 - self.train_flip_count / len(self.train)


def generate_dataset(config: GenConfig) -> GenResult:
    schema = make_schema(config.n, config.x)
    hidden = random_lplist(schema, stage_rng(config.seed, STAGE_MODEL))
    examples = sample_examples(schema, hidden, config.m,
                               stage_rng(config.seed, STAGE_SAMPLE))
    noisy, flipped = apply_noise(examples, config.noise,
                                 stage_rng(config.seed, STAGE_NOISE))
    train, test, train_idx, test_idx = split(
        noisy, config.train_fraction, stage_rng(config.seed, STAGE_SPLIT),
        with_indices=True,
    )
    return GenResult(
        config=config,
        schema=schema,
        hidden=hidden,
        examples=examples,
        noisy=noisy,
        flipped=flipped,
        train=train,
        test=test,
        train_indices=train_idx,
        test_indices=test_idx,
    )


def write_files(result: GenResult, outdir) -> dict[str, Path]:
    """Write schema, hidden model, splits, and a manifest into `outdir`.

    The manifest records the config, sizes, flip counts, and a sha256
    digest per written file, so regeneration is verifiable at a glance.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {
        "schema": outdir / "schema.json",
        "model": outdir / "model.txt",
        "train": outdir / "train.csv",
        "test": outdir / "test.csv",
    }
    save_schema(result.schema, paths["schema"])
    paths["model"].write_text(
        serialize_model(result.hidden, result.schema) + "\n", encoding="utf-8"
    )
    result.train.to_csv(paths["train"])
    result.test.to_csv(paths["test"])

    digests = {}
    for name, path in paths.items():
        data = path.read_bytes()
        digests[path.name] = {
            "sha256": hashlib.sha256(data).hexdigest(),
            "bytes": len(data),
        }
    manifest = {
        "config": asdict(result.config),
        "examples": len(result.noisy),
        "flip_count": int(result.flipped.size),
        "train_size": len(result.train),
        "test_size": len(result.test),
        "train_flip_count": result.train_flip_count,
        "test_flip_count": result.test_flip_count,
        "files": digests,
    }
    manifest_path = outdir / "manifest.json"
    manifest_path.write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    paths["manifest"] = manifest_path
    return paths
