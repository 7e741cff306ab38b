"""Per-pair neighborhood features, dataset assembly, balancing, splitting.

Each node pair (u, v) becomes one integer row: a block of neighbor IDs
grown from u, the same for v, then u and v themselves. A block starts with
the first `a` ordered neighbors of the root and is expanded for `b` rounds;
round i re-expands the block entries at positions (i-1)*a .. i*a-1, each
contributing its own first `a` not-yet-emitted neighbors. Groups short of
`a` entries are padded with zeros, and a zero entry expands to `a` zeros,
so every row has exactly 2*(a + a*a*b) + 2 values.
"""

from __future__ import annotations

import csv
import os
import random
from dataclasses import dataclass

import numpy as np

from ._seeds import derive_seed
from .centrality import CentralityTable, Strategy, neighbor_orders, ordered_neighbors, table_for
from .graph import Graph


@dataclass(frozen=True)
class FeatureConfig:
    """Knobs of the neighborhood features.

    ``a`` is the number of neighbors taken per expanded node, ``b`` the
    number of expansion rounds. ``seed`` drives every randomized stage of a
    pipeline built from this config. ``mask_pair_edge`` hides the (u, v)
    edge itself while collecting neighbors; the label always reflects the
    true graph. Off by default: the plain features deliberately expose the
    pair's own edge through the level-0 neighbors.
    """

    a: int
    b: int
    strategy: Strategy
    mask_pair_edge: bool = False
    seed: int = 42

    def __post_init__(self) -> None:
        if self.a < 1:
            raise ValueError(f"a must be >= 1, got {self.a}")
        if self.b < 0:
            raise ValueError(f"b must be >= 0, got {self.b}")

    @property
    def block_length(self) -> int:
        return self.a + self.a * self.a * self.b

    @property
    def row_length(self) -> int:
        return 2 * self.block_length + 2


@dataclass
class PairRow:
    """One extracted row: feature vector x, label y, and the pair itself."""

    x: list[int]
    y: int
    u: int
    v: int


@dataclass
class Dataset:
    """Feature matrix and labels for a sequence of node pairs."""

    X: np.ndarray  # (rows, row_length) int32
    y: np.ndarray  # (rows,) int8
    pairs: list[tuple[int, int]]
    config: FeatureConfig

    @property
    def positive_count(self) -> int:
        return int(self.y.sum())

    @property
    def negative_count(self) -> int:
        return len(self.y) - self.positive_count


@dataclass
class Split:
    """Stratified train/test partition of a Dataset."""

    Xtrain: np.ndarray
    ytrain: np.ndarray
    Xtest: np.ndarray
    ytest: np.ndarray
    train_pairs: list[tuple[int, int]]
    test_pairs: list[tuple[int, int]]
    test_fraction: float
    seed: int


def config_to_dict(config: FeatureConfig) -> dict:
    return {
        "a": config.a,
        "b": config.b,
        "strategy_kind": config.strategy.kind,
        "strategy_seed": config.strategy.seed,
        "mask_pair_edge": config.mask_pair_edge,
        "seed": config.seed,
    }


def config_from_dict(doc: dict) -> FeatureConfig:
    return FeatureConfig(
        a=doc["a"],
        b=doc["b"],
        strategy=Strategy(doc["strategy_kind"], doc["strategy_seed"]),
        mask_pair_edge=doc["mask_pair_edge"],
        seed=doc["seed"],
    )


def _emit_group(orders, node: int, a: int, visited: set, block: list, mask_u: int, mask_v: int) -> None:
    """Append node's first `a` unvisited ordered neighbors, zero-padded.

    Emitted IDs join the visited set immediately, so later groups of the
    same block never repeat them. A zero node has no neighbors by
    definition and yields `a` zeros.
    """
    filled = 0
    if node:
        for w in orders[node]:
            if w in visited:
                continue
            if (w == mask_v and node == mask_u) or (w == mask_u and node == mask_v):
                continue
            block.append(w)
            visited.add(w)
            filled += 1
            if filled == a:
                break
    if filled < a:
        block.extend((0,) * (a - filled))


def _neighbor_block(orders, root: int, a: int, b: int, mask_u: int, mask_v: int) -> list[int]:
    """One root's block: level-0 group plus b expansion rounds.

    The visited set starts as {root}, so the root never appears in its own
    block and no nonzero ID is emitted twice within it.
    """
    visited = {root}
    block: list[int] = []
    _emit_group(orders, root, a, visited, block, mask_u, mask_v)
    for i in range(b):
        lo = i * a
        for node in block[lo:lo + a]:
            _emit_group(orders, node, a, visited, block, mask_u, mask_v)
    return block


class _LazyOrders:
    """Orders computed on demand, for one-off pair extraction."""

    def __init__(self, g: Graph, strategy: Strategy, table: CentralityTable | None):
        self._g = g
        self._strategy = strategy
        self._table = table
        self._cache: dict[int, list[int]] = {}

    def __getitem__(self, v: int) -> list[int]:
        got = self._cache.get(v)
        if got is None:
            got = self._cache[v] = ordered_neighbors(self._g, v, self._strategy, self._table)
        return got


def create_pair_features(
    g: Graph,
    u: int,
    v: int,
    config: FeatureConfig,
    table: CentralityTable | None = None,
    _orders=None,
) -> PairRow:
    """Extract the feature row and label for one node pair.

    The centrality table for a ranked strategy is computed on the fly when
    not supplied; bulk callers should pass it (or use build_dataset) so it
    is computed once per graph.
    """
    g._check_node(u)
    g._check_node(v)
    if u == v:
        raise ValueError(f"pair must name two distinct nodes, got ({u}, {v})")
    if _orders is None:
        if table is None:
            table = table_for(g, config.strategy)
        _orders = _LazyOrders(g, config.strategy, table)
    mask_u, mask_v = (u, v) if config.mask_pair_edge else (0, 0)
    x = _neighbor_block(_orders, u, config.a, config.b, mask_u, mask_v)
    x += _neighbor_block(_orders, v, config.a, config.b, mask_u, mask_v)
    x.append(u)
    x.append(v)
    y = 1 if g.has_edge(u, v) else 0
    return PairRow(x=x, y=y, u=u, v=v)


def build_dataset(
    g: Graph,
    config: FeatureConfig,
    *,
    table: CentralityTable | None = None,
    pairs=None,
) -> Dataset:
    """One row per candidate pair (or per given pair), in enumeration order."""
    if table is None:
        table = table_for(g, config.strategy)
    orders = neighbor_orders(g, config.strategy, table)
    pair_list = list(pairs) if pairs is not None else list(g.candidate_pairs())
    a, b = config.a, config.b
    mask = config.mask_pair_edge
    X = np.zeros((len(pair_list), config.row_length), dtype=np.int32)
    y = np.zeros(len(pair_list), dtype=np.int8)
    nbr_sets = g._nbrs
    for i, (u, v) in enumerate(pair_list):
        mask_u, mask_v = (u, v) if mask else (0, 0)
        row = _neighbor_block(orders, u, a, b, mask_u, mask_v)
        row += _neighbor_block(orders, v, a, b, mask_u, mask_v)
        row.append(u)
        row.append(v)
        X[i] = row
        if v in nbr_sets[u]:
            y[i] = 1
    return Dataset(X=X, y=y, pairs=pair_list, config=config)


def _balanced_row_indices(y: np.ndarray, negative_ratio: float, seed: int) -> np.ndarray:
    """Indices keeping all positives plus a seeded sample of negatives."""
    if negative_ratio <= 0:
        raise ValueError(f"negative_ratio must be > 0, got {negative_ratio}")
    pos = np.flatnonzero(y == 1)
    if len(pos) == 0:
        raise ValueError("cannot balance a dataset with no positive rows")
    neg = np.flatnonzero(y == 0)
    want = min(int(negative_ratio * len(pos)), len(neg))
    rng = random.Random(derive_seed(seed, "balance"))
    chosen = rng.sample(range(len(neg)), want)
    return np.sort(np.concatenate([pos, neg[chosen]])).astype(np.int64)


def balance(d: Dataset, negative_ratio: float, seed: int) -> Dataset:
    """Keep all positives and a uniform seeded subsample of negatives.

    The target negative count is floor(negative_ratio * positives), capped
    at the negatives available. Surviving rows keep their original order.
    """
    keep = _balanced_row_indices(d.y, negative_ratio, seed)
    return Dataset(
        X=d.X[keep],
        y=d.y[keep],
        pairs=[d.pairs[i] for i in keep],
        config=d.config,
    )


def balanced_dataset(
    g: Graph,
    config: FeatureConfig,
    negative_ratio: float,
    seed: int | None = None,
    *,
    table: CentralityTable | None = None,
) -> Dataset:
    """Same output as balance(build_dataset(g, config), ratio, seed), but
    features are only extracted for rows that survive balancing.

    Labels depend on edge presence alone, so the kept-row selection can be
    made before any feature work; on sparse graphs this skips most pairs.
    """
    if seed is None:
        seed = config.seed
    pair_list = list(g.candidate_pairs())
    nbr_sets = g._nbrs
    y = np.fromiter((1 if v in nbr_sets[u] else 0 for u, v in pair_list), dtype=np.int8, count=len(pair_list))
    keep = _balanced_row_indices(y, negative_ratio, seed)
    return build_dataset(g, config, table=table, pairs=[pair_list[i] for i in keep])


def split(d: Dataset, test_fraction: float, seed: int) -> Split:
    """Stratified random partition into train and test rows.

    Each class contributes round(test_fraction * class_size) test rows,
    clamped so both sides keep at least one row of each class; classes with
    fewer than two rows cannot be stratified and raise.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    if len(d.y) == 0:
        raise ValueError("cannot split an empty dataset")
    rng = random.Random(derive_seed(seed, "split"))
    test_idx: list[int] = []
    for cls in (1, 0):
        cls_idx = [int(i) for i in np.flatnonzero(d.y == cls)]
        if len(cls_idx) < 2:
            raise ValueError(f"class {cls} has {len(cls_idx)} rows, need at least 2 to stratify")
        k = int(round(test_fraction * len(cls_idx)))
        k = max(1, min(k, len(cls_idx) - 1))
        rng.shuffle(cls_idx)
        test_idx.extend(cls_idx[:k])
    test_set = set(test_idx)
    test = np.array(sorted(test_idx), dtype=np.int64)
    train = np.array([i for i in range(len(d.y)) if i not in test_set], dtype=np.int64)
    return Split(
        Xtrain=d.X[train],
        ytrain=d.y[train],
        Xtest=d.X[test],
        ytest=d.y[test],
        train_pairs=[d.pairs[i] for i in train],
        test_pairs=[d.pairs[i] for i in test],
        test_fraction=test_fraction,
        seed=seed,
    )


def export_dataset_csv(d: Dataset, g: Graph, sink) -> None:
    """CSV with header u,v,y,f1..fK: original labels for the pair, internal
    IDs for the K = row_length - 2 neighbor features."""
    stream = sink
    opened = False
    if isinstance(sink, (str, os.PathLike)):
        stream = open(sink, "w", encoding="utf-8", newline="")
        opened = True
    try:
        k = d.config.row_length - 2
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["u", "v", "y"] + [f"f{i}" for i in range(1, k + 1)])
        for row, label, (u, v) in zip(d.X, d.y, d.pairs):
            writer.writerow([g.labels[u], g.labels[v], int(label)] + [int(x) for x in row[:-2]])
    finally:
        if opened:
            stream.close()
