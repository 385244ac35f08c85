#!/usr/bin/env python3
"""MovieLens-format rating ingestion, implicit-feedback binarization and per-user splits"""
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Optional, Union

import numpy as np
import pandas as pd

from .errors import EmptyDatasetError, ParseError
from .matrices import ObservationMatrix
from ..utils.logger import logger

_COLUMNS = ['user', 'item', 'rating', 'timestamp']
_SEPARATORS = {'tab': '\t', 'double-colon': '::', 'eachmovie': '\t'}


@dataclass(frozen=True)
class RatingDataset:
    """Ratings with dense 0-based user/item indices and the maps back to external ids"""
    ratings: pd.DataFrame
    user_ids: np.ndarray          # dense index -> external id
    item_ids: np.ndarray
    duplicates_dropped: int = 0

    @property
    def n_users(self) -> int:
        return len(self.user_ids)

    @property
    def n_items(self) -> int:
        return len(self.item_ids)

    @property
    def user_index(self) -> Dict[int, int]:
        return {int(ext): idx for idx, ext in enumerate(self.user_ids)}

    @property
    def item_index(self) -> Dict[int, int]:
        return {int(ext): idx for idx, ext in enumerate(self.item_ids)}

    def density(self) -> float:
        """Rated fraction of the user-item grid before binarization"""
        return len(self.ratings) / float(self.n_users * self.n_items)


@dataclass(frozen=True)
class Split:
    """Per-user train/test partition of the positives"""
    train: ObservationMatrix
    test: Dict[int, FrozenSet[int]]
    seed: int
    fraction: float = 0.8
    excluded_users: FrozenSet[int] = field(default_factory=frozenset)


def parse_ratings(path: Union[str, Path], format: str = 'tab') -> RatingDataset:
    """Read 'user SEP item SEP rating SEP timestamp' lines (tab or '::' separated)"""
    if format not in _SEPARATORS:
        raise ValueError(f"unknown format '{format}'")
    path = Path(path)
    logger.info(f"Parsing {format} ratings from {path}")

    try:
        raw = pd.read_csv(path, sep=_SEPARATORS[format], header=None, names=_COLUMNS,
                          dtype=str, engine='python', skip_blank_lines=True,
                          keep_default_na=False)
    except pd.errors.EmptyDataError as e:
        raise EmptyDatasetError(f"{path} contains no ratings") from e
    except pd.errors.ParserError as e:
        raise ParseError(str(e), _line_from_parser_error(e)) from e

    if raw.empty:
        raise EmptyDatasetError(f"{path} contains no ratings")

    numeric = raw.apply(lambda column: pd.to_numeric(column.str.strip(), errors='coerce'))
    bad = numeric.isna().any(axis=1)
    if bad.any():
        position = int(np.flatnonzero(bad.to_numpy())[0])
        raise ParseError(f"malformed rating line {'|'.join(map(str, raw.iloc[position].tolist()))!r}",
                         _line_number(path, position))

    frame = pd.DataFrame({
        'user': numeric['user'].astype(np.int64),
        'item': numeric['item'].astype(np.int64),
        'rating': numeric['rating'].astype(np.float64),
        'timestamp': numeric['timestamp'].astype(np.int64),
    })
    if format == 'eachmovie':
        frame['rating'] = 1.0 + 4.0 * frame['rating']

    return _reindex(frame)


def _line_number(path: Path, position: int) -> int:
    """1-based file line of the position-th non-blank line"""
    seen = -1
    with open(path, 'r') as f:
        for line_number, line in enumerate(f, start=1):
            if line.strip():
                seen += 1
                if seen == position:
                    return line_number
    return position + 1


def _line_from_parser_error(error: Exception) -> int:
    match = re.search(r'line (\d+)', str(error))
    return int(match.group(1)) if match else 0


def _reindex(frame: pd.DataFrame) -> RatingDataset:
    before = len(frame)
    frame = frame.drop_duplicates(subset=['user', 'item'], keep='last')
    duplicates = before - len(frame)
    if duplicates:
        logger.warning(f"Dropped {duplicates} duplicate (user, item) ratings; last occurrence kept")

    user_ids = np.sort(frame['user'].unique())
    item_ids = np.sort(frame['item'].unique())
    ratings = pd.DataFrame({
        'user': np.searchsorted(user_ids, frame['user'].to_numpy()),
        'item': np.searchsorted(item_ids, frame['item'].to_numpy()),
        'rating': frame['rating'].to_numpy(),
        'timestamp': frame['timestamp'].to_numpy(),
    })
    dataset = RatingDataset(ratings=ratings, user_ids=user_ids, item_ids=item_ids,
                            duplicates_dropped=duplicates)
    logger.info(f"Loaded {len(ratings)} ratings from {dataset.n_users} users on "
                f"{dataset.n_items} items (density {dataset.density():.4e})")
    return dataset


def binarize(ds: RatingDataset, threshold: float = 3.0) -> ObservationMatrix:
    """Items x users matrix with a positive wherever rating > threshold"""
    kept = ds.ratings[ds.ratings['rating'] > threshold]
    pairs = zip(kept['item'].tolist(), kept['user'].tolist())
    observations = ObservationMatrix.from_positives(ds.n_items, ds.n_users, pairs)
    logger.info(f"Binarized at rating > {threshold:g}: {observations.count} positives "
                f"(density {observations.density():.4e})")
    return observations


def round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def split_per_user(a: ObservationMatrix, fraction: float = 0.8, seed: int = 0) -> Split:
    """Hold out 1 - fraction of every user's positives, uniformly at random

    Users are visited in ascending index order and each draws one permutation from a
    single numpy PCG64 generator, so a seed reproduces the split on any platform.
    Users with fewer than two positives keep everything in train.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must lie in (0, 1), got {fraction}")
    rng = np.random.default_rng(seed)
    train_pairs = []
    test: Dict[int, FrozenSet[int]] = {}
    excluded = set()

    for user in range(a.cols):
        items = a.column_items(user)
        k = len(items)
        if k < 2:
            train_pairs.extend((int(item), user) for item in items)
            excluded.add(user)
            continue
        shuffled = items[rng.permutation(k)]
        n_train = round_half_up(fraction * k)
        train_pairs.extend((int(item), user) for item in shuffled[:n_train])
        held_out = frozenset(int(item) for item in shuffled[n_train:])
        if held_out:
            test[user] = held_out
        else:
            excluded.add(user)

    train = ObservationMatrix.from_positives(a.rows, a.cols, train_pairs)
    logger.info(f"Split seed={seed} fraction={fraction:g}: {train.count} train positives, "
                f"{sum(len(s) for s in test.values())} test positives over {len(test)} users")
    return Split(train=train, test=test, seed=seed, fraction=fraction,
                 excluded_users=frozenset(excluded))


def pop_rank(a: ObservationMatrix) -> np.ndarray:
    """Items by descending positive count, ties by ascending item index"""
    counts = a.row_counts()
    return np.lexsort((np.arange(len(counts)), -counts))


def write_manifest(split: Split, path: Union[str, Path],
                   dataset: Optional[RatingDataset] = None) -> Path:
    """Text audit of the split: seed, fraction and each user's held-out item ids"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    users = dataset.user_ids if dataset is not None else None
    items = dataset.item_ids if dataset is not None else None
    with open(path, 'w') as f:
        f.write(f"seed\t{split.seed}\n")
        f.write(f"fraction\t{split.fraction}\n")
        for user in sorted(split.test):
            held_out = sorted(split.test[user])
            user_id = int(users[user]) if users is not None else user
            item_list = [int(items[i]) if items is not None else i for i in held_out]
            f.write(f"{user_id}\t{' '.join(str(i) for i in item_list)}\n")
    logger.info(f"Wrote split manifest to {path}")
    return path
