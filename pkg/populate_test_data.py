#!/usr/bin/env python3
"""
Test data population script for csrr-rec
Writes a small MovieLens-style ratings file drawn from the synthetic generator,
so the experiment pipeline can be exercised without downloading anything
"""
import argparse
from pathlib import Path

import numpy as np
import pandas as pd

from src.models.synthetic import generate
from src.utils.logger import logger


def write_synthetic_ratings(path: str, users: int = 60, items: int = 80, rank: int = 3,
                            outlier_frac: float = 0.02, rho: float = 0.6,
                            negatives_per_user: int = 5, seed: int = 0) -> Path:
    """Observed positives become 4 or 5 star ratings, a few unobserved entries become 1 to 3 stars"""
    truth = generate(items, users, rank, outlier_frac, 0.5, rho, seed)
    rng = np.random.default_rng(seed + 1)

    rows = []
    timestamp = 874965758
    for item, user in sorted(truth.a.positives):
        rating = 5 if truth.m_true[item, user] > 0.8 else 4
        rows.append((user + 1, item + 1, rating, timestamp))
        timestamp += int(rng.integers(1, 600))

    dense = truth.a.dense()
    for user in range(users):
        unobserved = np.flatnonzero(dense[:, user] == 0)
        if len(unobserved) == 0:
            continue
        picked = rng.choice(unobserved, size=min(negatives_per_user, len(unobserved)), replace=False)
        for item in picked:
            rows.append((user + 1, int(item) + 1, int(rng.integers(1, 4)), timestamp))
            timestamp += int(rng.integers(1, 600))

    frame = pd.DataFrame(rows, columns=['user', 'item', 'rating', 'timestamp'])
    frame = frame.sample(frac=1.0, random_state=seed).reset_index(drop=True)

    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(target, sep='\t', header=False, index=False)
    logger.info(f"Wrote {len(frame)} ratings ({truth.a.count} positives) for "
                f"{users} users and {items} items to {target}")
    return target


def main():
    parser = argparse.ArgumentParser(description="Write a synthetic u.data-style ratings file")
    parser.add_argument('path', nargs='?', default='data/synthetic/u.data')
    parser.add_argument('--users', type=int, default=60)
    parser.add_argument('--items', type=int, default=80)
    parser.add_argument('--seed', type=int, default=0)
    args = parser.parse_args()
    print(write_synthetic_ratings(args.path, users=args.users, items=args.items, seed=args.seed))


if __name__ == "__main__":
    main()
