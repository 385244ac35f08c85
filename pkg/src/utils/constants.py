#!/usr/bin/env python3
"""Shared constants: selectors, hyperparameter grids, presets and published reference numbers"""

SOLVER_KINDS = ('csrr-i', 'csrr-ii', 'csrr-e', 'poprank', 'csrr-i-v0')
DATA_FORMATS = ('tab', 'double-colon', 'eachmovie')

DATA_DIR_ENV = 'CSRR_DATA_DIR'
DEFAULT_DATA_DIR = 'data'

DEFAULT_CUTOFFS = (5, 10, 15)
DEFAULT_SEEDS = (0, 1, 2, 3, 4)

# Hyperparameter grids used for manual tuning
CP_GRID = tuple(round(0.5 + 0.05 * i, 2) for i in range(10))          # 0.5 ... 0.95
LATENT_DIM_GRID = tuple(range(10, 55, 5))                              # 10 ... 50
STEP_MULTIPLIERS = (0.25, 0.5, 1.0, 2.0, 4.0)
LAMBDA1_SWEEP = tuple(10.0 ** k for k in range(-3, 4))                 # lambda2 fixed at 0.1
LAMBDA2_SWEEP = tuple(10.0 ** k for k in range(-5, 3))                 # lambda1 fixed at 0.1
SWEEP_FIXED_LAMBDA = 0.1

# Documented settings; each is a partial solver section merged over the defaults
PRESETS = {
    'ml100k': {
        'c_p': 0.8, 'eta': 0.1, 'lambda1': 5.0, 'lambda2': 1.0,
        'max_iters': 200, 'rel_tol': 1e-5, 'latent_dim': 20,
    },
    'ml1m': {
        'c_p': 0.8, 'eta': 0.1, 'lambda1': 10.0, 'lambda2': 1.0,
        'max_iters': 150, 'rel_tol': 1e-5, 'latent_dim': 30,
    },
    'synthetic': {
        'c_p': 0.7, 'eta': 0.1, 'lambda1': 0.5, 'lambda2': 0.5,
        'max_iters': 300, 'rel_tol': 1e-6, 'latent_dim': 2,
    },
}

MOVIELENS_URLS = {
    'ml-100k': 'https://files.grouplens.org/datasets/movielens/ml-100k.zip',
    'ml-1m': 'https://files.grouplens.org/datasets/movielens/ml-1m.zip',
}
MOVIELENS_FILES = {
    'ml-100k': ('ml-100k/u.data', 'tab'),
    'ml-1m': ('ml-1m/ratings.dat', 'double-colon'),
}

REPORT_COLUMNS = ('R@5', 'R@10', 'P@5', 'P@10', 'F-score@5', 'F-score@10',
                  'F-score@15', 'NDCG@5', 'NDCG@10', 'NDCG@15')

# Published means (R@5, R@10, P@5, P@10, F@5, F@10, F@15, NDCG@5, NDCG@10, NDCG@15)
REFERENCE_RESULTS = {
    'ml-100k': {
        'poprank': (0.0634, 0.1192, 0.1661, 0.1569, 0.0918, 0.1355, 0.1524, 0.3935, 0.4387, 0.4507),
        'bprmf': (0.1466, 0.2325, 0.3597, 0.2965, 0.2083, 0.2606, 0.2793, 0.6297, 0.6463, 0.6463),
        'wrmf': (0.1546, 0.2411, 0.3640, 0.3008, 0.2170, 0.2677, 0.2776, 0.6525, 0.6607, 0.6598),
        'mc-shift': (0.1301, 0.2111, 0.4522, 0.3866, 0.2021, 0.2731, 0.3035, 0.7097, 0.7146, 0.7133),
        'csrr-e': (0.1311, 0.2026, 0.4487, 0.3700, 0.2030, 0.2618, 0.2908, 0.7093, 0.7061, 0.7317),
        'csrr-ii': (0.1401, 0.2171, 0.4716, 0.3927, 0.2160, 0.2796, 0.3100, 0.7372, 0.7380, 0.7308),
        'csrr-i': (0.1409, 0.2173, 0.4736, 0.3943, 0.2172, 0.2802, 0.3114, 0.7382, 0.7390, 0.7323),
    },
    'ml-1m': {
        'poprank': (0.0421, 0.0713, 0.1879, 0.1647, 0.0688, 0.0995, 0.1189, 0.3763, 0.4084, 0.4241),
        'bprmf': (0.0949, 0.1575, 0.3590, 0.3106, 0.1501, 0.2090, 0.2364, 0.6044, 0.6221, 0.6247),
        'wrmf': (0.1083, 0.1759, 0.3770, 0.3236, 0.1683, 0.2279, 0.2535, 0.6370, 0.6532, 0.6523),
        'mc-shift': (0.1119, 0.1774, 0.3941, 0.3341, 0.1743, 0.2317, 0.2564, 0.6525, 0.6650, 0.6641),
        'csrr-e': (0.1139, 0.1808, 0.3978, 0.3381, 0.1771, 0.2356, 0.2661, 0.6579, 0.6697, 0.6680),
        'csrr-ii': (0.1161, 0.1861, 0.3954, 0.3378, 0.1795, 0.2400, 0.2663, 0.6553, 0.6683, 0.6681),
        'csrr-i': (0.1165, 0.1850, 0.4007, 0.3400, 0.1805, 0.2400, 0.2700, 0.6591, 0.6711, 0.6716),
    },
}

# Outlier-ablation reference (F@5, F@15, NDCG@5, NDCG@15)
ABLATION_RESULTS = {
    'ml-100k': {'csrr-i-v0': (0.2131, 0.3010, 0.7304, 0.7193), 'csrr-i': (0.2172, 0.3114, 0.7382, 0.7323)},
    'ml-1m': {'csrr-i-v0': (0.1726, 0.2607, 0.6363, 0.6524), 'csrr-i': (0.1805, 0.2700, 0.6591, 0.6716)},
}
