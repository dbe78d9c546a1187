"""
Application Constants - Centralized constants for xokde and the benchmark harness
"""

# Known benchmark datasets: (samples, dimensions, classes)
KNOWN_DATASETS = {
    'iris': (150, 4, 3),
    'yeast': (1484, 8, 10),
    'pima': (768, 8, 2),
    'winequality-red': (1599, 11, 6),
    'winequality-white': (4898, 11, 7),
    'wine': (178, 13, 3),
    'letter': (20000, 16, 26),
    'segmentation': (2310, 19, 7),
    'steel': (1941, 27, 7),
    'breast-cancer': (569, 30, 2),
    'skin': (245057, 3, 2),
    'covtype': (581012, 10, 7)
}

# Label column selectors accepted by the loader
LABEL_COLUMN_ALIASES = ['first', 'last']

# Per-shuffle metrics that are aggregated into mean/std rows
METRIC_FIELDS = [
    'accuracy',
    'avg_nll',
    'mean_components',
    'train_seconds',
    'test_seconds',
    'footprint_bytes',
    'rss_mb'
]

# Fields that depend on the machine rather than the seed
TIMING_FIELDS = ['train_seconds', 'test_seconds', 'rss_mb']

# CSV report layout
CSV_COLUMNS = [
    'row_type',
    'shuffle',
    'status',
    'accuracy',
    'avg_nll',
    'mean_components',
    'train_seconds',
    'test_seconds',
    'footprint_bytes',
    'rss_mb',
    'n_train',
    'n_test',
    'excluded_labels',
    'error'
]

ROW_TYPES = {
    'SHUFFLE': 'shuffle',
    'MEAN': 'mean',
    'STD': 'std'
}

# Process exit codes for the CLI
EXIT_CODES = {
    'SUCCESS': 0,
    'IO_ERROR': 1,
    'CONFIG_ERROR': 2
}

ERROR_MESSAGES = {
    'FILE_NOT_FOUND': "Dataset file not found: {path}",
    'EMPTY_FILE': "Dataset file is empty",
    'NO_FEATURES': "Dataset needs at least one feature column besides the label",
    'RAGGED_ROW': "Row has {got} fields, expected {expected}",
    'NOT_NUMERIC': "Value {value!r} is not a finite number",
    'MISSING_CLASSES': "Classes absent from the training split: {labels}"
}
