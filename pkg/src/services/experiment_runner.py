"""
Experiment Runner Service - Seeded shuffles of online training and evaluation
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional

import numpy as np
import psutil
from tqdm import tqdm

from src.models.report import Dataset, ExperimentConfig, ExperimentReport, ShuffleResult, ShuffleStatus
from src.services.classifier import BayesClassifier
from src.services.dataset_loader import DatasetLoader, shuffle_split
from src.utils.constants import ERROR_MESSAGES

logger = logging.getLogger(__name__)


def run_shuffle(dataset: Dataset, experiment: ExperimentConfig, index: int,
                seed: np.random.SeedSequence) -> ShuffleResult:
    """Train on one seeded split and evaluate on its held-out part

    Any failure is returned as a failed row rather than raised.
    """
    try:
        train, test = shuffle_split(dataset, seed, experiment.train_fraction)

        missing = sorted(set(map(str, dataset.classes)) - set(map(str, train.classes)))
        if missing:
            raise ValueError(ERROR_MESSAGES['MISSING_CLASSES'].format(labels=", ".join(missing)))

        classifier = BayesClassifier(experiment.engine_config())

        start = time.perf_counter()
        classifier.observe_many(train.samples, train.labels)
        if experiment.final_compress:
            classifier.compress_models()
        train_seconds = time.perf_counter() - start

        start = time.perf_counter()
        predictions = classifier.predict_many(test.samples)
        nll = classifier.evaluate_nll(test.samples, test.labels)
        test_seconds = time.perf_counter() - start

        correct = sum(1 for p, t in zip(predictions, test.labels) if p == t)
        accuracy = 100.0 * correct / test.n_samples if test.n_samples else None

        rss_mb = None
        if experiment.record_memory:
            rss_mb = psutil.Process().memory_info().rss / (1024.0 * 1024.0)

        return ShuffleResult(
            index=index,
            status=ShuffleStatus.COMPLETED,
            n_train=train.n_samples,
            n_test=test.n_samples,
            accuracy=accuracy,
            avg_nll=nll.mean,
            mean_components=classifier.mean_components(),
            train_seconds=train_seconds,
            test_seconds=test_seconds,
            footprint_bytes=classifier.footprint_bytes(),
            rss_mb=rss_mb,
            excluded_labels=nll.excluded_labels
        )

    except Exception as e:
        logger.error(f"Error in shuffle {index}: {str(e)}")
        return ShuffleResult(index=index, status=ShuffleStatus.FAILED, error=str(e))


class ExperimentRunner:
    """Service class for running benchmark experiments"""

    def __init__(self, show_progress: bool = True):
        self.logger = logging.getLogger(__name__)
        self.loader = DatasetLoader()
        self.show_progress = show_progress

    def load_dataset(self, experiment: ExperimentConfig) -> Dataset:
        return self.loader.load_csv(
            experiment.dataset_path,
            label_column=experiment.label_column,
            skip_header=experiment.skip_header,
            delimiter=experiment.delimiter
        )

    def run_experiment(self, experiment: ExperimentConfig, dataset: Optional[Dataset] = None) -> ExperimentReport:
        """Run every shuffle of the protocol and collect the per-shuffle rows"""
        if dataset is None:
            dataset = self.load_dataset(experiment)

        seeds = np.random.SeedSequence(experiment.seed).spawn(experiment.shuffles)
        self.logger.info(f"Running {experiment.shuffles} shuffles on {dataset.name} "
                         f"({experiment.covariance.value} covariance, {experiment.jobs} jobs)")

        progress = tqdm(total=experiment.shuffles, desc=dataset.name, unit="shuffle",
                        disable=not self.show_progress)
        results: List[ShuffleResult] = []

        try:
            if experiment.jobs > 1:
                with ProcessPoolExecutor(max_workers=experiment.jobs) as pool:
                    futures = [pool.submit(run_shuffle, dataset, experiment, i, seed) for i, seed in enumerate(seeds)]
                    for future in futures:
                        results.append(future.result())
                        progress.update(1)
            else:
                for i, seed in enumerate(seeds):
                    results.append(run_shuffle(dataset, experiment, i, seed))
                    progress.update(1)
        finally:
            progress.close()

        report = ExperimentReport(
            dataset=dataset.name,
            n_samples=dataset.n_samples,
            dim=dataset.dim,
            n_classes=dataset.n_classes,
            config=experiment,
            shuffles=results
        )

        if report.failed:
            self.logger.warning(f"{len(report.failed)} of {len(results)} shuffles failed")
        self.logger.info(f"Finished {dataset.name}: {len(report.completed)} shuffles completed")
        return report
