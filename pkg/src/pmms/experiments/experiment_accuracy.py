from typing import Dict, List, Optional

import numpy as np
from loguru import logger
from tqdm import tqdm

from ..core.config import SimConfig
from ..models.domain import ApId, PathHistory, RankedPrediction
from ..prediction.predictor_ignorant import ip_expected_accuracy
from ..prediction.predictor_registry import predictor_registry
from ..prediction.sampling import transition_context
from ..prediction.scoring import frequency_rank, is_correct, path_accuracy, rank_histogram
from .base_experiment import BaseExperiment
from .experiment_registry import experiment_registry
from .reports import AccuracyReport, PathAccuracy

ACCURACY_PREDICTORS = ["ltdmps_partial", "ltdmps_full", "lt", "dm", "tm", "ip"]


@experiment_registry.register_experiment("accuracy")
class AccuracyExperiment(BaseExperiment):
    """
    Scores every predictor on the same test transitions.

    All predictors of one transition share its context, so the combined schemes see exactly the
    location-tracking answer (injected errors included) and rule lookup that the single schemes see.
    """

    predictors: List[str] = ACCURACY_PREDICTORS

    def run(self) -> AccuracyReport:
        radio_cfg = self.cfg.radio_config()
        prediction_cfg = self.cfg.prediction_config()
        resolved = {name: predictor_registry.get_predictor(name) for name in self.predictors}
        rules, tm = self.rules, self.tm

        predictions: Dict[str, List[RankedPrediction]] = {name: [] for name in self.predictors}
        ranks: Dict[str, List[Optional[int]]] = {name: [] for name in self.predictors}
        per_path: List[PathAccuracy] = []
        n_transitions = 0

        for path in tqdm(self.test_paths, desc="Scoring predictors", disable=not self.progress):
            actuals: List[ApId] = list(path.aps[1:])
            path_predictions: Dict[str, List[RankedPrediction]] = {name: [] for name in self.predictors}
            for index in range(path.n_transitions):
                ctx = transition_context(
                    path,
                    index,
                    self.topo,
                    prediction_cfg,
                    radio_cfg,
                    rules,
                    tm,
                    ip_rng=self.streams["ip"],
                    noise_rng=self.streams["noise"],
                    lt_error_rng=self.streams["lt_error"],
                )
                for name, predictor in resolved.items():
                    prediction = predictor(ctx)
                    path_predictions[name].append(prediction)
                    ranks[name].append(frequency_rank(prediction, actuals[index]))

            n_transitions += len(actuals)
            for name in self.predictors:
                predictions[name].extend(path_predictions[name])
                hits = sum(is_correct(pred, actual) for pred, actual in zip(path_predictions[name], actuals))
                per_path.append(
                    PathAccuracy(
                        path_id=path.id,
                        predictor=name,
                        transitions=len(actuals),
                        correct=hits,
                        accuracy=path_accuracy(path_predictions[name], actuals),
                    )
                )

        actual_all = [ap for path in self.test_paths for ap in path.aps[1:]]
        overall: Dict[str, float] = {}
        per_path_mean: Dict[str, float] = {}
        for name in self.predictors:
            accuracy = path_accuracy(predictions[name], actual_all)
            if accuracy is not None:
                overall[name] = accuracy
            path_values = [row.accuracy for row in per_path if row.predictor == name and row.accuracy is not None]
            if path_values:
                per_path_mean[name] = float(np.mean(path_values))

        report = AccuracyReport(
            seed=self.cfg.seed,
            predictors=list(self.predictors),
            per_path=per_path,
            overall=overall,
            per_path_mean=per_path_mean,
            rank_histograms={name: rank_histogram(ranks[name]) for name in self.predictors},
            ip_expected=ip_expected_accuracy(self.test_paths, self.topo) if n_transitions else None,
            n_paths=len(self.test_paths),
            n_transitions=n_transitions,
        )
        logger.info(
            f"Accuracy over {n_transitions} transitions: "
            + ", ".join(f"{name} {value:.2f}%" for name, value in overall.items())
        )
        return report


def run_accuracy_experiment(
    cfg: SimConfig,
    history: Optional[PathHistory] = None,
    progress: bool = False,
) -> AccuracyReport:
    """
    Mine the history, then score LTDMPS (partial and full LT), LT, DM, TM and IP on fresh test paths.

    Args:
        cfg: Simulation configuration
        history: Mining corpus to use instead of generating one
        progress: Show progress bars

    Returns:
        AccuracyReport
    """
    return AccuracyExperiment(cfg, history, progress).run()
