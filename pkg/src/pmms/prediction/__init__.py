from .predictor_combined import predict_ltdmps
from .predictor_data_mining import RuleSet, load_rules, mine_rules, predict_dm, rules_to_frame, save_rules
from .predictor_ignorant import ip_expected_accuracy, predict_ip
from .predictor_location_tracking import predict_lt
from .predictor_registry import PredictionContext, predictor_registry
from .predictor_transition_matrix import TransitionMatrix, build_tm, predict_tm, save_tm
from .sampling import inject_lt_error, lt_sample_point, transition_context
from .scoring import UNRANKED, frequency_rank, is_correct, path_accuracy, rank_histogram

__all__ = [
    "PredictionContext",
    "RuleSet",
    "TransitionMatrix",
    "UNRANKED",
    "build_tm",
    "frequency_rank",
    "inject_lt_error",
    "ip_expected_accuracy",
    "is_correct",
    "load_rules",
    "lt_sample_point",
    "mine_rules",
    "path_accuracy",
    "predict_dm",
    "predict_ip",
    "predict_lt",
    "predict_ltdmps",
    "predict_tm",
    "predictor_registry",
    "rank_histogram",
    "rules_to_frame",
    "save_rules",
    "save_tm",
    "transition_context",
]
