from .witness import WitnessRequest, Witness, NotFound, check_threshold, find_witness, verify_witness
from .construction import build_gr, replay_construction, construction_log_lines, construction_graph
from .ball_ec import check_ball_ec
from .paths import expected_graph_distance, construct_path, certify_path


__all__ = [
    "WitnessRequest",
    "Witness",
    "NotFound",
    "check_threshold",
    "find_witness",
    "verify_witness",
    "build_gr",
    "replay_construction",
    "construction_log_lines",
    "construction_graph",
    "check_ball_ec",
    "expected_graph_distance",
    "construct_path",
    "certify_path",
]
