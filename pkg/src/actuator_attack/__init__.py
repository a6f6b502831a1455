"""Covert actuator attacks on normal supervisors.

The package synthesizes the largest successful enabling attacker and checks
it against a brute-force enumeration oracle."""
from .attacked_loop import (
    DAMAGE,
    DETECTED_NO_DAMAGE,
    AttackedLoop,
    Outcome,
    TabularAttacker,
    build_attacked_loop,
    check_success,
    no_attack,
    replay,
)
from .automata import EpsilonNfa, Fsa, determinize, enumerate_language, sync_product
from .errors import *  # noqa: F401,F403
from .instance_format import (
    Options,
    ProblemInstance,
    attacker_from_json,
    attacker_to_json,
    load_bundled,
    load_instance,
    parse_instance,
    serialize_instance,
)
from .oracle import BoundedOracle, oracle_attack_pairs, oracle_En, oracle_I, verify_attack_pair
from .supervisory import (
    EventUniverse,
    ObsLabel,
    SupervisorRealization,
    attacker_observation,
    closed_loop,
    validate_supervisor,
)
from .synthesis import (
    BOTTOM,
    TOP,
    AttackPair,
    MooreAttacker,
    annotate_supervisor,
    complete_damage_automaton,
    extract_attack_pair,
    generalized_product,
    is_attackable,
    subset_with_labels,
    supremal_attack_decision,
    synthesize,
)

__version__ = "0.1.0"
