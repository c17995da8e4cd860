"""Cycle-graph quantum walk simulator with recurrence-based direct
communication and its security analysis."""

from .walk import (
    DEFAULT_COIN_ANGLE,
    SUPPORTED_CYCLES,
    OamLabelMap,
    WalkConfig,
    coin_operator,
    evolve,
    find_recurrence,
    initial_state,
    known_cycle_config,
    known_cycle_params,
    position_distribution,
    return_probability,
    shift_operator,
    step_operator,
)
from .noise import (
    NoiseSpec,
    amplitude_damping_step,
    apply_unitary,
    depolarizing_step,
    noisy_evolve,
    return_probability_noisy,
    to_density,
)
from .information import (
    JointDistribution,
    eve_mutual_information,
    joint_distribution,
    marginal_oam,
    mutual_information_quantum,
    negativity,
    reduced_coin,
    reduced_position,
    von_neumann_entropy,
)
from .optics import (
    OpticalLayout,
    canonical_step_layout,
    compose_cycle_step,
    five_cycle_sorter_trace,
    hwp_operator,
    parse_layout,
    verify_step_layout,
)
from .protocol import (
    PhotonRecord,
    ProtocolParams,
    Transcript,
    decode_message_text,
    encode_message_text,
    majority_vote,
    measure_oam,
    message_operator,
    run_protocol,
    run_with_repetitions,
)
from .attacks import (
    AttackReport,
    EveStrategy,
    analytic_detection_probability,
    decrypt_log10_probability,
    decrypt_probability,
    dummy_hit_distribution,
    intercept_resend_eve,
    optimal_attack_simulation,
)

__version__ = "0.1.0"
