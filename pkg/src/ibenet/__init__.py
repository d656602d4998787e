"""Internal behaviour network: action selection from combined internal and
external stimuli, a 2D animat world to run it in, and an experiment harness."""

from .animat import (
    AnimatState,
    Rates,
    WorldEvent,
    WorldObject,
    WorldState,
    apply_action,
    sense,
    update_internal_states,
    world_step,
)
from .cognitive import (
    Percept,
    PersistentPercept,
    PotentialAction,
    attend_to_preferences,
    inhibit_reflexes,
    persist_percepts,
    reflex_actions,
    select_external_behaviour,
)
from .errors import (
    ConfigError,
    IBeNetError,
    InputError,
    QueryError,
    ScenarioError,
    StructuralError,
)
from .harness import (
    ReactionTimeRecord,
    Scenario,
    SweepResult,
    Trace,
    emit,
    load_scenario,
    measure_rtime,
    run_scenario,
    sweep_alpha,
)
from .motivational import (
    CongruenceBehaviour,
    CongruentElement,
    DriveState,
    congruence_condition,
    evaluate_congruence,
    select_consummatory_preference,
    update_drive,
)
from .network import CycleReport, IBeNet, NetworkConfig, SensorFrame, reset, step

__version__ = "0.1.0"
