"""Motivational node: combining internal and external signals.

Each drive ``i`` owns one congruence rule. Its activity is

    A_i = O_i^E * (alpha + sum_j Fa_ij * O_j^S) + O_i^D

where ``O^E`` is the proprioceptive need, ``O^S`` the perceived stimuli
coupled to that need, ``Fa`` the coupling strengths and ``O^D`` the drive
feedback from the previous cycle. ``alpha`` weights the need on its own: at
0 a need only acts when a matching stimulus is present (purely reactive), as
it approaches 1 a strong need can win without any stimulus (motivated).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .errors import ConfigError

log = logging.getLogger(__name__)

DEFAULT_CONSUMMATORY = {"hunger": "eat", "thirst": "drink", "fatigue": "rest"}
CONSUMMATORY_ACTIONS = ("eat", "drink", "rest")


def clamp01(x: float) -> float:
    return 0.0 if x < 0.0 else 1.0 if x > 1.0 else float(x)


@dataclass(frozen=True)
class CongruenceBehaviour:
    """Coupling table of one drive.

    ``alpha`` of None means "use the network-wide value"; the network
    resolves it before any evaluation.
    """

    drive_id: str
    couplings: Mapping[str, float]
    alpha: float | None = None
    consummatory: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "couplings", dict(self.couplings))
        if not self.couplings:
            raise ConfigError(f"drive {self.drive_id!r} needs at least one coupled stimulus")
        for kind, fa in self.couplings.items():
            if not fa >= 0.0:
                raise ConfigError(f"coupling {self.drive_id}->{kind} must be >= 0, got {fa!r}")
        if self.alpha is not None and not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha of {self.drive_id!r} must lie in [0, 1], got {self.alpha!r}")
        action = self.consummatory or DEFAULT_CONSUMMATORY.get(self.drive_id)
        if action not in CONSUMMATORY_ACTIONS:
            raise ConfigError(
                f"drive {self.drive_id!r} needs a consummatory action in {CONSUMMATORY_ACTIONS}"
            )
        object.__setattr__(self, "consummatory", action)

    @property
    def associated_stimuli(self) -> tuple[str, ...]:
        return tuple(sorted(self.couplings))

    def with_alpha(self, alpha: float) -> "CongruenceBehaviour":
        return replace(self, alpha=alpha)


def _alpha(beh: CongruenceBehaviour) -> float:
    if beh.alpha is None:
        raise ConfigError(f"alpha of drive {beh.drive_id!r} is unresolved")
    return beh.alpha


def evaluate_congruence(
    beh: CongruenceBehaviour,
    o_e: float,
    o_s: Mapping[str, float],
    o_d: float,
) -> float:
    """Raw (unclamped) activity of the congruence rule.

    Stimuli absent from the coupling table are skipped with a warning.
    """
    alpha = _alpha(beh)
    external = 0.0
    for kind in sorted(o_s):
        fa = beh.couplings.get(kind)
        if fa is None:
            log.warning("stimulus %r is not coupled to drive %r; ignored", kind, beh.drive_id)
            continue
        external += fa * o_s[kind]
    return o_e * (alpha + external) + o_d


def congruence_condition(
    beh: CongruenceBehaviour, o_e: float, o_s: Mapping[str, float]
) -> bool:
    """Whether the congruence rule may fire.

    With alpha == 0 both the need and some coupled stimulus must be non-zero.
    With alpha != 0 the need alone suffices.
    """
    alpha = _alpha(beh)
    if o_e == 0.0:
        return False
    if alpha != 0.0:
        return True
    return any(o_s.get(kind, 0.0) != 0.0 for kind in beh.couplings)


@dataclass(frozen=True)
class DriveState:
    drive_id: str
    value: float = 0.0
    lam: float = 0.3

    def __post_init__(self) -> None:
        if not 0.0 <= self.lam < 1.0:
            raise ConfigError(f"drive feedback factor must lie in [0, 1), got {self.lam!r}")


def update_drive(d: DriveState, prev_congruent: float, o_e_now: float) -> DriveState:
    """Feedback for the next cycle: a fraction of the last activity, cut to
    zero as soon as the need itself is gone."""
    value = d.lam * prev_congruent if o_e_now > 0.0 else 0.0
    return replace(d, value=value)


@dataclass(frozen=True)
class CongruentElement:
    drive_id: str
    certainty: float
    tick: int = 0
    raw: float = field(default=0.0, compare=False)


def select_consummatory_preference(
    congruents: Iterable[CongruentElement], threshold: float = 0.0
) -> str | None:
    """Drive with the strongest congruent above ``threshold``; ties to the smallest id."""
    live = [c for c in congruents if c.certainty > threshold]
    if not live:
        return None
    return min(live, key=lambda c: (-c.certainty, c.drive_id)).drive_id
