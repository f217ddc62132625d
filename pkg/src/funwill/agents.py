"""Canonical agent archetypes and choice sampling.

An agent bundles a choice space with its (nature, understanding, will)
triple.  The four canonical archetypes pin down the informal limits
"near-maximal will", "near-zero will" and "near-deterministic nature" to
concrete numbers so tests stay deterministic:

    saint                  P = (0.5, 0.5),     U = (1, 0), sigma = 0.99
    conscientious_criminal P = (0.001, 0.999), U = (1, 0), sigma = 0.5
    hardcore_criminal      P = (0.001, 0.999), U = (1, 0), sigma = 0.01
    particle               P caller-supplied,  U = P,      sigma = 0

The moral archetypes live on the two-outcome space {good, evil}.  The
particle sets U = P so the will strength is irrelevant by construction:
nothing distorts the baseline, and sampling follows plain squared-amplitude
statistics.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .distributions import (
    ChoiceSpace,
    ProbabilityVector,
    WillStrength,
    exercise_will,
    unpredictability,
)
from .errors import DimensionMismatch

ARCHETYPE_KINDS = ("saint", "conscientious_criminal", "hardcore_criminal", "particle")

_MORAL_SPACE = ChoiceSpace(("good", "evil"))
_ETHICAL_GUIDANCE = ProbabilityVector((1.0, 0.0))


@dataclass(frozen=True)
class AgentProfile:
    """One choosing agent: labels plus the (P, U, sigma) triple."""

    space: ChoiceSpace
    nature: ProbabilityVector
    understanding: ProbabilityVector
    will: WillStrength
    name: str = "agent"

    def __post_init__(self):
        if not (self.space.dimension == self.nature.dimension == self.understanding.dimension):
            raise DimensionMismatch(
                f"space/nature/understanding dimensions differ: "
                f"{self.space.dimension}/{self.nature.dimension}/{self.understanding.dimension}"
            )

    @cached_property
    def effective(self) -> ProbabilityVector:
        """The blended distribution the agent actually samples from."""
        return exercise_will(self.nature, self.understanding, self.will)


def archetype(
    kind: str,
    nature: ProbabilityVector | None = None,
    labels: tuple[str, ...] | None = None,
) -> AgentProfile:
    """Build one of the canonical profiles.

    ``nature`` and ``labels`` apply only to the particle archetype (which
    has no canonical baseline of its own); supplying them for a moral
    archetype is an error.
    """
    if kind not in ARCHETYPE_KINDS:
        raise ValueError(f"unknown archetype {kind!r}; expected one of {ARCHETYPE_KINDS}")
    if kind == "particle":
        if nature is None:
            raise ValueError("the particle archetype needs a caller-supplied nature vector")
        space = ChoiceSpace(labels if labels is not None else tuple(str(j) for j in range(nature.dimension)))
        return AgentProfile(
            space=space,
            nature=nature,
            understanding=nature,
            will=WillStrength(0.0),
            name="particle",
        )
    if nature is not None or labels is not None:
        raise ValueError(f"archetype {kind!r} is canonical; nature/labels are fixed")
    if kind == "saint":
        base, sigma = ProbabilityVector((0.5, 0.5)), 0.99
    elif kind == "conscientious_criminal":
        base, sigma = ProbabilityVector((0.001, 0.999)), 0.5
    else:  # hardcore_criminal
        base, sigma = ProbabilityVector((0.001, 0.999)), 0.01
    return AgentProfile(
        space=_MORAL_SPACE,
        nature=base,
        understanding=_ETHICAL_GUIDANCE,
        will=WillStrength(sigma),
        name=kind,
    )


def choose(agent: AgentProfile, rng: np.random.Generator) -> str:
    """Sample one outcome label from the agent's effective distribution."""
    u = rng.random()
    acc = 0.0
    index = agent.space.dimension - 1
    for j, w in enumerate(agent.effective.weights):
        acc += w
        if u < acc:
            index = j
            break
    return agent.space.labels[index]


def agent_unpredictability(agent: AgentProfile) -> float:
    """Shannon entropy (bits) of the agent's effective distribution."""
    return unpredictability(agent.effective)
