"""Directed wavefunction collapse realizing the willed-choice blend.

The pipeline has three steps:

1. ``prepare_state``  — encode the baseline vector P as a real amplitude
   state |psi> with amplitudes sqrt(p_j) over the outcome basis.
2. ``build_povm``     — construct diagonal measurement operators
   M_j = c_j |j><j| with c_j = sqrt((sigma*u_j + (1-sigma)*p_j) / p_j).
   The set is *state-dependent*: it satisfies the completeness condition
   sum_j (c_j a_j)^2 = 1 only against the state it was built for, which is
   what makes the measurement nonlinear.  At sigma = 0 every c_j is 1 and
   the measurement is an ordinary projective one.
3. ``collapse``       — sample outcome j with probability (c_j a_j)^2 and
   project onto the basis vector |j>.

Sampling outcome probabilities from a state prepared from P reproduces the
classical blend exactly: (c_j a_j)^2 = sigma*u_j + (1-sigma)*p_j.  With
sigma > 0 those probabilities deviate from the squared-amplitude (Born)
statistics of the prepared state, which is what the detection suite in
``detect`` looks for.

Amplitudes are kept real and nonnegative: the preparation uses sqrt(p_j)
with no phases, and all operators are diagonal, so phases would be
unobservable here anyway.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import ProbabilityVector, WillStrength, _as_sigma, _check_dims
from .errors import DimensionMismatch, IncompletePovm, NotNormalized, UnreachableGuidance

# Completeness residual above this rejects the povm/state pairing.
COMPLETENESS_TOL = 1e-9


@dataclass(frozen=True)
class AmplitudeState:
    """Real nonnegative amplitude vector with unit 2-norm."""

    amplitudes: tuple[float, ...]

    def __post_init__(self):
        amps = tuple(float(a) for a in self.amplitudes)
        if len(amps) == 0:
            raise ValueError("a state needs at least one basis vector")
        for a in amps:
            if not math.isfinite(a) or a < 0.0:
                raise ValueError(f"amplitude {a!r} is not a finite nonnegative number")
        norm_sq = math.fsum(a * a for a in amps)
        if abs(norm_sq - 1.0) > 1e-12:
            raise NotNormalized(f"squared amplitudes sum to {norm_sq!r}, not 1")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dimension(self) -> int:
        return len(self.amplitudes)

    @classmethod
    def basis(cls, index: int, dimension: int) -> "AmplitudeState":
        """The basis vector |index> in the given dimension."""
        if not 0 <= index < dimension:
            raise ValueError(f"basis index {index} out of range for dimension {dimension}")
        return cls(tuple(1.0 if j == index else 0.0 for j in range(dimension)))

    def is_basis_vector(self) -> bool:
        return sum(1 for a in self.amplitudes if a == 1.0) == 1 and all(
            a in (0.0, 1.0) for a in self.amplitudes
        )


@dataclass(frozen=True)
class PovmSet:
    """Diagonal measurement operators M_j = c_j |j><j|.

    ``nature``/``understanding``/``will`` record the triple the set was
    built for (None on hand-assembled sets), so misuse against a different
    state stays detectable via ``check_completeness``.
    """

    coefficients: tuple[float, ...]
    nature: ProbabilityVector | None = None
    understanding: ProbabilityVector | None = None
    will: WillStrength | None = None

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if len(coeffs) == 0:
            raise ValueError("a measurement set needs at least one operator")
        for c in coeffs:
            if not math.isfinite(c) or c < 0.0:
                raise ValueError(f"coefficient {c!r} is not a finite nonnegative number")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def dimension(self) -> int:
        return len(self.coefficients)


@dataclass(frozen=True)
class CollapseOutcome:
    """One sampled collapse: the chosen index and the post-measurement state."""

    index: int
    post_state: AmplitudeState

    def __post_init__(self):
        if not self.post_state.is_basis_vector():
            raise ValueError("post-collapse state must be a basis vector")
        if self.post_state.amplitudes[self.index] != 1.0:
            raise ValueError("post-collapse state does not match the outcome index")


def prepare_state(nature: ProbabilityVector) -> AmplitudeState:
    """Encode a baseline distribution as amplitudes sqrt(p_j)."""
    return AmplitudeState(tuple(math.sqrt(p) for p in nature.weights))


def build_povm(
    nature: ProbabilityVector,
    understanding: ProbabilityVector,
    will: WillStrength | float,
) -> PovmSet:
    """Construct the state-dependent measurement for a (P, U, sigma) triple.

    c_j = sqrt((sigma*u_j + (1-sigma)*p_j) / p_j) on the support of P, and
    0 where p_j = 0.  Raises UnreachableGuidance when sigma > 0 and the
    guidance puts weight on an outcome with p_j = 0: the formula divides by
    p_j there, and no diagonal operator acting on a zero amplitude can make
    the completeness sum reach 1.
    """
    _check_dims(nature, understanding, "nature and understanding")
    sigma = _as_sigma(will)
    coeffs = []
    for j, (p, u) in enumerate(zip(nature.weights, understanding.weights)):
        if p == 0.0:
            if sigma > 0.0 and u > 0.0:
                raise UnreachableGuidance(
                    f"guidance weight {u} on outcome {j} is unreachable: "
                    "the baseline assigns it zero probability"
                )
            coeffs.append(0.0)
        else:
            coeffs.append(math.sqrt((sigma * u + (1.0 - sigma) * p) / p))
    return PovmSet(
        tuple(coeffs),
        nature=nature,
        understanding=understanding,
        will=WillStrength(sigma),
    )


def check_completeness(povm: PovmSet, state: AmplitudeState) -> float:
    """Residual |sum_j (c_j a_j)^2 - 1| of the completeness condition.

    Zero (within COMPLETENESS_TOL) against the state the set was built
    for; generically nonzero against any other state.
    """
    if povm.dimension != state.dimension:
        raise DimensionMismatch(
            f"povm has dimension {povm.dimension}, state {state.dimension}"
        )
    total = math.fsum((c * a) ** 2 for c, a in zip(povm.coefficients, state.amplitudes))
    return abs(total - 1.0)


def outcome_distribution(povm: PovmSet, state: AmplitudeState) -> ProbabilityVector:
    """Outcome probabilities q_j = (c_j a_j)^2 of measuring ``state``.

    Requires the completeness residual to be within COMPLETENESS_TOL
    (raises IncompletePovm otherwise).  For a set built from (P, U, sigma)
    applied to prepare_state(P), q equals the classical blend
    sigma*U + (1-sigma)*P to within float rounding.
    """
    residual = check_completeness(povm, state)
    if residual > COMPLETENESS_TOL:
        raise IncompletePovm(
            f"completeness residual {residual:.3e} exceeds {COMPLETENESS_TOL:.0e}; "
            "this measurement set was not built for this state",
            residual=residual,
        )
    raw = [(c * a) ** 2 for c, a in zip(povm.coefficients, state.amplitudes)]
    total = math.fsum(raw)
    return ProbabilityVector(tuple(q / total for q in raw))


def collapse(
    povm: PovmSet, state: AmplitudeState, rng: np.random.Generator
) -> CollapseOutcome:
    """Sample one directed collapse.

    Outcome j is drawn by inverse-CDF over ``outcome_distribution`` using a
    single uniform from the caller's stream; the post-state is the basis
    vector |j> (each operator is rank-one diagonal).  No global randomness:
    reproducibility is entirely the caller's seed discipline.
    """
    dist = outcome_distribution(povm, state)
    u = rng.random()
    acc = 0.0
    index = dist.dimension - 1
    for j, q in enumerate(dist.weights):
        acc += q
        if u < acc:
            index = j
            break
    return CollapseOutcome(index=index, post_state=AmplitudeState.basis(index, dist.dimension))
