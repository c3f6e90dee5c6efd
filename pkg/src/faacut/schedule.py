"""Run parameters and the per-step angle schedule of the Trotterized sweep."""

from __future__ import annotations

from dataclasses import dataclass, replace

INTEGRALITY_TOL = 1e-9


def n_steps_of(n: float, t: float) -> int:
    """Number of Trotter steps for rate n and total time t.

    n*t must sit within INTEGRALITY_TOL of a positive integer; each step
    then advances the interpolation by exactly 1/n_steps.
    """
    if not n > 0:
        raise ValueError(f"n must be positive, got {n}")
    if not t > 0:
        raise ValueError(f"T must be positive, got {t}")
    prod = n * t
    m = round(prod)
    if abs(prod - m) > INTEGRALITY_TOL or m < 1:
        raise ValueError(f"n*T = {prod!r} is not a positive integer (n={n}, T={t})")
    return int(m)


@dataclass(frozen=True)
class FaaParams:
    """Configuration of one annealing run.

    n is the number of Trotter steps per unit of annealing time, so the
    nominal step is dt = 1/n. T is the total annealing time; n*T must be a
    positive integer. bond_dim is required iff backend is "mps".
    """

    n: float
    T: float
    shots: int = 1000
    seed: int = 0
    backend: str = "statevector"
    bond_dim: int | None = None

    def __post_init__(self):
        n_steps_of(self.n, self.T)
        if self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")
        if self.backend not in ("statevector", "mps"):
            raise ValueError(f"backend must be 'statevector' or 'mps', got {self.backend!r}")
        if self.backend == "mps":
            if self.bond_dim is None or self.bond_dim < 1:
                raise ValueError(f"mps backend needs bond_dim >= 1, got {self.bond_dim}")
        elif self.bond_dim is not None:
            raise ValueError("bond_dim only applies to the mps backend")

    @property
    def dt(self) -> float:
        return 1.0 / self.n

    @property
    def n_steps(self) -> int:
        return n_steps_of(self.n, self.T)

    @property
    def dt_eff(self) -> float:
        return self.T / self.n_steps

    def with_t(self, t: float) -> "FaaParams":
        return replace(self, T=t)


@dataclass(frozen=True)
class LayerStep:
    """Angles of one step: X rotations by x_angle, then ZZ phases by zz_angle."""

    step: int  # 1-based
    s: float  # interpolation parameter step/n_steps
    x_angle: float  # (1 - s) * dt_eff
    zz_angle: float  # s * dt_eff


@dataclass(frozen=True)
class LayerPlan:
    n: float
    T: float
    n_steps: int
    dt_eff: float
    steps: tuple[LayerStep, ...]

    def to_dicts(self) -> list[dict]:
        return [
            {"step": st.step, "s": st.s, "x_angle": st.x_angle, "zz_angle": st.zz_angle}
            for st in self.steps
        ]


def build_layer_plan(n: float, t: float) -> LayerPlan:
    """Angle schedule for the full sweep.

    Step k of m uses s = k/m, rotating around X by (1-s)*dt_eff and applying
    ZZ phases s*dt_eff, with dt_eff = T/m. s runs up to exactly 1, so the
    final step has no X component.
    """
    m = n_steps_of(n, t)
    dt_eff = t / m
    steps = []
    for k in range(1, m + 1):
        s = k / m
        steps.append(LayerStep(k, s, (1.0 - s) * dt_eff, s * dt_eff))
    return LayerPlan(n, t, m, dt_eff, tuple(steps))


def plan_for(params: FaaParams) -> LayerPlan:
    return build_layer_plan(params.n, params.T)
