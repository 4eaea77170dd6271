"""Built-in example varieties used by the CLI and the acceptance suite."""

from __future__ import annotations

from .varfile import VarietyFile

BUILTINS: tuple[VarietyFile, ...] = (
    VarietyFile(
        n=1,
        kind="graph",
        exprs=["u1^2"],
        name="conic",
        description="parabola graph; a conic curve in the projective plane",
    ),
    VarietyFile(
        n=1,
        kind="graph",
        exprs=["u1^2 + u1^3"],
        name="perturbed-conic",
        description="conic with a cubic perturbation; tests the non-quadratic path",
    ),
    VarietyFile(
        n=2,
        kind="graph",
        exprs=["u1^2", "u2^2"],
        name="quadric-pair",
        description="separable pair of quadrics; ramification splits into two scalar quadratics",
    ),
    VarietyFile(
        n=2,
        kind="graph",
        exprs=["u1^2", "u1*u2"],
        name="mixed-surface",
        description="surface with a mixed second-order term",
    ),
    VarietyFile(
        n=2,
        kind="graph",
        exprs=["u1^2", "u1^3"],
        name="cylinder",
        description="cylinder over a curve: tangent planes share a direction, fullness fails",
    ),
    VarietyFile(
        n=1,
        kind="graph",
        exprs=["0"],
        name="linear-graph",
        description="the zero graph (a line); no tangency equation has solutions generically",
    ),
)

# names of the built-ins whose tangent spaces fill the ambient space
FULL_TANGENT = ("conic", "perturbed-conic", "quadric-pair", "mixed-surface")


def names() -> list[str]:
    return [vf.name for vf in BUILTINS]


def get(name: str) -> VarietyFile:
    for vf in BUILTINS:
        if vf.name == name:
            return vf
    raise KeyError(f"no built-in example named {name!r}; known: {', '.join(names())}")
