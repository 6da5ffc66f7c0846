"""Power draw models g(v): consumed power per unit time at flying speed v."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ConstantPower:
    p0: float = 1.0

    def __post_init__(self):
        if not self.p0 > 0:
            raise ValueError(f"constant power must be positive, got {self.p0}")

    def __call__(self, v: float) -> float:
        return self.p0

    evaluate = __call__

    def to_dict(self) -> dict:
        return {"kind": "constant", "p0": self.p0}


@dataclass(frozen=True)
class AffineQuadratic:
    """g(v) = a + b * v**2."""

    a: float
    b: float

    def __post_init__(self):
        if self.a < 0 or self.b < 0 or (self.a == 0 and self.b == 0):
            raise ValueError("affine-quadratic power needs a, b >= 0, not both zero")

    def __call__(self, v: float) -> float:
        return self.a + self.b * v * v

    evaluate = __call__

    def to_dict(self) -> dict:
        return {"kind": "affine_quadratic", "a": self.a, "b": self.b}


PowerModel = ConstantPower | AffineQuadratic


def power_from_dict(d: dict | None) -> PowerModel:
    if d is None:
        return ConstantPower()
    kind = d.get("kind", "constant")
    if kind == "constant":
        return ConstantPower(float(d.get("p0", 1.0)))
    if kind in ("affine_quadratic", "affine"):
        return AffineQuadratic(float(d["a"]), float(d["b"]))
    raise ValueError(f"unknown power model kind {kind!r}")
