"""State-vector layout: ordered component blocks with a name -> index map."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

WIND_COLUMNS = ("wind_eff", "wind_rotor_x", "wind_rotor_y", "wind_rotor_z", "rotor_azimuth", "tsr", "cp", "m_aero")
DRIVETRAIN_COLUMNS = ("omega_rotor", "delta_rotor")
GEARBOX_COLUMNS = ("omega_gen", "delta_gen", "torsion", "m_shaft")
MACHINE_COLUMNS = ("m_em", "slip", "is_mag", "p_stator", "q_stator")
GRID_COLUMNS = ("u_a", "u_b", "u_c", "i_a", "i_b", "i_c", "u_mag")

AUDIT_TRANSIENT = (
    "e_aero",
    "e_applied",
    "e_friction",
    "e_damping",
    "e_em_mech",
    "e_machine_loss",
    "e_stator_in",
    "e_grid_loss",
    "e_source_out",
)
AUDIT_RMS = AUDIT_TRANSIENT + ("e_machine_storage",)

# blocks holding audit quadratures rather than physical states
AUDIT_BLOCK = "audit"


def known_columns() -> Tuple[str, ...]:
    return WIND_COLUMNS + DRIVETRAIN_COLUMNS + GEARBOX_COLUMNS + MACHINE_COLUMNS + GRID_COLUMNS


@dataclass(frozen=True)
class Block:
    name: str
    names: Tuple[str, ...]
    start: int

    @property
    def stop(self) -> int:
        return self.start + len(self.names)

    @property
    def slice(self) -> slice:
        return slice(self.start, self.stop)


@dataclass(frozen=True)
class StateLayout:
    """Fixed at scenario load; the total dimension is the sum of the block sizes."""

    blocks: Tuple[Block, ...]
    index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        index: Dict[str, int] = {}
        for block in self.blocks:
            for offset, name in enumerate(block.names):
                if name in index:
                    raise ValueError(f"Duplicate state name '{name}'")
                index[name] = block.start + offset
        object.__setattr__(self, "index", index)

    @classmethod
    def build(cls, spec: Iterable[Tuple[str, Sequence[str]]]) -> "StateLayout":
        blocks: List[Block] = []
        start = 0
        for name, names in spec:
            if not names:
                continue
            blocks.append(Block(name, tuple(names), start))
            start += len(names)
        return cls(tuple(blocks))

    @property
    def size(self) -> int:
        return self.blocks[-1].stop if self.blocks else 0

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(name for block in self.blocks for name in block.names)

    def has(self, block_name: str) -> bool:
        return any(block.name == block_name for block in self.blocks)

    def block(self, block_name: str) -> Block:
        for block in self.blocks:
            if block.name == block_name:
                return block
        raise KeyError(f"No state block '{block_name}'")

    def physical_indices(self) -> np.ndarray:
        """Indices of every state outside the audit block."""
        return np.array(
            [i for block in self.blocks if block.name != AUDIT_BLOCK for i in range(block.start, block.stop)],
            dtype=int,
        )

    def first_non_finite(self, x: np.ndarray) -> str:
        """Name of the first block holding a non-finite value, or ''."""
        for block in self.blocks:
            if not np.all(np.isfinite(x[block.slice])):
                return block.name
        return ""

    def zeros(self) -> np.ndarray:
        return np.zeros(self.size)


@dataclass(frozen=True)
class SimState:
    layout: StateLayout
    values: np.ndarray

    def __getitem__(self, name: str) -> float:
        return float(self.values[self.layout.index[name]])

    def block(self, block_name: str) -> np.ndarray:
        return self.values[self.layout.block(block_name).slice]


__all__ = [
    "AUDIT_BLOCK",
    "AUDIT_TRANSIENT",
    "AUDIT_RMS",
    "Block",
    "StateLayout",
    "SimState",
    "known_columns",
]
