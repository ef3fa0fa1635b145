"""Model kinds and the structural hyper-parameters of a model."""
import enum
from dataclasses import dataclass

from fdsic import config


class ModelKind(enum.IntEnum):
    """Model families; values are the snapshot codes."""

    GLOBAL_H = 0
    ADAPTIVE_H = 1
    PARALLEL_H = 2
    MEMORY_POLY = 3
    LINEAR_FIR = 4

    @property
    def slug(self):
        """Short name used in file names and CSV columns."""
        return _SLUGS[self]

    @property
    def neural(self):
        """Whether the kind is one of the Hammerstein networks."""
        return self in (ModelKind.GLOBAL_H, ModelKind.ADAPTIVE_H,
                        ModelKind.PARALLEL_H)

    @classmethod
    def parse(cls, text):
        """Parse a slug ('global', 'memory_poly', ...) or a member name."""
        key = str(text).strip().lower().replace("-", "_")
        for member in cls:
            if key in (member.slug, member.name.lower()):
                return member
        raise ValueError(f"unknown model kind {text!r}")


_SLUGS = {
    ModelKind.GLOBAL_H: "global",
    ModelKind.ADAPTIVE_H: "adaptive",
    ModelKind.PARALLEL_H: "parallel",
    ModelKind.MEMORY_POLY: "memory_poly",
    ModelKind.LINEAR_FIR: "linear_fir",
}


@dataclass(frozen=True)
class ModelSpec:
    """Kind, orders and signal count of one model.

    Attributes:
        kind: ModelKind
        P: nonlinear order, the hidden units per MLP layer
        L: linear order, the kernel length
        num_signals: file IDs the adaptive kernels are sized for
        seed: initialization seed
    """

    kind: ModelKind
    P: int = config.NONLINEAR_ORDER
    L: int = config.KERNEL_SIZE
    num_signals: int = config.FILES_PER_DATASET
    seed: int = 0

    def __post_init__(self):
        """Normalize the kind and check the orders."""
        kind = self.kind
        if not isinstance(kind, ModelKind):
            kind = ModelKind.parse(kind) if isinstance(kind, str) \
                else ModelKind(kind)
        object.__setattr__(self, "kind", kind)
        for name in ("P", "L", "num_signals"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
