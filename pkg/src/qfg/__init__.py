"""Fine-grained quantum entropy over explicit state decompositions."""
from importlib import resources

from .statemodel import (
    Decomposition,
    OpaqueSector,
    Partition,
    ProductSector,
    PureSector,
    StateError,
    StateFormatError,
    canned_state,
    flatten,
    load,
    mixture,
    product,
    pure,
    save,
)
from .entropy import (
    qfg_conditional,
    qfg_entropy,
    qfg_mutual_information,
    relative_entropy,
    shannon,
    von_neumann,
)

__version__ = "0.1.0"


def fixture_path(name: str):
    """Path of a bundled fixture file (states, channels, families)."""
    return resources.files(__name__) / "fixtures" / name
