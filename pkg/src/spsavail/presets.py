"""The three reference architectures shipped as editable config files."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .config import Architecture, parse_architecture, parse_catalog, with_catalog
from .errors import NotFoundError

PRESET_NAMES = ("A", "B", "C")


@dataclass(frozen=True)
class ArchitecturePreset:
    name: str
    architecture: Architecture

    @property
    def topology(self):
        return self.architecture.topology

    @property
    def chain_overrides(self):
        return self.architecture.chain_overrides

    @property
    def catalog(self):
        return self.architecture.catalog


def preset_path(name: str, what: str = "arch"):
    """Traversable for a packaged preset file (``arch`` or ``catalog``)."""
    key = name.strip().upper()
    if key not in PRESET_NAMES:
        raise NotFoundError(f"unknown preset {name!r}; choose one of {', '.join(PRESET_NAMES)}")
    return resources.files("spsavail") / "presets" / f"{what}_{key.lower()}.yaml"


def load_preset(name: str, with_sample_catalog: bool = True) -> ArchitecturePreset:
    path = preset_path(name, "arch")
    arch = parse_architecture(path.read_text(), source=path.name)
    if with_sample_catalog:
        cpath = preset_path(name, "catalog")
        arch = with_catalog(arch, parse_catalog(cpath.read_text(), source=cpath.name))
    return ArchitecturePreset(arch.name, arch)
