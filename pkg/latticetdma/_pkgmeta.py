"""Installed-distribution metadata for latticetdma.

The CLI stamps every exported table with the tool version, so the lookup is
cached once per process. Running from a source checkout (no installed
distribution) yields the development defaults below.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import metadata
from typing import Protocol, cast


class _MetadataMapping(Protocol):
    def get(self, key: str, default: object = ...) -> object: ...


PACKAGE_NAME = "latticetdma"

_DEV_VERSION = "0.0.0+dev"


@dataclass(frozen=True, slots=True)
class PackageInfo:
    """Distribution metadata used in export headers and ``--version``.

    Attributes:
        version: Distribution version, or ``0.0.0+dev`` from a checkout.
        summary: One-line project description.
        license: SPDX license identifier.

    """

    version: str
    summary: str
    license: str

    @property
    def is_development(self) -> bool:
        """Return ``True`` when no installed distribution was found."""
        return self.version == _DEV_VERSION


def _first_str(value: object, fallback: str) -> str:
    if isinstance(value, str) and value:
        return value
    if isinstance(value, list) and value and isinstance(value[0], str):
        return value[0]
    return fallback


@lru_cache(maxsize=1)
def get_package_info() -> PackageInfo:
    """Return package metadata, falling back to development defaults.

    Returns:
        PackageInfo with every field populated.

    """
    defaults = PackageInfo(
        version=_DEV_VERSION,
        summary="Message-free STDMA node scheduling for regular lattice networks",
        license="Apache-2.0",
    )

    try:
        version = metadata.version(PACKAGE_NAME)
    except metadata.PackageNotFoundError:
        return defaults

    meta = cast("_MetadataMapping", metadata.metadata(PACKAGE_NAME))
    return PackageInfo(
        version=version,
        summary=_first_str(meta.get("Summary"), defaults.summary),
        license=_first_str(meta.get("License-Expression") or meta.get("License"), defaults.license),
    )
