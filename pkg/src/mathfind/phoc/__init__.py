"""Visual-spatial formula retrieval via region-occupancy descriptors."""

from .encode import (
    DEFAULT_SCHEME,
    Orientation,
    PhocVector,
    RegionScheme,
    RegionVariant,
    cosine,
    phoc_encode,
)
from .layout import SymbolBox, layout_symbols
from .search import (
    EntryOrder,
    PhocEntry,
    PhocHit,
    PhocStore,
    autocomplete,
    entry_order,
    load_phoc,
    make_entry,
    phoc_search,
    save_phoc,
)

__all__ = [
    "DEFAULT_SCHEME",
    "EntryOrder",
    "Orientation",
    "PhocEntry",
    "PhocHit",
    "PhocStore",
    "PhocVector",
    "RegionScheme",
    "RegionVariant",
    "SymbolBox",
    "autocomplete",
    "cosine",
    "entry_order",
    "layout_symbols",
    "load_phoc",
    "make_entry",
    "phoc_encode",
    "phoc_search",
    "save_phoc",
]
