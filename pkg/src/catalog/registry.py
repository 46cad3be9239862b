from typing import Callable, Dict, List
import logging
import re

from src.catalog.entry import CatalogEntry
from src.catalog.freund_rubin import build_freund_rubin
from src.catalog.plane_wave import build_cahen_wallach
from src.catalog.poincare import build_general_linear, build_poincare
from src.catalog.wess_zumino import build_wess_zumino
from src.clifford.signature import Signature
from src.exactla.errors import CatalogError

logger = logging.getLogger(__name__)

CATALOG: Dict[str, Callable[[], CatalogEntry]] = {
    "cahen-wallach": build_cahen_wallach,
    "freund-rubin-4-7": lambda: build_freund_rubin("4-7"),
    "freund-rubin-7-4": lambda: build_freund_rubin("7-4"),
    "wess-zumino": build_wess_zumino,
}

##parametrized families, listed with one representative each
FAMILIES = {
    "poincare-R-S": re.compile(r"^poincare-(\d+)-(\d+)$"),
    "gl-M-N": re.compile(r"^gl-(\d+)-(\d+)$"),
}
SHIPPED = ["poincare-1-2", "poincare-1-3", "poincare-1-10", "gl-2-1"]


def list_entries() -> List[str]:
    return sorted(SHIPPED + list(CATALOG))


def get_entry(name: str) -> CatalogEntry:
    if name in CATALOG:
        logger.info(f"building catalog entry {name}")
        return CATALOG[name]()
    m = FAMILIES["poincare-R-S"].match(name)
    if m:
        return build_poincare(Signature(int(m.group(1)), int(m.group(2))))
    m = FAMILIES["gl-M-N"].match(name)
    if m:
        return build_general_linear(int(m.group(1)), int(m.group(2)))
    raise CatalogError(f"unknown catalog entry {name!r}; known: {', '.join(list_entries())} "
                       f"and the families {', '.join(FAMILIES)}")
