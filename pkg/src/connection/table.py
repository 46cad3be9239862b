from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Dict, List, Mapping, Optional, Sequence, Tuple
import logging

from tqdm import tqdm

from src.catalog.poincare import build_poincare
from src.clifford.signature import Signature
from src.connection.nomizu import BLOCKS, nomizu_space

logger = logging.getLogger(__name__)

##D over r−s mod 8 for classes 1..8
EXPECTED_D: Dict[int, int] = {1: 12, 2: 24, 3: 12, 4: 24, 5: 12, 6: 6, 7: 3, 8: 6}

DEFAULT_REPRESENTATIVES: Dict[int, Tuple[int, int]] = {
    1: (3, 2), 2: (3, 1), 3: (4, 1), 4: (4, 0), 5: (1, 4), 6: (1, 3), 7: (2, 3), 8: (2, 2)}
DEFAULT_ALTERNATES: Dict[int, Tuple[int, int]] = {4: (0, 4), 5: (5, 0)}


@dataclass
class TableRow:
    table_class: int
    signature: Signature
    D: int
    blocks: Dict[str, int] = field(default_factory=dict)
    expected: Optional[int] = None
    flagged: bool = False

    def to_dict(self) -> dict:
        return {"class": self.table_class, "signature": [self.signature.r, self.signature.s], "D": self.D,
                "blocks": dict(self.blocks), "expected": self.expected, "flagged": self.flagged}

    def tsv(self) -> str:
        cells = [str(self.table_class), f"{self.signature.r},{self.signature.s}", str(self.D)]
        cells += [str(self.blocks.get(name, 0)) for name in BLOCKS.values()]
        cells.append("flagged" if self.flagged else "")
        return "\t".join(cells)


TSV_HEADER = "\t".join(["class", "signature", "D", *BLOCKS.values(), "flag"])


def table_row(sig: Signature) -> TableRow:
    """Nomizu-space dimension of the Poincaré superspacetime of signature sig.

    The dimension does not depend on the odd-odd bracket, so the odd-commutative extension is used.
    """
    entry = build_poincare(sig, gamma_choice=None)
    space = nomizu_space(entry.decomposition)
    cls = sig.table_class
    expected = EXPECTED_D[cls]
    row = TableRow(cls, sig, space.dim, dict(space.blocks), expected)
    row.flagged = sig.n < 4 or space.dim != expected
    if space.dim != expected:
        logger.warning(f"class {cls} signature {sig}: D = {space.dim}, table value {expected}, blocks {space.blocks}")
    return row


def _row_from_pair(pair: Tuple[int, int]) -> TableRow:
    return table_row(Signature(*pair))


def poincare_connection_table(representatives: Optional[Mapping[int, Sequence[int]]] = None,
                              parallel: int = 1, progress: bool = False) -> List[TableRow]:
    """One row per signature, sorted by class and signature; `parallel` > 1 spreads rows over worker processes."""
    reps = representatives or DEFAULT_REPRESENTATIVES
    pairs = [tuple(int(x) for x in reps[k]) for k in sorted(reps)]
    for cls, (r, s) in zip(sorted(reps), pairs):
        if Signature(r, s).table_class != int(cls):
            raise ValueError(f"signature ({r},{s}) is in class {Signature(r, s).table_class}, listed under {cls}")
    if parallel > 1:
        with Pool(parallel) as pool:
            rows = list(tqdm(pool.imap(_row_from_pair, pairs), total=len(pairs), desc="nomizu table",
                             disable=not progress))
    else:
        rows = [_row_from_pair(p) for p in tqdm(pairs, desc="nomizu table", disable=not progress)]
    rows.sort(key=lambda row: (row.table_class, row.signature.r, row.signature.s))
    logger.info(f"nomizu table: {len(rows)} rows, {sum(r.flagged for r in rows)} flagged")
    return rows


def render_tsv(rows: Sequence[TableRow]) -> str:
    return "\n".join([TSV_HEADER] + [row.tsv() for row in rows]) + "\n"
