"""Half- and quarter-integral cycle packing in digraphs through well-linked sets.

The package builds linkages and their duals, walk systems over a
well-linked terminal set, and extracts families of cycles whose vertex
congestion is at most 2, 3 or 4.  Every produced certificate can be
re-checked by ``certificates.verify_certificate``, and small instances can
be cross-checked against the brute-force ``oracles``.
"""

from .digraph import Digraph, read_graph, parse_edgelist, format_edgelist
from .linkage import Linkage, max_linkage, is_well_linked
from .extraction import CyclePackingCert, FailureReport, pack_cycles
from .certificates import verify_certificate
from .oracles import gap_report, max_packing_congestion, min_fvs
from .generators import InstanceSpec, generate

__version__ = "0.1.0"

__all__ = [
    "Digraph", "read_graph", "parse_edgelist", "format_edgelist",
    "Linkage", "max_linkage", "is_well_linked",
    "CyclePackingCert", "FailureReport", "pack_cycles",
    "verify_certificate",
    "gap_report", "max_packing_congestion", "min_fvs",
    "InstanceSpec", "generate",
]
