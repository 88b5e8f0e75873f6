"""Run the packing driver on a few planted instances and re-check each result.

    python3 demos/pack_planted.py
"""

import warnings

from cyclepack import CyclePackingCert, pack_cycles, verify_certificate
from cyclepack.extraction import Constants
from cyclepack.generators import planted_clique, planted_driver


def run(label, graph, D, k, p, **kwargs):
    out = pack_cycles(graph, D, k, p, **kwargs)
    if isinstance(out, CyclePackingCert):
        accepted, _ = verify_certificate(graph, out.to_json())
        lengths = sorted(len(c) for c in out.cycles)
        print(f"{label:28s} {len(out.cycles)} cycles, congestion {out.measured_congestion}, "
              f"lengths {lengths}, verifier {'accepts' if accepted else 'REJECTS'}")
    else:
        print(f"{label:28s} failure at stage {out.stage}: {out.reason}")


def main():
    warnings.simplefilter("ignore")  # large terminal sets are trusted above the enumeration cap
    for k, p in [(2, 2), (2, 3), (3, 3), (2, 4)]:
        inst = planted_driver(k, p, "sparse", seed=1)
        consts = Constants(*inst.annotations["constants"])
        run(f"planted driver k={k} p={p}", inst.graph, inst.annotations["D"], k, p, constants=consts)
    clique = planted_clique(24, 6, seed=0)
    for p in (2, 3):
        run(f"clique, paper constants p={p}", clique.graph, clique.annotations["D"], 1, p, mode="paper")


if __name__ == "__main__":
    main()
