"""Print a CSV of exact fvs and packing numbers for random small digraphs.

    python3 demos/gap_table.py [count] [seed]
"""

import sys

from cyclepack.generators import random_digraph
from cyclepack.oracles import gap_report, reports_to_csv


def main():
    count = int(sys.argv[1]) if len(sys.argv) > 1 else 20
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0
    reports = []
    for i in range(count):
        n = 4 + i % 5
        reports.append(gap_report(random_digraph(n, 2 * n, seed=seed + i).graph))
    sys.stdout.write(reports_to_csv(reports))


if __name__ == "__main__":
    main()
