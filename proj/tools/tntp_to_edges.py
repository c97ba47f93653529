#!/usr/bin/env python3
"""Convert a TNTP network file (*_net.tntp) to an undirected edge list.

Directed links are merged into unweighted undirected edges; self-loops are
dropped. Output uses 1-based indices with a `% nodes <n>` header.

    tools/tntp_to_edges.py Anaheim_net.tntp data/anaheim.edges
"""
import argparse
import re
import sys


def read_tntp(path):
    nodes = None
    edges = set()
    in_body = False
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not in_body:
                m = re.match(r"<NUMBER OF NODES>\s*(\d+)", line)
                if m:
                    nodes = int(m.group(1))
                if line.startswith("<END OF METADATA>"):
                    in_body = True
                continue
            if not line or line.startswith("~"):
                continue
            fields = line.rstrip(";").split()
            if len(fields) < 2:
                continue
            i, j = int(fields[0]), int(fields[1])
            if i != j:
                edges.add((min(i, j), max(i, j)))
    if nodes is None:
        nodes = max(max(e) for e in edges) if edges else 0
    return nodes, sorted(edges)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("input")
    ap.add_argument("output")
    args = ap.parse_args()
    n, edges = read_tntp(args.input)
    with open(args.output, "w") as out:
        out.write(f"% nodes {n}\n")
        for i, j in edges:
            out.write(f"{i} {j}\n")
    print(f"{n} nodes, {len(edges)} edges", file=sys.stderr)


if __name__ == "__main__":
    main()
