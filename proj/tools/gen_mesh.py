#!/usr/bin/env python3
"""Generate the 20-switch mesh scenarios (link failures, requirement changes, both).

Link delays are drawn from a fixed seed. Each pair's strong requirement is
placed between its best path and its detours so that some single-link
failures leave a path meeting the strong requirement and the rest only meet
the weak one (twice the strong requirement).
"""

import argparse
import random
from pathlib import Path

import networkx as nx

ROWS, COLS = 4, 5
CAPACITY_BPS = 1_000_000_000
PACKET_BITS = 1500 * 8
TD_NS = PACKET_BITS * 1_000_000_000 // CAPACITY_BPS
PAIRS = [(1, 20), (5, 16), (2, 19), (6, 15), (11, 10)]


def name(i):
    return f"S{i}"


def build(seed):
    rng = random.Random(seed)
    g = nx.Graph()
    for r in range(ROWS):
        for c in range(COLS):
            s = r * COLS + c + 1
            g.add_node(s)
            if c + 1 < COLS:
                g.add_edge(s, s + 1, delay_us=rng.choice([500, 750, 1000, 1250, 1500]))
            if r + 1 < ROWS:
                g.add_edge(s, s + COLS, delay_us=rng.choice([500, 750, 1000, 1250, 1500]))
    for u, v, d in g.edges(data=True):
        d["cost"] = d["delay_us"] * 1000 + TD_NS
    return g


def best(g, src, dst, banned=None):
    h = g.copy()
    if banned:
        h.remove_edge(*banned)
    try:
        path = nx.dijkstra_path(h, src, dst, weight="cost")
    except nx.NetworkXNoPath:
        return None, None
    return path, sum(h[a][b]["cost"] for a, b in zip(path, path[1:]))


def calibrate(g, src, dst):
    path, ed0 = best(g, src, dst)
    detours = sorted(best(g, src, dst, (a, b))[1] for a, b in zip(path, path[1:]))
    # Strong sits just above the cheaper third of the detours.
    k = max(1, len(detours) // 3)
    strong = detours[k - 1] + 100_000
    strong = max(strong, ed0 + 150_000)
    strong = (strong + 49_999) // 50_000 * 50_000
    return path, ed0, detours, strong


def write(path, g, plans, injections, title):
    lines = [f"# {title}", "# Generated by tools/gen_mesh.py; 4x5 grid of 1 Gbps links.", "", "[topology]"]
    lines.append("switch " + " ".join(name(s) for s in sorted(g.nodes)))
    for s in sorted(g.nodes):
        lines.append(f"host H{s} at={name(s)}")
    lines.append("link_defaults capacity=1Gbps")
    for u, v, d in sorted(g.edges(data=True)):
        lines.append(f"link {name(u)} {name(v)} delay={d['delay_us']}us")
    lines += ["", "[flows]"]
    for i, (src, dst) in enumerate(PAIRS, 1):
        lines.append(
            f"group p{i}f count=3 src=H{src} dst=H{dst} volume=200Mb packet=1500B "
            f"start={(i - 1) * 100}ms spacing=2s gap=7.8125ms"
        )
    lines += ["", "[contracts]"]
    for i, ((src, dst), (p, ed0, detours, strong)) in enumerate(zip(PAIRS, plans), 1):
        lines.append(f"contract c{i} src={name(src)} dst={name(dst)} strong={strong}ns weak={2 * strong}ns")
    lines += ["", "[injections]"] + injections
    lines += [
        "",
        "[run]",
        "emulation_time=150s estimation_interval=10s",
        "control_latency=0.25ms recalculation=0.1ms",
        "queue_limit=4 seed=1",
        "",
    ]
    path.write_text("\n".join(lines))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "scenarios"))
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args()

    g = build(args.seed)
    plans = [calibrate(g, s, d) for s, d in PAIRS]
    pool = sorted({tuple(sorted(e)) for p, *_ in plans for e in zip(p, p[1:])})
    if args.verbose:
        for (s, d), (p, ed0, detours, strong) in zip(PAIRS, plans):
            print(s, d, p, ed0, detours, strong, sum(x <= strong for x in detours), sum(x <= 2 * strong for x in detours))
        print("pool", len(pool))

    pool_ref = ",".join(f"{name(a)}-{name(b)}" for a, b in pool)
    e1 = [f"e1_random count=3 slots=5 pool={pool_ref} window=10s..130s down_for=12s"]
    e2 = [f"e2_random count=3 slots=5 contract=c{i} window=10s..130s factor=0.85" for i in range(1, len(PAIRS) + 1)]
    out = Path(args.out)
    write(out / "mesh_link_failures.scn", g, plans, e1, "Mesh: link failures")
    write(out / "mesh_requirement_changes.scn", g, plans, e2, "Mesh: run-time requirement changes")
    write(out / "mesh_mixed_events.scn", g, plans, e1 + e2, "Mesh: link failures and requirement changes")


if __name__ == "__main__":
    main()
