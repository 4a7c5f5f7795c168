#!/usr/bin/env python3
"""Writes the synthetic benchmark maps and scenarios under fixtures/."""
import random
from collections import deque
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "fixtures"


def largest_component(rows):
    h, w = len(rows), len(rows[0])
    seen, best = set(), []
    for y in range(h):
        for x in range(w):
            if rows[y][x] != "." or (x, y) in seen:
                continue
            comp, queue = [], deque([(x, y)])
            seen.add((x, y))
            while queue:
                cx, cy = queue.popleft()
                comp.append((cx, cy))
                for nx, ny in ((cx + 1, cy), (cx - 1, cy), (cx, cy + 1), (cx, cy - 1)):
                    if 0 <= nx < w and 0 <= ny < h and rows[ny][nx] == "." and (nx, ny) not in seen:
                        seen.add((nx, ny))
                        queue.append((nx, ny))
            if len(comp) > len(best):
                best = comp
    return sorted(best)


def write_map(name, rows):
    text = f"type octile\nheight {len(rows)}\nwidth {len(rows[0])}\nmap\n" + "".join(r + "\n" for r in rows)
    (OUT / f"{name}.map").write_text(text)


def write_scen(map_name, rows, scen_name, agents, rng):
    cells = largest_component(rows)
    starts = rng.sample(cells, agents)
    goals = rng.sample(cells, agents)
    lines = ["version 1"]
    for (sx, sy), (gx, gy) in zip(starts, goals):
        lines.append(f"0\t{map_name}.map\t{len(rows[0])}\t{len(rows)}\t{sx}\t{sy}\t{gx}\t{gy}\t{abs(sx - gx) + abs(sy - gy)}")
    (OUT / f"{scen_name}.scen").write_text("\n".join(lines) + "\n")


def main():
    rng = random.Random(2024)
    maps = {
        "empty-8-8": ["." * 8 for _ in range(8)],
        "empty-16-16": ["." * 16 for _ in range(16)],
    }
    for name, size, density in (("random-16-16-15", 16, 0.15), ("random-24-24-20", 24, 0.20)):
        maps[name] = ["".join("@" if rng.random() < density else "." for _ in range(size)) for _ in range(size)]
    for name, rows in maps.items():
        write_map(name, rows)
        for k in range(1, 6):
            write_scen(name, rows, f"{name}-random-{k}", 10, rng)


if __name__ == "__main__":
    main()
