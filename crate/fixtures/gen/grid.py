#!/usr/bin/env python3
"""Generate two-agent grid-world module systems.

Agent 1 starts in the top-left corner (0,0) and must reach (n-1,n-1);
agent 2 starts in the bottom-right corner and must reach (0,0). Every step
each agent moves one cell north/south/east/west, never off the grid or into
an obstacle. Positions are binary encoded (x bits then y bits, least
significant first).

Usage: grid.py [--check] NAME
Layouts are listed in LAYOUTS; `--check` prints whether a collision-free
run exists on which both agents reach their targets (breadth-first search
over joint positions).
"""
import itertools
import sys

N = 4

LAYOUTS = {
    # agent 2 can step aside at the bottom left, agent 1 has nowhere to go
    "fig1": {(0, 1), (1, 1), (1, 2), (3, 1), (3, 2)},
    # opening (3,1) gives agent 1 a loop to wait in
    "fig2": {(0, 1), (1, 1), (1, 2), (3, 2)},
}


def bits(v):
    return [(v >> k) & 1 for k in range((N - 1).bit_length())]


def cells(obstacles):
    return [(x, y) for y in range(N) for x in range(N) if (x, y) not in obstacles]


def moves(c, obstacles):
    x, y = c
    out = []
    for dx, dy in ((0, -1), (0, 1), (1, 0), (-1, 0)):
        t = (x + dx, y + dy)
        if 0 <= t[0] < N and 0 <= t[1] < N and t not in obstacles:
            out.append(t)
    return out


def var(agent, axis, k):
    return f"{axis}{k}_{agent}"


def at(agent, c):
    lits = []
    for axis, v in zip("xy", c):
        for k, b in enumerate(bits(v)):
            name = var(agent, axis, k)
            lits.append(name if b else "~" + name)
    return " & ".join(lits)


def assign(agent, c):
    parts = []
    for axis, v in zip("xy", c):
        for k, b in enumerate(bits(v)):
            parts.append(f"{var(agent, axis, k)}' := {'true' if b else 'false'};")
    return " ".join(parts)


def module(agent, start, target, obstacles):
    names = [var(agent, a, k) for a in "xy" for k in range(len(bits(N - 1)))]
    lines = [f"module agent{agent} controls {', '.join(names)}", "  init", f"    :: true ~> {assign(agent, start)}", "  update"]
    for c in cells(obstacles):
        for t in moves(c, obstacles):
            lines.append(f"    :: {at(agent, c)} ~> {assign(agent, t)}")
    # the initial state is labelled with every variable false, hence the X
    lines.append(f"  goal X F ({at(agent, target)});")
    return "\n".join(lines)


def safety():
    same = " & ".join(
        f"({var(1, a, k)} <-> {var(2, a, k)})" for a in "xy" for k in range(len(bits(N - 1)))
    )
    return f"X G ~({same})"


def generate(name):
    obstacles = LAYOUTS[name]
    corner = (N - 1, N - 1)
    rows = []
    for y in range(N):
        row = "".join("#" if (x, y) in obstacles else "1" if (x, y) == (0, 0) else "2" if (x, y) == corner else "." for x in range(N))
        rows.append("#   " + row)
    header = [f"# {N}x{N} grid world, layout {name}:"] + rows
    header.append("# collision freedom: " + safety())
    body = [module(1, (0, 0), corner, obstacles), "", module(2, corner, (0, 0), obstacles)]
    return "\n".join(header) + "\n\n" + "\n".join(body) + "\n"


def safe_cooperative_run(obstacles):
    """Both targets reached without ever sharing a cell, and the play can go
    on forever afterwards."""
    corner = (N - 1, N - 1)
    free = cells(obstacles)
    succ = {}
    for a, b in itertools.product(free, free):
        if a == b:
            continue
        ma = moves(a, obstacles) or [a]
        mb = moves(b, obstacles) or [b]
        succ[(a, b)] = [(s, t) for s in ma for t in mb if s != t]
    # states that can stay safe forever: greatest fixpoint
    alive = set(succ)
    changed = True
    while changed:
        changed = False
        for v in list(alive):
            if not any(w in alive for w in succ[v]):
                alive.discard(v)
                changed = True
    start = ((0, 0), corner)
    if start not in alive:
        return False
    seen = {(start, False, False)}
    todo = [(start, False, False)]
    while todo:
        v, f1, f2 = todo.pop()
        f1 = f1 or v[0] == corner
        f2 = f2 or v[1] == (0, 0)
        if f1 and f2:
            return True
        for w in succ[v]:
            if w in alive and (w, f1, f2) not in seen:
                seen.add((w, f1, f2))
                todo.append((w, f1, f2))
    return False


if __name__ == "__main__":
    args = sys.argv[1:]
    if args and args[0] == "--check":
        for name in args[1:] or LAYOUTS:
            print(name, safe_cooperative_run(LAYOUTS[name]))
    else:
        sys.stdout.write(generate(args[0]))
