#!/usr/bin/env python3
"""Writes the gossip and replica control fixtures.

    protocols.py            regenerate every file next to this directory
"""
import itertools
import os

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.dirname(HERE)


def gossip(p):
    lines = [
        f"# Gossip among {p} replica managers. s<i> holds while RM<i> is servicing",
        "# clients; a gossiping RM returns to servicing once another RM gossips too.",
        "",
    ]
    for i in range(1, p + 1):
        others = " | ".join(f"~s{j}" for j in range(1, p + 1) if j != i)
        if p > 2:
            others = f"({others})"
        lines += [
            f"module RM{i} controls s{i}",
            "  init",
            f"    :: true ~> s{i}' := true;",
            "  update",
            f"    :: s{i} ~> s{i}' := true;",
            f"    :: s{i} ~> s{i}' := false;",
            f"    :: ~s{i} & {others} ~> s{i}' := true;",
            f"  goal G F ~s{i};",
            "",
        ]
    return "\n".join(lines)


def replica(n):
    players = [f"p{i}" for i in range(1, n + 1)]
    lines = [
        f"# Quorum voting among {n} players. At q<i> player i asks for access and",
        "# the others vote; the requester counts as a yes. A strict majority of",
        "# all players sends the run to q0 (the data is written), otherwise the",
        "# next player in the queue gets its turn. q<n> always leads to q0.",
        "# Everyone may vote anywhere except the requester at its own state.",
        "players: " + " ".join(players),
    ]
    lines += [f"actions {p}: yes no" for p in players]
    lines.append("")
    lines += [f"state q{k}: {{q{k}}}" for k in range(n + 1)]
    lines.append("init q0")
    lines.append("")
    for i in range(1, n + 1):
        lines.append(f"available q{i} p{i}: yes")
    lines.append("")
    star = ", ".join("*" for _ in players)
    lines.append(f"trans q0: {star} -> q1")
    lines.append(f"trans q{n}: {star} -> q0")
    for i in range(1, n):
        voters = [j for j in range(1, n + 1) if j != i]
        for votes in itertools.product(["yes", "no"], repeat=len(voters)):
            ballot = dict(zip(voters, votes))
            ballot[i] = "yes"
            ayes = sum(v == "yes" for v in ballot.values())
            target = "q0" if 2 * ayes > n else f"q{i + 1}"
            row = ", ".join(ballot[j] for j in range(1, n + 1))
            lines.append(f"trans q{i}: {row} -> {target}")
    lines.append("")
    lines += [f"goal p{i}: G F (q{i} & X q0)" for i in range(1, n + 1)]
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    for p in (2, 3, 4):
        with open(os.path.join(OUT, f"gossip{p}.srml"), "w") as f:
            f.write(gossip(p))
    for n in (2, 3):
        with open(os.path.join(OUT, f"replica{n}.arena"), "w") as f:
            f.write(replica(n))
