"""Store buffers vs load buffers on the three-process example.

Run:  python3 demos/fig6_walkthrough.py
"""
from pathlib import Path

from tsogame import (
    SAFETY, Objective, build_bounded_arena, build_lb_arena, parse_program, solve_concurrent,
    solve_process_fair_safety,
)

HERE = Path(__file__).parent


def main():
    p = parse_program((HERE / "fig6.tso").read_text(encoding="utf-8"))

    # Without fairness P3 simply loops on "read x 0" and nobody can stop it.
    plain = p.with_objective(Objective(SAFETY, p.objective.targets))
    res = solve_concurrent(plain)
    print(f"no fairness:            winner {res.winner}, witness {res.witness_process}")

    # Process fairness forces P1 and P2 to write eventually.  With store
    # buffers the update player then flushes the two writes in the order
    # that drives P3 into sF.
    arena = build_bounded_arena(p, 1)
    reg = solve_process_fair_safety(arena)
    print(f"process fair, SB cap 1: winner {reg.winner} "
          f"({len(arena)} nodes, product {reg.info['product_size']})")

    # With load buffers P3 can commit to the order it sees and the
    # environment can no longer show it the other one.
    for cap in (1, 2):
        arena = build_lb_arena(p, cap, stepwise=True)
        reg = solve_process_fair_safety(arena, method="auto")
        print(f"process fair, LB cap {cap}: winner {reg.winner} ({len(arena)} nodes)")

    # If the environment may starve P3 (never propagate anything), it wins
    # by deadlock instead.
    arena = build_lb_arena(p, 1, progress=False, stepwise=True)
    print(f"LB without progress:    winner {solve_process_fair_safety(arena).winner}")


if __name__ == "__main__":
    main()
