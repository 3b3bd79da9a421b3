"""Channel systems turned into TSO games, checked against plain search.

Run:  python3 demos/pcs_reductions.py
"""
import time

from tsogame import (
    build_bounded_arena, gen_process_fair_program, gen_update_fair_program, pcs_reachable_bounded,
    solve_process_fair_safety, solve_update_fair_reachability,
)
from tsogame.corpus import pcs_suite

CAP = 5


def main():
    print(f"{'pcs':16} {'reach':>5} {'update-fair':>12} {'process-fair':>13} {'secs':>6}")
    for name, s, _ in pcs_suite():
        t0 = time.perf_counter()
        reach = bool(pcs_reachable_bounded(s, 3))
        uf = solve_update_fair_reachability(build_bounded_arena(gen_update_fair_program(s), CAP))
        pf_arena = build_bounded_arena(gen_process_fair_program(s), CAP, stepwise=True)
        pf = solve_process_fair_safety(pf_arena, method="auto")
        print(f"{name:16} {str(reach):>5} {uf.winner:>12} {pf.winner:>13} {time.perf_counter() - t0:6.1f}")
    print("\nreachable final state: update-fair game won by A, process-fair game won by B")


if __name__ == "__main__":
    main()
