"""Single-process view games and the bisimulation check behind them.

Run:  python3 demos/view_games.py
"""
from tsogame import (
    UPDATE_FAIR, Objective, build_bounded_arena, build_view_game, check_bisimulation_fragment,
    parse_program, solve, solve_update_fair_reachability,
)
from tsogame.export import to_dot

SRC = """
domain 0 1;
var x = 0;
process P1 {
  init q0;
  q0 -> q1 : write x 1;
  q1 -> q2 : fence;
  q2 -> q3 : read x 1;
  q3 -> q3 : skip;
}
reach P1.q3;
"""


def main():
    p = parse_program(SRC)
    vg = build_view_game(p)
    reg = solve(vg, p.objective.kind)
    print(f"view game: {len(vg)} nodes, winner {reg.winner}")
    for v, node in enumerate(vg.nodes):
        print(f"  {v:2} {node}  {'A wins' if v in reg.win_a else 'B wins'}")
    rep = check_bisimulation_fragment(p, 3)
    print(f"bisimulation fragment at bound 3: {rep.checked} configurations, "
          f"{len(rep.violations)} violations")
    # The update player just never flushes, so the fence blocks for good.
    # Under update fairness that deadlock counts for the process player.
    fair = p.with_objective(Objective(p.objective.kind, p.objective.targets, UPDATE_FAIR))
    reg_f = solve_update_fair_reachability(build_bounded_arena(fair, 2))
    print(f"update fair, cap 2: winner {reg_f.winner}")
    print()
    print(to_dot(vg, "view", reg))


if __name__ == "__main__":
    main()
