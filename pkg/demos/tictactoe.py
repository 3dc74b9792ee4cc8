"""Bidding Tic-Tac-Toe: how much money does White need to force a line of X's?

The auction winner places their own mark. A draw counts for Black, so the
answer is the Richman value of the empty board.
"""

from __future__ import annotations

from scripbid.richman import WHITE_WIN, richman_values, tictactoe

z = tictactoe()
R = richman_values(z)
print(f"{len(R)} positions; White needs {R[z.root]} = {float(R[z.root]):.4f} of the total")

z_draw = tictactoe(draw_winner=WHITE_WIN)
print(f"with draws going to White, the threshold drops to {richman_values(z_draw)[z_draw.root]}")
