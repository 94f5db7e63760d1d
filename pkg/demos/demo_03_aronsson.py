"""
Infinity-harmonic Aronsson function
===================================

``|x|^(4/3) - |y|^(4/3)`` solves the infinity-Laplace equation on the square.
The parabolic scheme starts from a perturbation of it and stops once the
update falls below ``2h * 1e-2``.  One column of the first benchmark table is
rerun here; the full table is ``gameplap table --table 1``.
"""

from gameplap import bench

named, rows = bench.benchmark_table(1)
column = [(label, cfg) for label, cfg in rows if cfg.nx == 41]
table = bench.run_table(named, column)
print(table.to_text(timing=False))

for (label, cfg), row in zip(column, table.rows):
    ref = named.reference(directions=cfg.directions_total, nodes=41)
    print(f"{label:>14}: error {row.error:.4f}   reference {ref.error:.4f}")
