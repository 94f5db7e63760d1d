"""
How well the circle average sees the game p-Laplacian
=====================================================

The discrete operator ``2/(alpha h)^2 (A_p(phi on a circle) - phi(x))`` is
compared with the closed-form game p-Laplacian of two smooth functions.
For finite p the gap closes as the circle shrinks and the direction count
grows.  For p = inf the midrange locks onto the stencil direction closest
to the gradient, so an angular error of order ``dtheta * |D^2 phi|`` remains
until the directions get dense.
"""

from gameplap import INF, analytic, consistency_probe, make_directions

cases = [("x^2 + 2y^2", analytic.quadratic(1, 2), (1.0, 1.0)),
         ("x^3 - 3xy^2", analytic.harmonic_cubic(), (1.0, 0.5))]

for label, phi, at in cases:
    print(f"\n{label} at {at}")
    for p in (2.0, 3.0, 5.0, INF):
        exact = analytic.game_p_laplacian(phi, at, p)
        errs = []
        for total, h in ((64, 1e-3), (128, 5e-4), (256, 2.5e-4), (1024, 6.25e-5)):
            errs.append(abs(consistency_probe(phi, at, p, h, make_directions(total)) - exact))
        print(f"  p={p:>4}  exact {exact:+.5f}  errors " + "  ".join(f"{e:.1e}" for e in errs))
