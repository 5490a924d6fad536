"""Closed-form generating functions against truncated power series."""

from bstspan.closedform import F_numeric, GfPoint, phi, phi_tilde, series_F, series_phi
from bstspan.exactdist import vslice_table

N = 200
for z, u, v in [(0.1, 0.25, 0.9), (0.3, 0.5, 1.2), (0.2, 0.5, 1.1)]:
    pt = GfPoint(z, u, v)
    ph, F = phi(pt), F_numeric(pt)
    rp = abs(ph - series_phi(pt, N, vslice_table("X", N, v))) / abs(ph)
    rf = abs(F - series_F(pt, N, vslice_table("Y", N, v))) / abs(F)
    print(f"z={z} u={u} v={v}: phi={ph.real:.12f} (rel {rp:.1e})  F={F.real:.12f} (rel {rf:.1e})")

# At v = 1 every coefficient is a total probability, so phi is geometric.
pt = GfPoint(0.3, 0.5, 1.0)
print("phi(0.3, 0.5, 1) =", phi(pt).real, " 1/0.55 =", 1 / 0.55)
print("phi_tilde(0.2, 1.0, 1.1) =", phi_tilde(GfPoint(0.2, 1.0, 1.1)).real)
