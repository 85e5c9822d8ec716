## Crowns that fill the pentagon
## The family P_eps pushes the total charge up to 3/2.

from tilepack import gen_crown_tight, pack
from tilepack.charging import compute_crowns, crowns_disjoint, pentagon_area, total_charge
from tilepack.render import render_svg

print("pentagon area", pentagon_area())

for m in (2, 5, 10, 20, 50, 100):
    pk = pack(gen_crown_tight(1 / m))
    pc = compute_crowns(pk)
    print("eps = 1/%-3d  n = %-4d  c* = %.5f  gap to 3/2 = %.5f  coverage = %.4f"
          % (m, len(pk), total_charge(pc), 1.5 - total_charge(pc), pk.coverage))

## Crowns of different tiles never overlap, even here
pc = compute_crowns(pack(gen_crown_tight(1 / 50)))
print("disjoint:", crowns_disjoint(pc).passed)

render_svg(compute_crowns(pack(gen_crown_tight(1 / 10))), path="crown_tight_10.svg")
print("wrote crown_tight_10.svg")
