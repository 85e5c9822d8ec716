## Greedy packing, one small instance at a time
## Run from anywhere; SVG files land in the current directory.

import numpy as np

from tilepack import gen_diagonal, gen_random, pack
from tilepack.charging import compute_crowns, crowns_disjoint, crowns_in_pentagon
from tilepack.geometry import Instance, Point
from tilepack.packing import verify_partition
from tilepack.render import render_svg

## Two points on the diagonal
inst = Instance((Point(0.0, 0.0), Point(0.5, 0.5)))
pk = pack(inst)
for t in pk.tiles:
    rect, corner = t.max_rect
    print("anchor", tuple(t.anchor), "staircase", [tuple(q) for q in t.gamma])
    print("   area %.3f  rect %.3f x %.3f  density %.3f" % (t.area, rect.width, rect.height, t.density))
print("coverage", pk.coverage)  # 0.75

## The diagonal family tends to one half
for n in (2, 4, 16, 64, 256):
    print(n, round(pack(gen_diagonal(n)).coverage, 6))

## Random points: tiles partition the square, crowns stay apart
inst = gen_random(60, seed=1)
pk = pack(inst)
pc = compute_crowns(pk)
print("coverage %.4f" % pk.coverage)
print("partition ok:", verify_partition(pk, samples=50_000).passed)
print("crowns disjoint:", crowns_disjoint(pc).passed)
rep = crowns_in_pentagon(pc)
print("inside pentagon:", rep.passed, " c* = %.4f" % rep.details["c_star"])

## Densities over many instances
cov = np.array([pack(gen_random(100, s)).coverage for s in range(200)])
print("coverage over 200 instances: min %.4f  mean %.4f  max %.4f" % (cov.min(), cov.mean(), cov.max()))

render_svg(pc, path="random60.svg")
print("wrote random60.svg")
