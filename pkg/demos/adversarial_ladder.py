## The adversarial construction on a refinement ladder
## Coverage should creep down toward (1 - e^-2)/2 as k grows and eps shrinks.

import math
import time

from tilepack.generators import AdversarialParams, gen_adversarial, l_tile_ratio, verify_curve_family
from tilepack.packing import pack

target = (1 - math.exp(-2)) / 2
print("limit (1 - e^-2)/2 = %.6f" % target)

ladder = [(16, 8), (32, 9), (64, 10), (64, 11)]
for k, e in ladder:
    t0 = time.perf_counter()
    params = AdversarialParams(k=k, eps=2.0**-e * math.sqrt(2))
    inst, cf = gen_adversarial(params)
    pk = pack(inst)
    ratio, count = l_tile_ratio(pk)
    rep = verify_curve_family(cf)
    where = "" if rep.passed else " (ordering lost at X=%.3f)" % rep.witnesses[0]["x"]
    print("k=%-3d eps=2^-%d*sqrt2  n=%-6d coverage %.5f  L-tiles %.4f over %d  %.1fs%s"
          % (k, e, len(inst.points), pk.coverage, ratio, count, time.perf_counter() - t0, where))

## Anchors spaced evenly in hyperbolic angle shrink the notch next to the vertex
params = AdversarialParams(k=64, eps=2.0**-11 * math.sqrt(2), spacing="angle")
inst, cf = gen_adversarial(params)
print("angle spacing, finest rung: coverage %.5f" % pack(inst).coverage)

## Strict mode refuses to merge curves that have collapsed
try:
    gen_adversarial(AdversarialParams(k=16, strict=True))
except Exception as err:
    print(type(err).__name__ + ":", err)
