import os, sys, json

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from orbitlab.dioph.services import DiophService
from orbitlab.orbit.services import OrbitService
from orbitlab.params.services import ParamService
from orbitlab.verification.services import ORACLE_FACTOR, cycling_orbit, registered_threshold

OUT = "oracles/registered.json"  # ако го местиш, смени и ORACLE_FILE в config.py
DENSITY_STEPS = [10**4, 4 * 10**4, 10**5, 10**6]
# verify-all чете min_return само при най-голямото N на всеки мащаб
MIN_RETURN_STEPS = [4 * 10**4, 10**6]
GOLDEN_PAIRS_FLOOR = 5

def thue_morse_blocks(n_max, length=4096):
    # наивно: t -> t + complement(t)
    w = [0]
    while len(w) < length:
        w = w + [1 - d for d in w]
    out = []
    for n in range(1, n_max + 1):
        out.append(len({tuple(w[i:i + n]) for i in range(len(w) - n + 1)}))
    return out

density, min_return = {}, {}
for n in DENSITY_STEPS:
    orbit = cycling_orbit(n)
    gap = OrbitService.gap_stats(orbit).max_gap
    density[str(n)] = registered_threshold(gap)
    print(f"N={n}: max gap {float(gap):.3g}")
    if n in MIN_RETURN_STEPS:
        value = OrbitService.min_return(orbit)
        min_return[str(n)] = registered_threshold(value)
        print(f"N={n}: min return {float(value):.3g}")

pairs = DiophService.golden_pair_scan(ParamService.parameter_set(["sqrt(2)", "sqrt(3)"], 64), 1.0, 1200)
print(f"golden pairs up to 1200: {len(pairs)}")

registered = {
    "_note": f"thresholds = {ORACLE_FACTOR} x oracle value (3 significant digits), written by tools/preregister_oracles.py",
    "density_max_gap": density,
    "min_return": min_return,
    "thue_morse_complexity": thue_morse_blocks(4),
    "golden_pairs_min": GOLDEN_PAIRS_FLOOR,
}

os.makedirs(os.path.dirname(OUT), exist_ok=True)
with open(OUT, "w", encoding="utf-8") as f:
    json.dump(registered, f, ensure_ascii=False, indent=2, sort_keys=True)

print(f"Registered {len(density)} density thresholds -> {OUT}")
