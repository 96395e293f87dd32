"""Writes case9.json and rts96.json in the syncgrid-case/1 schema."""
import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))


def dump(name, case):
    with open(os.path.join(HERE, name), "w") as f:
        json.dump(case, f, indent=1, sort_keys=True)
        f.write("\n")


def case9():
    loads = {5: 90, 7: 100, 9: 125}
    vg = {1: 1.04, 2: 1.025, 3: 1.025}
    buses = [{"id": i, "vm": vg.get(i, 1.0), "pd": loads.get(i, 0), "area": 1} for i in range(1, 10)]
    gens = [{"bus": 1, "pg": 72.3, "status": 1}, {"bus": 2, "pg": 163, "status": 1}, {"bus": 3, "pg": 85, "status": 1}]
    rows = [(1, 4, 0, 0.0576, 250), (4, 5, 0.017, 0.092, 250), (5, 6, 0.039, 0.17, 150), (3, 6, 0, 0.0586, 300),
            (6, 7, 0.0119, 0.1008, 150), (7, 8, 0.0085, 0.072, 250), (8, 2, 0, 0.0625, 250),
            (8, 9, 0.032, 0.161, 250), (9, 4, 0.01, 0.085, 250)]
    branches = [{"from": f, "to": t, "r": r, "x": x, "ratio": 0, "rate_a": rate, "status": 1} for f, t, r, x, rate in rows]
    return {"schema": "syncgrid-case/1", "name": "case9", "base_mva": 100, "buses": buses, "generators": gens,
            "branches": branches}


# One RTS-24 area: bus loads (MW), generating units (MW) and voltage setpoints.
RTS_LOAD = {1: 108, 2: 97, 3: 180, 4: 74, 5: 71, 6: 136, 7: 125, 8: 171, 9: 175, 10: 195, 13: 265, 14: 194,
            15: 317, 16: 100, 18: 333, 19: 181, 20: 128}
RTS_UNITS = {1: [10, 10, 76, 76], 2: [10, 10, 76, 76], 7: [80, 80, 80], 13: [95.1, 95.1, 95.1], 14: [0],
             15: [12, 12, 12, 12, 12, 155], 16: [155], 18: [400], 21: [400], 22: [50] * 6, 23: [155, 155, 350]}
RTS_VG = {1: 1.035, 2: 1.035, 7: 1.025, 13: 1.02, 14: 0.98, 15: 1.014, 16: 1.017, 18: 1.05, 21: 1.05, 22: 1.05,
          23: 1.05}
# (from, to, r, x, rating MVA, tap ratio)
RTS_BRANCHES = [
    (1, 2, 0.0026, 0.0139, 175, 0), (1, 3, 0.0546, 0.2112, 175, 0), (1, 5, 0.0218, 0.0845, 175, 0),
    (2, 4, 0.0328, 0.1267, 175, 0), (2, 6, 0.0497, 0.192, 175, 0), (3, 9, 0.0308, 0.119, 175, 0),
    (3, 24, 0.0023, 0.0839, 400, 1.03), (4, 9, 0.0268, 0.1037, 175, 0), (5, 10, 0.0228, 0.0883, 175, 0),
    (6, 10, 0.0139, 0.0605, 175, 0), (7, 8, 0.0159, 0.0614, 175, 0), (8, 9, 0.0427, 0.1651, 175, 0),
    (8, 10, 0.0427, 0.1651, 175, 0), (9, 11, 0.0023, 0.0839, 400, 1.03), (9, 12, 0.0023, 0.0839, 400, 1.03),
    (10, 11, 0.0023, 0.0839, 400, 1.02), (10, 12, 0.0023, 0.0839, 400, 1.02), (11, 13, 0.0061, 0.0476, 500, 0),
    (11, 14, 0.0054, 0.0418, 500, 0), (12, 13, 0.0061, 0.0476, 500, 0), (12, 23, 0.0124, 0.0966, 500, 0),
    (13, 23, 0.0111, 0.0865, 500, 0), (14, 16, 0.005, 0.0389, 500, 0), (15, 16, 0.0022, 0.0173, 500, 0),
    (15, 21, 0.0063, 0.049, 500, 0), (15, 21, 0.0063, 0.049, 500, 0), (15, 24, 0.0067, 0.0519, 500, 0),
    (16, 17, 0.0033, 0.0259, 500, 0), (16, 19, 0.003, 0.0231, 500, 0), (17, 18, 0.0018, 0.0144, 500, 0),
    (17, 22, 0.0135, 0.1053, 500, 0), (18, 21, 0.0033, 0.0259, 500, 0), (18, 21, 0.0033, 0.0259, 500, 0),
    (19, 20, 0.0051, 0.0396, 500, 0), (19, 20, 0.0051, 0.0396, 500, 0), (20, 23, 0.0028, 0.0216, 500, 0),
    (20, 23, 0.0028, 0.0216, 500, 0), (21, 22, 0.0087, 0.0678, 500, 0),
]
# Inter-area ties (reconstructed); the HVDC link 113-316 is not modelled.
RTS_TIES = [
    (107, 203, 0.042, 0.161, 175), (113, 215, 0.010, 0.075, 500), (123, 217, 0.010, 0.074, 500),
    (121, 325, 0.012, 0.097, 500), (223, 318, 0.013, 0.104, 500), (325, 321, 0.011, 0.087, 500),
    (325, 323, 0.012, 0.097, 500),
]


def rts96():
    area_load = sum(RTS_LOAD.values())
    area_gen = sum(sum(u) for u in RTS_UNITS.values())
    scale = area_load / area_gen
    buses, gens, branches = [], [], []
    for area in (1, 2, 3):
        base = 100 * area
        for k in range(1, 25):
            buses.append({"id": base + k, "vm": RTS_VG.get(k, 1.0), "pd": RTS_LOAD.get(k, 0), "area": area})
        for k, units in RTS_UNITS.items():
            for u in units:
                gens.append({"bus": base + k, "pg": round(u * scale, 6), "status": 1})
        for f, t, r, x, rate, tap in RTS_BRANCHES:
            branches.append({"from": base + f, "to": base + t, "r": r, "x": x, "ratio": tap, "rate_a": rate,
                             "status": 1})
    buses.append({"id": 325, "vm": 1.0, "pd": 0, "area": 3})
    for f, t, r, x, rate in RTS_TIES:
        branches.append({"from": f, "to": t, "r": r, "x": x, "ratio": 0, "rate_a": rate, "status": 1})
    return {"schema": "syncgrid-case/1", "name": "rts96-reconstructed", "base_mva": 100, "buses": buses,
            "generators": gens, "branches": branches}


if __name__ == "__main__":
    dump("case9.json", case9())
    dump("rts96.json", rts96())
