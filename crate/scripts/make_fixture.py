#!/usr/bin/env python3
"""Generate the synthetic three-region avocado fixture (data/avocado_fixture.csv).

The file mimics the public weekly avocado price table: same columns, same
row layout (blocks per year/type/region, newest week first, an index column
restarting in every block), weekly Sundays from 2015-01-04 to 2018-03-25.
Prices are synthetic: a regional level, a slow rise peaking in autumn 2017,
a yearly cycle and seeded noise. Use scripts/fetch_avocado.sh for real data.
"""

import csv
import datetime as dt
import math
import random
import sys
from pathlib import Path

REGIONS = {
    # region: (base price, peak height, seasonal amplitude, noise)
    "Chicago": (1.25, 0.55, 0.10, 0.06),
    "HartfordSpringfield": (1.30, 0.45, 0.12, 0.07),
    "Boise": (1.05, 0.50, 0.09, 0.05),
}
ORGANIC_PREMIUM = 0.45
FIRST = dt.date(2015, 1, 4)
LAST = dt.date(2018, 3, 25)
PEAK = dt.date(2017, 9, 17)
HEADER = [
    "", "Date", "AveragePrice", "Total Volume", "4046", "4225", "4770",
    "Total Bags", "Small Bags", "Large Bags", "XLarge Bags", "type", "year", "region",
]


def price(rng, region, kind, day):
    base, peak, season, noise = REGIONS[region]
    t = (day - FIRST).days / 365.25
    bump = peak * math.exp(-(((day - PEAK).days / 160.0) ** 2))
    trend = 0.05 * t
    cycle = season * math.sin(2 * math.pi * (day.timetuple().tm_yday / 365.25 - 0.35))
    p = base + trend + bump + cycle + rng.gauss(0.0, noise)
    if kind == "organic":
        p += ORGANIC_PREMIUM + rng.gauss(0.0, noise)
    return max(round(p, 2), 0.44)


def volumes(rng, kind, p):
    total = rng.uniform(0.6, 1.4) * (9.0e5 if kind == "conventional" else 3.0e4) / p
    plu = [total * f for f in (0.3, 0.35, 0.02)]
    bags = total - sum(plu)
    split = [bags * f for f in (0.78, 0.21, 0.01)]
    return [total] + plu + [bags] + split


def rows(seed):
    rng = random.Random(seed)
    weeks = []
    d = FIRST
    while d <= LAST:
        weeks.append(d)
        d += dt.timedelta(days=7)
    out = []
    for year in sorted({w.year for w in weeks}):
        for kind in ("conventional", "organic"):
            for region in REGIONS:
                block = [w for w in weeks if w.year == year]
                generated = [(w, price(rng, region, kind, w)) for w in block]
                for idx, (w, p) in enumerate(reversed(generated)):
                    vols = ["%.2f" % v for v in volumes(rng, kind, p)]
                    out.append([idx, w.isoformat(), "%.2f" % p, *vols, kind, year, region])
    return out


def main():
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data" / "avocado_fixture.csv"
    with target.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(HEADER)
        writer.writerows(rows(seed=20150104))
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
