#!/usr/bin/env python3
"""Regenerate the bundled geodata CSVs under crates/core/data/.

Sources: the `airportsdata` package (IATA airports) and the `geonamescache`
package (countries, capitals, cities with population >= 15000).

    pip install airportsdata geonamescache
    python3 tools/build_geodata.py
"""
import csv
import math
import pathlib
import re

import unicodedata

import airportsdata
import geonamescache

OUT = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "data"

# Major hubs whose names lack the word "International".
HUBS = {
    "LHR", "LGW", "STN", "MAN", "EDI", "GLA", "DUB", "AMS", "BRU", "CPH",
    "OSL", "ARN", "HEL", "KEF", "TLL", "RIX", "VNO", "WAW", "PRG", "VIE",
    "ZRH", "GVA", "MUC", "BER", "HAM", "DUS", "CGN", "STR", "MAD", "BCN",
    "LIS", "OPO", "FCO", "MXP", "LIN", "FLR", "VCE", "ATH", "IST", "SAW",
    "BUD", "OTP", "SOF", "BEG", "ZAG", "LJU", "KBP", "SVO", "DME", "LED",
    "ORY", "NCE", "LYS", "HND", "NRT", "KIX", "ICN", "GMP", "TPE", "HKG",
    "SIN", "BKK", "KUL", "SYD", "MEL", "BNE", "AKL", "WLG", "YYZ", "YUL",
    "YVR", "ORD", "ATL", "DFW", "DEN", "SFO", "SEA", "BOS", "LGA", "DCA",
    "EAS", "SDJ", "KIR", "LIL", "FKB", "STP", "UBN", "SJC", "MSY", "SLC",
}

# Capital airports as designated in the published result tables.
DESIGNATED = {
    "US": ("Washington", "JFK"),
    "CN": ("Beijing", "PEK"),
    "NO": ("Oslo", "OSL"),
    "GB": ("London", "LHR"),
    "FI": ("Helsinki", "HEL"),
    "RU": ("Moscow", "SVO"),
    "IS": ("Reykjavik", "KEF"),
    "DK": ("Copenhagen", "CPH"),
    "MN": ("Ulaanbaatar", "UBN"),
    "NL": ("Amsterdam", "AMS"),
    "DE": ("Berlin", "BER"),
    "BR": ("Brasilia", "BSB"),
    "EE": ("Tallinn", "TLL"),
    "FR": ("Paris", "CDG"),
}

IATA = re.compile(r"^[A-Z]{3}$")
CC = re.compile(r"^[A-Z]{2}$")


def haversine(lat1, lon1, lat2, lon2):
    p1, p2 = math.radians(lat1), math.radians(lat2)
    dp, dl = p2 - p1, math.radians(lon2 - lon1)
    h = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return 2 * 6371.0 * math.asin(min(1.0, math.sqrt(h)))


def fold(text):
    text = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in text if not unicodedata.combining(ch)).casefold()


def clean(text):
    return " ".join(text.replace('"', "").split())


def main():
    airports = {}
    for code, a in airportsdata.load("IATA").items():
        if not IATA.match(code) or not CC.match(a["country"] or ""):
            continue
        international = ("International" in a["name"] or " Intl" in a["name"]
                         or code in HUBS)
        airports[code] = {
            "iata": code,
            "name": clean(a["name"]),
            "city": clean(a["city"]),
            "country_code": a["country"],
            "lat": round(a["lat"], 5),
            "lon": round(a["lon"], 5),
            "international": international,
        }

    gc = geonamescache.GeonamesCache()
    cities = {}
    raw_cities = list(gc.get_cities().values())
    for c in raw_cities:
        if not CC.match(c["countrycode"] or ""):
            continue
        name = clean(c["name"])
        key = (name.casefold(), c["countrycode"])
        best = cities.get(key)
        if best is None or c["population"] > best["population"]:
            cities[key] = {
                "city": name,
                "country_code": c["countrycode"],
                "lat": round(c["latitude"], 5),
                "lon": round(c["longitude"], 5),
                "population": c["population"],
            }

    # ASCII-folded aliases so "Zurich" finds "Zürich".
    for (key, iso), c in list(cities.items()):
        alias = fold(c["city"])
        if alias != key and (alias, iso) not in cities:
            cities[(alias, iso)] = dict(c, city=alias.title())

    capitals = []
    for iso, country in sorted(gc.get_countries().items()):
        cap_name = clean(country["capital"] or "")
        if iso in DESIGNATED:
            cap_name = DESIGNATED[iso][0]
        if not cap_name:
            continue
        city = cities.get((cap_name.casefold(), iso))
        if city is None:
            alts = [c for c in raw_cities if c["countrycode"] == iso
                    and (fold(c["name"]) == fold(cap_name)
                         or cap_name in c["alternatenames"])]
            if not alts:
                continue
            best = max(alts, key=lambda c: c["population"])
            city = {"lat": round(best["latitude"], 5), "lon": round(best["longitude"], 5)}
        if iso in DESIGNATED:
            iata = DESIGNATED[iso][1]
        else:
            pool = [a for a in airports.values() if a["international"]]
            near = min(pool, key=lambda a: (haversine(city["lat"], city["lon"], a["lat"], a["lon"]), a["iata"]))
            if haversine(city["lat"], city["lon"], near["lat"], near["lon"]) > 150.0:
                near = min(airports.values(), key=lambda a: (haversine(city["lat"], city["lon"], a["lat"], a["lon"]), a["iata"]))
            iata = near["iata"]
        airports[iata]["international"] = True
        capitals.append((iso, cap_name, city["lat"], city["lon"], iata))

    with open(OUT / "airports.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["iata", "name", "city", "country_code", "lat", "lon", "international"])
        for code in sorted(airports):
            a = airports[code]
            w.writerow([a["iata"], a["name"], a["city"], a["country_code"], a["lat"], a["lon"],
                        "true" if a["international"] else "false"])

    with open(OUT / "capitals.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["country_code", "capital_city", "lat", "lon", "designated_airport_iata"])
        for row in capitals:
            w.writerow(row)

    with open(OUT / "cities.csv", "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["city", "country_code", "lat", "lon"])
        for key in sorted(cities, key=lambda k: (k[1], k[0])):
            c = cities[key]
            w.writerow([c["city"], c["country_code"], c["lat"], c["lon"]])


if __name__ == "__main__":
    main()
