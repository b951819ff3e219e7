#!/usr/bin/env python3
"""Reference computation of the golden report bundle.

Written straight from the classification and aggregation rules, without
looking at (or linking) the C++ code. Run it to regenerate expected/:

    python3 oracle.py --min-universities 2 --min-universities-gold 2
"""
import argparse
import csv
import io
import json
import os
import re
from fractions import Fraction
from statistics import median

HERE = os.path.dirname(os.path.abspath(__file__))

FIELDS = [
    ("BHS", "Biomedical and health sciences"),
    ("LES", "Life and earth sciences"),
    ("MCS", "Mathematics and computer science"),
    ("PSE", "Physical sciences and engineering"),
    ("SSH", "Social sciences and humanities"),
]
ALL = "All sciences"
REPORT_FIELDS = [name for _, name in FIELDS] + [ALL]
TYPES = ["gold", "green", "hybrid", "bronze"]
REPORT_TYPES = TYPES + ["any"]
ISSUE_KINDS = ["malformed", "missing_required_field", "duplicate_key", "out_of_scope", "dangling_reference"]
COUNTRY_NAMES = {"ENGLAND": "GB", "BRAZIL": "BR", "USA": "US", "TURKEY": "TR"}


def pct(x):
    """Percent with one decimal, halves rounded up; None stays None."""
    if x is None:
        return None
    x = Fraction(x)
    tenths = (x.numerator * 2000 + x.denominator) // (2 * x.denominator)
    return f"{tenths // 10}.{tenths % 10}"


def share(n, d):
    return None if d == 0 else Fraction(n, d)


def norm_doi(s):
    s = s.strip().lower()
    changed = True
    while changed:
        changed = False
        for p in ("https://doi.org/", "http://doi.org/", "https://dx.doi.org/", "http://dx.doi.org/", "doi.org/", "doi:"):
            if s.startswith(p):
                s = s[len(p):].strip()
                changed = True
    return s if s.startswith("10.") else None


def norm_url(s):
    s = s.strip().lower()
    s = re.sub(r"^[a-z0-9+.-]*://", "", s)
    if s.startswith("www."):
        s = s[4:]
    return s.rstrip("/")


def read_csv(name):
    with open(os.path.join(HERE, name), newline="") as f:
        return list(csv.DictReader(f))


def split(s):
    return [p.strip() for p in (s or "").split(";") if p.strip()]


class Issues:
    def __init__(self):
        self.counts = {}

    def add(self, source, kind):
        self.counts[(source, kind)] = self.counts.get((source, kind), 0) + 1


def load(issues):
    insts = {}
    for r in read_csv("institutions.csv"):
        insts[r["inst_id"]] = {
            "name": r["name"],
            "country": r["country"].upper(),
            "regions": split(r["regions"]),
            "patterns": [norm_url(p) for p in split(r["repo_url_patterns"])],
        }
    journals = {}
    for r in read_csv("journals.csv"):
        country = r["country"].upper() or None
        if country is None and r["publisher_address"]:
            last = r["publisher_address"].split(",")[-1].upper().split()
            words = [w for w in last if not any(c.isdigit() for c in w)]
            for i in range(len(words)):
                name = " ".join(words[i:])
                if name in COUNTRY_NAMES:
                    country = COUNTRY_NAMES[name]
                    break
        journals[r["journal_id"]] = {
            "oa": r["is_fully_oa"].lower() in ("true", "yes", "1"),
            "apc": r["has_apc"].lower() or "unknown",
            "country": country,
            "issns": split(r["issns"]),
        }
    pubs = []
    for r in read_csv("publications.csv"):
        year = int(r["year"])
        if not 2014 <= year <= 2017 or r["doc_type"] not in ("article", "review", "letter"):
            issues.add("publications", "out_of_scope")
            continue
        ids = []
        for i in split(r["institution_ids"]):
            if i in insts:
                ids.append(i)
            else:
                issues.add("publications", "dangling_reference")
        code_to_name = dict(FIELDS)
        pubs.append({
            "id": r["pub_id"],
            "doi": norm_doi(r["doi"]) if r["doi"] else None,
            "lang": r["language"].lower(),
            "journal": r["journal_id"],
            "insts": sorted(set(ids)),
            "fields": sorted({code_to_name[c] for c in split(r["field_ids"])}, key=REPORT_FIELDS.index),
        })
    wanted = {p["doi"] for p in pubs if p["doi"]}
    source = "evidence:evidence.jsonl"
    evidence = {}
    with open(os.path.join(HERE, "evidence.jsonl")) as f:
        for line in f:
            if not line.strip():
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError:
                issues.add(source, "malformed")
                continue
            if "journal_is_oa" not in doc or "oa_locations" not in doc or "doi" not in doc:
                issues.add(source, "missing_required_field")
                continue
            doi = norm_doi(doc["doi"])
            if doi not in wanted:
                continue
            if doi in evidence:
                issues.add(source, "duplicate_key")
                continue
            evidence[doi] = doc
    return insts, journals, pubs, evidence


def classify(pub, evidence, journals):
    e = evidence.get(pub["doi"]) if pub["doi"] else None
    journal = journals.get(pub["journal"])
    t = dict.fromkeys(TYPES, False)
    locs = e["oa_locations"] if e else []
    if not e:
        return t, []
    oa_journal = e["journal_is_oa"] or (journal is not None and journal["oa"])
    t["green"] = any(l["host_type"] == "repository" for l in locs)
    if oa_journal and locs:
        t["gold"] = True
    elif any(l["host_type"] == "publisher" and l.get("license") for l in locs):
        t["hybrid"] = True
    elif any(l["host_type"] == "publisher" for l in locs):
        t["bronze"] = True
    return t, locs


def is_oa(t, typ):
    return any(t.values()) if typ == "any" else t[typ]


def csv_text(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow(["" if c is None else c for c in row])
    return buf.getvalue()


def summarize(groups, names, with_group, full, roster, min_unis):
    rows = []
    for g in sorted(names):
        for field in REPORT_FIELDS:
            for typ in REPORT_TYPES:
                vals = groups.get((g, field, typ), [])
                med = median(vals) if vals else None
                mean = sum(vals, Fraction(0)) / len(vals) if vals else None
                displayed = roster[g] >= min_unis
                if not full and not displayed:
                    continue
                row = ([g] if with_group else []) + [field, typ, str(len(vals)), pct(med), pct(mean)]
                if full:
                    row += [str(roster[g]), "yes" if displayed else "no"]
                rows.append(row)
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--min-universities", type=int, default=10)
    ap.add_argument("--min-universities-gold", type=int, default=5)
    args = ap.parse_args()

    issues = Issues()
    insts, journals, pubs, evidence = load(issues)
    for p in pubs:
        p["types"], p["locs"] = classify(p, evidence, journals)
    out = {}

    out["classification"] = csv_text(
        ["pub_id", "doi", "gold", "green", "hybrid", "bronze", "any_oa"],
        [[p["id"], p["doi"]] + [str(int(p["types"][t])) for t in TYPES] + [str(int(is_oa(p["types"], "any")))]
         for p in sorted(pubs, key=lambda p: p["id"])])

    oa = [p for p in pubs if is_oa(p["types"], "any")]
    rows = []
    for t in TYPES:
        n = sum(p["types"][t] for p in oa)
        g = sum(p["types"][t] and p["types"]["green"] for p in oa)
        part = n if t != "green" else sum(
            p["types"]["green"] and not (p["types"]["gold"] or p["types"]["hybrid"] or p["types"]["bronze"]) for p in oa)
        rows.append([t, str(n), pct(share(n, len(oa))), str(g), pct(share(g, n)), str(part)])
    rows.append(["any", str(len(oa)), pct(share(len(oa), len(oa))), None, None, str(len(oa))])
    out["overlap"] = csv_text(["oa_type", "count", "pct_of_oa", "also_green", "pct_also_green", "partition_count"], rows)

    # university cells
    cells = {}
    for u in sorted(insts):
        mine = [p for p in pubs if u in p["insts"]]
        for field in REPORT_FIELDS:
            in_field = [p for p in mine if field == ALL or field in p["fields"]]
            for typ in REPORT_TYPES:
                cells[(u, field, typ)] = (sum(is_oa(p["types"], typ) for p in in_field), len(in_field))
    out["university_indicators"] = csv_text(
        ["scope", "scope_id", "field", "oa_type", "numerator", "denominator", "share_pct"],
        [["university", u, f, t, str(n), str(d), pct(share(n, d))] for (u, f, t), (n, d) in cells.items()])

    def grouped(key_of):
        groups = {}
        for (u, f, t), (n, d) in cells.items():
            if d == 0:
                continue
            for g in key_of(u):
                groups.setdefault((g, f, t), []).append(Fraction(n, d))
        return groups

    country_roster = {}
    for i in insts.values():
        country_roster[i["country"]] = country_roster.get(i["country"], 0) + 1
    by_country = grouped(lambda u: [insts[u]["country"]])
    cols = ["country", "field", "oa_type", "n_universities", "median_pct", "mean_pct"]
    out["country_medians"] = csv_text(cols, summarize(by_country, country_roster, True, False, country_roster,
                                                      args.min_universities))
    out["country_medians_full"] = csv_text(cols + ["roster_universities", "displayed"],
                                           summarize(by_country, country_roster, True, True, country_roster,
                                                     args.min_universities))
    region_roster = {}
    for i in insts.values():
        for r in i["regions"]:
            region_roster[r] = region_roster.get(r, 0) + 1
    out["region_medians"] = csv_text(["region"] + cols[1:],
                                     summarize(grouped(lambda u: insts[u]["regions"]), region_roster, True, False,
                                               region_roster, 0))
    out["field_summary"] = csv_text(cols[1:], summarize(grouped(lambda u: ["World"]), ["World"], False, False,
                                                        {"World": len(insts)}, 0))

    rows = []
    for u in sorted(insts):
        for _, field in FIELDS:
            rows.append([u, field] + [pct(share(*cells[(u, field, t)])) for t in REPORT_TYPES])
    out["university_profiles"] = csv_text(
        ["university", "field", "gold_pct", "green_pct", "hybrid_pct", "bronze_pct", "any_pct"], rows)

    rows = []
    for u in sorted(insts):
        inst = insts[u]
        mine = [p for p in pubs if u in p["insts"]]
        green = [p for p in mine if p["types"]["green"]]
        lower = upper = 0
        for p in green:
            urls = [norm_url(l["url"]) for l in p["locs"] if l["host_type"] == "repository"]
            lo = any(pat in url for url in urls for pat in inst["patterns"])
            hi = lo or any("hdl.handle.net" in url for url in urls)
            lower += lo
            upper += hi
        rows.append([u, inst["name"], inst["country"], str(len(mine)), str(len(green)), str(lower), str(upper),
                     pct(share(lower, len(green))), pct(share(upper, len(green)))])
    out["repo_bounds"] = csv_text(["university", "name", "country", "pubs", "green_pubs", "matched_lower",
                                   "matched_upper", "repo_lower_pct", "repo_upper_pct"], rows)

    pmc_rows = []
    for c in sorted(country_roster):
        green = [p for p in pubs if p["types"]["green"] and any(insts[u]["country"] == c for u in p["insts"])]
        pmc, pmc_only = [], 0
        for p in green:
            urls = [norm_url(l["url"]) for l in p["locs"] if l["host_type"] == "repository"]
            hits = ["ncbi.nlm.nih.gov/pmc" in url for url in urls]
            if any(hits):
                pmc.append(p)
                pmc_only += all(hits)
        pmc_rows.append((share(len(pmc), len(green)), c, [
            c, str(len(green)), str(len(pmc)), str(pmc_only),
            pct(share(sum(p["types"]["gold"] for p in pmc), len(pmc))),
            pct(share(sum(p["types"]["bronze"] for p in pmc), len(pmc))),
            pct(share(sum(p["types"]["hybrid"] for p in pmc), len(pmc)))]))
    pmc_rows.sort(key=lambda r: (r[0] is None, -(r[0] or 0), r[1]))
    out["pmc_overlap"] = csv_text(["country", "green_oa", "pmc", "pmc_only", "pct_gold", "pct_bronze", "pct_hybrid"],
                                  [r[2] for r in pmc_rows])

    gold_rows, gold_full = [], []
    for c in sorted(country_roster):
        gold = [p for p in pubs if p["types"]["gold"] and any(insts[u]["country"] == c for u in p["insts"])]
        js = [journals.get(p["journal"]) for p in gold]
        national = sum(1 for j in js if j and j["country"] == c)
        english = sum(1 for p in gold if p["lang"] == "en")
        apc = sum(1 for j in js if j and j["apc"] == "yes")
        known = sum(1 for j in js if j and j["apc"] in ("yes", "no"))
        n = len(gold)
        row = [c, str(n), pct(share(national, n)), pct(share(apc, n)), pct(share(english, n)), str(known)]
        displayed = country_roster[c] >= args.min_universities_gold
        if displayed:
            gold_rows.append(row)
        gold_full.append(row + [str(country_roster[c]), "yes" if displayed else "no"])
    cols = ["country", "gold_total", "national_share", "apc_share", "english_share", "apc_known"]
    out["gold_model"] = csv_text(cols, gold_rows)
    out["gold_model_full"] = csv_text(cols + ["roster_universities", "displayed"], gold_full)

    out["issues_summary"] = csv_text(
        ["source", "kind", "count"],
        [[s, k, str(n)] for (s, k), n in sorted(issues.counts.items(), key=lambda x: (x[0][0], ISSUE_KINDS.index(x[0][1])))])

    os.makedirs(os.path.join(HERE, "expected"), exist_ok=True)
    for name, text in out.items():
        with open(os.path.join(HERE, "expected", name + ".csv"), "w", newline="") as f:
            f.write(text)


if __name__ == "__main__":
    main()
