#!/usr/bin/env python3
"""Writes fixtures/footprint/catalog_210.json: 210 courses whose full
COURSE_FACT + PREREQ_CHAIN rendering averages about 60 whitespace tokens."""
import json
import random
import sys

WORDS = ("analysis design systems data models methods theory practice applied computing networks security "
         "programming algorithms structures learning statistics software hardware projects logic databases "
         "interfaces testing architecture distributed parallel numerical optimization graphics vision language "
         "processing research ethics management communication embedded signals control cloud mobile web").split()
DEPTS = ["COP", "CAP", "CDA", "CEN", "CNT", "CIS", "COT", "MAD", "STA", "MAS"]


def main(out_path):
    rng = random.Random(210)
    ids = []
    while len(ids) < 210:
        cid = f"{rng.choice(DEPTS)}{rng.randint(1, 4)}{rng.randint(0, 999):03d}"
        if cid not in ids:
            ids.append(cid)
    ids.sort(key=lambda c: (c[3], c))
    courses, edges = [], []
    for k, cid in enumerate(ids):
        title = " ".join(w.capitalize() for w in rng.sample(WORDS, 4))
        desc = " ".join(rng.choice(WORDS) for _ in range(44)) + "."
        courses.append({"id": cid, "title": title, "credits": rng.randint(1, 4), "description": desc,
                        "terms_offered": ["Fall", "Spring"], "skills": []})
        if k >= 20:
            for p in rng.sample(ids[:k], rng.randint(0, 2)):
                edges.append({"course_id": cid, "related_id": p, "kind": "Prerequisite"})
    doc = {"courses": courses,
           "programs": [{"id": "FULL", "name": "Full Catalog", "degree_type": "Major"}],
           "program_courses": [{"program_id": "FULL", "course_id": c, "recommended_year": 1} for c in ids],
           "prereq_edges": edges}
    with open(out_path, "w") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "fixtures/footprint/catalog_210.json")
