#!/usr/bin/env python3
# Copyright 2026 The PrivaTree Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the CSV + schema fixtures under data/.

  nursery   Full attribute grid of the UCI nursery data with the binarized
            target (not_recom vs. the rest). The grid is complete, so the
            table is reproduced exactly without a download.
  adult     UCI adult (train + test files). Pass --adult-dir pointing at a
            directory holding adult.data / adult.test / adult.names, e.g. the
            copy bundled in the `responsibly` wheel:
              pip download --no-deps responsibly && unzip it.
            Rows with '?' are kept; the loader drops them.
  separable Small two-class fixture with a margin on feature `x`.
  backdoor  2000-row two-cluster fixture (16 informative features) with an
            always-zero `corner` feature that backdoor triggers write to.
"""

import argparse
import csv
import itertools
import json
import os
import random
import re

NURSERY_ATTRIBUTES = [
    ("parents", ["usual", "pretentious", "great_pret"]),
    ("has_nurs", ["proper", "less_proper", "improper", "critical", "very_crit"]),
    ("form", ["complete", "completed", "incomplete", "foster"]),
    ("children", ["1", "2", "3", "more"]),
    ("housing", ["convenient", "less_conv", "critical"]),
    ("finance", ["convenient", "inconv"]),
    ("social", ["nonprob", "slightly_prob", "problematic"]),
    ("health", ["recommended", "priority", "not_recom"]),
]

ADULT_COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education-num",
    "marital-status", "occupation", "relationship", "race", "sex",
    "capital-gain", "capital-loss", "hours-per-week", "native-country",
]


def write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_schema(path, features, classes):
    with open(path, "w") as f:
        json.dump({"features": features, "classes": classes}, f, indent=2)
        f.write("\n")


def nursery(out):
    names = [a for a, _ in NURSERY_ATTRIBUTES]
    rows = []
    for combo in itertools.product(*[v for _, v in NURSERY_ATTRIBUTES]):
        label = "P" if combo[names.index("health")] == "not_recom" else "N"
        rows.append(list(combo) + [label])
    write_csv(os.path.join(out, "nursery.csv"), names + ["label"], rows)
    write_schema(
        os.path.join(out, "nursery.schema.json"),
        [{"name": a, "kind": "categorical", "categories": v}
         for a, v in NURSERY_ATTRIBUTES],
        ["N", "P"])


def adult(out, adult_dir):
    categories = {}
    with open(os.path.join(adult_dir, "adult.names")) as f:
        for line in f:
            m = re.match(r"^([a-z-]+): (.*)\.$", line.strip())
            if m and m.group(2) != "continuous":
                categories[m.group(1)] = [c.strip() for c in m.group(2).split(",")]
    rows = []
    for name in ("adult.data", "adult.test"):
        with open(os.path.join(adult_dir, name)) as f:
            for line in f:
                cells = [c.strip() for c in line.strip().split(",")]
                if len(cells) != 15:
                    continue
                cells[14] = cells[14].rstrip(".")
                rows.append(cells)
    features = []
    for j, col in enumerate(ADULT_COLUMNS):
        if col in categories:
            features.append({"name": col, "kind": "categorical",
                             "categories": categories[col]})
        else:
            values = [float(r[j]) for r in rows if r[j] != "?"]
            features.append({"name": col, "kind": "numerical",
                             "range": [min(values), max(values)]})
    write_csv(os.path.join(out, "adult.csv"), ADULT_COLUMNS + ["label"], rows)
    write_schema(os.path.join(out, "adult.schema.json"), features,
                 ["<=50K", ">50K"])


def separable(out, seed=7):
    rng = random.Random(seed)
    rows = []
    for i in range(1000):
        cls = i % 2
        x = rng.uniform(0.6, 1.0) if cls else rng.uniform(0.0, 0.4)
        rows.append([f"{x:.6f}", f"{rng.random():.6f}",
                     rng.choice(["red", "green", "blue", "yellow"]),
                     "pos" if cls else "neg"])
    rng.shuffle(rows)
    write_csv(os.path.join(out, "separable.csv"),
              ["x", "noise", "color", "label"], rows)
    write_schema(
        os.path.join(out, "separable.schema.json"),
        [{"name": "x", "kind": "numerical", "range": [0.0, 1.0]},
         {"name": "noise", "kind": "numerical", "range": [0.0, 1.0]},
         {"name": "color", "kind": "categorical",
          "categories": ["red", "green", "blue", "yellow"]}],
        ["neg", "pos"])


def backdoor(out, seed=11, n_informative=16):
    # Sixteen features that each separate the classes on their own and one
    # `corner` feature that is always 0, mimicking a blank image corner.
    rng = random.Random(seed)
    names = [f"f{j}" for j in range(n_informative)] + ["corner"]
    rows = []
    for i in range(2000):
        cls = i % 2
        lo = 0.9 if cls else 0.0
        rows.append([f"{rng.uniform(lo, lo + 0.1):.6f}"
                     for _ in range(n_informative)]
                    + ["0", "one" if cls else "zero"])
    rng.shuffle(rows)
    write_csv(os.path.join(out, "backdoor.csv"), names + ["label"], rows)
    write_schema(
        os.path.join(out, "backdoor.schema.json"),
        [{"name": n, "kind": "numerical", "range": [0.0, 1.0]} for n in names],
        ["zero", "one"])
    with open(os.path.join(out, "backdoor.trigger.json"), "w") as f:
        json.dump({"assignments": {"corner": 1.0},
                   "source_class": "zero", "target_class": "one"}, f, indent=2)
        f.write("\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    parser.add_argument("--adult-dir", help="directory with adult.data/.test/.names")
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)
    nursery(args.out)
    separable(args.out)
    backdoor(args.out)
    if args.adult_dir:
        adult(args.out, args.adult_dir)


if __name__ == "__main__":
    main()
