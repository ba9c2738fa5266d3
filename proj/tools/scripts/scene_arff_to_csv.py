#!/usr/bin/env python3
# Copyright 2026 The bopl Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Convert the Scene multilabel ARFF files into a bopl supervised CSV.

Scene ships as scene-train.arff and scene-test.arff: 294 numeric features
followed by six 0/1 label attributes. Pass both files to get one CSV with
every example, which the simulator then splits itself.

    python3 tools/scripts/scene_arff_to_csv.py scene-train.arff scene-test.arff \
        -o data/scene.csv
"""

import argparse
import csv
import sys

from scipy.io import arff


def _flag(value):
    if isinstance(value, bytes):
        value = value.decode()
    return str(value).strip() == "1"


def convert(paths, out, num_labels):
    writer = None
    feature_dim = None
    for path in paths:
        data, meta = arff.loadarff(path)
        names = meta.names()
        if len(names) <= num_labels:
            raise SystemExit(f"{path}: fewer than {num_labels + 1} attributes")
        features, labels = names[:-num_labels], names[-num_labels:]
        if feature_dim is None:
            feature_dim = len(features)
            out.write(f"# num_classes={num_labels}\n")
            writer = csv.writer(out, lineterminator="\n")
            writer.writerow(["labels"] + [f"f{j}" for j in range(feature_dim)])
        elif len(features) != feature_dim:
            raise SystemExit(f"{path}: {len(features)} features, expected {feature_dim}")
        for row in data:
            active = [str(k) for k, name in enumerate(labels) if _flag(row[name])]
            writer.writerow([";".join(active)] + [repr(float(row[name])) for name in features])


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("inputs", nargs="+", help="ARFF files, concatenated in order")
    parser.add_argument("-o", "--output", help="output CSV (default: stdout)")
    parser.add_argument("--num-labels", type=int, default=6,
                        help="trailing label attributes (default: 6)")
    args = parser.parse_args()
    if args.output:
        with open(args.output, "w", newline="") as out:
            convert(args.inputs, out, args.num_labels)
    else:
        convert(args.inputs, sys.stdout, args.num_labels)


if __name__ == "__main__":
    main()
