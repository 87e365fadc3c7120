#!/usr/bin/env python3
# Copyright 2026 The ope-kit Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Builds the UCI classification benchmarks as CSV + JSON schema sidecars.

The UCI archive is often unreachable from build machines, so the files are
assembled from data shipped inside PyPI wheels:

  glass    R MASS `fgl` (214 x 9, 6 classes), via the `rdatasets` wheel.
  ecoli    336 x 7, 8 classes. KEEL distributes ecoli only as one-vs-rest and
           class-subset binary problems (`keel-ds` wheel); the multiclass label
           of every row is recovered by intersecting those problems.
  vehicle  846 x 18, 4 classes, KEEL `vehicle.dat`.
  sat      6435 x 36, 6 classes, KEEL `satimage.dat`.
  opt, pen, letter
           KEEL `optdigits`, `penbased`, `letter` (optional, large).

page-blocks cannot be recovered this way (two of its classes are always merged
in the KEEL binary problems). Pass --page-blocks PATH pointing at the UCI
`page-blocks.data` file to convert it as well.

Usage: tools/fetch_datasets.py [--out data] [--wheel-dir DIR] [--all]
"""

import argparse
import collections
import json
import lzma
import os
import pickle
import re
import subprocess
import sys
import tempfile
import zipfile

RDATASETS = "rdatasets==0.2.10"
KEEL = "keel-ds==0.2.5"

# KEEL class indices for ecoli, in the alphabetical order KEEL uses.
ECOLI_CLASSES = ["cp", "im", "imL", "imS", "imU", "om", "omL", "pp"]
ECOLI_COUNTS = {"cp": 143, "im": 77, "pp": 52, "imU": 35, "om": 20, "omL": 5,
                "imL": 2, "imS": 2}


def find_wheel(wheel_dir, prefix):
  for name in sorted(os.listdir(wheel_dir)):
    if name.startswith(prefix) and name.endswith(".whl"):
      return os.path.join(wheel_dir, name)
  return None


def ensure_wheels(wheel_dir):
  needed = {"rdatasets": RDATASETS, "keel_ds": KEEL}
  for prefix, spec in needed.items():
    if find_wheel(wheel_dir, prefix) is None:
      subprocess.check_call([sys.executable, "-m", "pip", "download",
                             "--no-deps", "--timeout", "300", "-d", wheel_dir,
                             spec])
  return (find_wheel(wheel_dir, "rdatasets"), find_wheel(wheel_dir, "keel_ds"))


def write_dataset(out_dir, name, rows, labels, feature_names=None):
  d = len(rows[0])
  path = os.path.join(out_dir, name + ".csv")
  with open(path, "w") as f:
    header = feature_names or ["x%d" % (j + 1) for j in range(d)]
    f.write(",".join(header + ["label"]) + "\n")
    for r, c in zip(rows, labels):
      f.write(",".join(r) + "," + c + "\n")
  schema = {"name": name, "n": len(rows), "d": d,
            "K": len(set(labels)), "label_column": d, "delimiter": ","}
  with open(os.path.join(out_dir, name + ".json"), "w") as f:
    json.dump(schema, f, indent=2)
    f.write("\n")
  print("wrote %s: n=%d d=%d K=%d" % (path, len(rows), d, schema["K"]))


def glass(rdatasets_whl, out_dir):
  z = zipfile.ZipFile(rdatasets_whl)
  frame = pickle.loads(lzma.decompress(
      z.read("rdatasets/_data/MASS/fgl.pkl.compress")))
  features = ["RI", "Na", "Mg", "Al", "Si", "K", "Ca", "Ba", "Fe"]
  rows = [["%.10g" % v for v in rec] for rec in
          frame[features].itertuples(index=False)]
  labels = [str(v) for v in frame["type"]]
  write_dataset(out_dir, "glass", rows, labels, features)


def parse_keel(text):
  rows, labels = [], []
  for line in text.splitlines():
    line = line.strip()
    if not line or line.startswith("@"):
      continue
    parts = [p.strip() for p in line.split(",")]
    rows.append(parts[:-1])
    labels.append(parts[-1])
  return rows, labels


def keel_problem_classes(filename, n_positive):
  """Class-index sets (positive, negative) for a KEEL ecoli problem.

  The side of "a_vs_b" that is labelled positive is not fixed by the name, so
  it is identified from the number of positive rows.
  """
  stem = os.path.basename(filename)[:-len(".dat")]
  m = re.fullmatch(r"ecoli-([\d-]+)_vs_([\d-]+)", stem)
  if m:
    left = {int(c) for c in m.group(1).split("-")}
    right = {int(c) for c in m.group(2).split("-")}
    size = lambda s: sum(ECOLI_COUNTS[ECOLI_CLASSES[c]] for c in s)
    if n_positive == size(right):
      return right, left
    if n_positive == size(left):
      return left, right
    raise ValueError("cannot orient ecoli problem " + stem)
  one_vs_rest = {"ecoli1": "im", "ecoli2": "pp", "ecoli3": "imU",
                 "ecoli4": "om"}
  if stem in one_vs_rest:
    c = ECOLI_CLASSES.index(one_vs_rest[stem])
    return {c}, set(range(len(ECOLI_CLASSES))) - {c}
  raise ValueError("unknown ecoli problem " + stem)


def ecoli_key(row):
  """Row identity shared by both KEEL ecoli layouts.

  One-vs-rest files keep the seven UCI features on a [0, 1] scale; the
  class-subset files scale by 100 and some of them also drop `chg`. Their
  export also lost trailing zeros (0.40 became 4.0, not 40.0), so trailing
  zeros are stripped from every value on both sides.
  """
  values = [float(v) for v in row]
  if len(values) == 7:
    values = [v for j, v in enumerate(values) if j != 3]
  if max(values) <= 1.0:
    values = [v * 100.0 for v in values]
  key = []
  for v in values:
    k = int(round(v))
    while k and k % 10 == 0:
      k //= 10
    key.append(k)
  return tuple(key)


def ecoli(keel_whl, out_dir):
  z = zipfile.ZipFile(keel_whl)
  base = "keel_ds/data/imbalanced/raw/"
  files = sorted(n for n in z.namelist()
                 if n.startswith(base + "ecoli") and n.endswith(".dat"))
  # The universe of rows is any one-vs-rest problem.
  rows, _ = parse_keel(z.read(base + "ecoli1.dat").decode())
  keys = [ecoli_key(r) for r in rows]
  multiplicity = collections.Counter(keys)
  all_classes = set(range(len(ECOLI_CLASSES)))
  candidates = {k: set(all_classes) for k in multiplicity}
  for name in files:
    prows, plabels = parse_keel(z.read(name).decode())
    pos, neg = keel_problem_classes(name, plabels.count("positive"))
    seen = collections.defaultdict(set)
    for r, lab in zip(prows, plabels):
      seen[ecoli_key(r)].add(lab)
    for k in multiplicity:
      labs = seen.get(k)
      if labs is None:
        candidates[k] -= pos | neg
      elif multiplicity[k] == 1:
        candidates[k] &= pos if labs == {"positive"} else neg
  labels = []
  for k in keys:
    c = candidates[k]
    if len(c) != 1:
      raise RuntimeError("ecoli row %r is ambiguous: %r" % (k, c))
    labels.append(ECOLI_CLASSES[next(iter(c))])
  counts = collections.Counter(labels)
  if dict(counts) != ECOLI_COUNTS:
    raise RuntimeError("ecoli class counts differ from UCI: %r" % counts)
  names = ["mcg", "gvh", "lip", "chg", "aac", "alm1", "alm2"]
  write_dataset(out_dir, "ecoli", rows, labels, names)


def keel_balanced(keel_whl, out_dir, keel_name, name):
  z = zipfile.ZipFile(keel_whl)
  rows, labels = parse_keel(
      z.read("keel_ds/data/balanced/raw/%s.dat" % keel_name).decode())
  write_dataset(out_dir, name, rows, labels)


def page_blocks(path, out_dir):
  rows, labels = [], []
  with open(path) as f:
    for line in f:
      parts = line.split()
      if parts:
        rows.append(parts[:-1])
        labels.append(parts[-1])
  write_dataset(out_dir, "page", rows, labels)


def main():
  ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
  ap.add_argument("--out", default=os.path.join(
      os.path.dirname(os.path.abspath(__file__)), "..", "data"))
  ap.add_argument("--wheel-dir", default=None)
  ap.add_argument("--all", action="store_true",
                  help="also emit opt, pen and letter")
  ap.add_argument("--page-blocks", default=None,
                  help="path to the UCI page-blocks.data file")
  args = ap.parse_args()
  os.makedirs(args.out, exist_ok=True)
  wheel_dir = args.wheel_dir or tempfile.mkdtemp(prefix="opekit-wheels-")
  rdatasets_whl, keel_whl = ensure_wheels(wheel_dir)
  glass(rdatasets_whl, args.out)
  ecoli(keel_whl, args.out)
  keel_balanced(keel_whl, args.out, "vehicle", "vehicle")
  keel_balanced(keel_whl, args.out, "satimage", "sat")
  if args.all:
    for keel_name, name in [("optdigits", "opt"),
                            ("penbased", "pen"), ("letter", "letter")]:
      keel_balanced(keel_whl, args.out, keel_name, name)
  if args.page_blocks:
    page_blocks(args.page_blocks, args.out)


if __name__ == "__main__":
  main()
