"""The four benchmark data designs and their genetic-matrix structure.

All four share the same coefficient configuration and differ in how the
genetic matrix arises:

  1. continuous expressions with autoregressive correlation,
  2. those expressions trichotomized into genotype codes at quartiles,
  3. genotype codes chained under pairwise linkage disequilibrium,
  4. genotype codes subsampled from a user-supplied CSV file.
"""

import tempfile
from pathlib import Path

import numpy as np
import pandas as pd

from gxeselect import (
    LdSpec,
    gen_example1,
    gen_example2,
    gen_example3,
    gen_from_genotype_file,
    make_generator,
    write_dataset_csv,
)

rng = make_generator(seed=5, stream_id=0)

data1, truth = gen_example1(n=2000, p=6, rng=rng)
corr = np.corrcoef(data1.x.T)
print("design 1: corr(x1, x2) =", round(corr[0, 1], 3),
      " corr(x1, x3) =", round(corr[0, 2], 3), " (0.5 and 0.25 in truth)")

data2, _ = gen_example2(n=2000, p=6, rng=rng)
codes, counts = np.unique(data2.x, return_counts=True)
print("design 2: genotype codes", codes, "frequencies",
      np.round(counts / data2.x.size, 3), "(1/4, 1/2, 1/4 by construction)")

ld = LdSpec(q1=0.3, q2=0.3, r=0.6)
print("design 3: haplotype frequencies", {k: round(v, 3) for k, v in ld.haplotype_freqs().items()})
data3, _ = gen_example3(n=5000, p=6, rng=rng)
adjacent = [round(float(np.corrcoef(data3.x[:, j], data3.x[:, j + 1])[0, 1]), 3)
            for j in range(5)]
print("          adjacent-locus genotype correlations", adjacent, "(target 0.6)")
print("          empirical MAFs", np.round(data3.x.mean(axis=0) / 2, 3), "(target 0.3)")

# design 4 ingests genotypes from a file; here we fake one with design 3
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "genotypes.csv"
    pd.DataFrame(data3.x, columns=[f"x{j + 1}" for j in range(6)]).to_csv(path, index=False)
    data4, _ = gen_from_genotype_file(path, n_sub=500, rng=rng)
    print("design 4: subsampled", data4.n, "of", data3.n, "file rows")

    # every dataset writes to one CSV schema: y, z, e, w1..wq, x1..xp
    out = Path(tmp) / "dataset.csv"
    write_dataset_csv(data4, out)
    print("dataset schema:", ", ".join(pd.read_csv(out, nrows=0).columns))
