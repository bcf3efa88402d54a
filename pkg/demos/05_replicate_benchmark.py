"""A small replicate study and a timing benchmark.

Reproduces the layout of the full benchmark tables at a fraction of the
cost: a handful of replicates, two methods, reduced chain length.  The CLI
equivalent is

    gxeselect replicate --example 1 --methods BSSVC-SI,BSSVC \\
        --replicates 4 --n 300 --p 30 --iters 2000 --burnin 1000 \\
        --seed 17 --out out/

Scoring: TP/FP per effect family against the generating truth, mean squared
deviation of each nonzero coefficient function, total squared error over all
coefficients, and prediction error on an independent test set.
"""

from gxeselect import StudyConfig, benchmark_timings, run_replicates

config = StudyConfig(
    example=1,
    methods=("BSSVC-SI", "BSSVC"),
    replicates=4,
    n=300,
    p=30,
    iterations=2000,
    burn_in=1000,
    seed=17,
)
result = run_replicates(config, workers=1)
print("mean(sd) over", config.replicates, "replicates:\n")
print(result.table.to_string())

print("\nsampler cost for 2000 iterations (single chain):")
table = benchmark_timings([300, 600], [30], iterations=2000, seed=1)
print(table.to_string(index=False))
print("\ncoefficient count grows as (basis functions + 1) * genes;"
      "\nper-iteration cost grows roughly linearly in it.")
