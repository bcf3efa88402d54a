"""The five sampler variants on one dataset.

Two axes distinguish them: whether each gene's coefficient function is split
into constant + varying parts (structural identification), and whether the
genetic priors mix in a point mass at zero (exact sparsity).  The fifth
variant drops the basis expansion entirely and models every interaction as
linear.

variant    split  point mass  selection rule
BSSVC-SI   yes    yes         median probability
BSSVC      no     yes         median probability
BVC-SI     yes    no          95% credible interval
BVC        no     no          95% credible interval
BL         linear no          95% credible interval
"""

import numpy as np

from gxeselect import (
    ChainSettings,
    Hyperparameters,
    MethodVariant,
    gen_example1,
    make_generator,
    run_chain,
    select,
    spline_for_data,
)

rng = make_generator(seed=11, stream_id=0)
data, truth = gen_example1(n=300, p=25, rng=rng)
print("truth: varying genes 1-3, constant genes 4-8, linear-E genes 1-5\n")

settings = ChainSettings(iterations=3000, burn_in=1500, thin=1, seed=3, n_chains=1)
hyper = Hyperparameters()

for variant in MethodVariant:
    spline = None if variant.linear else spline_for_data(data)
    chain = run_chain(variant, data, spline, hyper, settings)
    report = select(chain)  # MPM for the point-mass variants, CI otherwise
    genes = lambda mask: [int(g) for g in np.flatnonzero(mask) + 1]
    print(
        f"{variant.value:9s} ({report.rule})"
        f"  varying: {genes(report.selected_varying)}"
        f"  constant: {genes(report.selected_constant)}"
        f"  linear-E: {genes(report.selected_linear_e)}"
    )

print(
    "\nNotes: the no-split variants absorb constant effects into the varying"
    "\ngroup, so genes 4-8 appear as 'varying' and the constant list is empty;"
    "\nthe all-linear variant can only detect curvature through its slope in z,"
    "\nso the symmetric parabola of gene 2 is typically missed."
)
