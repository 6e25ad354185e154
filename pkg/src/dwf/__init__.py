"""Small element sets spanning many multiplication triples in finite groups."""

from .abelian import (
    AbelianDecomposition,
    RegimeReport,
    decompose_abelian,
    find_large_abelian_subgroup,
    regime_report,
    reorder_factors,
)
from .groups import (
    CayleyGroup,
    CyclicProductGroup,
    FiniteGroup,
    PermutationGroup,
    Subgroup,
    cyclic_product,
    direct_product,
    element_order,
    load_cayley_table,
    permutation_closure,
)
from .pairs import DensitySpec, PairSet, density, generate, load_pairs, save_pairs
from .window import (
    WindowParams,
    Witness,
    build_a1,
    build_a2,
    choose_coset_pair,
    count_window,
    find_best_window,
    model_interval_window,
    product_set,
    run_pipeline,
    select_parameters,
)

__all__ = [name for name in dir() if not name.startswith("_")]
