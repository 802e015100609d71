"""relwl: multi-relational color refinement, separating graph families, and
exact relational GNN forward passes, with machine-checkable property suites.
"""

from .errors import CapExceeded, ContractViolation, GraphFormatError, RelWLError
from .graphs import (
    LabeledGraph,
    LoadResult,
    MultiRelGraph,
    brute_force_isomorphic,
    dump_graph_json,
    graph_from_json,
    graph_to_json,
    load_graph,
    permute_graph,
    union_graph,
    write_edge_tsv,
    write_label_tsv,
)
from .wl import (
    ColorDictionary,
    Coloring,
    DistinguishResult,
    TupleColoring,
    distinguish,
    histogram,
    init_krlwl,
    init_ktuple,
    initial_coloring,
    partition_refines,
    stable_coloring,
    step_1rwl,
    step_1wl,
    step_delta_klwl,
    step_krlwl,
    step_oblivious_kwl,
    step_weak_1rwl,
)
from .families import (
    FamilySpec,
    find_distance_two_clique,
    gen_cycle_pair,
    gen_gk_hk,
    gen_lifted,
    gen_prop3,
    random_multirel,
)

__version__ = "0.1.0"
