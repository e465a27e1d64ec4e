"""Symmetric colored operads over a small universe of type codes.

The package provides the universe of codes and values, colored-sequence
splicing, an abstract operad interface with an executable law harness,
and two concrete instances: the function operad of typed operations and
the free operad of planar trees over generators.
"""

from .colorseq import (
    ColorSeq,
    IndexOutOfRange,
    LengthMismatch,
    Permutation,
    apply_perm,
    check_horizontal_splice_eq,
    check_vertical_splice_eq,
    nth_color,
    splice,
)
from .core import (
    Budget,
    CastWitness,
    LawConfig,
    LawReport,
    OperadInstance,
    PreconditionViolated,
    Signature,
    SignatureMismatch,
    WitnessUnconstructible,
    cast,
    check_horizontal_assoc,
    check_left_unity,
    check_perm_bijection,
    check_right_unity,
    check_vertical_assoc,
    parse_law_config,
    run_law_suite,
)
from .fn_operad import (
    ColorMismatch,
    FnEntry,
    FnOperad,
    fn_comp,
    fn_entry_eq,
    fn_perm,
    fn_unit,
    make_builtin,
    random_table_entry,
)
from .free_operad import (
    FreeOperad,
    Generator,
    Leaf,
    Node,
    PermutedTree,
    Tree,
    UnboundGenerator,
    eval_hom,
    graft,
    leaves,
    tree_perm,
    tree_signature,
)
from .universe import (
    Arrow,
    BOOL,
    Base,
    Code,
    ExponentialBlowup,
    NAT,
    Prod,
    Sigil,
    UNIT,
    VBool,
    VNat,
    VPair,
    VTable,
    VUnit,
    Value,
    count_values,
    enumerate_values,
    format_code,
    format_value,
    inhabits,
    interp_doc,
    make_table,
    parse_code,
    parse_value,
)

__version__ = "0.1.0"
