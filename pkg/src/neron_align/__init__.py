"""Alignment of edge-labelled dual graphs, fibral divisors, Néron component groups
and Newton-polygon tools for R[[x,y]]/(xy - r)."""

from .divisors import (
    ObstructionCertificate,
    PrimitiveDivisorDescriptor,
    ThicknessGraph,
    TraitSpec,
    components_after_deleting,
    decompose_cartier,
    extend_vertex_labelling,
    induced_labelling,
    is_pre_achievable,
    is_T_cartier,
    obstruction_witness,
)
from .errors import (
    NeronAlignError, UnitLabel, EmptyInput, InvalidGraph, UnknownGenerator, UnknownVertex,
    GraphNotConnected, NotAligned, NotCartier, NotTCartier, NoZeroVertex, DegenerateTrait,
    ZeroThicknessEdge, EmptySide, NoCorner, NotInA, WindowTooSmall, UnsupportedCoefficient,
    SchemaError,
)
from .graph import (
    AlignmentVerdict,
    GeneratorMap,
    LabelledGraph,
    blocks,
    is_aligned,
    is_strictly_aligned,
    pullback,
    regularise,
    specialise,
)
from .monoid import CyclicMonoidN2, Label, common_relation, label_mul, proportional, saturation
from .neron import (
    ComponentGroup,
    blowup_family_orders,
    component_group,
    family_orders,
    section_order,
)

__version__ = "0.1.0"
