"""Exact computations with quadratic Lie superalgebras and their
generalized double extensions."""

from .catalog import CatalogEntry, catalog, get_entry, make_cartan_w, make_duflo7, make_en, make_gn, make_standard
from .cohomology import (
    Cochain,
    DualCochain,
    ce_differential,
    hat_correspondence,
    is_coboundary_3,
    is_supercyclic,
    s_phi_isometry,
    unhat,
)
from .core import (
    LinearMap,
    Report,
    Representation,
    Subspace,
    SuperAlgebra,
    SuperSpace,
    center,
    derived_and_central_series,
    validate_superalgebra,
)
from .decomposition import (
    central_isotropic_descent,
    duflo_filtration,
    extension_context_from_isotropic_ideal,
    isotropic_submodule,
    maximal_isotropic_submodule,
    orthogonal_sum_decomposition,
    solvable_to_tstar,
)
from .extensions import (
    ContextError,
    ExtensionContext,
    classical_double_extension,
    generalized_double_extension,
    odd_line_extension,
    tstar_extension,
    validate_context,
)
from .io import ParseError, parse, serialize
from .quadratic import (
    GramForm,
    QuadraticSuperAlgebra,
    has_invariant_scalar_product,
    validate_quadratic,
    verify_isometry,
)
from .scalars import FieldExtensionRequired, field_session

__version__ = "0.1.0"
