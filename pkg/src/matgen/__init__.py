"""Exact computations with generating sets of matrix algebras over fields.

Submodules: exactfield (fields), linalg (matrices, subspaces), matalg
(span closure, generation, invariant subspaces), subspace (the subspace
lattice and independence), genset (irredundant generating sets), classify
(normal forms), enumeration (exhaustive suites) and cli.
"""

from __future__ import annotations

from .classify import (
    AlphaClass,
    M3Classification,
    TransformRecord,
    alpha_candidates,
    alpha_class,
    apply_transform,
    classify_m2_triple,
    classify_m3_quintuple,
    eigen_multiset_invariant,
    equivalent_m3,
    s_alpha,
)
from .errors import (
    CapExceeded,
    DomainError,
    Inconclusive,
    MatgenError,
    NotSplit,
)
from .exactfield import GF, QQ, Field, Scalar, parse_field
from .genset import (
    BlockShape,
    CornerShape,
    canonical_irredundant,
    complete_from_corner,
    extract_irredundant,
    hat_matrix,
    is_irredundant_generating,
    laffey_equiv_check,
    witness_invariant_subspaces,
)
from .linalg import Matrix, SpanBasis, Subspace
from .matalg import centralizer, common_invariant_subspace, generates, span_close
from .subspace import gl_independent, m_independent, pattern_classify, perp, stabilizer_algebra

__version__ = "0.1.0"
