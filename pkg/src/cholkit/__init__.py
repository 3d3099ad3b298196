"""Cholesky-family factorizations of (time-varying) correlation matrices."""

from .channel import (
    ChannelParams,
    ChannelRealization,
    CorrelationSnapshot,
    CorrelationStream,
    exact_correlation,
    exact_correlation_stream,
    generate_channel,
    receive,
    sample_correlation_stream,
    write_stream_csv,
)
from .errors import (
    CholkitError,
    DimensionError,
    NotPositiveDefiniteError,
    PreconditionError,
    RangeError,
    SingularFactorError,
    UsageError,
    ZeroPivotError,
)
from .factor import CholFactor, block_ldl_decompose, cholesky_gaxpy, ldl_decompose
from .linalg import (
    LdlFactors,
    as_cmatrix,
    hermitian_check,
    pinv_from_ldl,
    reconstruct,
    solve_lower_unit,
    solve_upper_unit,
)
from .metrics import ComparisonReport, compare
from .rchol import FirstColumnObservation, RcholState, factors_of, rchol_init, rchol_pinv, rchol_update
from .schur import GeneratorPair, ToeplitzSpec, assemble_block_toeplitz, schur_decompose

__version__ = "0.1.0"

__all__ = [
    "ChannelParams",
    "ChannelRealization",
    "CholFactor",
    "CholkitError",
    "ComparisonReport",
    "CorrelationSnapshot",
    "CorrelationStream",
    "DimensionError",
    "FirstColumnObservation",
    "GeneratorPair",
    "LdlFactors",
    "NotPositiveDefiniteError",
    "PreconditionError",
    "RangeError",
    "RcholState",
    "SingularFactorError",
    "ToeplitzSpec",
    "UsageError",
    "ZeroPivotError",
    "as_cmatrix",
    "assemble_block_toeplitz",
    "block_ldl_decompose",
    "cholesky_gaxpy",
    "compare",
    "exact_correlation",
    "exact_correlation_stream",
    "factors_of",
    "generate_channel",
    "hermitian_check",
    "ldl_decompose",
    "pinv_from_ldl",
    "rchol_init",
    "rchol_pinv",
    "rchol_update",
    "receive",
    "reconstruct",
    "sample_correlation_stream",
    "schur_decompose",
    "solve_lower_unit",
    "solve_upper_unit",
    "write_stream_csv",
]
