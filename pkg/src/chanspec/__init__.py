"""Spectra of directed-graph matrices whose channels are lengthened, and their large-n limit sets."""
from .errors import ChanspecError, NumericError, SpecError, VerificationError
from .graph import ChannelSpec, GraphSpec, assemble, decompose, parse_spec
from .limitset import AnalyticFamily, LimitSet, analytic_circles, family_from_subsets, isolated_limits, trace_limit_set
from .pencil import SubsetFamily, brute_char_poly, family_of, identity_check
from .presets import PRESETS, get_preset
from .spectra import (
    SpectrumConfig,
    SpectrumResult,
    eigenvalues,
    eigenvector,
    localization_report,
    resolvent_grid,
    sector_statistics,
    spectrum_of_family,
    tube_count,
)

__version__ = "0.1.0"
