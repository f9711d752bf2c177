"""Polarization-entangled double-slit quantum eraser simulator."""

from .analysis import VisibilityFit, chsh, distinguishability, fit_fringes, optimize_chsh, visibility_exact
from .config import BenchConfig, ConfigError, load_config, parse_config, serialize_config
from .engine import (
    BenchGeometry,
    EraserState,
    MeasurementOutcome,
    apply_slit_qwps,
    build_initial,
    closed_form_coincidence,
    coincidence_pattern,
    condition,
    delta,
    envelope,
    pattern_by_ordering,
    prepare,
)
from .optics import PairSourceSpec, polarizer, qwp, spdc_state
from .qstate import EraserError, LinearOperator, StateVector, ZeroProbabilityError, apply, project, tensor
from .scan import ScanConfig, ScanRecord, expected_counts, simulate_scan

__version__ = "0.1.0"
