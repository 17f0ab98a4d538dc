"""Paraxial Hermite-Gauss mode algebra, beam-splitter transformations,
field-eigenstate overlap amplitudes, and a truncated-Fock-space oracle."""

from .geometry import (
    BeamGeometry,
    ModeIndex,
    hermite_poly,
    hermite_poly_sequence,
    mode_1d,
    mode_1d_table,
    mode_2d,
    paraxial_residual,
)
from .modespace import (
    ModeBasis,
    ModeVector,
    QuadraturePolicyWarning,
    QuadratureRule,
    SampledField,
    basis_gram,
    completeness_kernel,
    decompose,
    default_quadrature_order,
    functional_product,
    inner_product,
    mode_vector_from_csv,
    mode_vector_from_json,
    mode_vector_to_csv,
    mode_vector_to_json,
    synthesize,
)

__version__ = "0.1.0"

from .beamsplitter import (
    CoherentOutput,
    SinglePhotonOutput,
    SplitterCoefficients,
    TwoPortModeVectors,
    coherent_output,
    coherent_output_to_json,
    inverse_transform,
    operator_transform,
    reflect_mode_vector,
    single_photon_output,
    single_photon_output_to_json,
)

from .amplitudes import (
    FieldConfiguration,
    TwoPortFieldConfiguration,
    coherent_state_ratio,
    number_state_ratio,
    single_photon_wavefunction,
    two_port_coherent_ratio,
    two_port_single_photon_ratio,
    vacuum_relative_weight,
)

from .observables import (
    CLOSED_FORM_FIELD_SCALE,
    RSurface,
    TruncationWarning,
    detection_probability_ratio,
    displaced_tem10_config,
    photon_number_correlation,
    r_closed_form,
    r_functional,
    r_surface,
    r_surface_to_csv,
    r_surface_to_json,
    two_point_correlation,
)
