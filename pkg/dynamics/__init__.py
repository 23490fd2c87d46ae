"""
Exact dynamics package for the weak measurement simulator
"""

from .service import (
    Scenario, MomentSet, JointOutcome, GeneratorJointStatistics,
    interaction_unitary, heisenberg_readout, readout_moments, conditional_readout_moments,
    conditional_numerator, generator_joint_statistics, estimate_curvature_from_joint_statistics,
    postselection_probability, phase_shifted_postselection_probability, meter_truncation_tail,
)

__all__ = [
    'Scenario',
    'MomentSet',
    'JointOutcome',
    'GeneratorJointStatistics',
    'interaction_unitary',
    'heisenberg_readout',
    'readout_moments',
    'conditional_readout_moments',
    'conditional_numerator',
    'generator_joint_statistics',
    'estimate_curvature_from_joint_statistics',
    'postselection_probability',
    'phase_shifted_postselection_probability',
    'meter_truncation_tail',
]
