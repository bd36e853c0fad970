"""
Commands package
Aggregates all subcommands
"""

from .cmd_eigs import eigs_command
from .cmd_segment import segment_command
from .cmd_denoise import denoise_command
from .cmd_noise import noise_command
from .cmd_phantom import phantom_command
from .cmd_oracle import oracle_command

__all__ = ['eigs_command', 'segment_command', 'denoise_command', 'noise_command', 'phantom_command', 'oracle_command']
