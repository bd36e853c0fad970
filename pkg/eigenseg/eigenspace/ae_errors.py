"""
Exception types
Every failure raised by the eigenspace package derives from EigenspaceError
"""

from typing import Dict, List, Optional


class EigenspaceError(Exception):
    """Base class; `kind` names the error in CLI error JSON"""
    kind = 'error'

    def details(self) -> Dict:
        return {}


class ContractError(EigenspaceError, ValueError):
    """Precondition violated: dimension mismatch, bad parameter, empty domain"""
    kind = 'contract'


class ImageFormatError(EigenspaceError):
    """Malformed PGM/PFM file; `offset` is the byte where parsing stopped"""
    kind = 'format'

    def __init__(self, message: str, offset: Optional[int] = None):
        if offset is not None:
            message = f'{message} (at byte {offset})'
        super().__init__(message)
        self.offset = offset

    def details(self) -> Dict:
        return {'offset': self.offset}


class ConvergenceError(EigenspaceError):
    """Iterative solver missed its tolerance; carries the best residuals reached"""
    kind = 'convergence'

    def __init__(self, message: str, residuals: Optional[List[float]] = None):
        super().__init__(message)
        self.residuals = [float(r) for r in residuals] if residuals is not None else []

    def details(self) -> Dict:
        return {'residuals': self.residuals}


class DegenerateThresholdError(EigenspaceError):
    """Threshold input is constant or unimodal, so no mask can be emitted"""
    kind = 'degenerate'
