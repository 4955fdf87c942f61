"""Automorphisms of the disk, bidisk, ball and Siegel domain; quotient geometry and separation certificates."""
from . import autos2d, discs, errors, groups, metrics, moebius1d, separation, serialize, suite
from .autos2d import BidiskAuto, ProjAuto2, classify2
from .errors import BudgetExceeded, DomainError, KobsepError, ParseError
from .groups import Presentation, Word, annulus_modulus, enumerate_words, eta, eta_solve, tau
from .moebius1d import DiskAuto, HalfPlaneAuto, classify
from .separation import SeparationCertificate, certify_ball_hyperbolic, certify_bidisk, certify_siegel_parabolic
from .suite import verify_paper

__version__ = "0.1.0"
