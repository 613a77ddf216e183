"""Special functions needed by the secrecy metrics, in double precision."""
from .egbmgf import EgbmgfSpec, egbmgf, egbmgf_detailed, place_contours
from .gamma import beta, gamma, log_beta, log_gamma, rgamma
from .hyp2f1 import gauss_2f1
from .meijer import ContourSettings, Evaluation, GBlock, MeijerGSpec, meijer_g, meijer_g_detailed

__all__ = [
    "ContourSettings", "EgbmgfSpec", "Evaluation", "GBlock", "MeijerGSpec",
    "beta", "egbmgf", "egbmgf_detailed", "gamma", "gauss_2f1", "log_beta", "log_gamma",
    "meijer_g", "meijer_g_detailed", "place_contours", "rgamma",
]
