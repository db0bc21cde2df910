from photonlab.correlator.correlate import coarse_correlate, correlate  # noqa: F401
from photonlab.correlator.histogram import CorrelationHistogram, TcspcHistogram, half_bins  # noqa: F401
from photonlab.correlator.peaks import PeakAreas, peak_areas  # noqa: F401
from photonlab.correlator.tcspc import tcspc  # noqa: F401
