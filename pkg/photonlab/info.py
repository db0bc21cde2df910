__version__ = '0.1.0'
__author__ = 'photonlab developers'
__license__ = 'GNU GENERAL PUBLIC LICENSE v2'
__copyright__ = f'Copyright (c) 2024, {__author__}.'
__docs__ = "Monte Carlo simulation and analysis of on-chip quantum-dot single-photon sources"
