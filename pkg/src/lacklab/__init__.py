"""VoIP covert-channel laboratory.

Synthesizes RTP voice traffic, embeds and extracts a delay-based covert
channel in it, and detects such channels from traffic parameters, windowed
observations, and 3D point-cloud visualizations.
"""

__version__ = "0.1.0"
