"""
WF security estimation toolkit.

Estimates the Bayes error and the mutual information that website
fingerprinting defenses leave in Tor traffic traces.
"""

__version__ = "0.1.0"
