"""
tsocausal: a TSO machine with occurs-before analysis, the delaying-the-future
run transform and linearizability checks for registers and snapshots.
"""

__version__ = "0.1.0"
