"""casesift: find summary-judgment decisions in a case-law corpus and measure how well.

Two comparable pipelines — a config-driven boolean keyword matrix and a
prompted LLM classifier — run over the same regex-prefiltered corpus, get
scored against expert labels drawn by FPC-corrected random samples, and feed
distribution analytics over courts, years and judgment lengths.
"""

__version__ = "0.1.0"
