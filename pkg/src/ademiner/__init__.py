"""ademiner: mining adverse drug events from case-report abstracts.

Ingestion, sentence classification, event extraction, normalization,
in-memory faceted search, spontaneous-report statistics, evaluation,
and a REST service with an annotation workspace.
"""

__version__ = "0.1.0"
