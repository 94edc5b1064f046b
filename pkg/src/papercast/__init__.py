"""papercast: paper PDF -> narrated slide/animation video, plus a scoring
suite that evaluates any such video against its source paper."""

__version__ = "0.1.0"
