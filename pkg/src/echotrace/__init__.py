"""Word-echo analysis over (original post, persuasive comment, explanation)
conversation triples: corpus construction, per-stem features, classifiers,
and evaluation reports."""

__version__ = "0.1.0"
