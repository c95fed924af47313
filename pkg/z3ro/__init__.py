"""z3ro: distortion-cancelling linear precoders for large antenna arrays"""

__version__ = "0.1.0"
