"""Decision procedures for k-universality of p-adic quadratic lattices
and for the existence of locally-universal-but-not-globally-universal
lattices over quadratic fields."""

__version__ = "0.1.0"
