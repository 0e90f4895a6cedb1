"""odhall: decay-rate laboratory for 2-D compressible Oldroyd-B and Hall-MHD."""

__version__ = "0.3.0"
