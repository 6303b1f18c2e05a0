"""Link-level analysis of RIS-assisted THz inter-satellite links in LEO."""

__version__ = "0.1.0"
