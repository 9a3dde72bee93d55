"""Exact slice-genus obstructions for links from Casson-Gordon invariants."""

__version__ = "0.1.0"
