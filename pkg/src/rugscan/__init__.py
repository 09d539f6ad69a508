"""Rule-based rug-pull detection and ecosystem analysis for SPL-style
tokens, driven entirely by raw on-chain transaction and state data."""

__version__ = "0.1.0"
