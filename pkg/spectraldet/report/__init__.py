"""CSV, JSON and terminal output for spectraldet results."""
