"""Random instance builders and sample input files."""
