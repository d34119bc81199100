"""Workbench: synthetic texts, pattern sampling, benchmarks and the CLI."""
