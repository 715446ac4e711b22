"""Benchmark experiments and the ``prodkernel`` command-line interface."""
