"""Spectral efficiency, Monte Carlo verification and the experiment harness."""
