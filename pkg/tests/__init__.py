# Tests for taulab.
