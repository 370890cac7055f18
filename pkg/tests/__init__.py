"""cosetsle tests."""
