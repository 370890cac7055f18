"""cosetsle command line."""
