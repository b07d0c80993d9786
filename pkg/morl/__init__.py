"""Main Morl package."""
