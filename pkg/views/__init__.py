"""Command implementations, one module per CLI command."""
