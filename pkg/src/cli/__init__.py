"""CLI module for dynlab."""
