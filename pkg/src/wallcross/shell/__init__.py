"""Command-line front end and preset reports."""
