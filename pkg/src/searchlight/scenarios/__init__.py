"""Scenario files bundled with the package, loadable by name."""
