"""nanomis tests."""
